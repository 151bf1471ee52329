use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::disk::{angle, ensure_finite, mu, on_circle, project_to_circle, root_constant, Complex, MobiusAutomorphism, ONE, ZERO};
use crate::error::{Error, Result};
use crate::poly::{single_linkage, Poly};
use crate::tol::tolerances;

/// Fixed-point roots closer than this are treated as one multiple root when
/// they straddle the circle. A root of multiplicity `k` splits by roughly
/// `ε^{1/k}`, about `2·10⁻⁵` for `k = 3`.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// Preimages within this distance are candidates for one multiple preimage.
const PREIMAGE_MERGE_RADIUS: f64 = 1e-2;
/// A candidate cluster is merged when `β` at its centroid matches the target
/// this closely, so the merged answer is exact for a target moved by less.
const PREIMAGE_MERGE_VALUE: f64 = 1e-13;

/// A finite Blaschke product `β(z) = c μ_{a₁}(z) ⋯ μ_{a_d}(z)`.
///
/// Stored in factored form. Since each `μ_a` fixes 1, `c = β(1)`; the product is
/// boundary-rooted exactly when `c = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr", into = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    c: Complex,
    zeros: Vec<Complex>,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeRepr {
    c: Complex,
    zeros: Vec<Complex>,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;
    fn try_from(r: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(r.c, r.zeros)
    }
}

impl From<BlaschkeProduct> for BlaschkeRepr {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeRepr { c: b.c, zeros: b.zeros }
    }
}

/// A tangency (multiplier ≈ 1) at a boundary fixed point; multiplicity is
/// ambiguous there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangencyWarning {
    pub point: Complex,
    pub multiplier: f64,
}

/// Fixed points of a Blaschke product in the closed disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub interior: Option<Complex>,
    /// Distinct boundary fixed points, ordered by argument in `[0, 2π)`.
    pub boundary: Vec<Complex>,
    /// `β′(z₀)` at each boundary fixed point (real on the circle).
    pub boundary_multipliers: Vec<f64>,
    /// Number of solver roots merged into each boundary fixed point.
    pub boundary_multiplicities: Vec<usize>,
    pub warnings: Vec<TangencyWarning>,
}

impl FixedPointReport {
    /// Boundary fixed points counted with multiplicity. Without an interior
    /// fixed point this is a lower bound for the true count `d + 1`.
    pub fn boundary_count_with_multiplicity(&self) -> usize {
        self.boundary_multiplicities.iter().sum()
    }
}

fn by_angle(a: &Complex, b: &Complex) -> Ordering {
    angle(*a).total_cmp(&angle(*b))
}

impl BlaschkeProduct {
    pub fn new(c: Complex, zeros: Vec<Complex>) -> Result<Self> {
        let tol = tolerances();
        ensure_finite(c, "c")?;
        if (c.norm() - 1.0).abs() > tol.unimodular {
            return Err(Error::Domain(format!("c = {c} is not unimodular")));
        }
        if zeros.is_empty() {
            return Err(Error::Domain("a Blaschke product needs at least one zero".into()));
        }
        for &a in &zeros {
            ensure_finite(a, "zero")?;
            if a.norm() > 1.0 - tol.boundary {
                return Err(Error::Domain(format!("zero {a} is not inside the disk")));
            }
        }
        Ok(Self { c: project_to_circle(c), zeros })
    }

    /// Boundary-rooted product (`c = 1`) with the given zeros.
    pub fn boundary_rooted(zeros: Vec<Complex>) -> Result<Self> {
        Self::new(ONE, zeros)
    }

    /// `z ↦ z^d`.
    pub fn power(d: usize) -> Self {
        assert!(d >= 1);
        Self { c: ONE, zeros: vec![ZERO; d] }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn c(&self) -> Complex {
        self.c
    }

    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    pub fn is_boundary_rooted(&self) -> bool {
        (self.c - ONE).norm() <= tolerances().eval
    }

    /// `β(z)` on the closed disk.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        ensure_finite(z, "z")?;
        if z.norm() > 1.0 + tolerances().eval {
            return Err(Error::Domain(format!("z = {z} is outside the closed disk")));
        }
        Ok(self.apply(z))
    }

    #[inline]
    pub(crate) fn apply(&self, z: Complex) -> Complex {
        self.zeros.iter().fold(self.c, |acc, &a| acc * mu(a, z))
    }

    /// Evaluates the rational extension on the Riemann sphere minus the poles
    /// `1/ā_j`.
    pub fn eval_extended(&self, z: Complex) -> Result<Complex> {
        ensure_finite(z, "z")?;
        let sing = tolerances().singular;
        let mut acc = self.c;
        for &a in &self.zeros {
            let den = ONE - a.conj() * z;
            if den.norm() < sing * (1.0 + z.norm()) {
                return Err(Error::Domain(format!("z = {z} is a pole")));
            }
            acc *= root_constant(a) * (z - a) / den;
        }
        Ok(acc)
    }

    /// `β′(z)` by the product rule, valid at zeros of β too.
    pub fn derivative(&self, z: Complex) -> Complex {
        let vals: Vec<Complex> = self.zeros.iter().map(|&a| mu(a, z)).collect();
        let mut total = ZERO;
        for (j, &a) in self.zeros.iter().enumerate() {
            let den = ONE - a.conj() * z;
            let d = root_constant(a) * (1.0 - a.norm_sqr()) / (den * den);
            let rest: Complex = vals.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| *v).product();
            total += d * rest;
        }
        self.c * total
    }

    /// `z β′(z)/β(z) = Σ_j z (1 − |a_j|²)/((z − a_j)(1 − ā_j z))` on the circle.
    /// Each term equals `(1 − |a_j|²)/|1 − ā_j z|²`, so the sum is real and
    /// positive.
    pub fn log_derivative_on_circle(&self, z: Complex) -> Result<Complex> {
        ensure_finite(z, "z")?;
        if (z.norm() - 1.0).abs() > tolerances().unimodular.max(tolerances().snap) {
            return Err(Error::Domain(format!("z = {z} is not on the unit circle")));
        }
        Ok(self.log_derivative_unchecked(z))
    }

    pub(crate) fn log_derivative_unchecked(&self, z: Complex) -> Complex {
        self.zeros.iter().map(|&a| z * (1.0 - a.norm_sqr()) / ((z - a) * (ONE - a.conj() * z))).sum()
    }

    /// `β = N/Q` with `N = cK Π(z − a_j)` and `Q = Π(1 − ā_j z)`, `K = Π k_j`.
    pub fn rational_parts(&self) -> (Poly, Poly) {
        let k: Complex = self.zeros.iter().map(|&a| root_constant(a)).product();
        let num = Poly::from_roots(&self.zeros).scale(self.c * k);
        let den = self
            .zeros
            .iter()
            .fold(Poly::constant(ONE), |acc, &a| acc.mul(&Poly::new(vec![ONE, -a.conj()])));
        (num, den)
    }

    /// The `d − 1` critical points in the open disk, with multiplicity.
    pub fn critical_points(&self) -> Result<Vec<Complex>> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::Domain("critical points need degree ≥ 2".into()));
        }
        let p = Poly::from_roots(&self.zeros);
        let q = self
            .zeros
            .iter()
            .fold(Poly::constant(ONE), |acc, &a| acc.mul(&Poly::new(vec![ONE, -a.conj()])));
        // P′Q − PQ′ has formal degree 2d − 1 but the top coefficient cancels.
        let numerator = p.derivative().mul(&q).sub(&p.mul(&q.derivative())).truncated(2 * d - 2).trimmed(1e-13);
        let mut roots = numerator.roots()?;
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        if roots.len() < d - 1 || roots[d - 2].norm() >= 1.0 || roots.get(d - 1).is_some_and(|r| r.norm() <= 1.0) {
            return Err(Error::Numerical(format!(
                "critical point count mismatch for degree {d}: moduli {:?}",
                roots.iter().map(|r| r.norm()).collect::<Vec<_>>()
            )));
        }
        roots.truncate(d - 1);
        Ok(numerator.merge_multiple_roots(roots, PREIMAGE_MERGE_RADIUS))
    }

    /// All solutions of `β(z) = z` in the closed disk, classified.
    pub fn fixed_points(&self) -> Result<FixedPointReport> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::Domain("fixed-point analysis needs degree ≥ 2".into()));
        }
        let tol = tolerances();
        let (num, den) = self.rational_parts();
        let poly = num.sub(&den.shift()).trimmed(1e-14);
        let roots = poly.roots()?;

        // A multiple root on the circle splits into a small cluster straddling
        // it, symmetric under z ↦ 1/z̄; its centroid stays on the circle.
        let mut interior: Vec<Complex> = Vec::new();
        let mut boundary_raw: Vec<Complex> = Vec::new();
        for cl in single_linkage(roots, CLUSTER_RADIUS) {
            let centroid = cl.iter().sum::<Complex>() / cl.len() as f64;
            if cl.len() > 1 && (centroid.norm() - 1.0).abs() <= CLUSTER_RADIUS {
                boundary_raw.extend(std::iter::repeat_n(project_to_circle(centroid), cl.len()));
                continue;
            }
            for r in cl {
                let m = r.norm();
                if (m - 1.0).abs() <= tol.snap {
                    boundary_raw.push(project_to_circle(r));
                } else if m < 1.0 {
                    interior.push(r);
                }
            }
        }
        let interior = match interior.len() {
            0 => None,
            1 => Some(self.polish_interior_fixed_point(interior[0])),
            _ => {
                return Err(Error::Numerical(format!("found {} interior fixed points", interior.len())));
            }
        };

        boundary_raw.sort_by(by_angle);
        let mut clusters: Vec<Vec<Complex>> = Vec::new();
        for z in boundary_raw {
            match clusters.last_mut() {
                Some(cl) if (z - cl[cl.len() - 1]).norm() < CLUSTER_RADIUS => cl.push(z),
                _ => clusters.push(vec![z]),
            }
        }
        if clusters.len() > 1 {
            let first = clusters[0][0];
            let last = *clusters.last().unwrap().last().unwrap();
            if (first - last).norm() < CLUSTER_RADIUS {
                let tail = clusters.pop().unwrap();
                clusters[0].extend(tail);
            }
        }

        let mut report = FixedPointReport {
            interior,
            boundary: Vec::new(),
            boundary_multipliers: Vec::new(),
            boundary_multiplicities: Vec::new(),
            warnings: Vec::new(),
        };
        for cl in clusters {
            let mean = project_to_circle(cl.iter().sum::<Complex>());
            let z = if cl.len() == 1 { self.polish_boundary_fixed_point(mean) } else { mean };
            let mult = self.log_derivative_unchecked(z).re;
            if (mult - 1.0).abs() < tol.multiplicity {
                report.warnings.push(TangencyWarning { point: z, multiplier: mult });
            }
            report.boundary.push(z);
            report.boundary_multipliers.push(mult);
            report.boundary_multiplicities.push(cl.len());
        }
        // keep the angular order after polishing
        let mut idx: Vec<usize> = (0..report.boundary.len()).collect();
        idx.sort_by(|&i, &j| by_angle(&report.boundary[i], &report.boundary[j]));
        report.boundary = idx.iter().map(|&i| report.boundary[i]).collect();
        report.boundary_multipliers = idx.iter().map(|&i| report.boundary_multipliers[i]).collect();
        report.boundary_multiplicities = idx.iter().map(|&i| report.boundary_multiplicities[i]).collect();
        Ok(report)
    }

    fn polish_interior_fixed_point(&self, mut z: Complex) -> Complex {
        for _ in 0..3 {
            let g = self.apply(z) - z;
            let dg = self.derivative(z) - ONE;
            if dg == ZERO {
                break;
            }
            let next = z - g / dg;
            if next.norm() < 1.0 && (self.apply(next) - next).norm() <= g.norm() {
                z = next;
            } else {
                break;
            }
        }
        z
    }

    /// Newton in the angle variable; the iterate stays on the circle.
    fn polish_boundary_fixed_point(&self, z: Complex) -> Complex {
        let mut theta = z.arg();
        for _ in 0..3 {
            let w = on_circle(theta);
            let g = (self.apply(w) * w.conj()).arg();
            let dg = self.log_derivative_unchecked(w).re - 1.0;
            if dg.abs() < 1e-8 {
                break;
            }
            let step = g / dg;
            if step.abs() > 1e-3 {
                break;
            }
            theta -= step;
        }
        on_circle(theta)
    }

    /// All `d` solutions of `β(z) = target`, ordered by argument. For a circle
    /// target the solutions are distinct circle points.
    pub fn preimages(&self, target: Complex) -> Result<Vec<Complex>> {
        ensure_finite(target, "target")?;
        let tol = tolerances();
        if target.norm() > 1.0 + tol.eval {
            return Err(Error::Domain(format!("target {target} is outside the closed disk")));
        }
        let on_boundary = (target.norm() - 1.0).abs() <= tol.unimodular;
        let (num, den) = self.rational_parts();
        let poly = num.sub(&den.scale(target));
        let roots = poly.roots()?;
        if roots.len() != self.degree() {
            return Err(Error::Numerical(format!("expected {} preimages, found {}", self.degree(), roots.len())));
        }
        let mut out: Vec<Complex> = if on_boundary {
            let t = project_to_circle(target);
            roots.into_iter().map(|r| self.polish_circle_preimage(project_to_circle(r), t)).collect()
        } else {
            let polished = roots.into_iter().map(|r| self.polish_preimage(r, target)).collect();
            self.merge_multiple_preimages(polished, target)
        };
        out.sort_by(by_angle);
        Ok(out)
    }

    /// Near a critical value, a `k`-fold preimage comes back from the solver
    /// split by about `ε^{1/k}` while the centroid stays accurate.
    fn merge_multiple_preimages(&self, roots: Vec<Complex>, target: Complex) -> Vec<Complex> {
        let mut out = Vec::with_capacity(roots.len());
        for cl in single_linkage(roots, PREIMAGE_MERGE_RADIUS) {
            let centroid = cl.iter().sum::<Complex>() / cl.len() as f64;
            if cl.len() > 1 && (self.apply(centroid) - target).norm() <= PREIMAGE_MERGE_VALUE {
                out.extend(std::iter::repeat_n(centroid, cl.len()));
            } else {
                out.extend(cl);
            }
        }
        out
    }

    fn polish_circle_preimage(&self, z: Complex, target: Complex) -> Complex {
        let mut theta = z.arg();
        for _ in 0..3 {
            let w = on_circle(theta);
            let g = (self.apply(w) * target.conj()).arg();
            let dg = self.log_derivative_unchecked(w).re;
            let step = g / dg;
            if !step.is_finite() || step.abs() > 1e-2 {
                break;
            }
            theta -= step;
            if step.abs() < 1e-17 {
                break;
            }
        }
        on_circle(theta)
    }

    fn polish_preimage(&self, mut z: Complex, target: Complex) -> Complex {
        let g = self.apply(z) - target;
        let dg = self.derivative(z);
        if dg != ZERO {
            let next = z - g / dg;
            if next.norm() < 1.0 && (self.apply(next) - target).norm() < g.norm() {
                z = next;
            }
        }
        z
    }

    /// `self ∘ pre`, for an automorphism `pre`. No root solving needed.
    pub fn precompose(&self, pre: &MobiusAutomorphism) -> Result<Self> {
        let inv = pre.inverse();
        let zeros = self.zeros.iter().map(|&a| inv.apply(a)).collect();
        let c = self.apply(pre.apply(ONE));
        Self::new(c, zeros)
    }

    /// `post ∘ self ∘ pre`.
    pub fn sandwich(&self, post: &MobiusAutomorphism, pre: &MobiusAutomorphism) -> Result<Self> {
        let target = post.apply_inverse(ZERO);
        let inv = pre.inverse();
        let zeros = self.preimages(target)?.into_iter().map(|z| inv.apply(z)).collect();
        let c = post.apply(self.apply(pre.apply(ONE)));
        Self::new(c, zeros)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let mut zeros = Vec::with_capacity(self.degree() * inner.degree());
        for &a in &self.zeros {
            zeros.extend(inner.preimages(a)?);
        }
        let c = self.apply(inner.apply(ONE));
        Self::new(c, zeros)
    }

    /// Distance between two products: `|c − c′|` plus the worst nearest-zero
    /// mismatch under a greedy matching of the zero multisets.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        (self.c - other.c).norm().max(multiset_distance(&self.zeros, &other.zeros))
    }
}

/// Greedy matching distance between two equally sized point multisets.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> =
        a.iter().enumerate().flat_map(|(i, x)| b.iter().enumerate().map(move |(j, y)| ((x - y).norm(), i, j))).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut ua = vec![false; a.len()];
    let mut ub = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !ua[i] && !ub[j] {
            ua[i] = true;
            ub[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{blaschke, fixed_point_centered, seeded};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn even_quarter() -> BlaschkeProduct {
        BlaschkeProduct::boundary_rooted(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap()
    }

    #[test]
    fn evaluation() {
        assert!((BlaschkeProduct::power(2).eval(c(0.0, 1.0)).unwrap() + ONE).norm() < 1e-15);
        assert!((even_quarter().eval(ZERO).unwrap() + 0.25).norm() < 1e-15);
        let mut rng = seeded(1);
        let beta = blaschke(&mut rng, 4, 0.9);
        for j in 0..50 {
            let w = beta.eval(on_circle(TAU * j as f64 / 50.0)).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
        assert!(beta.eval(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn log_derivative() {
        for d in 1..=5 {
            let v = BlaschkeProduct::power(d).log_derivative_on_circle(on_circle(0.7)).unwrap();
            assert!((v - d as f64).norm() < 1e-12);
        }
        let beta = BlaschkeProduct::boundary_rooted(vec![ZERO, c(0.5, 0.0)]).unwrap();
        assert!((beta.log_derivative_on_circle(ONE).unwrap() - 4.0).norm() < 1e-12);
        assert!(beta.log_derivative_on_circle(c(0.5, 0.0)).is_err());

        // Oracle: d/dθ of the unwrapped argument of β(e^{iθ}) by central differences.
        let beta = blaschke(&mut seeded(2), 3, 0.8);
        let h = 1e-6;
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            let v = beta.log_derivative_on_circle(on_circle(t)).unwrap();
            let mut dphase = (beta.apply(on_circle(t + h)) / beta.apply(on_circle(t - h))).arg();
            if dphase < -PI {
                dphase += TAU;
            }
            let fd = dphase / (2.0 * h);
            assert!(v.im.abs() < 1e-12 && v.re > 0.0);
            assert!((v.re - fd).abs() < 1e-6, "{} vs {fd}", v.re);
        }
    }

    #[test]
    fn critical_points_examples() {
        assert!(BlaschkeProduct::power(2).critical_points().unwrap()[0].norm() < 1e-15);
        assert!(even_quarter().critical_points().unwrap()[0].norm() < 1e-15);
        // z·μ_{1/2}(z) = x(x − 1/2)/(1 − x/2) on the real slice; bisect its derivative.
        let f = |x: f64| x * (x - 0.5) / (1.0 - 0.5 * x);
        let df = |x: f64| (f(x + 1e-7) - f(x - 1e-7)) / 2e-7;
        let (mut lo, mut hi) = (0.0, 0.5);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if df(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let beta = BlaschkeProduct::boundary_rooted(vec![ZERO, c(0.5, 0.0)]).unwrap();
        let cp = beta.critical_points().unwrap();
        assert_eq!(cp.len(), 1);
        assert!(cp[0].im.abs() < 1e-14 && (cp[0].re - lo).abs() < 1e-6);
        assert!((cp[0].re - (2.0 - 3f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn fixed_point_examples() {
        let r = BlaschkeProduct::power(3).fixed_points().unwrap();
        assert!(r.interior.unwrap().norm() < 1e-15);
        assert_eq!(r.boundary.len(), 2);
        assert!((r.boundary[0] - ONE).norm() < 1e-12 && (r.boundary[1] + ONE).norm() < 1e-12);
        assert!(r.boundary_multipliers.iter().all(|&m| (m - 3.0).abs() < 1e-12));

        // −e^{2iθ} = e^{iθ} ⇔ e^{iθ} = −1
        let r = BlaschkeProduct::new(-ONE, vec![ZERO, ZERO]).unwrap().fixed_points().unwrap();
        assert!(r.interior.unwrap().norm() < 1e-15);
        assert_eq!(r.boundary.len(), 1);
        assert!((r.boundary[0] + ONE).norm() < 1e-12);

        // (z² − 1/4)/(1 − z²/4) = z ⇔ (z − 1)(z² + 5z + 1) = 0
        let r = even_quarter().fixed_points().unwrap();
        let p = r.interior.unwrap();
        assert!((p - c((21f64.sqrt() - 5.0) / 2.0, 0.0)).norm() < 1e-14);
        assert_eq!(r.boundary.len(), 1);
        assert!((r.boundary[0] - ONE).norm() < 1e-12);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn tangency_is_reported() {
        // μ_{−1/3}² has β′(1) = 2·(1/2) = 1: a parabolic boundary fixed point.
        let a = c(-1.0 / 3.0, 0.0);
        let r = BlaschkeProduct::boundary_rooted(vec![a, a]).unwrap().fixed_points().unwrap();
        assert!(r.interior.is_none());
        assert!(!r.warnings.is_empty());
        // all d + 1 = 3 fixed points sit at 1
        assert_eq!(r.boundary.len(), 1);
        assert_eq!(r.boundary_count_with_multiplicity(), 3);
    }

    #[test]
    fn preimage_examples() {
        let p = BlaschkeProduct::power(2).preimages(ONE).unwrap();
        assert!((p[0] - ONE).norm() < 1e-14 && (p[1] + ONE).norm() < 1e-14);
        let p = BlaschkeProduct::power(3).preimages(-ONE).unwrap();
        for (z, t) in p.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert!((z - on_circle(t)).norm() < 1e-14);
        }
        let mut rng = seeded(3);
        for _ in 0..20 {
            let beta = blaschke(&mut rng, 3, 0.9);
            let t = on_circle(1.3);
            let p = beta.preimages(t).unwrap();
            assert_eq!(p.len(), 3);
            for (i, z) in p.iter().enumerate() {
                assert!((z.norm() - 1.0).abs() < 1e-15);
                assert!((beta.apply(*z) - t).norm() < 1e-12);
                assert!((p[(i + 1) % 3] - z).norm() > 1e-6);
            }
            let inside = beta.preimages(c(0.2, -0.1)).unwrap();
            assert!(inside.iter().all(|z| (beta.apply(*z) - c(0.2, -0.1)).norm() < 1e-12 && z.norm() < 1.0));
        }
    }

    #[test]
    fn multiple_preimages_and_critical_points_stay_together() {
        // z⁴ hit slightly off its critical value: the four preimages
        // collapse to one point instead of spreading by ε^{1/4}
        let p = BlaschkeProduct::power(4).preimages(c(1e-17, 0.0)).unwrap();
        assert!(p.iter().all(|z| z.norm() < 1e-12), "{p:?}");
        // z³ moved by an automorphism keeps a double critical point
        let h = MobiusAutomorphism::from_specs(c(0.3, -0.4), on_circle(0.7)).unwrap();
        let f = BlaschkeProduct::power(3).precompose(&h).unwrap();
        let crit = f.critical_points().unwrap();
        let truth = h.inverse().eval(ZERO).unwrap();
        assert!(crit.iter().all(|z| (z - truth).norm() < 1e-13), "{crit:?} vs {truth}");
        // genuinely distinct nearby preimages are left alone
        let g = BlaschkeProduct::boundary_rooted(vec![c(0.1, 0.0), c(0.1 + 1e-3, 0.0)]).unwrap();
        let pre = g.preimages(ZERO).unwrap();
        assert!((pre[0] - pre[1]).norm() > 9e-4);
    }

    #[test]
    fn fixed_point_centered_properties() {
        let mut rng = seeded(4);
        for d in 2..=6 {
            for _ in 0..20 {
                let beta = fixed_point_centered(&mut rng, d, 0.9);
                let prod: f64 = beta.zeros()[1..].iter().map(|a| a.norm()).product();
                assert!((beta.derivative(ZERO).norm() - prod).abs() < 1e-12 && prod < 1.0);
                for j in 0..100 {
                    let z = Complex::from_polar(0.01 + 0.98 * (j as f64 / 100.0), 0.37 * j as f64);
                    assert!(beta.apply(z).norm() < z.norm());
                }
                for j in 0..256 {
                    assert!(beta.log_derivative_unchecked(on_circle(TAU * j as f64 / 256.0)).re > 1.0);
                }
                let r = beta.fixed_points().unwrap();
                assert!(r.interior.unwrap().norm() < 1e-12);
                assert_eq!(r.boundary.len(), d - 1);
                assert!(r.boundary_multipliers.iter().all(|&m| m > 1.0));
            }
        }
    }

    #[test]
    fn composition_helpers() {
        let mut rng = seeded(6);
        let beta = blaschke(&mut rng, 3, 0.8);
        let inner = blaschke(&mut rng, 2, 0.8);
        let g = crate::random::automorphism(&mut rng, 0.6);
        let h = crate::random::automorphism(&mut rng, 0.6);
        let pre = beta.precompose(&g).unwrap();
        let sw = beta.sandwich(&h, &g).unwrap();
        let comp = beta.compose(&inner).unwrap();
        for j in 0..16 {
            let z = Complex::from_polar(0.9, j as f64);
            assert!((pre.apply(z) - beta.apply(g.apply(z))).norm() < 1e-12);
            assert!((sw.apply(z) - h.apply(beta.apply(g.apply(z)))).norm() < 1e-11);
            assert!((comp.apply(z) - beta.apply(inner.apply(z))).norm() < 1e-11);
        }
    }

    fn disk_point() -> impl Strategy<Value = Complex> {
        (0.0..0.95f64, 0.0..TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn commutes_with_inversion(zeros in prop::collection::vec(disk_point(), 1..=5), t in 0.0..TAU, z in disk_point()) {
            prop_assume!(z.norm() > 1e-3);
            let beta = BlaschkeProduct::new(on_circle(t), zeros).unwrap();
            let outside = ONE / z.conj();
            if let Ok(w) = beta.eval_extended(outside) {
                let expected = ONE / beta.apply(z).conj();
                prop_assert!((w - expected).norm() <= 1e-9 * (1.0 + expected.norm()));
            }
        }

        #[test]
        fn proper_on_circle(zeros in prop::collection::vec(disk_point(), 1..=6), t in 0.0..TAU) {
            let beta = BlaschkeProduct::boundary_rooted(zeros).unwrap();
            prop_assert!((beta.apply(on_circle(t)).norm() - 1.0).abs() < 1e-9);
            prop_assert!((beta.apply(ONE) - ONE).norm() < 1e-12);
        }
    }
}
