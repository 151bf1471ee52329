//! Dense complex polynomials and simultaneous root extraction.
//!
//! Every algebraic solve in the crate (fixed points, preimages, critical
//! points, symmetric-coordinate inversion) ends here. Degrees are small, so
//! the solver favors robustness: Aberth–Ehrlich iteration from
//! Newton-polygon starting radii, a Newton-with-deflation fallback, and one
//! Newton polish per root against the undeflated polynomial.

use std::f64::consts::TAU;

use crate::disk::{Complex, ZERO};
use crate::error::{Error, Result};

/// Iteration budget of the simultaneous solver.
pub const MAX_ITERATIONS: usize = 500;

/// Coefficients in ascending order: `coeffs[i]` multiplies `z^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `(z − r₁)⋯(z − rₙ)`.
    pub fn from_roots(roots: &[Complex]) -> Self {
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            coeffs.push(ZERO);
            for i in (1..coeffs.len()).rev() {
                coeffs[i] = coeffs[i - 1] - r * coeffs[i];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Formal degree (length − 1), not trimmed.
    pub fn len_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |cᵢ| |z|ⁱ`, the scale against which residuals are judged.
    pub(crate) fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(ZERO);
        }
        Self {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect(),
        }
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or(ZERO);
        Self { coeffs: (0..n).map(|i| get(self, i) + get(other, i)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    /// Multiplies by `z`.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Drops leading coefficients that are negligible relative to the largest
    /// one. Dropping them discards roots of modulus beyond ~`1/rel`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut n = self.coeffs.len();
        while n > 1 && self.coeffs[n - 1].norm() <= rel * max {
            n -= 1;
        }
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Truncates to the given formal degree.
    pub fn truncated(&self, degree: usize) -> Self {
        let n = (degree + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    /// All complex roots, with multiplicity. The polynomial is used as given:
    /// callers trim spurious leading coefficients first.
    pub fn roots(&self) -> Result<Vec<Complex>> {
        if self.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Numerical("polynomial has non-finite coefficients".into()));
        }
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.len() <= 1 {
            return Ok(Vec::new());
        }
        // exact zero roots
        let origin = coeffs.iter().take_while(|&&c| c == ZERO).count();
        let reduced = Poly::new(coeffs[origin..].to_vec());
        let mut roots = vec![ZERO; origin];
        if reduced.len_degree() > 0 {
            let found = match aberth(&reduced) {
                Some(r) => r,
                None => deflation(&reduced)?,
            };
            roots.extend(found.into_iter().map(|z| polish(&reduced, z)));
        }
        Ok(roots)
    }
}

fn backward_ok(p: &Poly, z: Complex) -> bool {
    let n = p.len_degree() as f64;
    p.eval(z).norm() <= 8.0 * (n + 1.0) * f64::EPSILON * p.abs_eval(z.norm())
}

/// Starting radii from the upper convex hull of `(i, ln|cᵢ|)`.
fn initial_guesses(p: &Poly) -> Vec<Complex> {
    let n = p.len_degree();
    let pts: Vec<(usize, f64)> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            // drop the middle point when it is not strictly above the chord
            let cross = (i2 as f64 - i1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(n);
    let mut offset = 0.4;
    for w in hull.windows(2) {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let k = j - i;
        let r = ((yi - yj) / k as f64).exp();
        for m in 0..k {
            let theta = TAU * m as f64 / k as f64 + offset;
            guesses.push(Complex::from_polar(r, theta));
        }
        offset += 1.1;
    }
    guesses
}

fn aberth(p: &Poly) -> Option<Vec<Complex>> {
    let n = p.len_degree();
    if n == 1 {
        return Some(vec![-p.coeffs[0] / p.coeffs[1]]);
    }
    let mut z = initial_guesses(p);
    debug_assert_eq!(z.len(), n);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v == ZERO {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let s: Complex = (0..n).filter(|&j| j != i).map(|j| Complex::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // coincident iterates: nudge apart
                let bump = Complex::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() || backward_ok(p, z[i]) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Some(z);
        }
    }
    if z.iter().all(|&r| backward_ok(p, r) || r.re.is_finite() && p.eval(r).norm() <= 1e-10 * p.abs_eval(r.norm())) {
        Some(z)
    } else {
        None
    }
}

/// Newton from a spread of starts, deflating after each accepted root.
fn deflation(p: &Poly) -> Result<Vec<Complex>> {
    let mut q = p.clone();
    let mut roots = Vec::new();
    while q.len_degree() > 0 {
        if q.len_degree() == 1 {
            roots.push(-q.coeffs[0] / q.coeffs[1]);
            break;
        }
        let mut best: Option<Complex> = None;
        'starts: for s in 0..16 {
            let mut z = Complex::from_polar(0.5 + 0.25 * s as f64, 0.7 + 1.3 * s as f64);
            for _ in 0..MAX_ITERATIONS {
                let (v, dv) = q.eval_with_derivative(z);
                if dv == ZERO {
                    continue 'starts;
                }
                let step = v / dv;
                z -= step;
                if step.norm() <= 1e-15 * (1.0 + z.norm()) || backward_ok(&q, z) {
                    best = Some(z);
                    break 'starts;
                }
            }
        }
        let r = best.ok_or_else(|| Error::Numerical("root solver failed to converge".into()))?;
        roots.push(r);
        // synthetic division by (z − r)
        let n = q.coeffs.len();
        let mut out = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for i in (1..n).rev() {
            acc = acc * r + q.coeffs[i];
            out[i - 1] = acc;
        }
        q = Poly::new(out);
    }
    Ok(roots)
}

/// One Newton step, kept only if it lowers the residual.
fn polish(p: &Poly, z: Complex) -> Complex {
    let (v, dv) = p.eval_with_derivative(z);
    if dv == ZERO || v == ZERO {
        return z;
    }
    let next = z - v / dv;
    if next.re.is_finite() && next.im.is_finite() && p.eval(next).norm() < v.norm() {
        next
    } else {
        z
    }
}

/// Groups points into connected components of the "closer than `radius`"
/// relation.
pub(crate) fn single_linkage(points: Vec<Complex>, radius: f64) -> Vec<Vec<Complex>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (points[i] - points[j]).norm() < radius {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    label.iter_mut().filter(|l| **l == a).for_each(|l| *l = b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex>)> = Vec::new();
    for (p, l) in points.into_iter().zip(label) {
        match groups.iter_mut().find(|(k, _)| *k == l) {
            Some((_, g)) => g.push(p),
            None => groups.push((l, vec![p])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}


impl Poly {
    /// Replaces each cluster of `k ≥ 2` roots that is numerically a single
    /// `k`-fold root by `k` copies of it. The cluster centroid is refined as
    /// a simple root of the `(k − 1)`-th derivative and accepted only if the
    /// polynomial vanishes there to rounding level.
    pub(crate) fn merge_multiple_roots(&self, roots: Vec<Complex>, radius: f64) -> Vec<Complex> {
        let mut out = Vec::with_capacity(roots.len());
        for cl in single_linkage(roots, radius) {
            let k = cl.len();
            let centroid = cl.iter().sum::<Complex>() / k as f64;
            let merged = (k > 1).then(|| self.refine_multiple_root(centroid, k)).flatten();
            match merged {
                Some(c) if (c - centroid).norm() < radius => out.extend(std::iter::repeat_n(c, k)),
                _ => out.extend(cl),
            }
        }
        out
    }

    fn refine_multiple_root(&self, start: Complex, k: usize) -> Option<Complex> {
        let mut d = self.clone();
        for _ in 1..k {
            d = d.derivative();
        }
        let mut z = start;
        for _ in 0..20 {
            let (v, dv) = d.eval_with_derivative(z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            z -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
                break;
            }
        }
        let scale = self.abs_eval(z.norm());
        (self.eval(z).norm() <= 1e3 * f64::EPSILON * scale).then_some(z)
    }
}
