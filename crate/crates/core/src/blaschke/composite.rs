//! Compositions `β_k ∘ ⋯ ∘ β_1` of Blaschke products, used as return maps
//! around cycles of components.

use std::f64::consts::TAU;

use crate::disk::{angle, on_circle, Complex};
use crate::error::{Error, Result};

use super::product::BlaschkeProduct;

/// Above this degree the return map is never expanded symbolically.
pub const MAX_SYMBOLIC_DEGREE: usize = 64;

/// A composite map; `maps[0]` is applied first.
#[derive(Debug, Clone, Copy)]
pub struct Composite<'a> {
    pub maps: &'a [&'a BlaschkeProduct],
}

impl<'a> Composite<'a> {
    pub fn new(maps: &'a [&'a BlaschkeProduct]) -> Self {
        Self { maps }
    }

    pub fn degree(&self) -> usize {
        self.maps.iter().map(|m| m.degree()).product()
    }

    pub fn apply(&self, z: Complex) -> Complex {
        self.maps.iter().fold(z, |w, m| m.apply(w))
    }

    /// Value and derivative by the chain rule.
    pub fn apply_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut w = z;
        let mut dw = Complex::new(1.0, 0.0);
        for m in self.maps {
            dw *= m.derivative(w);
            w = m.apply(w);
        }
        (w, dw)
    }

    /// On the circle the logarithmic derivatives multiply along the orbit.
    fn circle_value_and_log_derivative(&self, z: Complex) -> (Complex, f64) {
        let mut w = z;
        let mut ld = 1.0;
        for m in self.maps {
            ld *= m.log_derivative_unchecked(w).re;
            w = m.apply(w);
        }
        (w, ld)
    }

    /// The symbolic product, when its degree is within the limit.
    pub fn to_product(&self) -> Result<BlaschkeProduct> {
        if self.degree() > MAX_SYMBOLIC_DEGREE {
            return Err(Error::Budget(format!("composite degree {} above {MAX_SYMBOLIC_DEGREE}", self.degree())));
        }
        let mut acc = self.maps[0].clone();
        for m in &self.maps[1..] {
            acc = m.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Boundary fixed points of a composite that has an interior fixed point,
    /// ordered by argument. Symbolic for small degree, otherwise by the
    /// circle-lift search.
    pub fn boundary_fixed_points(&self) -> Result<Vec<Complex>> {
        if self.degree() <= MAX_SYMBOLIC_DEGREE {
            let report = self.to_product()?.fixed_points()?;
            if report.interior.is_none() {
                return Err(Error::NoInteriorFixedPoint);
            }
            Ok(report.boundary)
        } else {
            self.boundary_fixed_points_by_lift()
        }
    }

    /// Finds the `D − 1` circle fixed points of an expanding composite of
    /// degree `D`. The lifted phase `Θ(θ)` of `R(e^{iθ})` increases with
    /// slope `zR′/R > 1`, so `Θ(θ) − θ` is strictly increasing with total
    /// increment `2π(D − 1)`; each crossing of a multiple of `2π` is bracketed
    /// on a dense grid and refined by safeguarded Newton.
    pub fn boundary_fixed_points_by_lift(&self) -> Result<Vec<Complex>> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::Domain("degree must be at least 2".into()));
        }
        let (w0, _) = self.circle_value_and_log_derivative(on_circle(0.0));
        let g0 = w0.arg();
        let mut grid = vec![(0.0, g0)];
        let (mut theta, mut val) = (0.0, g0);
        while theta < TAU {
            let (_, ld) = self.circle_value_and_log_derivative(on_circle(theta));
            // keep each phase increment well below π so unwrapping is exact
            let h = (0.5 / ld.max(1.0)).min(TAU / (64.0 * d as f64)).min(TAU - theta).max(1e-12);
            theta += h;
            let (w, _) = self.circle_value_and_log_derivative(on_circle(theta));
            let mut delta = (w.arg() - theta - val).rem_euclid(TAU);
            if delta > std::f64::consts::PI {
                delta -= TAU;
            }
            val += delta;
            grid.push((theta, val));
        }
        let total = grid.last().unwrap().1 - g0;
        let expected = TAU * (d as f64 - 1.0);
        if (total - expected).abs() > 1e-6 {
            return Err(Error::Numerical(format!("lifted phase increment {total} does not match 2π(D − 1) = {expected}")));
        }
        let start_k = (g0 / TAU).ceil() as i64;
        let mut out = Vec::with_capacity(d - 1);
        let mut k = start_k;
        for win in grid.windows(2) {
            let (t0, v0) = win[0];
            let (t1, v1) = win[1];
            while (k as f64) * TAU >= v0 && (k as f64) * TAU < v1 {
                let target = k as f64 * TAU;
                let (mut lo, mut hi) = (t0, t1);
                let (mut vlo, mut vhi) = (v0, v1);
                let mut t = t0 + (target - v0) / (v1 - v0) * (t1 - t0);
                for _ in 0..100 {
                    let (w, ld) = self.circle_value_and_log_derivative(on_circle(t));
                    let mut phase = w.arg() - t;
                    // bring into the branch of the bracket
                    let mid = 0.5 * (vlo + vhi);
                    phase += TAU * ((mid - phase) / TAU).round();
                    let f = phase - target;
                    if f > 0.0 {
                        hi = t;
                        vhi = phase;
                    } else {
                        lo = t;
                        vlo = phase;
                    }
                    let newton = t - f / (ld - 1.0);
                    let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
                    if (next - t).abs() < 1e-16 || hi - lo < 1e-15 {
                        t = next;
                        break;
                    }
                    t = next;
                }
                out.push(on_circle(t));
                k += 1;
            }
        }
        // a crossing at θ = 2π duplicates the one at θ = 0
        let mut dedup: Vec<Complex> = Vec::new();
        for z in out {
            if !dedup.iter().any(|&y| (y - z).norm() < 1e-9) {
                dedup.push(z);
            }
        }
        dedup.sort_by(|a, b| angle(*a).total_cmp(&angle(*b)));
        if dedup.len() != d - 1 {
            return Err(Error::Numerical(format!("lift search found {} boundary fixed points, expected {}", dedup.len(), d - 1)));
        }
        Ok(dedup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{ONE, ZERO};
    use crate::blaschke::product::multiset_distance;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn composite_of_powers() {
        let a = BlaschkeProduct::power(2);
        let b = BlaschkeProduct::power(3);
        let maps = [&a, &b];
        let comp = Composite::new(&maps);
        assert_eq!(comp.degree(), 6);
        let p = comp.to_product().unwrap();
        assert!(p.distance(&BlaschkeProduct::power(6)) < 1e-12);
        let fp = comp.boundary_fixed_points().unwrap();
        assert_eq!(fp.len(), 5);
        let lift = comp.boundary_fixed_points_by_lift().unwrap();
        assert!(multiset_distance(&fp, &lift) < 1e-12);
        assert!((fp[0] - ONE).norm() < 1e-12);
    }

    #[test]
    fn lift_matches_symbolic_for_generic_maps() {
        let a = BlaschkeProduct::boundary_rooted(vec![ZERO, c(0.4, 0.3), c(-0.2, 0.5)]).unwrap();
        let b = BlaschkeProduct::boundary_rooted(vec![ZERO, c(0.6, -0.1)]).unwrap();
        let maps = [&a, &b, &a];
        let comp = Composite::new(&maps);
        assert_eq!(comp.degree(), 18);
        let sym = comp.boundary_fixed_points().unwrap();
        let lift = comp.boundary_fixed_points_by_lift().unwrap();
        assert_eq!(sym.len(), 17);
        assert!(multiset_distance(&sym, &lift) < 1e-9, "{}", multiset_distance(&sym, &lift));
        for z in lift {
            assert!((comp.apply(z) - z).norm() < 1e-9);
        }
    }

    #[test]
    fn chain_rule_derivative() {
        let a = BlaschkeProduct::boundary_rooted(vec![c(0.1, 0.2), c(-0.3, 0.1)]).unwrap();
        let b = BlaschkeProduct::boundary_rooted(vec![c(0.5, 0.0), ZERO]).unwrap();
        let maps = [&a, &b];
        let comp = Composite::new(&maps);
        let z = c(0.2, -0.3);
        let (_, dv) = comp.apply_with_derivative(z);
        let h = 1e-6;
        let fd = (comp.apply(z + c(h, 0.0)) - comp.apply(z - c(h, 0.0))) / (2.0 * h);
        assert!((dv - fd).norm() < 1e-8);
    }
}
