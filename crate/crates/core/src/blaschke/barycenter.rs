//! Conformal barycenter of a finite configuration in the disk.
//!
//! The barycenter `p` is the unique point such that an automorphism sending
//! `p` to 0 carries the configuration to points with zero sum. We solve
//! `g(p) = Σ (c_j − p)/(1 − p̄ c_j) = 0` by damped Newton in two real
//! variables, re-centering at the current iterate on every step so the
//! linearization is always taken at the origin.

use serde::Serialize;

use crate::disk::{ensure_finite, Complex, ZERO};
use crate::error::{Error, Result};
use crate::tol::tolerances;

const MAX_STEPS: usize = 200;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Barycenter {
    pub point: Complex,
    /// `|Σ μ_p(c_j)|` at the returned point.
    pub residual: f64,
}

/// `Σ_j (c_j − p)/(1 − p̄ c_j)`; equal in modulus to `Σ μ_p(c_j)`.
pub fn barycenter_sum(points: &[Complex], p: Complex) -> Complex {
    points.iter().map(|&c| (c - p) / (Complex::new(1.0, 0.0) - p.conj() * c)).sum()
}

pub fn conformal_barycenter(points: &[Complex]) -> Result<Barycenter> {
    if points.is_empty() {
        return Err(Error::Domain("barycenter of an empty configuration".into()));
    }
    let tol = tolerances();
    for &c in points {
        ensure_finite(c, "point")?;
        if c.norm() > 1.0 - tol.boundary {
            return Err(Error::Domain(format!("point {c} is not inside the disk")));
        }
    }
    let n = points.len() as f64;
    let mut p: Complex = points.iter().sum::<Complex>() / n;
    let mut res = barycenter_sum(points, p).norm();
    let floor = 4.0 * n * f64::EPSILON;

    for _ in 0..MAX_STEPS {
        if res <= floor {
            break;
        }
        // In the frame where p = 0: g(q) ≈ r − n q + B q̄ with B = Σ w_j².
        let w: Vec<Complex> = points.iter().map(|&c| (c - p) / (Complex::new(1.0, 0.0) - p.conj() * c)).collect();
        let r: Complex = w.iter().sum();
        let b: Complex = w.iter().map(|x| x * x).sum();
        let det = n * n - b.norm_sqr();
        if det <= 0.0 {
            return Err(Error::Numerical("degenerate barycenter Jacobian".into()));
        }
        let delta = (r * n + b * r.conj()) / det;

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let step = delta * t;
            if step.norm() < 1.0 {
                let cand = (step + p) / (Complex::new(1.0, 0.0) + p.conj() * step);
                let cand_res = barycenter_sum(points, cand).norm();
                if cand.norm() < 1.0 && cand_res < res {
                    p = cand;
                    res = cand_res;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if !(res < tol.barycenter) {
        return Err(Error::Numerical(format!("barycenter residual {res:e} above {:e}", tol.barycenter)));
    }
    if p.norm() < f64::EPSILON {
        p = ZERO;
    }
    Ok(Barycenter { point: p, residual: res })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::MobiusAutomorphism;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn single_point() {
        let b = conformal_barycenter(&[c(0.3, -0.2)]).unwrap();
        assert!((b.point - c(0.3, -0.2)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_pair() {
        let b = conformal_barycenter(&[c(0.7, 0.1), c(-0.7, -0.1)]).unwrap();
        assert!(b.point.norm() < 1e-10);
    }

    #[test]
    fn three_points_on_segment() {
        let pts = [ZERO, ZERO, c(0.6, 0.0)];
        let b = conformal_barycenter(&pts).unwrap();
        assert!(b.residual < 1e-10);
        assert!(b.point.im.abs() < 1e-14 && b.point.re > 0.0 && b.point.re < 0.6);
        // Oracle: on the real slice g(x) = −2x + (0.6 − x)/(1 − 0.6x) is
        // decreasing; bisect it independently.
        let g = |x: f64| -2.0 * x + (0.6 - x) / (1.0 - 0.6 * x);
        let (mut lo, mut hi) = (0.0, 0.6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((b.point.re - lo).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(conformal_barycenter(&[]).is_err());
        assert!(conformal_barycenter(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let pts: Vec<Complex> =
                (0..n).map(|_| Complex::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * TAU)).collect();
            let g = MobiusAutomorphism::from_specs(
                Complex::from_polar(0.6 * rng.gen::<f64>(), rng.gen::<f64>() * TAU),
                Complex::from_polar(1.0, rng.gen::<f64>() * TAU),
            )
            .unwrap();
            let b = conformal_barycenter(&pts).unwrap();
            let moved: Vec<Complex> = pts.iter().map(|&z| g.eval(z).unwrap()).collect();
            let bm = conformal_barycenter(&moved).unwrap();
            assert!((bm.point - g.eval(b.point).unwrap()).norm() < 1e-9);
        }
    }
}
