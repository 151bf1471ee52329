//! Normal forms of Blaschke products under conjugation and one-sided
//! composition with disk automorphisms.

use crate::disk::{Complex, MobiusAutomorphism, ONE};
use crate::error::{Error, Result};
use crate::tol::tolerances;

use super::barycenter::conformal_barycenter;
use super::product::BlaschkeProduct;

/// All conjugates `β = h⁻¹ ∘ φ ∘ h` that are boundary-rooted and fix 0.
///
/// `h` sends 0 to the interior fixed point of `φ` and 1 to one of its `d − 1`
/// boundary fixed points, so exactly `d − 1` pairs come back, ordered by the
/// argument of `h(1)`.
pub fn normalize_fixed_point_centered(phi: &BlaschkeProduct) -> Result<Vec<(BlaschkeProduct, MobiusAutomorphism)>> {
    let report = phi.fixed_points()?;
    let p = report.interior.ok_or(Error::NoInteriorFixedPoint)?;
    let d = phi.degree();
    if report.boundary.len() != d - 1 {
        return Err(Error::Numerical(format!(
            "expected {} boundary fixed points, found {}",
            d - 1,
            report.boundary.len()
        )));
    }
    report
        .boundary
        .iter()
        .map(|&b| {
            let h = MobiusAutomorphism::from_specs(p, b)?.inverse();
            let beta = phi.sandwich(&h.inverse(), &h)?;
            Ok((beta, h))
        })
        .collect()
}

/// All `β′ = φ ∘ h` that are boundary-rooted and critically centered.
///
/// `h` carries 0 to the conformal barycenter of the critical points of `φ`
/// and 1 to one of the `d` points of `φ⁻¹(1)`; results are ordered by the
/// argument of `h(1)`.
pub fn normalize_critically_centered(phi: &BlaschkeProduct) -> Result<Vec<(BlaschkeProduct, MobiusAutomorphism)>> {
    let crit = phi.critical_points()?;
    let p = conformal_barycenter(&crit)?.point;
    phi.preimages(ONE)?
        .into_iter()
        .map(|u| {
            let h = MobiusAutomorphism::from_specs(p, u)?.inverse();
            Ok((phi.precompose(&h)?, h))
        })
        .collect()
}

/// Sum of the critical points, the quantity that vanishes for a critically
/// centered product.
pub fn critical_sum(beta: &BlaschkeProduct) -> Result<Complex> {
    Ok(beta.critical_points()?.into_iter().sum())
}

fn require_boundary_rooted(beta: &BlaschkeProduct) -> Result<()> {
    if !beta.is_boundary_rooted() {
        return Err(Error::Domain("product is not boundary-rooted".into()));
    }
    Ok(())
}

/// From a boundary-rooted product whose zeros sum to zero, the unique
/// boundary-rooted automorphism `η` with `β′ = β ∘ η⁻¹` critically centered.
/// Returns `(β′, η)`, so that `β = β′ ∘ η`.
pub fn critically_centered_from_zero_sum(beta: &BlaschkeProduct) -> Result<(BlaschkeProduct, MobiusAutomorphism)> {
    require_boundary_rooted(beta)?;
    let sum: Complex = beta.zeros().iter().sum();
    if sum.norm() > tolerances().chart.max(1e-12 * beta.degree() as f64) {
        return Err(Error::Domain(format!("zeros sum to {sum}, not zero")));
    }
    let p = conformal_barycenter(&beta.critical_points()?)?.point;
    let eta = MobiusAutomorphism::to_zero(p)?;
    Ok((beta.precompose(&eta.inverse())?, eta))
}

/// Inverse direction: from a boundary-rooted critically centered `β′`, the
/// unique boundary-rooted `η` such that `β = β′ ∘ η` has zeros summing to 0.
/// Returns `(β, η)`.
pub fn zero_sum_from_critically_centered(beta_cc: &BlaschkeProduct) -> Result<(BlaschkeProduct, MobiusAutomorphism)> {
    require_boundary_rooted(beta_cc)?;
    let q = conformal_barycenter(beta_cc.zeros())?.point;
    // η⁻¹ = μ_q sends the zeros of β′ to a zero-sum configuration
    let eta = MobiusAutomorphism::to_zero(q)?.inverse();
    Ok((beta_cc.precompose(&eta)?, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::ZERO;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn fpc_of_square() {
        let out = normalize_fixed_point_centered(&BlaschkeProduct::power(2)).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].1.is_identity(1e-12));
        assert!(out[0].0.distance(&BlaschkeProduct::power(2)) < 1e-12);
    }

    #[test]
    fn fpc_of_minus_square() {
        // −z² = z on the circle only at z = −1; h(z) = −z gives z².
        let phi = BlaschkeProduct::new(c(-1.0, 0.0), vec![ZERO, ZERO]).unwrap();
        let out = normalize_fixed_point_centered(&phi).unwrap();
        assert_eq!(out.len(), 1);
        let (beta, h) = &out[0];
        assert!(beta.distance(&BlaschkeProduct::power(2)) < 1e-12);
        assert!((h.eval(ONE).unwrap() + ONE).norm() < 1e-12);
        assert!(h.eval(ZERO).unwrap().norm() < 1e-12);
    }

    #[test]
    fn fpc_of_cube() {
        let out = normalize_fixed_point_centered(&BlaschkeProduct::power(3)).unwrap();
        assert_eq!(out.len(), 2);
        let images: Vec<Complex> = out.iter().map(|(_, h)| h.eval(ONE).unwrap()).collect();
        assert!((images[0] - ONE).norm() < 1e-12);
        assert!((images[1] + ONE).norm() < 1e-12);
        for (beta, _) in &out {
            assert!(beta.distance(&BlaschkeProduct::power(3)) < 1e-12);
        }
    }

    #[test]
    fn fpc_requires_interior_fixed_point() {
        // β = μ_{−1/2}² fixes 1 with β′(1) = 2·(1/3) < 1, so 1 is the
        // Denjoy–Wolff point and there is no interior fixed point.
        let a = c(-0.5, 0.0);
        let phi = BlaschkeProduct::new(ONE, vec![a, a]).unwrap();
        let report = phi.fixed_points().unwrap();
        assert!(report.interior.is_none());
        assert!(report.boundary_count_with_multiplicity() >= 1);
        assert_eq!(normalize_fixed_point_centered(&phi), Err(Error::NoInteriorFixedPoint));
    }

    #[test]
    fn cc_of_square() {
        let out = normalize_critically_centered(&BlaschkeProduct::power(2)).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0].1.is_identity(1e-12));
        assert!((out[1].1.eval(ONE).unwrap() + ONE).norm() < 1e-12);
        for (beta, _) in &out {
            assert!(beta.distance(&BlaschkeProduct::power(2)) < 1e-12);
        }
    }

    #[test]
    fn cc_of_even_product() {
        let phi = BlaschkeProduct::boundary_rooted(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        // φ(z) = (z² − 1/4)/(1 − z²/4): φ(z) = 1 ⇔ z² = 1
        let out = normalize_critically_centered(&phi).unwrap();
        assert_eq!(out.len(), 2);
        for (beta, h) in &out {
            assert!(h.eval(ZERO).unwrap().norm() < 1e-12);
            assert!(critical_sum(beta).unwrap().norm() < 1e-10);
            assert!((beta.eval(ONE).unwrap() - ONE).norm() < 1e-9);
        }
        assert!((out[1].1.eval(ONE).unwrap() + ONE).norm() < 1e-12);
    }

    #[test]
    fn zero_sum_round_trip() {
        let beta = BlaschkeProduct::boundary_rooted(vec![c(0.3, 0.2), c(-0.1, 0.4), c(-0.2, -0.6)]).unwrap();
        let (cc, eta) = critically_centered_from_zero_sum(&beta).unwrap();
        assert!(critical_sum(&cc).unwrap().norm() < 1e-10);
        assert!((eta.eval(ONE).unwrap() - ONE).norm() < 1e-12);
        let (back, eta2) = zero_sum_from_critically_centered(&cc).unwrap();
        assert!(back.distance(&beta) < 1e-9, "{back:?}");
        assert!(eta2.distance(&eta) < 1e-9);
        // power maps are fixed by both directions
        let (p, e) = critically_centered_from_zero_sum(&BlaschkeProduct::power(3)).unwrap();
        assert!(p.distance(&BlaschkeProduct::power(3)) < 1e-12 && e.is_identity(1e-12));
        let sym = BlaschkeProduct::boundary_rooted(vec![c(0.4, 0.1), c(-0.4, -0.1)]).unwrap();
        let (p, e) = critically_centered_from_zero_sum(&sym).unwrap();
        assert!(p.distance(&sym) < 1e-12 && e.is_identity(1e-12));
    }

    #[test]
    fn zero_sum_rejects_unbalanced() {
        let beta = BlaschkeProduct::boundary_rooted(vec![c(0.3, 0.0), c(0.1, 0.0)]).unwrap();
        assert!(critically_centered_from_zero_sum(&beta).is_err());
    }
}
