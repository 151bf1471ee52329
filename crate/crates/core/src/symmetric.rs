//! Unordered tuples of points as monic polynomials.
//!
//! A multiset `{a₁, …, a_n}` corresponds to the coefficients of
//! `(z − a₁)⋯(z − a_n) = zⁿ + c₁zⁿ⁻¹ + ⋯ + c_n`, where `c_j = (−1)^j σ_j`.

use std::cmp::Ordering;

use crate::disk::{ensure_finite, Complex, ONE};
use crate::error::{Error, Result};
use crate::poly::Poly;

fn lexicographic(a: &Complex, b: &Complex) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Coefficients `[c₁, …, c_n]` of the monic polynomial with the given roots.
///
/// The points are sorted before expansion, so any permutation of the input
/// gives bit-identical output.
pub fn to_monic(points: &[Complex]) -> Result<Vec<Complex>> {
    if points.is_empty() {
        return Err(Error::Domain("empty tuple".into()));
    }
    for &p in points {
        ensure_finite(p, "point")?;
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(lexicographic);
    let poly = Poly::from_roots(&sorted);
    // ascending storage: c_j sits at index n − j
    Ok(poly.coeffs()[..points.len()].iter().rev().copied().collect())
}

/// Roots of `zⁿ + c₁zⁿ⁻¹ + ⋯ + c_n`, sorted lexicographically.
pub fn from_monic(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    if coeffs.is_empty() {
        return Err(Error::Domain("need at least one coefficient".into()));
    }
    for &c in coeffs {
        ensure_finite(c, "coefficient")?;
    }
    let mut asc: Vec<Complex> = coeffs.iter().rev().copied().collect();
    asc.push(ONE);
    let mut roots = Poly::new(asc).roots()?;
    if roots.len() != coeffs.len() {
        return Err(Error::Numerical(format!("expected {} roots, found {}", coeffs.len(), roots.len())));
    }
    roots.sort_by(lexicographic);
    Ok(roots)
}
