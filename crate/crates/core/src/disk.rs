//! Complex arithmetic on the closed unit disk and its conformal automorphisms.
//!
//! Every automorphism of the disk has the form `z ↦ r (z − a)/(1 − ā z)` with
//! `|a| < 1` and `|r| = 1`. The pair `(a, rotation)` is the canonical
//! representation; composition goes through the 2×2 coefficient matrix
//! `[[r, −r a], [−ā, 1]]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::tolerances;

pub use num_complex::Complex64 as Complex;

pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);

/// Rejects NaN and infinite components.
pub fn ensure_finite(z: Complex, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} is not finite: {z}")))
    }
}

/// `e^{iθ}`.
pub fn on_circle(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// Argument of `z` in `[0, 2π)`. Angles within `1e-12` below `2π` are folded to
/// 0 so that points computed as `1 − ε i` order with the point 1.
pub fn angle(z: Complex) -> f64 {
    normalize_angle(z.arg())
}

/// Maps an angle into `[0, 2π)`, folding values just below `2π` to 0.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < 1e-12 {
        0.0
    } else {
        t
    }
}

/// Counterclockwise angle from `from` to `to`, in `[0, 2π)`.
pub fn angle_from(from: Complex, to: Complex) -> f64 {
    normalize_angle(to.arg() - from.arg())
}

/// Radial projection onto the unit circle.
pub fn project_to_circle(z: Complex) -> Complex {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// The unimodular constant `k = (1 − ā)/(1 − a)` that makes `μ_a` fix 1.
pub fn root_constant(a: Complex) -> Complex {
    (ONE - a.conj()) / (ONE - a)
}

fn check_disk_parameter(a: Complex, what: &str) -> Result<()> {
    ensure_finite(a, what)?;
    let eps = tolerances().boundary;
    if a.norm() > 1.0 - eps {
        return Err(Error::Domain(format!(
            "{what} = {a} is not inside the disk (|·| = {} > 1 − {eps:e})",
            a.norm()
        )));
    }
    Ok(())
}

fn check_unimodular(r: Complex, what: &str) -> Result<()> {
    ensure_finite(r, what)?;
    let tol = tolerances().unimodular;
    if (r.norm() - 1.0).abs() > tol {
        return Err(Error::Domain(format!("{what} = {r} is not unimodular")));
    }
    Ok(())
}

/// A conformal automorphism `z ↦ rotation · (z − a)/(1 − ā z)` of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MobiusRepr", into = "MobiusRepr")]
pub struct MobiusAutomorphism {
    a: Complex,
    rotation: Complex,
}

#[derive(Serialize, Deserialize)]
struct MobiusRepr {
    a: Complex,
    rotation: Complex,
}

impl TryFrom<MobiusRepr> for MobiusAutomorphism {
    type Error = Error;
    fn try_from(r: MobiusRepr) -> Result<Self> {
        MobiusAutomorphism::new(r.a, r.rotation)
    }
}

impl From<MobiusAutomorphism> for MobiusRepr {
    fn from(m: MobiusAutomorphism) -> Self {
        MobiusRepr { a: m.a, rotation: m.rotation }
    }
}

impl Default for MobiusAutomorphism {
    fn default() -> Self {
        Self::identity()
    }
}

impl MobiusAutomorphism {
    pub fn new(a: Complex, rotation: Complex) -> Result<Self> {
        check_disk_parameter(a, "Möbius parameter a")?;
        check_unimodular(rotation, "Möbius rotation")?;
        Ok(Self { a, rotation })
    }

    pub fn identity() -> Self {
        Self { a: ZERO, rotation: ONE }
    }

    /// The rotation `z ↦ u z`.
    pub fn rotation_by(u: Complex) -> Result<Self> {
        Self::new(ZERO, u)
    }

    /// `μ_a`: the unique automorphism sending `a` to 0 and fixing the boundary point 1.
    pub fn to_zero(a: Complex) -> Result<Self> {
        check_disk_parameter(a, "a")?;
        Ok(Self { a, rotation: root_constant(a) })
    }

    /// The unique automorphism sending `p ↦ 0` and the circle point `b ↦ 1`.
    pub fn from_specs(p: Complex, b: Complex) -> Result<Self> {
        check_disk_parameter(p, "p")?;
        check_unimodular(b, "b")?;
        let b = project_to_circle(b);
        // r (b − p)/(1 − p̄ b) = 1
        let rotation = project_to_circle((ONE - p.conj() * b) / (b - p));
        Ok(Self { a: p, rotation })
    }

    pub fn a(&self) -> Complex {
        self.a
    }

    pub fn rotation(&self) -> Complex {
        self.rotation
    }

    /// Coefficient matrix `[[r, −r a], [−ā, 1]]` in row-major order.
    pub fn matrix(&self) -> [Complex; 4] {
        [self.rotation, -self.rotation * self.a, -self.a.conj(), ONE]
    }

    fn from_matrix(m: [Complex; 4]) -> Result<Self> {
        let [p, q, _, s] = m;
        if p.norm() < tolerances().singular || s.norm() < tolerances().singular {
            return Err(Error::Domain("degenerate automorphism matrix".into()));
        }
        let a = -q / p;
        check_disk_parameter(a, "composite parameter a")?;
        Ok(Self { a, rotation: project_to_circle(p / s) })
    }

    /// Evaluates the map on the closed disk.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        ensure_finite(z, "z")?;
        let tol = tolerances();
        if z.norm() > 1.0 + tol.eval {
            return Err(Error::Domain(format!("z = {z} is outside the closed disk")));
        }
        self.eval_extended(z)
    }

    /// Evaluates the rational extension anywhere away from the pole `1/ā`.
    pub fn eval_extended(&self, z: Complex) -> Result<Complex> {
        let den = ONE - self.a.conj() * z;
        if den.norm() < tolerances().singular {
            return Err(Error::Domain(format!("Möbius denominator vanishes at z = {z}")));
        }
        Ok(self.rotation * (z - self.a) / den)
    }

    /// Evaluation without domain checks, for points already known to be in the disk.
    #[inline]
    pub(crate) fn apply(&self, z: Complex) -> Complex {
        self.rotation * (z - self.a) / (ONE - self.a.conj() * z)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let [a, b, c, d] = self.matrix();
        let [e, f, g, h] = other.matrix();
        Self::from_matrix([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(&self) -> Self {
        // [[r, −r a], [−ā, 1]]⁻¹ ∝ [[1, r a], [ā, r]]
        Self { a: -self.rotation * self.a, rotation: self.rotation.conj() }
    }

    /// Applies the inverse map.
    #[inline]
    pub(crate) fn apply_inverse(&self, w: Complex) -> Complex {
        let u = w * self.rotation.conj();
        (u + self.a) / (ONE + self.a.conj() * u)
    }

    /// Max-norm distance between parameter pairs.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.a - other.a).norm().max((self.rotation - other.rotation).norm())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&Self::identity()) <= tol
    }
}

/// Convenience: `μ_a(z)` evaluated directly, `a` assumed inside the disk.
#[inline]
pub(crate) fn mu(a: Complex, z: Complex) -> Complex {
    root_constant(a) * (z - a) / (ONE - a.conj() * z)
}
