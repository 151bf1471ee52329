//! Process-wide numerical tolerances.
//!
//! Every check in the crate reads its threshold from the current
//! [`Tolerances`]. The defaults are the documented values; the CLI overrides
//! them with `--tol name=value` before doing any work.

use std::sync::RwLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Pointwise identities such as `m(a) = 0` or `|β(z)| = 1` on the circle.
    pub eval: f64,
    /// Accepted deviation of a "unimodular" number from modulus one.
    pub unimodular: f64,
    /// Minimum distance of a disk parameter from the unit circle.
    pub boundary: f64,
    /// Smallest admissible denominator magnitude in Möbius evaluation.
    pub singular: f64,
    /// Residual of the conformal-barycenter equation.
    pub barycenter: f64,
    /// Distance of a boundary multiplier from 1 that triggers a tangency warning.
    pub multiplicity: f64,
    /// Roots this close to the unit circle are projected onto it.
    pub snap: f64,
    /// Geometric matching residual for circle-coordinate conjugacy checks.
    pub conj: f64,
    /// All zeros within this radius of 0 means "power map".
    pub pcf: f64,
    /// Round-trip error of the parameter charts.
    pub chart: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eval: 1e-9,
        unimodular: 1e-9,
        boundary: 1e-12,
        singular: 1e-14,
        barycenter: 1e-10,
        multiplicity: 1e-6,
        snap: 1e-7,
        conj: 1e-7,
        pcf: 1e-8,
        chart: 1e-9,
    };

    pub const NAMES: [&'static str; 10] = [
        "eval",
        "unimodular",
        "boundary",
        "singular",
        "barycenter",
        "multiplicity",
        "snap",
        "conj",
        "pcf",
        "chart",
    ];

    /// Overrides a single tolerance by name. Unknown names and non-positive
    /// values are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Domain(format!("tolerance `{name}` must be positive, got {value}")));
        }
        let slot = match name {
            "eval" => &mut self.eval,
            "unimodular" => &mut self.unimodular,
            "boundary" => &mut self.boundary,
            "singular" => &mut self.singular,
            "barycenter" => &mut self.barycenter,
            "multiplicity" => &mut self.multiplicity,
            "snap" => &mut self.snap,
            "conj" => &mut self.conj,
            "pcf" => &mut self.pcf,
            "chart" => &mut self.chart,
            _ => return Err(Error::Domain(format!("unknown tolerance name `{name}`"))),
        };
        *slot = value;
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances::DEFAULT);

/// The tolerances currently in effect.
pub fn tolerances() -> Tolerances {
    *GLOBAL.read().unwrap_or_else(|e| e.into_inner())
}

/// Replaces the process-wide tolerances.
pub fn set_tolerances(t: Tolerances) {
    *GLOBAL.write().unwrap_or_else(|e| e.into_inner()) = t;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_by_name() {
        let mut t = Tolerances::default();
        t.set("pcf", 1e-6).unwrap();
        assert_eq!(t.pcf, 1e-6);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("eval", -1.0).is_err());
        for name in Tolerances::NAMES {
            t.set(name, 0.5).unwrap();
        }
    }
}
