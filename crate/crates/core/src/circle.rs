//! Boundary dynamics of a Blaschke product with an interior fixed point.
//!
//! Iterated preimages of a boundary fixed point `z₀` give a coordinate
//! `t: ∂D → R/Z` conjugating `β` to `t ↦ d·t`: the `d^k` solutions of
//! `β^k(z) = z₀`, sorted counterclockwise from `z₀`, receive `j/d^k`. Counting
//! iterated preimages of the point 1 inside an arc gives the balanced
//! invariant measure `ℓ`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::disk::{angle, angle_from, on_circle, Complex, ONE};
use crate::error::{Error, Result};
use crate::tol::tolerances;

/// Largest table (number of points) built by default.
pub const MAX_TABLE: usize = 1 << 20;

/// A counterclockwise arc `[start, end)` of the unit circle, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    start: f64,
    end: f64,
}

impl ArcInterval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::Domain("arc endpoints must be finite".into()));
        }
        let len = end - start;
        if !(len > 0.0 && len <= TAU) {
            return Err(Error::Domain(format!("arc length {len} not in (0, 2π]")));
        }
        let s = start.rem_euclid(TAU);
        Ok(Self { start: s, end: s + len })
    }

    pub fn full() -> Self {
        Self { start: 0.0, end: TAU }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        if self.length() >= TAU {
            return true;
        }
        (theta - self.start).rem_euclid(TAU) < self.length()
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.contains_angle(z.arg())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableEntry {
    pub point: Complex,
    /// Counterclockwise angle from the base fixed point, in `[0, 2π)`.
    pub offset: f64,
    /// Coordinate numerator; the coordinate is `numerator / denominator`.
    pub numerator: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleCoordinateTable {
    pub base_fixed_point: Complex,
    pub degree: usize,
    pub depth: u32,
    pub denominator: u64,
    pub entries: Vec<TableEntry>,
}

/// Coordinate of a circle point read off a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordinateEstimate {
    pub t: f64,
    /// Width of the bracketing table interval, an error bound for `t`.
    pub gap: f64,
}

fn check_budget(d: usize, depth: u32, max_table: usize) -> Result<u64> {
    let mut n: u64 = 1;
    for _ in 0..depth {
        n = n.checked_mul(d as u64).filter(|&n| n as usize <= max_table).ok_or_else(|| {
            Error::Budget(format!("{d}^{depth} points exceed the table limit {max_table}"))
        })?;
    }
    Ok(n)
}

/// The `d^depth` solutions of `β^depth(z) = base`, unsorted.
pub fn iterated_preimages(beta: &BlaschkeProduct, base: Complex, depth: u32, max_table: usize) -> Result<Vec<Complex>> {
    check_budget(beta.degree(), depth, max_table)?;
    let mut level = vec![base];
    for _ in 0..depth {
        let next: Result<Vec<Vec<Complex>>> = level.par_iter().map(|&y| beta.preimages(y)).collect();
        level = next?.into_iter().flatten().collect();
    }
    Ok(level)
}

/// Boundary fixed point used as `z₀`: the `index`-th by argument in `[0, 2π)`.
pub fn base_fixed_point(beta: &BlaschkeProduct, index: usize) -> Result<Complex> {
    let report = beta.fixed_points()?;
    if report.interior.is_none() {
        return Err(Error::NoInteriorFixedPoint);
    }
    report.boundary.get(index).copied().ok_or_else(|| {
        Error::Domain(format!("base index {index} out of range ({} boundary fixed points)", report.boundary.len()))
    })
}

/// Builds the depth-`k` coordinate table based at the `base_index`-th
/// boundary fixed point (0 = smallest nonnegative argument).
pub fn build_coordinate_table(beta: &BlaschkeProduct, depth: u32, base_index: usize) -> Result<CircleCoordinateTable> {
    build_coordinate_table_with_limit(beta, depth, base_index, MAX_TABLE)
}

pub fn build_coordinate_table_with_limit(
    beta: &BlaschkeProduct,
    depth: u32,
    base_index: usize,
    max_table: usize,
) -> Result<CircleCoordinateTable> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let n = check_budget(beta.degree(), depth, max_table)?;
    let z0 = base_fixed_point(beta, base_index)?;
    let points = iterated_preimages(beta, z0, depth, max_table)?;
    let mut tagged: Vec<(f64, Complex)> = points.into_iter().map(|z| (angle_from(z0, z), z)).collect();
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
    if tagged.len() as u64 != n {
        return Err(Error::Numerical(format!("expected {n} table points, found {}", tagged.len())));
    }
    for w in tagged.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Numerical(format!("coincident table points at offset {}", w[0].0)));
        }
    }
    let entries = tagged
        .into_iter()
        .enumerate()
        .map(|(j, (offset, point))| TableEntry { point, offset, numerator: j as u64 })
        .collect();
    Ok(CircleCoordinateTable { base_fixed_point: z0, degree: beta.degree(), depth, denominator: n, entries })
}

impl CircleCoordinateTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Index of the entry whose coordinate is `d·t mod 1` for entry `j`.
    pub fn image_index(&self, j: usize) -> usize {
        ((self.degree as u64 * j as u64) % self.denominator) as usize
    }

    /// Index of the table entry nearest to `z` on the circle.
    pub fn nearest_index(&self, z: Complex) -> usize {
        let off = angle_from(self.base_fixed_point, z);
        let i = self.entries.partition_point(|e| e.offset <= off);
        let n = self.entries.len();
        let below = (i + n - 1) % n;
        let above = i % n;
        if (self.entries[below].point - z).norm() <= (self.entries[above].point - z).norm() {
            below
        } else {
            above
        }
    }

    /// Coordinate of a circle point by linear interpolation in angle between
    /// the bracketing entries.
    pub fn boundary_coordinate(&self, z: Complex) -> Result<CoordinateEstimate> {
        if (z.norm() - 1.0).abs() > tolerances().unimodular.max(tolerances().snap) {
            return Err(Error::Domain(format!("{z} is not on the unit circle")));
        }
        let n = self.entries.len();
        let den = self.denominator as f64;
        let off = angle_from(self.base_fixed_point, z);
        let i = self.entries.partition_point(|e| e.offset <= off);
        let lo = &self.entries[i - 1];
        let (hi_offset, hi_num) = if i < n { (self.entries[i].offset, self.entries[i].numerator as f64) } else { (TAU, den) };
        let frac = if off == lo.offset { 0.0 } else { (off - lo.offset) / (hi_offset - lo.offset) };
        let t = (lo.numerator as f64 + frac * (hi_num - lo.numerator as f64)) / den;
        Ok(CoordinateEstimate { t: t.rem_euclid(1.0), gap: 1.0 / den })
    }

    /// CSV with columns `angle, re, im, t_numerator, t_denominator`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
        w.write_record(["angle", "re", "im", "t_numerator", "t_denominator"]).map_err(io)?;
        for e in &self.entries {
            w.write_record(&[
                angle(e.point).to_string(),
                e.point.re.to_string(),
                e.point.im.to_string(),
                e.numerator.to_string(),
                self.denominator.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// Result of checking `t(β(z)) = d·t(z) mod 1` across a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugacyCheck {
    /// Entries whose image is nearest to an entry other than `d·j mod d^k`.
    pub index_mismatches: usize,
    /// Largest `|β(z_j) − z_{d j mod d^k}|`.
    pub max_residual: f64,
}

pub fn check_conjugacy(beta: &BlaschkeProduct, table: &CircleCoordinateTable) -> ConjugacyCheck {
    let (mism, worst) = table
        .entries
        .par_iter()
        .enumerate()
        .map(|(j, e)| {
            let img = beta.apply(e.point);
            let k = table.image_index(j);
            let miss = usize::from(table.nearest_index(img) != k);
            (miss, (img - table.entries[k].point).norm())
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    ConjugacyCheck { index_mismatches: mism, max_residual: worst }
}

/// `N(k)/d^k` for an arc, with the exact count kept alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub count: u64,
    pub total: u64,
    pub value: f64,
}

/// Depth-`k` preimages of the point 1, sorted by argument; reusable for
/// many arcs.
#[derive(Debug, Clone)]
pub struct PreimageSample {
    angles: Vec<f64>,
}

impl PreimageSample {
    pub fn new(beta: &BlaschkeProduct, depth: u32) -> Result<Self> {
        let pts = iterated_preimages(beta, ONE, depth, MAX_TABLE)?;
        let mut angles: Vec<f64> = pts.into_iter().map(angle).collect();
        angles.sort_by(f64::total_cmp);
        Ok(Self { angles })
    }

    pub fn total(&self) -> u64 {
        self.angles.len() as u64
    }

    pub fn measure(&self, arc: &ArcInterval) -> MeasureEstimate {
        let count = if arc.length() >= TAU {
            self.angles.len()
        } else {
            let below = |x: f64| self.angles.partition_point(|&a| a < x);
            let (s, e) = (arc.start(), arc.end());
            if e <= TAU {
                below(e) - below(s)
            } else {
                (self.angles.len() - below(s)) + below(e - TAU)
            }
        } as u64;
        MeasureEstimate { count, total: self.total(), value: count as f64 / self.total() as f64 }
    }
}

/// `ℓ(I) ≈ N(k)/d^k`, `N(k)` the number of solutions of `β^k(u) = 1` in `I`.
pub fn invariant_measure(beta: &BlaschkeProduct, arc: &ArcInterval, depth: u32) -> Result<MeasureEstimate> {
    Ok(PreimageSample::new(beta, depth)?.measure(arc))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub arc_measure: f64,
    pub expected_component_measure: f64,
    pub components: Vec<(ArcInterval, f64)>,
    pub max_deviation: f64,
}

/// The `d` components of `β⁻¹(I)` and their measures against `ℓ(I)/d`.
pub fn verify_balanced(beta: &BlaschkeProduct, arc: &ArcInterval, depth: u32) -> Result<BalanceReport> {
    PreimageSample::new(beta, depth)?.balance(beta, arc)
}

impl PreimageSample {
    /// [`verify_balanced`] against this sample, which must come from `beta`.
    pub fn balance(&self, beta: &BlaschkeProduct, arc: &ArcInterval) -> Result<BalanceReport> {
        if arc.length() >= PI {
            return Err(Error::Domain("balanced check needs an arc shorter than π".into()));
        }
        let arc_measure = self.measure(arc).value;
        let d = beta.degree();
        let starts = beta.preimages(on_circle(arc.start()))?;
        let ends = beta.preimages(on_circle(arc.end()))?;
        let mut components = Vec::with_capacity(d);
        for &u in &starts {
            let len = ends.iter().map(|&v| angle_from(u, v)).filter(|&l| l > 0.0).fold(f64::INFINITY, f64::min);
            let comp = ArcInterval::new(u.arg(), u.arg() + len)?;
            components.push((comp, self.measure(&comp).value));
        }
        let expected = arc_measure / d as f64;
        let max_deviation = components.iter().map(|(_, m)| (m - expected).abs()).fold(0.0, f64::max);
        Ok(BalanceReport { arc_measure, expected_component_measure: expected, components, max_deviation })
    }
}
