//! Boundary markings: an automorphism `ι` of the schema and circle points
//! `q(v)` on component `ι(v)` with `β_{ι(v)}(q(v)) = q(F(v))`.
//!
//! Markings of a member `β` correspond one-to-one with `G(S)` through the
//! boundary conjugacy of `β` with the center map, which fixes the root 1 of
//! every circle and preserves orientation. Concretely, for `g = (ι, θ)`:
//! on each cycle the base point is the `j`-th boundary fixed point of the
//! return map on `ι(v₀)`, counted counterclockwise from 1, where
//! `θ_{v₀} = j/(D − 1)`; it is pushed forward around the cycle. A tree vertex
//! takes the `k`-th preimage of `q(F(v))` counted from 1, where
//! `θ_v = (θ_{F(v)} + k)/d(v)`. On the center map this gives `q(v) = e^{2πiθ_v}`.

use std::collections::HashMap;

use serde::Serialize;

use crate::blaschke::Composite;
use crate::disk::{angle, project_to_circle, Complex};
use crate::error::{Error, Result};
use crate::schema::{symmetry_group, SymmetryElement};

use super::ModelMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryMarking {
    pub element: SymmetryElement,
    /// `ι` as vertex indices.
    pub automorphism: Vec<usize>,
    /// `q(v)`, a point on the circle of component `ι(v)`.
    pub points: Vec<Complex>,
}

impl BoundaryMarking {
    /// Largest `|β_{ι(v)}(q(v)) − q(F(v))|`.
    pub fn equivariance_residual(&self, m: &ModelMap) -> f64 {
        let s = m.schema();
        (0..s.len())
            .map(|v| (m.factor(self.automorphism[v]).apply(self.points[v]) - self.points[s.image(v)]).norm())
            .fold(0.0, f64::max)
    }
}

fn sorted_from_root(mut pts: Vec<Complex>) -> Vec<Complex> {
    pts.sort_by(|a, b| angle(*a).total_cmp(&angle(*b)));
    pts
}

/// Cached circle solves shared by all elements with the same automorphism
/// part on a given cycle.
struct MarkingBuilder<'a> {
    m: &'a ModelMap,
    cycle_points: HashMap<(usize, usize), Vec<Complex>>,
}

impl<'a> MarkingBuilder<'a> {
    fn new(m: &'a ModelMap) -> Self {
        Self { m, cycle_points: HashMap::new() }
    }

    fn return_map_fixed_points(&mut self, cycle: usize, iota: &[usize]) -> Result<&[Complex]> {
        let s = self.m.schema();
        let c = &s.cycles()[cycle];
        let key = (cycle, iota[c.vertices[0]]);
        if !self.cycle_points.contains_key(&key) {
            let maps: Vec<_> = c.vertices.iter().map(|&v| self.m.factor(iota[v])).collect();
            let pts = sorted_from_root(Composite::new(&maps).boundary_fixed_points()?);
            if pts.len() as u64 != c.degree - 1 {
                return Err(Error::Numerical(format!(
                    "return map of degree {} has {} boundary fixed points",
                    c.degree,
                    pts.len()
                )));
            }
            self.cycle_points.insert(key, pts);
        }
        Ok(&self.cycle_points[&key])
    }

    fn build(&mut self, g: &SymmetryElement) -> Result<BoundaryMarking> {
        let m = self.m;
        let s = m.schema();
        let iota = &g.automorphism;
        let choices = g.rotation.choices(s);
        let mut q = vec![Complex::new(0.0, 0.0); s.len()];
        let mut slot = 0;
        for (ci, c) in s.cycles().iter().enumerate() {
            let fps = self.return_map_fixed_points(ci, iota)?;
            let mut z = fps[choices[slot]];
            slot += 1;
            for &v in &c.vertices {
                q[v] = z;
                z = project_to_circle(m.factor(iota[v]).apply(z));
            }
        }
        for &v in s.tree_vertices() {
            let pre = sorted_from_root(m.factor(iota[v]).preimages(q[s.image(v)])?);
            q[v] = pre[choices[slot]];
            slot += 1;
        }
        Ok(BoundaryMarking { element: g.clone(), automorphism: iota.clone(), points: q })
    }
}

/// The marking labeled by `g`.
pub fn marking_for(m: &ModelMap, g: &SymmetryElement) -> Result<BoundaryMarking> {
    if !g.is_valid(m.schema()) {
        return Err(Error::Domain("element is not in G(S) for this schema".into()));
    }
    MarkingBuilder::new(m).build(g)
}

/// All `|G(S)|` markings, in the order of [`symmetry_group`].
pub fn boundary_markings(m: &ModelMap) -> Result<Vec<BoundaryMarking>> {
    let mut b = MarkingBuilder::new(m);
    symmetry_group(m.schema()).iter().map(|g| b.build(g)).collect()
}
