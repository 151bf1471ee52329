//! Points of the model space `B(S)`: one boundary-rooted factor per vertex,
//! fixing 0 at periodic vertices and critically centered elsewhere.

mod action;
mod chart;
mod marking;

pub use action::{act, apply_marking, conjugacy_equivalent, default_probes, effective_group_order, kernel_n0, orbit};
pub use chart::{
    parameter_len, parameters_of, random_member, random_parameters, sample, sample_symmetric, symmetric_parameters_of,
};
pub use marking::{boundary_markings, marking_for, BoundaryMarking};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::blaschke::{critical_sum, BlaschkeProduct};
use crate::disk::{Complex, ONE, ZERO};
use crate::error::{Error, MembershipClause, Result};
use crate::schema::MappingSchema;
use crate::tol::tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct ModelMap {
    schema: MappingSchema,
    factors: Vec<BlaschkeProduct>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    schema: MappingSchema,
    factors: IndexMap<String, BlaschkeProduct>,
}

impl TryFrom<ModelRepr> for ModelMap {
    type Error = Error;
    fn try_from(mut r: ModelRepr) -> Result<Self> {
        let factors = r
            .schema
            .ids()
            .iter()
            .map(|id| {
                r.factors.swap_remove(id).ok_or_else(|| Error::Membership {
                    vertex: id.clone(),
                    clause: MembershipClause::Schema,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = r.factors.keys().next() {
            return Err(Error::Validation(format!("factor for unknown vertex `{extra}`")));
        }
        ModelMap::new(r.schema, factors)
    }
}

impl From<ModelMap> for ModelRepr {
    fn from(m: ModelMap) -> Self {
        let factors = m.schema.ids().iter().cloned().zip(m.factors).collect();
        ModelRepr { schema: m.schema, factors }
    }
}

impl ModelMap {
    /// Pairs a schema with one factor per vertex (in vertex order). Membership
    /// is checked separately by [`ModelMap::validate_membership`].
    pub fn new(schema: MappingSchema, factors: Vec<BlaschkeProduct>) -> Result<Self> {
        if factors.len() != schema.len() {
            return Err(Error::Validation(format!("{} factors for {} vertices", factors.len(), schema.len())));
        }
        Ok(Self { schema, factors })
    }

    /// `(v, z) ↦ (F(v), z^{d(v)})`.
    pub fn center(schema: &MappingSchema) -> Self {
        let factors = (0..schema.len()).map(|v| BlaschkeProduct::power(schema.degree(v))).collect();
        Self { schema: schema.clone(), factors }
    }

    pub fn schema(&self) -> &MappingSchema {
        &self.schema
    }

    pub fn factors(&self) -> &[BlaschkeProduct] {
        &self.factors
    }

    pub fn factor(&self, v: usize) -> &BlaschkeProduct {
        &self.factors[v]
    }

    pub fn validate_membership(&self) -> Result<()> {
        let tol = tolerances();
        let s = &self.schema;
        for &v in s.processing_order() {
            let f = &self.factors[v];
            let fail = |clause| Err(Error::Membership { vertex: s.id(v).to_string(), clause });
            if f.degree() != s.degree(v) {
                return fail(MembershipClause::Degree);
            }
            if (f.apply(ONE) - ONE).norm() > tol.eval {
                return fail(MembershipClause::BoundaryRooted);
            }
            if s.is_periodic(v) {
                if f.apply(ZERO).norm() > tol.eval {
                    return fail(MembershipClause::FixesCenter);
                }
            } else if critical_sum(f)?.norm() > tol.barycenter {
                return fail(MembershipClause::CriticallyCentered);
            }
        }
        Ok(())
    }

    /// Largest factor-wise [`BlaschkeProduct::distance`]; infinite for
    /// different schemata.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.schema != other.schema {
            return f64::INFINITY;
        }
        self.factors.iter().zip(&other.factors).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }

    /// Every factor is `z^{d(v)}` up to `tol_pcf`: the only post-critically
    /// finite member of `B(S)`.
    pub fn is_post_critically_finite(&self) -> bool {
        let eps = tolerances().pcf;
        self.factors.iter().all(|f| f.zeros().iter().all(|a| a.norm() < eps))
    }

    /// Orbits of all critical points under `(v, z) ↦ (F(v), β_v(z))`.
    pub fn critical_orbits(&self, radius: f64, max_iterations: usize) -> Result<Vec<CriticalOrbit>> {
        let mut out = Vec::new();
        for v in 0..self.schema.len() {
            for c in self.factors[v].critical_points()? {
                out.push(self.follow_orbit(v, c, radius, max_iterations));
            }
        }
        Ok(out)
    }

    fn follow_orbit(&self, vertex: usize, point: Complex, radius: f64, max_iterations: usize) -> CriticalOrbit {
        let (mut v, mut z) = (vertex, point);
        for it in 0..=max_iterations {
            if self.schema.is_periodic(v) && z.norm() < radius {
                return CriticalOrbit { vertex: self.schema.id(vertex).into(), point, iterations: Some(it), distance: z.norm() };
            }
            z = self.factors[v].apply(z);
            v = self.schema.image(v);
        }
        CriticalOrbit { vertex: self.schema.id(vertex).into(), point, iterations: None, distance: z.norm() }
    }
}

/// A critical orbit and the first iterate within the target radius of the
/// attracting cycle `{0}` on periodic components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalOrbit {
    pub vertex: String,
    pub point: Complex,
    pub iterations: Option<usize>,
    pub distance: f64,
}
