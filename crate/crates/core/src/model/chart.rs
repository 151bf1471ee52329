//! Real-parameter charts of `B(S)`, of dimension `2w(S)`.
//!
//! Parameters are listed by vertex index, `w(v)` complex numbers per vertex
//! as `(re, im)` pairs. In the zero chart a periodic vertex carries the free
//! zeros of `z μ_{a₁} ⋯ μ_{a_w}`; a non-periodic vertex carries `a₁ … a_w`,
//! completed by `−Σ a_j` to a zero-sum product and then moved to its
//! critically centered representative. The symmetric chart replaces each
//! tuple by the coefficients of its monic polynomial (for zero-sum tuples the
//! vanishing first coefficient is dropped).

use rand::Rng;

use crate::blaschke::{critically_centered_from_zero_sum, zero_sum_from_critically_centered, BlaschkeProduct};
use crate::disk::{Complex, ZERO};
use crate::error::{Error, Result};
use crate::random::disk_point;
use crate::schema::MappingSchema;
use crate::symmetric::{from_monic, to_monic};

use super::ModelMap;

/// Free zeros of periodic vertices are drawn from this disk; a non-periodic
/// vertex of weight `w` uses radius `R/w` so the balancing zero stays inside.
const SAMPLE_RADIUS: f64 = 0.8;

pub fn parameter_len(s: &MappingSchema) -> usize {
    2 * s.total_weight() as usize
}

fn split(s: &MappingSchema, params: &[f64]) -> Result<Vec<Vec<Complex>>> {
    if params.len() != parameter_len(s) {
        return Err(Error::Domain(format!("expected {} real parameters, got {}", parameter_len(s), params.len())));
    }
    if params.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("parameters must be finite".into()));
    }
    let mut it = params.chunks_exact(2).map(|p| Complex::new(p[0], p[1]));
    Ok((0..s.len()).map(|v| it.by_ref().take(s.weight(v) as usize).collect()).collect())
}

fn flatten(groups: Vec<Vec<Complex>>) -> Vec<f64> {
    groups.into_iter().flatten().flat_map(|z| [z.re, z.im]).collect()
}

fn periodic_factor(free: &[Complex]) -> Result<BlaschkeProduct> {
    let mut zeros = vec![ZERO];
    zeros.extend_from_slice(free);
    BlaschkeProduct::boundary_rooted(zeros)
}

fn balanced_factor(zero_sum: Vec<Complex>) -> Result<BlaschkeProduct> {
    Ok(critically_centered_from_zero_sum(&BlaschkeProduct::boundary_rooted(zero_sum)?)?.0)
}

pub fn sample(s: &MappingSchema, params: &[f64]) -> Result<ModelMap> {
    let groups = split(s, params)?;
    let factors = groups
        .into_iter()
        .enumerate()
        .map(|(v, free)| {
            if s.is_periodic(v) {
                periodic_factor(&free)
            } else {
                let mut zeros = free.clone();
                zeros.push(-free.iter().sum::<Complex>());
                balanced_factor(zeros)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ModelMap::new(s.clone(), factors)
}

/// The zero-sum tuple of a non-periodic factor, in the factor's zero order.
fn zero_sum_tuple(f: &BlaschkeProduct) -> Result<Vec<Complex>> {
    Ok(zero_sum_from_critically_centered(f)?.0.zeros().to_vec())
}

/// Zeros of a periodic factor other than (one copy of) the one at 0.
fn free_zeros(f: &BlaschkeProduct) -> Vec<Complex> {
    let mut zeros = f.zeros().to_vec();
    let (i, _) = zeros.iter().enumerate().min_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).expect("degree ≥ 1");
    zeros.remove(i);
    zeros
}

pub fn parameters_of(m: &ModelMap) -> Result<Vec<f64>> {
    let s = m.schema();
    let groups = (0..s.len())
        .map(|v| {
            let f = m.factor(v);
            if s.is_periodic(v) {
                Ok(free_zeros(f))
            } else {
                let mut t = zero_sum_tuple(f)?;
                t.truncate(s.weight(v) as usize);
                Ok(t)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(flatten(groups))
}

pub fn sample_symmetric(s: &MappingSchema, params: &[f64]) -> Result<ModelMap> {
    let groups = split(s, params)?;
    let factors = groups
        .into_iter()
        .enumerate()
        .map(|(v, coeffs)| {
            if s.is_periodic(v) {
                periodic_factor(&from_monic(&coeffs)?)
            } else {
                let mut full = vec![ZERO];
                full.extend(coeffs);
                balanced_factor(from_monic(&full)?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ModelMap::new(s.clone(), factors)
}

pub fn symmetric_parameters_of(m: &ModelMap) -> Result<Vec<f64>> {
    let s = m.schema();
    let groups = (0..s.len())
        .map(|v| {
            let f = m.factor(v);
            if s.is_periodic(v) {
                to_monic(&free_zeros(f))
            } else {
                Ok(to_monic(&zero_sum_tuple(f)?)?[1..].to_vec())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(flatten(groups))
}

/// A parameter vector whose free zeros are uniform in the sampling disks.
pub fn random_parameters<R: Rng + ?Sized>(s: &MappingSchema, rng: &mut R) -> Vec<f64> {
    let groups = (0..s.len())
        .map(|v| {
            let w = s.weight(v) as usize;
            let radius = if s.is_periodic(v) { SAMPLE_RADIUS } else { SAMPLE_RADIUS / w as f64 };
            (0..w).map(|_| disk_point(rng, radius)).collect()
        })
        .collect();
    flatten(groups)
}

pub fn random_member<R: Rng + ?Sized>(s: &MappingSchema, rng: &mut R) -> Result<ModelMap> {
    sample(s, &random_parameters(s, rng))
}
