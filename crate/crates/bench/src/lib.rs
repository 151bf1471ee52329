//! Fixtures shared by the criterion benchmarks.

use blaschke_core::basin::BasinSystem;
use blaschke_core::model::random_member;
use blaschke_core::random::{automorphism, configuration, fixed_point_centered, seeded};
use blaschke_core::{BlaschkeProduct, Complex, MappingSchema, ModelMap};

pub const SEED: u64 = 11;

pub fn fixed_point_centered_map(degree: usize) -> BlaschkeProduct {
    fixed_point_centered(&mut seeded(SEED), degree, 0.9)
}

pub fn points(n: usize) -> Vec<Complex> {
    configuration(&mut seeded(SEED), n, 0.9)
}

/// Fixed vertex of weight 1 receiving two tails of weight 1: `|G(S)| = 8`.
pub fn forked_schema() -> MappingSchema {
    MappingSchema::from_images(vec![1, 1, 1], vec![0, 0, 0]).expect("valid schema")
}

pub fn member(s: &MappingSchema) -> ModelMap {
    random_member(s, &mut seeded(SEED)).expect("sampling succeeds")
}

/// `member(s)` seen through random coordinates on every component.
pub fn scrambled(s: &MappingSchema) -> BasinSystem {
    let mut rng = seeded(SEED + 1);
    let coords: Vec<_> = (0..s.len()).map(|_| automorphism(&mut rng, 0.7)).collect();
    BasinSystem::from_model(&member(s), &coords).expect("scrambling succeeds")
}
