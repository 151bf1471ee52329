//! Seeded samplers for disk points, automorphisms and Blaschke products.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::blaschke::BlaschkeProduct;
use crate::disk::{on_circle, Complex, MobiusAutomorphism, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform (by area) in the disk of the given radius.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex {
    Complex::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * TAU)
}

pub fn circle_point<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    on_circle(rng.gen::<f64>() * TAU)
}

pub fn configuration<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex> {
    (0..n).map(|_| disk_point(rng, radius)).collect()
}

/// `p ↦ 0`, `b ↦ 1` for random `p` within `radius` and random `b`.
pub fn automorphism<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> MobiusAutomorphism {
    let p = disk_point(rng, radius);
    let b = circle_point(rng);
    MobiusAutomorphism::from_specs(p, b).expect("sampled parameters lie inside the disk")
}

/// Random constant and zeros.
pub fn blaschke<R: Rng + ?Sized>(rng: &mut R, degree: usize, radius: f64) -> BlaschkeProduct {
    let zeros = configuration(rng, degree, radius);
    BlaschkeProduct::new(circle_point(rng), zeros).expect("sampled zeros lie inside the disk")
}

/// Boundary-rooted with a zero at the origin: `z μ_{a₂} ⋯ μ_{a_d}`.
pub fn fixed_point_centered<R: Rng + ?Sized>(rng: &mut R, degree: usize, radius: f64) -> BlaschkeProduct {
    let mut zeros = vec![ZERO];
    zeros.extend(configuration(rng, degree - 1, radius));
    BlaschkeProduct::boundary_rooted(zeros).expect("sampled zeros lie inside the disk")
}
