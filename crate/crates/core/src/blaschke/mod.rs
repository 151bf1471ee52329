//! Blaschke products as proper self-maps of the unit disk.

mod barycenter;
mod composite;
mod normal;
mod product;

pub use barycenter::{barycenter_sum, conformal_barycenter, Barycenter};
pub use composite::{Composite, MAX_SYMBOLIC_DEGREE};
pub use normal::{
    critical_sum, critically_centered_from_zero_sum, normalize_critically_centered, normalize_fixed_point_centered,
    zero_sum_from_critically_centered,
};
pub use product::{multiset_distance, BlaschkeProduct, FixedPointReport, TangencyWarning, CLUSTER_RADIUS};
