//! Blaschke-product model spaces for hyperbolic dynamics: normal forms of
//! proper self-maps of the disk, boundary dynamics on the circle, symmetry
//! groups of mapping schemata, boundary markings and straightening.

pub mod basin;
pub mod blaschke;
pub mod circle;
pub mod disk;
pub mod error;
pub mod model;
pub mod poly;
pub mod random;
pub mod schema;
pub mod symmetric;
pub mod tol;
pub mod verify;

pub use basin::{BasinSystem, Straightening};
pub use blaschke::BlaschkeProduct;
pub use circle::{ArcInterval, CircleCoordinateTable};
pub use disk::{Complex, MobiusAutomorphism};
pub use error::{Error, MembershipClause, Result};
pub use model::{BoundaryMarking, ModelMap};
pub use schema::{MappingSchema, SymmetryElement};
pub use tol::Tolerances;
pub use verify::{Report, Suite, SuiteOptions};
