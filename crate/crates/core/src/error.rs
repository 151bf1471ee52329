use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the region where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver did not meet its convergence test.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A requested computation exceeds the configured size limits.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A mapping schema (or a basin system) is malformed.
    #[error("invalid schema: {0}")]
    Validation(String),

    /// A map fails one of the model-space membership clauses.
    #[error("not a member of B(S): vertex `{vertex}` violates {clause}")]
    Membership { vertex: String, clause: MembershipClause },

    /// A normalization or straightening needs an interior fixed point that does not exist.
    #[error("no interior fixed point")]
    NoInteriorFixedPoint,
}

/// The clause of the model-space definition that a factor violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipClause {
    Degree,
    BoundaryRooted,
    FixesCenter,
    CriticallyCentered,
    Schema,
}

impl std::fmt::Display for MembershipClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MembershipClause::Degree => "degree d(v) = w(v) + 1",
            MembershipClause::BoundaryRooted => "boundary-rooted (factor(1) = 1)",
            MembershipClause::FixesCenter => "periodic factor fixes 0",
            MembershipClause::CriticallyCentered => "non-periodic factor critically centered",
            MembershipClause::Schema => "factor/schema shape",
        };
        f.write_str(s)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
