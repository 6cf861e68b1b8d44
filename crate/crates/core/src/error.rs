use thiserror::Error;

/// Errors raised by the geometry, valuation and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("region is unbounded along a recession direction")]
    UnboundedRegion,
    #[error("region is empty")]
    EmptyRegion,
    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("vector is not in the Reeb cone: {0}")]
    NotInReebCone(String),
    #[error("cone is not Q-Gorenstein: {0}")]
    NotQGorenstein(String),
    #[error("invalid Fano index r = {r} for n = {n}")]
    InvalidIndex { r: String, n: usize },
    #[error("cone angle out of range: r * l_{index}(p*) = {value} > 1")]
    AngleOutOfRange { index: usize, value: String },
    #[error("closed-form volume {closed} disagrees with lattice-count estimate {oracle}")]
    OracleDisagreement { closed: f64, oracle: f64 },
    #[error("enumeration budget exceeded ({0} points)")]
    BudgetExceeded(u64),
    #[error("objective is not finite at the requested point")]
    NonFiniteObjective,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("averaged trace is not an integer at degree {0}")]
    NonIntegerDimension(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("integral diverges: {0}")]
    IntegralDivergence(String),
    #[error("lower bound violated: {lhs} < {rhs}")]
    BoundViolated { lhs: f64, rhs: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnboundedRegion => "UnboundedRegion",
            Error::EmptyRegion => "EmptyRegion",
            Error::DegeneratePolytope => "DegeneratePolytope",
            Error::NotFullDimensional => "NotFullDimensional",
            Error::NotInReebCone(_) => "NotInReebCone",
            Error::NotQGorenstein(_) => "NotQGorenstein",
            Error::InvalidIndex { .. } => "InvalidIndex",
            Error::AngleOutOfRange { .. } => "AngleOutOfRange",
            Error::OracleDisagreement { .. } => "OracleDisagreement",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NonFiniteObjective => "NonFiniteObjective",
            Error::DomainError(_) => "DomainError",
            Error::NonIntegerDimension(_) => "NonIntegerDimension",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::IntegralDivergence(_) => "IntegralDivergence",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::InvalidModel(_) => "InvalidModel",
            Error::UnsupportedProfile(_) => "UnsupportedProfile",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
