use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. The CLI maps each variant onto an exit code
/// (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point index {index} (space has {len} points)")]
    InvalidPoint { index: usize, len: usize },

    #[error("invalid space document: {0}")]
    InvalidDocument(String),

    #[error("metric check failed: {0}")]
    MetricViolation(String),

    #[error("operation requires a nonempty subset")]
    EmptySubset,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: budget of {limit} exceeded; use the greedy estimator instead")]
    BudgetExceeded { what: String, limit: usize },

    #[error("radius cap {cap} is below the radius floor {floor}")]
    InvalidCap { cap: f64, floor: f64 },

    #[error("greedy covering gap {gap} exceeds tolerance {delta} (upper {upper}, lower {lower})")]
    GapNotCertified {
        upper: f64,
        lower: f64,
        gap: f64,
        delta: f64,
    },

    #[error("annulus ({r1}, {r2}] is too narrow for shells of width {h}")]
    IntervalTooNarrow { r1: f64, r2: f64, h: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error(
        "hypothesis violated at level {level}: ball(center {center}, radius {radius}) has content {measured} >= {threshold}"
    )]
    HypothesisViolation {
        level: usize,
        center: usize,
        radius: f64,
        measured: f64,
        threshold: f64,
    },

    #[error("no separating empty shell around point {center} below radius {radius}")]
    NoEmptyShell { center: usize, radius: f64 },

    #[error("descent did not terminate within {steps} steps")]
    StepBudgetExhausted { steps: usize },

    #[error("cover enlargement raised multiplicity above {limit} after {halvings} halvings")]
    MultiplicityOverflow { limit: usize, halvings: usize },

    #[error("space is not a closed surface: {0}")]
    NotClosedSurface(String),

    #[error("wrong space kind: expected {expected}")]
    WrongKind { expected: &'static str },

    #[error("graph contains a cycle")]
    HasCycle,

    #[error("instance is not essential (no nontrivial 1-cycle)")]
    NotEssential,

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// 1: hypothesis / inequality failure, 2: input or usage error,
    /// 3: internal budget exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolation { .. }
            | Error::NoEmptyShell { .. }
            | Error::GapNotCertified { .. }
            | Error::CertificateRejected(_)
            | Error::NotEssential => 1,
            Error::BudgetExceeded { .. }
            | Error::StepBudgetExhausted { .. }
            | Error::MultiplicityOverflow { .. }
            | Error::Internal(_) => 3,
            _ => 2,
        }
    }
}
