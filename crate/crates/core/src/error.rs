use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not on the unit sphere (norm {0})")]
    NotOnSphere(f64),

    #[error("field mismatch: space is {space}, scalars are {scalars}")]
    FieldMismatch {
        space: &'static str,
        scalars: &'static str,
    },

    #[error("generator {0} is singular")]
    SingularGenerator(usize),

    #[error("group closure exceeds {0} elements")]
    ClosureTooLarge(usize),

    #[error("group size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("quadrature with {nodes} nodes is not exact for maximal frequency {k_max} (need at least {needed})")]
    QuadratureTooCoarse {
        nodes: usize,
        k_max: u64,
        needed: usize,
    },

    #[error("pair {index} in W is not on the unit spheres: {reason}")]
    InvalidPair { index: usize, reason: String },

    #[error("degenerate subspace: {0}")]
    DegenerateSubspace(String),

    #[error("operator is not a projection onto the subspace (defect {0:e})")]
    NotAProjection(f64),

    #[error("hypotheses fail: {0}")]
    HypothesisFailure(String),

    #[error("operator does not commute with the group (defect {0:e})")]
    CommutationViolated(f64),

    #[error("sequence does not converge to the limit (tail defect {0:e})")]
    NonConvergent(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("measure evaluation failed: {0}")]
    Callback(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
