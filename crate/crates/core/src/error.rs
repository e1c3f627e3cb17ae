use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("fusion associativity violated at (a, b, c, d) = ({0}, {1}, {2}, {3})")]
    Associativity(String, String, String, String),
    #[error("unit or duality axiom violated: {0}")]
    UnitDual(String),
    #[error("{equation} residual {residual:.3e} exceeds tolerance {tol:.1e} (worst instance {instance})")]
    Residual { equation: String, residual: f64, tol: f64, instance: String },
    #[error("singular {kind}-block at {at}")]
    Singular { kind: &'static str, at: String },
    #[error("object mismatch: {0}")]
    Mismatch(String),
    #[error("braiding data (R-symbols) absent")]
    NoBraiding,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("zero-dimensional space {0}")]
    ZeroSpace(String),
    #[error("{0} is not self-dual")]
    NotSelfDual(String),
    #[error("idempotent normalization failed: residual {0:.3e}")]
    Normalization(f64),
    #[error("box size {requested} exceeds n_max {n_max}")]
    NMaxExceeded { requested: usize, n_max: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
