use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("matrix is not Hessenberg: entry (3,1) = {0}")]
    NotHessenberg(String),
    #[error("degenerate Hessenberg type {0}: a21 and a32 must be nonzero")]
    DegenerateType(String),
    #[error("type {0} admits no unimodular completion")]
    NoUnimodularCompletion(String),
    #[error("completion vector {v} does not give determinant 1 for type {ty}")]
    InvalidCompletion { ty: String, v: String },
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("characteristic polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("operation requires a nonreal-spectrum matrix, got {0}")]
    SpectrumMismatch(String),
    #[error("candidate region needs {cells} lattice cells, budget is {budget}")]
    RegionTooLarge { cells: f64, budget: f64 },
    #[error("no sign makes the parabola approximation residual quadratic")]
    NoFactorization,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line surface: 3 for budget
    /// exhaustion, 2 for everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) | Error::RegionTooLarge { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
