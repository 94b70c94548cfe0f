use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// DIII with n = 1 has no nonzero entries at all.
    #[error("degenerate space: class DIII with n = {n} has only zero entries")]
    DegenerateSpace { n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index pair ({p}, {q}) outside [1, {dim}]^2")]
    OutOfRange { p: usize, q: usize, dim: usize },

    #[error("index pair ({p}, {q}) lies on the diagonal of a skew-symmetric block")]
    MeetsZeroEntry { p: usize, q: usize },

    #[error("trace of degree {degree} has imaginary part {value:e} above tolerance {tolerance:e}")]
    ImaginaryTrace {
        degree: usize,
        value: f64,
        tolerance: f64,
    },

    #[error("matrix {0} is not in the delta alphabet")]
    NotInAlphabet(String),

    #[error("lemma inapplicable: delta sequence satisfies neither domino condition")]
    LemmaInapplicable,

    #[error("enumeration budget exceeded for {what}: needs {required}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            _ => 1,
        }
    }
}
