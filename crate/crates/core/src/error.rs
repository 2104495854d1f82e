use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} qubits, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("malformed Pauli string {0:?} (expected letters I, X, Y, Z)")]
    MalformedPauli(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("unknown code {0:?}; run `codes list` for the registry")]
    UnknownCode(String),

    #[error("code file line {line}: {msg}")]
    CodeParse { line: usize, msg: String },

    #[error("code {code} fails validation: {msg}")]
    CodeValidation { code: String, msg: String },

    #[error("{what} needs {needed} evaluations, over the budget of {budget}")]
    BudgetExceeded {
        what: String,
        needed: f64,
        budget: f64,
    },

    #[error("numerically unstable: {0}")]
    Unstable(String),

    #[error("malformed specifier {0:?}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoSignChange { .. } | Error::BudgetExceeded { .. } | Error::Unstable(_))
    }
}
