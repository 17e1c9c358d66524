use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 65536)")]
    InvalidPrime(u64),

    #[error("operands disagree: {0}")]
    Mismatch(String),

    #[error("insufficient precision: need {needed} p-adic digits, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },

    #[error("not a unit of the Laurent polynomial ring: {0}")]
    NotAUnit(String),

    #[error("exponent matrix is not in GL_n(Z) (determinant {0})")]
    NotGL(i128),

    #[error("probe x^{exponent:?} contradicts the recovered normal form")]
    InconsistentAction { exponent: Vec<i64> },

    #[error("automorphism does not fix x_{0}")]
    NotInStabilizer(usize),

    #[error("level {level} image of d{variable} is not of the form d[p^k] + c*x^-p^k")]
    NotSigmaForm { variable: usize, level: usize },

    #[error("window spans {size} monomials, limit is {limit}")]
    WindowTooLarge { size: usize, limit: usize },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn mismatch(what: impl Into<String>) -> Self {
        Error::Mismatch(what.into())
    }
}
