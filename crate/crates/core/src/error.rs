use thiserror::Error;

/// Errors raised by the verification kernel and the checkers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument `{0}` must be positive")]
    NonPositive(&'static str),
    #[error("negative input to square root")]
    NegativeSqrt,
    #[error("modulus {modulus} must exceed {bound}")]
    ModulusTooSmall { modulus: u64, bound: u64 },
    #[error("gcd({a}, {b}) = {gcd} is not 1")]
    NotCoprime { a: u64, b: u64, gcd: u64 },
    #[error("unsupported exponent {0}")]
    UnsupportedExponent(u32),
    #[error("intervals do not overlap as required: {0}")]
    NotOverlapping(String),
    #[error("intervals are not disjoint and ordered: {0}")]
    NotDisjoint(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no sign change of the eta quadratic on [{lo}, {hi}] for a={a}, r={r}")]
    NoSignChange {
        a: u64,
        r: u64,
        lo: String,
        hi: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
