use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The two series differ in length.
    LengthMismatch { x: usize, y: usize },
    /// Fewer observations than the operation needs.
    TooFewObservations { n: usize, min: usize },
    /// A NaN or infinite value at the given position.
    NonFinite { index: usize },
    /// Two equal values in a series that must be tie-free.
    TiesPresent,
    /// `k` outside the admissible range `[min, max]`.
    KOutOfRange { k: usize, min: usize, max: usize },
    /// A k-grid that is empty or not strictly increasing.
    InvalidKGrid,
    /// Argument outside the mathematical domain of the function.
    Domain(&'static str),
    /// Adaptive quadrature exhausted its budget before reaching tolerance.
    QuadratureFailure { estimate: f64, error: f64 },
    /// Requested sample size is unusable.
    InvalidN(usize),
    /// Number of bootstrap replicates must be at least one.
    InvalidB,
    /// Invalid model or scheme parameters.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { x, y } => {
                write!(f, "series lengths differ: x has {x}, y has {y}")
            }
            Error::TooFewObservations { n, min } => {
                write!(f, "need at least {min} observations, got {n}")
            }
            Error::NonFinite { index } => write!(f, "non-finite value at index {index}"),
            Error::TiesPresent => f.write_str("tied values present"),
            Error::KOutOfRange { k, min, max } => {
                write!(f, "k = {k} outside admissible range [{min}, {max}]")
            }
            Error::InvalidKGrid => f.write_str("k-grid must be non-empty and strictly increasing"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::QuadratureFailure { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate}, error bound {error})"
            ),
            Error::InvalidN(n) => write!(f, "invalid sample size {n}"),
            Error::InvalidB => f.write_str("number of bootstrap replicates must be >= 1"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl Error {
    /// Failures caused by numerics rather than by the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureFailure { .. })
    }
}

impl core::error::Error for Error {}
