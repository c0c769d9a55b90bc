use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands have incompatible dimensions.
    DimensionMismatch { expected: usize, found: usize },
    /// Dimension or qubit count must be at least one.
    EmptyDimension,
    /// A matrix expected to be Hermitian deviates beyond tolerance.
    NotHermitian { max_asymmetry: f64 },
    /// A density-matrix trace deviates from one beyond tolerance.
    TraceNotOne { trace: f64 },
    /// Smallest eigenvalue is below the PSD tolerance.
    NotPositiveSemidefinite { min_eig: f64 },
    /// Observable operator norm exceeds one beyond tolerance.
    OperatorNormExceeded { norm: f64 },
    /// State vector norm too far from one.
    NotNormalized { norm: f64 },
    /// Depolarizing strength outside [0, 1).
    InvalidNoise { p: f64 },
    /// SWAP-test overlap outside [0, 1].
    InvalidOverlap { t: f64 },
    /// Shot count must be at least one.
    ZeroShots,
    /// Regularization parameter rejected.
    InvalidRegularization { lambda: f64 },
    /// Confidence parameter outside (0, 1).
    InvalidConfidence { delta: f64 },
    /// Cholesky factorization failed: the matrix is not positive definite.
    NotPositiveDefinite,
    /// Matrix entries must be finite.
    NonFiniteEntries,
    /// Matrix storage is not exactly symmetric at the given position.
    NotSymmetric { row: usize, col: usize },
    /// Training label magnitude above one.
    LabelOutOfRange { value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyDimension => write!(f, "dimension must be at least one"),
            Error::NotHermitian { max_asymmetry } => {
                write!(f, "matrix is not Hermitian (max |A - A\u{2020}| = {max_asymmetry:e})")
            }
            Error::TraceNotOne { trace } => {
                write!(f, "density matrix trace {trace} is not one")
            }
            Error::NotPositiveSemidefinite { min_eig } => {
                write!(f, "matrix is not PSD (min eigenvalue {min_eig:e})")
            }
            Error::OperatorNormExceeded { norm } => {
                write!(f, "observable operator norm {norm} exceeds one")
            }
            Error::NotNormalized { norm } => {
                write!(f, "state vector norm {norm} is not one")
            }
            Error::InvalidNoise { p } => {
                write!(f, "depolarizing strength {p} outside [0, 1)")
            }
            Error::InvalidOverlap { t } => {
                write!(f, "overlap {t} outside [0, 1]")
            }
            Error::ZeroShots => write!(f, "shot count must be at least one"),
            Error::InvalidRegularization { lambda } => {
                write!(f, "invalid regularization parameter {lambda}")
            }
            Error::InvalidConfidence { delta } => {
                write!(f, "confidence parameter {delta} outside (0, 1)")
            }
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::NonFiniteEntries => write!(f, "matrix entries must be finite"),
            Error::NotSymmetric { row, col } => {
                write!(f, "matrix storage is not symmetric at ({row}, {col})")
            }
            Error::LabelOutOfRange { value } => {
                write!(f, "label magnitude |{value}| exceeds one")
            }
        }
    }
}

impl core::error::Error for Error {}
