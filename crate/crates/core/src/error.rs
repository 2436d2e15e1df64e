use thiserror::Error;

/// Errors raised by the laboratory. Failed verifications are reported through
/// the various `*Report` types; these variants are reserved for inputs that
/// cannot be processed at all.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed group table: {0}")]
    Structural(String),

    #[error("group functions live on different groups")]
    GroupMismatch,

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid unitary representation: {0}")]
    InvalidRepresentation(String),

    #[error("window vector has zero norm")]
    ZeroWindow,

    #[error("window is not admissible (max residual {residual:.3e})")]
    NotAdmissible { residual: f64 },

    #[error("symbol is identically zero")]
    ZeroSymbol,

    #[error("spectral window [{lo}, {hi}] does not meet the nonzero spectrum")]
    EmptySpectralWindow { lo: f64, hi: f64 },

    #[error("spectral window [{lo}, {hi}] is not a closed interval bounded away from 0")]
    WindowTouchesZero { lo: f64, hi: f64 },

    #[error(
        "0 is not an isolated point of the spectrum: eigenvalue {eigenvalue:.3e} lies below the gap threshold {threshold:.3e}"
    )]
    ZeroNotIsolated { eigenvalue: f64, threshold: f64 },

    #[error("projection is not invariant under left translations (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("matrix is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("restricted representation is reducible: commutant has dimension {commutant_dim}")]
    Reducible { commutant_dim: usize },

    #[error("incompatible signal grids: {0}")]
    IncompatibleGrid(String),

    #[error("affine grid is empty")]
    EmptyGrid,

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("window does not have zero mean (relative mean {relative_mean:.3e})")]
    NonZeroMean { relative_mean: f64 },

    #[error(
        "affine grid does not cover the signal: diagnostic {diagnostic:.3e} exceeds bound {bound:.3e}"
    )]
    CoverageInsufficient { diagnostic: f64, bound: f64 },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
