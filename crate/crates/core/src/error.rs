use thiserror::Error;

/// Errors raised by the analysis engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by small modulus {modulus:.3e} at angle {angle:.6}")]
    DivisionBySmallModulus { angle: f64, modulus: f64 },

    #[error("quadrature for Fourier coefficient {index} did not converge (estimate {estimate:.3e})")]
    QuadratureNotConverged { index: i64, estimate: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("symbol is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid Hardy exponent {0}: must lie in (1, inf)")]
    InvalidExponent(f64),

    #[error("weight function pole hit at y = {0}")]
    PoleHit(f64),

    #[error("degenerate arc: endpoints coincide")]
    DegenerateArc,

    #[error("symbol curve passes through the origin (min modulus {min_modulus:.3e})")]
    CurveThroughOrigin { min_modulus: f64 },

    #[error("winding number {value:.6} is not close to an integer")]
    NonIntegerWinding { value: f64 },

    #[error("operator is not Fredholm: {0}")]
    NotFredholm(String),

    #[error("index splitting failed: {0}")]
    SplitFailure(String),

    #[error("series diverges for beta = {0}")]
    SeriesDiverges(f64),

    #[error("symbol is not a Laurent polynomial")]
    NotPolynomial,

    #[error("no spectral gap between kept {kept:.3e} and dropped {dropped:.3e} singular values")]
    NoSpectralGap { kept: f64, dropped: f64 },

    #[error("no Fredholm neighbourhood to the right of p = {0}")]
    NoFredholmNeighborhood(f64),

    #[error("point at angle {0:.6} lies outside the closed upper half-circle")]
    OutOfDomain(f64),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
