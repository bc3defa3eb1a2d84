use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("declared degree {degree} has a zero leading coefficient")]
    LeadingZero { degree: usize },

    #[error("taylor coefficients overflow at order {order}")]
    SeriesOverflow { order: usize },

    #[error("value leaves the representable range (log2 |z| ~ {log2_magnitude})")]
    Overflow { log2_magnitude: f64 },

    #[error(
        "quadrature did not converge within {panels} panels (estimate {estimate_re}{estimate_im:+}i, error {error:e})"
    )]
    Quadrature { panels: usize, estimate_re: f64, estimate_im: f64, error: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    RootFinder { iterations: usize },

    #[error("point is not a fixed point (residual {residual:e})")]
    FixedPointResidual { residual: f64 },

    #[error("exact resonance: lambda^{} = 1 at coefficient {n}", n - 1)]
    Resonance { n: usize },

    #[error("series diverges at radius {radius}; use a smaller fraction")]
    SeriesDivergent { radius: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
