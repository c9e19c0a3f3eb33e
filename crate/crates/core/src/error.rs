use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-square matrix: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("singular matrix in linear solve")]
    SingularMatrix,

    #[error("derivative underflow at iteration {iterations} (|f| = {residual})")]
    DerivativeUnderflow { iterations: usize, residual: String },

    #[error("Newton iteration did not converge within {max_iter} steps (best |f| = {residual})")]
    MaxIterations { max_iter: usize, residual: String },

    #[error("root wandered out of the search region (|E| = {magnitude}, limit {limit})")]
    RootDiverged { magnitude: String, limit: String },

    #[error("series too short: need {needed} coefficients beyond f_0, have {have}")]
    InsufficientCoefficients { needed: usize, have: usize },

    #[error("series does not carry energy derivatives")]
    MissingDerivatives,

    #[error("Gaussian matrix elements diverge: Re(alpha/omega) = {re_alpha:e} <= -1")]
    GaussianDivergent { re_alpha: f64 },

    #[error("quadrature self-check failed: relative deviation {deviation:e} between orders {q} and {q_ref}")]
    QuadratureSelfCheck { deviation: f64, q: usize, q_ref: usize },

    #[error("eigensolver failed to converge within {max_iter} QR iterations")]
    EigenNonConvergence { max_iter: usize },

    #[error("trajectory matching failed at theta = {theta}: {unmatched} of {total} eigenvalues unmatched; reduce the step")]
    MatchingFailure {
        theta: f64,
        unmatched: usize,
        total: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
