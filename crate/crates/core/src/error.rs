//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected at construction: bad norm/cone/weight/config parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// `∇H` and `D²H` are undefined at the origin.
    #[error("norm derivative requested at the origin")]
    GradientAtOrigin,

    /// `a(·)` is only C¹ away from 0 when p < 2; pointwise checks skip there.
    #[error("degenerate gradient |∇u| = {magnitude:.3e} below {floor:.3e} with p < 2")]
    DegenerateGradient { magnitude: f64, floor: f64 },

    /// Vertex or edge of a cone: no single outward normal.
    #[error("non-smooth boundary point")]
    NonSmoothBoundary,

    #[error("point is not on the cone boundary")]
    NotOnBoundary,

    #[error("dual-norm ascent did not converge: residual {residual:.3e} > tol {tol:.3e}")]
    DualNonConvergence { residual: f64, tol: f64 },

    #[error("Monte Carlo budget exhausted: achieved rel. std. error {achieved:.3e} > target {target:.3e}")]
    MonteCarloBudget { achieved: f64, target: f64 },

    /// Tail decay too weak against the radial weight `r^exponent`.
    #[error("non-integrable tail: decay exponent {decay} vs radial weight exponent {weight}")]
    NonIntegrable { decay: f64, weight: f64 },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("optimizer did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("mass mismatch between densities: |ΔM| = {0:.3e}")]
    MassMismatch(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
