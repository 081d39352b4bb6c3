//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// a_pp / phi0_grad requested at p = 0 where the metric is singular.
    #[error("singular direction: {0} undefined at p = 0")]
    SingularDirection(&'static str),

    /// Sampled anisotropy is not strictly convex (e.g. fourfold delta >= 1/15).
    #[error("convexity violation: {0}")]
    ConvexityViolation(String),

    #[error("balance violation: integral of f over [0,1] is {0:.3e}, expected 0")]
    BalanceViolation(f64),

    #[error("bistability violation: {0}")]
    Bistability(String),

    #[error("stability guard violated: dt = {dt:.3e} exceeds allowed {limit:.3e}")]
    Stability { dt: f64, limit: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("invalid front: {0}")]
    InvalidFront(String),

    /// Level set split or vanished; the smooth-solution regime ends here.
    #[error("topology change: {0}")]
    TopologyChange(String),

    #[error("degenerate normal: |grad psi| = {0:.3e} below floor 0.1")]
    DegenerateNormal(f64),

    #[error("ledger infeasible at eps = {eps}: {constraint}")]
    LedgerInfeasible { eps: f64, constraint: String },

    #[error("measurement failure: {0}")]
    MeasurementFailure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("expression error: {0}")]
    Expr(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
