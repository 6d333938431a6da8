//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The EIT response denominator came too close to zero.
    #[error("response singular at delta = {delta:.6e} rad/s: |Gamma| = {gamma_abs:.3e} < {threshold:.3e}")]
    GammaSingular {
        delta: f64,
        gamma_abs: f64,
        threshold: f64,
    },

    #[error(
        "linear system is singular or ill-conditioned (condition estimate {cond_estimate:.3e})"
    )]
    IllConditioned { cond_estimate: f64 },

    /// M = 2r irreps sit between the remote and nearby zones and are not treated.
    #[error("boundary zone M = 2r is unsupported (M = {m}, r = {r})")]
    BoundaryZone { m: u64, r: f64 },

    #[error("sector M = {m}, r = {r} violates the validity bound M + 1 < |k1/k2| = {bound:.4}")]
    InvalidSector { m: u64, r: f64, bound: f64 },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("degenerate dressing: Omega_R = 0 (delta = 0 and k_eff = 0)")]
    DegenerateDressing,

    #[error("initial-state truncation lost {lost:.3e} of probability mass (limit {limit:.1e})")]
    Truncation { lost: f64, limit: f64 },

    #[error("state has excited atomic components; closed forms require unexcited atoms")]
    UnsupportedState,

    #[error("missing per-sector data for M = {0:?}")]
    MissingSectors(Vec<u64>),
}

pub type Result<T> = std::result::Result<T, Error>;
