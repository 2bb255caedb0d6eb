//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by construction, validation, and analysis routines.
///
/// Numeric payloads are stored as `f64` regardless of the scalar the caller
/// works in; they are diagnostic only.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a pursuit needs at least two bugs, got {n}")]
    TooFewBugs { n: usize },

    #[error("angle at index {index} is not finite")]
    NonFiniteAngle { index: usize },

    #[error("time step {dt} is not in (0, π/N) for N = {n} bugs (limit {limit})")]
    InvalidTimeStep { dt: f64, n: usize, limit: f64 },

    #[error("coincidence tolerance {tol} must satisfy 0 <= tol < dt = {dt}")]
    InvalidTolerance { tol: f64, dt: f64 },

    #[error("t_max {t_max} must be finite and non-negative")]
    InvalidTimeHorizon { t_max: f64 },

    #[error("check_every must be at least 1")]
    InvalidCheckInterval,

    #[error("winding number needs pairwise-distinct adjacent bugs; bugs {index} and {next} coincide")]
    CoincidentAdjacentBugs { index: usize, next: usize },

    #[error("no closed-form cycle probability for n = {n}; only n = 2, 3, 4 are known")]
    NoClosedFormProbability { n: usize },

    #[error("perturbation half-width alpha = {alpha} must lie in (0, π]")]
    AlphaOutOfRange { alpha: f64 },

    #[error("four-bug classifier rejects boundary input ({theta2}, {theta3}, {theta4}): within {tol} of a region edge or degeneracy")]
    DegenerateFourBugInput {
        theta2: f64,
        theta3: f64,
        theta4: f64,
        tol: f64,
    },

    #[error("power-law fit needs at least 3 usable rows (positive, reliable estimates); got {usable}")]
    TooFewFitPoints { usable: usize },

    #[error("trial count must be at least 1")]
    NoTrials,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
