//! Cyclic pursuit of N bugs on the unit circle.
//!
//! Bug j chases bug j+1 (cyclically) at unit angular speed along the shorter
//! arc. This crate provides the event-aware forward Euler integrator for that
//! system, certificates that classify a run as coalescing, cycling, or a
//! stationary antipodal grouping, closed-form probabilities and phase-region
//! classifiers for small N, seeded Monte Carlo estimators, and the complex
//! order parameter used to visualize convergence.
//!
//! The numerics are generic over the scalar type through [`Real`]; the
//! `*64` aliases below pin the common `f64` instantiations.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod monte_carlo;
pub mod order_param;
pub mod scalar;
pub mod steady_state;

pub use dynamics::{
    direction, gap_rate_law, Angle, BugConfiguration, ClusterRun, Direction, SimParams,
    DEFAULT_COINCIDENCE_TOL,
};
pub use error::{Error, Result};
pub use scalar::{wrap_angle, Real};
pub use steady_state::{Outcome, TrialResult};

/// `f64` bug configuration.
pub type BugConfiguration64 = BugConfiguration<f64>;
/// `f32` bug configuration.
pub type BugConfiguration32 = BugConfiguration<f32>;
/// `f64` integration parameters.
pub type SimParams64 = SimParams<f64>;
/// `f32` integration parameters.
pub type SimParams32 = SimParams<f32>;
/// `f64` classification result.
pub type TrialResult64 = TrialResult<f64>;
/// `f64` order parameter sample.
pub type OrderParameterSample64 = order_param::OrderParameterSample<f64>;
/// `f64` Monte Carlo estimate.
pub type ProbabilityEstimate64 = monte_carlo::ProbabilityEstimate<f64>;
