//! Complex order parameter of a configuration.
//!
//! `r e^{iψ} = (1/N) Σ_j e^{iθ_j}`. The magnitude r measures clustering:
//! r → 1 as the bugs coalesce, while a cycling system keeps r constant and
//! advances ψ linearly at ±1 per unit time. Bugs merged into a cluster
//! contribute one term per member, so a cluster of k bugs weighs k times a
//! singleton.

use serde::{Deserialize, Serialize};

use crate::dynamics::BugConfiguration;
use crate::scalar::{wrap_angle, Real};

/// Below this magnitude the mean phase ψ is numerically meaningless and is
/// reported as undefined.
pub const PSI_UNDEFINED_BELOW_R: f64 = 1e-12;

/// One order-parameter measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterSample<T> {
    /// Simulation time of the measurement.
    pub t: T,
    /// Magnitude of the complex mean, in `[0, 1]` up to rounding.
    pub r: T,
    /// Phase of the complex mean in `[0, 2π)`; `None` when `r` is too small
    /// for the phase to mean anything.
    pub psi: Option<T>,
}

/// Magnitude and phase of the complex mean of all bug positions.
///
/// The phase is `None` when `r < 1e-12`.
pub fn order_parameter<T: Real>(config: &BugConfiguration<T>) -> (T, Option<T>) {
    let mut sum_cos = T::zero();
    let mut sum_sin = T::zero();
    for a in config.angles() {
        sum_cos += a.radians().cos();
        sum_sin += a.radians().sin();
    }
    let n = T::from_usize(config.n_bugs()).expect("bug count");
    let re = sum_cos / n;
    let im = sum_sin / n;
    let r = re.hypot(im);
    let psi = if r < T::lit(PSI_UNDEFINED_BELOW_R) {
        None
    } else {
        Some(wrap_angle(im.atan2(re)))
    };
    (r, psi)
}

/// Measures the order parameter at a given time stamp.
pub fn sample_at<T: Real>(t: T, config: &BugConfiguration<T>) -> OrderParameterSample<T> {
    let (r, psi) = order_parameter(config);
    OrderParameterSample { t, r, psi }
}

/// Order parameter along a sampled trajectory.
pub fn track<T: Real>(trajectory: &[(T, BugConfiguration<T>)]) -> Vec<OrderParameterSample<T>> {
    trajectory.iter().map(|(t, c)| sample_at(*t, c)).collect()
}

/// Lifts wrapped phases out of `[0, 2π)` into a continuous sequence by
/// adding the multiple of 2π that keeps each consecutive jump within ±π.
/// Used to read a linear drift off a wrapped ψ series.
pub fn unwrap_angles<T: Real>(wrapped: &[T]) -> Vec<T> {
    let tau = T::TAU();
    let pi = T::PI();
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = T::zero();
    for (i, &w) in wrapped.iter().enumerate() {
        if i > 0 {
            let jump = w - wrapped[i - 1];
            if jump > pi {
                offset -= tau;
            } else if jump < -pi {
                offset += tau;
            }
        }
        out.push(w + offset);
    }
    out
}
