//! Closed-form results for small bug counts.
//!
//! Two bugs always meet; three bugs cycle with probability 1/4; four bugs
//! cycle with probability 1/3. For three bugs the full phase plane in gap
//! coordinates (ω₁, ω₂) decomposes into two open cycle triangles, three
//! stationary grouping points, the unstable cycle segments joining them, and
//! a coalescing remainder. For four bugs the cycle set is the union of four
//! explicit boxes in (θ₂, θ₃, θ₄); integrating their indicator recovers the
//! 1/3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// A probability as an exact reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactProbability {
    pub numerator: u64,
    /// Always at least 1; `gcd(numerator, denominator) = 1`.
    pub denominator: u64,
}

impl ExactProbability {
    /// Builds the reduced form. `denominator` must be nonzero.
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator != 0, "probability denominator must be nonzero");
        let g = gcd(numerator, denominator);
        ExactProbability {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    /// The fraction as a float.
    pub fn value<T: Real>(self) -> T {
        T::from_u64(self.numerator).expect("small numerator")
            / T::from_u64(self.denominator).expect("small denominator")
    }
}

impl std::fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.numerator == 0 {
            write!(f, "0")
        } else if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exact probability that `n` uniformly placed bugs end up cycling.
///
/// Known for n = 2 (never), n = 3 (1/4), and n = 4 (1/3) only.
pub fn exact_cycle_probability(n: usize) -> Result<ExactProbability> {
    match n {
        2 => Ok(ExactProbability::new(0, 1)),
        3 => Ok(ExactProbability::new(1, 4)),
        4 => Ok(ExactProbability::new(1, 3)),
        _ => Err(Error::NoClosedFormProbability { n }),
    }
}

/// Probability that three bugs cycle when both gaps are drawn as
/// `π + U(-α, α)`, i.e. perturbed from the antipodal grouping.
///
/// Equals 1/2 for α ≤ π/2 and `(-(π/α)² + 4(π/α) - 2)/4` beyond, falling to
/// the unconditioned 1/4 at α = π. Rejects α outside `(0, π]`.
pub fn stability_probability_3<T: Real>(alpha: T) -> Result<T> {
    let pi = T::PI();
    if !alpha.is_finite() || alpha <= T::zero() || alpha > pi {
        return Err(Error::AlphaOutOfRange {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = T::lit(0.5);
    if alpha <= pi / T::lit(2.0) {
        return Ok(half);
    }
    let q = pi / alpha;
    Ok((-q * q + T::lit(4.0) * q - T::lit(2.0)) / T::lit(4.0))
}

/// Region of the three-bug gap plane (ω₁, ω₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseRegion {
    /// Open triangle ω₁, ω₂ ∈ (0, π), ω₁ + ω₂ > π: all three gaps strictly
    /// below π, counterclockwise cycle.
    CycleCcw,
    /// Open triangle ω₁, ω₂ ∈ (π, 2π), ω₁ + ω₂ < 3π: clockwise cycle.
    CycleCw,
    /// One of the stationary grouping points (0, π), (π, π), (π, 0).
    GroupsPoint,
    /// The ω₁ = π or ω₂ = π segments joining the grouping points.
    UnstableCycleLine,
    /// Everything else: the pursuit coalesces.
    Coalesce,
}

/// Classifies a point of the three-bug gap plane. Inputs are wrapped into
/// `[0, 2π)`; the measure-zero grouping points and unstable segments are
/// recognized within `tol`.
pub fn classify_3<T: Real>(omega_1: T, omega_2: T, tol: T) -> PhaseRegion {
    let pi = T::PI();
    let w1 = wrap_angle(omega_1);
    let w2 = wrap_angle(omega_2);
    // Circular distance to 0 and distance to π, per coordinate.
    let near_zero = |w: T| w <= tol || w >= T::TAU() - tol;
    let near_pi = |w: T| (w - pi).abs() <= tol;

    if (near_zero(w1) && near_pi(w2))
        || (near_pi(w1) && near_pi(w2))
        || (near_pi(w1) && near_zero(w2))
    {
        return PhaseRegion::GroupsPoint;
    }
    let between = |w: T| w > tol && w < pi - tol;
    if (near_pi(w1) && between(w2)) || (near_pi(w2) && between(w1)) {
        return PhaseRegion::UnstableCycleLine;
    }
    if w1 > T::zero() && w1 < pi && w2 > T::zero() && w2 < pi && w1 + w2 > pi {
        return PhaseRegion::CycleCcw;
    }
    if w1 > pi && w2 > pi && w1 + w2 < T::lit(3.0) * pi {
        return PhaseRegion::CycleCw;
    }
    PhaseRegion::Coalesce
}

/// Fate of a four-bug pursuit started from an interior point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourBugOutcome {
    Cycle,
    Coalesce,
}

/// True iff `(θ₂, θ₃, θ₄)` with bug 1 at 0 and θ₂ ∈ (0, π) lies in the
/// four-bug cycle set. Callers must stay clear of region boundaries.
///
/// For θ₃ ∈ (0, θ₂+π) — covering the three cases θ₃ < θ₂, θ₂ < θ₃ < π, and
/// π < θ₃ < θ₂+π, which share one θ₄ window — the cycle set is the ccw arc
/// from π to θ₃+π. For θ₃ ∈ (θ₂+π, 2π) it is the arc from θ₃-π to π.
fn four_bug_cycle_region<T: Real>(theta2: T, theta3: T, theta4: T) -> bool {
    let pi = T::PI();
    let in_arc = |x: T, from: T, len: T| {
        let d = wrap_angle(x - from);
        d > T::zero() && d < len
    };
    if theta3 < theta2 + pi {
        in_arc(theta4, pi, theta3)
    } else {
        in_arc(theta4, theta3 - pi, T::TAU() - theta3)
    }
}

/// Predicts whether four bugs at `(0, θ₂, θ₃, θ₄)` cycle or coalesce.
///
/// The classification is exact for interior points; inputs within `tol` of a
/// region boundary or a dynamical degeneracy (a coincidence of adjacent bugs
/// or an antipodal adjacency, where the speed law is ambiguous) are rejected
/// rather than guessed. θ₂ in `(π, 2π)` is handled by reflecting every angle
/// through the diameter, which flips orientation but not the fate.
pub fn classify_4<T: Real>(theta2: T, theta3: T, theta4: T, tol: T) -> Result<FourBugOutcome> {
    let pi = T::PI();
    let tau = T::TAU();
    let boundary_err = || Error::DegenerateFourBugInput {
        theta2: theta2.to_f64().unwrap_or(f64::NAN),
        theta3: theta3.to_f64().unwrap_or(f64::NAN),
        theta4: theta4.to_f64().unwrap_or(f64::NAN),
        tol: tol.to_f64().unwrap_or(f64::NAN),
    };
    if !(theta2.is_finite() && theta3.is_finite() && theta4.is_finite()) {
        return Err(boundary_err());
    }
    let mut t2 = wrap_angle(theta2);
    let mut t3 = wrap_angle(theta3);
    let mut t4 = wrap_angle(theta4);

    let circ_dist = |a: T, b: T| {
        let d = wrap_angle(a - b);
        d.min(tau - d)
    };
    // Bug 1 sits at 0: coincidence with it, and θ₂ on the reflection axis,
    // are degenerate in any frame.
    if circ_dist(t2, T::zero()) <= tol
        || circ_dist(t2, pi) <= tol
        || circ_dist(t3, T::zero()) <= tol
        || circ_dist(t4, T::zero()) <= tol
    {
        return Err(boundary_err());
    }
    if t2 > pi {
        t2 = tau - t2;
        t3 = wrap_angle(tau - t3);
        t4 = wrap_angle(tau - t4);
    }
    // Region edges and degeneracies in the working frame.
    for edge in [t2, pi, wrap_angle(t2 + pi)] {
        if circ_dist(t3, edge) <= tol {
            return Err(boundary_err());
        }
    }
    for edge in [pi, t3, wrap_angle(t3 + pi)] {
        if circ_dist(t4, edge) <= tol {
            return Err(boundary_err());
        }
    }

    if four_bug_cycle_region(t2, t3, t4) {
        Ok(FourBugOutcome::Cycle)
    } else {
        Ok(FourBugOutcome::Coalesce)
    }
}

/// Midpoint-rule integration of the four-bug cycle indicator over
/// θ₂ ∈ (0, π), θ₃, θ₄ ∈ (0, 2π), normalized by (2π)³. Approaches 1/6.
///
/// Use a resolution of at least 64 cells per axis; error shrinks roughly
/// linearly in the cell size (the integrand is an indicator).
pub fn four_bug_lower_half_probability<T: Real>(resolution: usize) -> T {
    debug_assert!(resolution >= 1);
    let pi = T::PI();
    let tau = T::TAU();
    let res = T::from_usize(resolution).expect("resolution fits the scalar");
    let h2 = pi / res;
    let h34 = tau / res;
    let half = T::lit(0.5);
    let mut hits: u64 = 0;
    for i2 in 0..resolution {
        let t2 = (T::from_usize(i2).unwrap() + half) * h2;
        for i3 in 0..resolution {
            let t3 = (T::from_usize(i3).unwrap() + half) * h34;
            for i4 in 0..resolution {
                let t4 = (T::from_usize(i4).unwrap() + half) * h34;
                if four_bug_cycle_region(t2, t3, t4) {
                    hits += 1;
                }
            }
        }
    }
    let cell = h2 * h34 * h34;
    T::from_u64(hits).expect("hit count") * cell / (tau * tau * tau)
}

/// The four-bug cycle probability by quadrature: twice the θ₂ ∈ (0, π) mass,
/// by the reflection symmetry θ ↦ 2π-θ. Approaches 1/3.
pub fn four_bug_probability_by_quadrature<T: Real>(resolution: usize) -> T {
    four_bug_lower_half_probability::<T>(resolution) * T::lit(2.0)
}
