//! Steady-state certificates and classification runners.
//!
//! Three invariant regimes exist: every bug collapsing to one point
//! (coalesce), every bug marching in the same direction forever with frozen
//! gaps (cycle), and stationary antipodal groupings (groups; unstable,
//! measure-zero). Two sufficient certificates decide runs early:
//!
//! * all bugs share a strict direction → cycle, with that direction;
//! * all bugs fit in a closed half-circle → coalesce.
//!
//! Groups is checked first so that exactly-constructed antipodal inputs are
//! not swallowed by the closed-half-circle test.

use serde::{Deserialize, Serialize};

use crate::dynamics::{BugConfiguration, Direction, SimParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Terminal regime of a pursuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Certified to collapse to a single point.
    Coalesce,
    /// Certified to chase forever in one strict direction; gaps are frozen.
    Cycle(Direction),
    /// Stationary antipodal grouping.
    Groups,
    /// No certificate fired before the time horizon.
    Undetermined,
}

impl Outcome {
    /// True unless the run timed out unclassified.
    pub fn is_classified(self) -> bool {
        self != Outcome::Undetermined
    }

    /// The cycle direction, when this is a cycle.
    pub fn cycle_direction(self) -> Option<Direction> {
        match self {
            Outcome::Cycle(d) => Some(d),
            _ => None,
        }
    }
}

/// Result of driving one initial configuration to classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult<T> {
    pub outcome: Outcome,
    /// Time at which the outcome was certified (equals `steps * dt`).
    pub t_classified: T,
    /// Euler steps taken up to certification.
    pub steps: u64,
    /// Winding number of the certified cycle; present iff the outcome is a
    /// cycle.
    pub winding: Option<u32>,
    /// State at the end of the run (at certification for
    /// [`run_to_classification`], at the end of the extended run for
    /// [`run_full`]).
    pub final_config: BugConfiguration<T>,
    /// Sampled `(t, configuration)` trajectory, when recording was requested.
    pub trajectory: Option<Vec<(T, BugConfiguration<T>)>>,
}

/// The shared strict direction, if every bug moves the same way.
///
/// `None` if any bug is still or directions disagree; a certified value is
/// always `Clockwise` or `Counterclockwise`.
pub fn all_same_direction<T: Real>(config: &BugConfiguration<T>, tol: T) -> Option<Direction> {
    let dirs = config.directions(tol);
    let first = dirs[0];
    if first == Direction::Still {
        return None;
    }
    if dirs.iter().all(|&d| d == first) {
        Some(first)
    } else {
        None
    }
}

/// True iff all bugs fit within a closed half-circle: the largest circular
/// gap between consecutive sorted angles is at least π.
pub fn within_semicircle<T: Real>(config: &BugConfiguration<T>) -> bool {
    let mut sorted: Vec<T> = config.angles().iter().map(|a| a.radians()).collect();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    let n = sorted.len();
    let pi = T::PI();
    for i in 0..n {
        let gap = if i + 1 == n {
            sorted[0] + T::TAU() - sorted[n - 1]
        } else {
            sorted[i + 1] - sorted[i]
        };
        if gap >= pi {
            return true;
        }
    }
    false
}

/// True iff the configuration is an antipodal grouping: every consecutive
/// gap lies within `tol` of 0 or π, with at least one gap near π.
pub fn is_groups<T: Real>(config: &BugConfiguration<T>, tol: T) -> bool {
    let tau = T::TAU();
    let pi = T::PI();
    let mut saw_pi = false;
    for g in config.gaps() {
        if (g - pi).abs() <= tol {
            saw_pi = true;
        } else if !(g <= tol || g >= tau - tol) {
            return false;
        }
    }
    saw_pi
}

/// Classifies the instantaneous configuration, in precedence order groups,
/// cycle, coalesce; `Undetermined` when no certificate applies yet.
pub fn classify_now<T: Real>(config: &BugConfiguration<T>, tol: T) -> Outcome {
    if is_groups(config, tol) {
        return Outcome::Groups;
    }
    if let Some(d) = all_same_direction(config, tol) {
        return Outcome::Cycle(d);
    }
    if within_semicircle(config) {
        return Outcome::Coalesce;
    }
    Outcome::Undetermined
}

/// Winding number of the closed chase polygon: the sum of all N modular
/// consecutive gaps (including bug N back to bug 1) divided by 2π.
///
/// Rejects configurations where index-adjacent bugs coincide within `tol`,
/// where the hop is ill-defined.
pub fn winding_number<T: Real>(config: &BugConfiguration<T>, tol: T) -> Result<u32> {
    let n = config.n_bugs();
    let tau = T::TAU();
    let mut sum = T::zero();
    for j in 0..n {
        let next = (j + 1) % n;
        let g = config.angle(j).ccw_gap_to(config.angle(next));
        if g <= tol || g >= tau - tol {
            return Err(Error::CoincidentAdjacentBugs { index: j, next });
        }
        sum += g;
    }
    let turns = sum / tau;
    let rounded = turns.round();
    debug_assert!(
        (turns - rounded).abs() < T::lit(1e-6),
        "modular hop sum must be an integer multiple of 2π, got {turns} turns"
    );
    Ok(rounded.to_u32().expect("winding is a small positive integer"))
}

struct Recorder<T> {
    stride: u64,
    last_recorded: Option<u64>,
    samples: Vec<(T, BugConfiguration<T>)>,
}

impl<T: Real> Recorder<T> {
    fn new(stride: u64) -> Self {
        Recorder {
            stride: stride.max(1),
            last_recorded: None,
            samples: Vec::new(),
        }
    }

    fn offer(&mut self, step: u64, dt: T, config: &BugConfiguration<T>) {
        if step % self.stride == 0 {
            self.force(step, dt, config);
        }
    }

    fn force(&mut self, step: u64, dt: T, config: &BugConfiguration<T>) {
        if self.last_recorded == Some(step) {
            return;
        }
        self.last_recorded = Some(step);
        self.samples
            .push((T::from_u64(step).expect("step count") * dt, config.clone()));
    }
}

/// Runs from `initial` until a certificate fires or `t_max` is reached.
///
/// The configuration is classified at t = 0 and then after every
/// `check_every` steps. Timeout yields `Outcome::Undetermined` with the
/// horizon state; it is a reportable result, not an error.
pub fn run_to_classification<T: Real>(
    initial: &BugConfiguration<T>,
    params: &SimParams<T>,
) -> Result<TrialResult<T>> {
    drive(initial, params, None, false)
}

/// Like [`run_to_classification`], but keeps going after certification:
/// through full coalescence into a single cluster, through one extra cycle
/// period 2π (one revolution) for cycles, or not at all for the stationary
/// groups outcome. Records the trajectory every `stride` steps (plus the
/// first, certification, and final states).
///
/// The classification phase is still bounded by `t_max`; the coalesce
/// completion phase is too, so a horizon chosen too short can return a
/// certified coalesce whose trajectory stops before the final merge.
pub fn run_full<T: Real>(
    initial: &BugConfiguration<T>,
    params: &SimParams<T>,
    stride: u64,
) -> Result<TrialResult<T>> {
    drive(initial, params, Some(stride), true)
}

fn drive<T: Real>(
    initial: &BugConfiguration<T>,
    params: &SimParams<T>,
    record_stride: Option<u64>,
    extend_past_certification: bool,
) -> Result<TrialResult<T>> {
    params.validate(initial.n_bugs())?;
    let dt = params.dt;
    let tol = params.coincidence_tol;
    let max_steps = (params.t_max / dt)
        .ceil()
        .to_u64()
        .expect("finite horizon over finite step");

    let mut recorder = record_stride.map(Recorder::new);
    let mut config = initial.clone();
    let mut step: u64 = 0;
    if let Some(r) = recorder.as_mut() {
        r.force(0, dt, &config);
    }

    let mut outcome = classify_now(&config, tol);
    while !outcome.is_classified() && step < max_steps {
        config = config.step_validated(params);
        step += 1;
        if let Some(r) = recorder.as_mut() {
            r.offer(step, dt, &config);
        }
        if step % params.check_every as u64 == 0 || step == max_steps {
            outcome = classify_now(&config, tol);
        }
    }

    let steps_at_certification = step;
    // A cycle can form after a merge (e.g. four bugs collapsing to three
    // clusters that then rotate together); the per-bug winding number is
    // undefined across a zero gap, so such cycles simply carry none.
    let winding = match outcome {
        Outcome::Cycle(_) => winding_number(&config, tol).ok(),
        _ => None,
    };

    if extend_past_certification {
        match outcome {
            Outcome::Coalesce => {
                while !config.is_fully_coalesced() && step < max_steps {
                    config = config.step_validated(params);
                    step += 1;
                    if let Some(r) = recorder.as_mut() {
                        r.offer(step, dt, &config);
                    }
                }
            }
            Outcome::Cycle(_) => {
                let period_steps = (T::TAU() / dt)
                    .ceil()
                    .to_u64()
                    .expect("finite period over finite step");
                for _ in 0..period_steps {
                    config = config.step_validated(params);
                    step += 1;
                    if let Some(r) = recorder.as_mut() {
                        r.offer(step, dt, &config);
                    }
                }
            }
            Outcome::Groups | Outcome::Undetermined => {}
        }
    }

    if let Some(r) = recorder.as_mut() {
        r.force(step, dt, &config);
    }

    Ok(TrialResult {
        outcome,
        t_classified: T::from_u64(steps_at_certification).expect("step count") * dt,
        steps: steps_at_certification,
        winding,
        final_config: config,
        trajectory: recorder.map(|r| r.samples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_COINCIDENCE_TOL;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    const TOL: f64 = DEFAULT_COINCIDENCE_TOL;

    fn config(raw: &[f64]) -> BugConfiguration<f64> {
        BugConfiguration::from_angles(raw).expect("valid test configuration")
    }

    fn equally_spaced(n: usize) -> BugConfiguration<f64> {
        let angles: Vec<f64> = (0..n).map(|j| j as f64 * TAU / n as f64).collect();
        config(&angles)
    }

    #[test]
    fn same_direction_certificate() {
        assert_eq!(
            all_same_direction(&equally_spaced(3), TOL),
            Some(Direction::Counterclockwise)
        );
        assert_eq!(all_same_direction(&config(&[0.0, PI]), TOL), None);
        // Reversed ring: every gap is 3π/2, so every bug chases clockwise.
        assert_eq!(
            all_same_direction(&config(&[0.0, 3.0 * FRAC_PI_2, PI, FRAC_PI_2]), TOL),
            Some(Direction::Clockwise)
        );
    }

    #[test]
    fn semicircle_certificate() {
        assert!(within_semicircle(&config(&[0.0, 0.1, 0.2])));
        assert!(!within_semicircle(&equally_spaced(3)));
        // Exactly spanning a diameter counts (closed half-circle).
        assert!(within_semicircle(&config(&[0.0, PI])));
        assert!(within_semicircle(&config(&[0.0, FRAC_PI_2, 3.0 * FRAC_PI_2])));
        // Fully coalesced: trivially inside any half-circle.
        assert!(within_semicircle(&config(&[1.0, 1.0])));
    }

    #[test]
    fn groups_certificate() {
        assert!(is_groups(&config(&[0.0, PI]), TOL));
        assert!(is_groups(&config(&[0.0, PI, 0.0]), TOL));
        assert!(is_groups(&config(&[0.0, PI, 0.0, PI]), TOL));
        assert!(is_groups(&config(&[0.0, PI, PI]), TOL));
        assert!(!is_groups(&equally_spaced(3), TOL));
        // All coincident: no π gap, so not groups.
        assert!(!is_groups(&config(&[0.4, 0.4]), TOL));
        // One gap off the {0, π} lattice breaks it.
        assert!(!is_groups(&config(&[0.0, PI, 1.0]), TOL));
    }

    #[test]
    fn classify_now_precedence_and_regions() {
        assert_eq!(classify_now(&config(&[0.0, 0.1, 0.2]), TOL), Outcome::Coalesce);
        assert_eq!(
            classify_now(&equally_spaced(3), TOL),
            Outcome::Cycle(Direction::Counterclockwise)
        );
        assert_eq!(classify_now(&config(&[0.0, PI, 0.0, PI]), TOL), Outcome::Groups);
        // Groups wins over the closed-half-circle test on the diameter case.
        assert_eq!(classify_now(&config(&[0.0, PI]), TOL), Outcome::Groups);
        // Largest sorted gap is exactly π: inside a closed half-circle.
        assert_eq!(
            classify_now(&config(&[0.0, FRAC_PI_2, 3.0 * FRAC_PI_2]), TOL),
            Outcome::Coalesce
        );
        // Mixed directions (bug 2 runs clockwise after bug 3), spread beyond
        // every half-circle: undecided now.
        assert_eq!(
            classify_now(&config(&[0.0, 2.0, 1.0, 4.0]), TOL),
            Outcome::Undetermined
        );
    }

    #[test]
    fn run_classifies_immediate_cases_at_t_zero() {
        let params = SimParams::for_n_bugs(3);
        let r = run_to_classification(&config(&[0.0, 0.1, 0.2]), &params).unwrap();
        assert_eq!(r.outcome, Outcome::Coalesce);
        assert_eq!(r.steps, 0);
        assert_eq!(r.t_classified, 0.0);
        assert_eq!(r.winding, None);
        assert!(r.trajectory.is_none());

        let r = run_to_classification(&equally_spaced(3), &params).unwrap();
        assert_eq!(r.outcome, Outcome::Cycle(Direction::Counterclockwise));
        assert_eq!(r.winding, Some(1));
    }

    #[test]
    fn run_resolves_a_genuinely_dynamic_case() {
        // Bugs 2 and 3 close head-on and merge near t = 0.5; the three
        // surviving clusters then rotate counterclockwise together.
        let params = SimParams::for_n_bugs(4);
        let r = run_to_classification(&config(&[0.0, 2.0, 1.0, 4.0]), &params).unwrap();
        assert_eq!(r.outcome, Outcome::Cycle(Direction::Counterclockwise));
        assert!(r.steps > 0, "this input is undetermined at t = 0");
        assert_eq!(r.t_classified, r.steps as f64 * params.dt);
        assert_eq!(r.winding, None, "a clustered cycle has no per-bug winding");
        assert_eq!(r.final_config.n_clusters(), 3);
    }

    #[test]
    fn run_times_out_as_undetermined() {
        let params = SimParams::for_n_bugs(4).with_t_max(0.05);
        let r = run_to_classification(&config(&[0.0, 2.0, 1.0, 4.0]), &params).unwrap();
        assert_eq!(r.outcome, Outcome::Undetermined);
        assert_eq!(r.steps, 5, "horizon 0.05 at dt 0.01 is five steps");
    }

    #[test]
    fn perturbed_groups_input_classifies_quickly() {
        let params = SimParams::for_n_bugs(3);
        let c = BugConfiguration::from_gaps(&[FRAC_PI_2 + 0.3, FRAC_PI_2 + 0.3]).unwrap();
        let r = run_to_classification(&c, &params).unwrap();
        assert!(r.outcome.is_classified());
        assert!(r.t_classified < params.t_max);
    }

    #[test]
    fn run_full_head_on_pair_meets_in_the_middle() {
        let params = SimParams::for_n_bugs(2);
        let r = run_full(&config(&[0.0, 0.4]), &params, 1).unwrap();
        assert_eq!(r.outcome, Outcome::Coalesce);
        assert!(r.final_config.is_fully_coalesced());
        let traj = r.trajectory.as_ref().unwrap();
        let (t_end, ref end) = traj[traj.len() - 1];
        assert!((t_end - 0.2).abs() <= 0.02, "meeting time ≈ 0.2, got {t_end}");
        assert!(
            end.angle(0).dist_to(crate::dynamics::Angle::new(0.2)) <= 0.02,
            "meeting point ≈ 0.2"
        );
    }

    #[test]
    fn run_full_groups_returns_immediately_without_motion() {
        let params = SimParams::for_n_bugs(2);
        let initial = config(&[0.0, PI]);
        let r = run_full(&initial, &params, 1).unwrap();
        assert_eq!(r.outcome, Outcome::Groups);
        assert_eq!(r.steps, 0);
        assert_eq!(r.final_config, initial);
        assert_eq!(r.trajectory.unwrap().len(), 1);
    }

    #[test]
    fn run_full_cycle_appends_one_revolution_with_frozen_gaps() {
        let params = SimParams::for_n_bugs(3);
        let initial = equally_spaced(3);
        let r = run_full(&initial, &params, 10).unwrap();
        assert_eq!(r.outcome, Outcome::Cycle(Direction::Counterclockwise));
        let traj = r.trajectory.as_ref().unwrap();
        let (t_end, ref end) = traj[traj.len() - 1];
        assert!(t_end >= TAU - 1e-9, "one full revolution recorded");
        for (g0, g1) in initial.gaps().iter().zip(end.gaps()) {
            assert!((g0 - g1).abs() < 1e-9, "cycle gaps stay frozen");
        }
    }

    #[test]
    fn trajectory_sampling_respects_stride() {
        let params = SimParams::for_n_bugs(4).with_t_max(0.5);
        let r = run_full(&config(&[0.0, 2.0, 2.5, 4.0]), &params, 7).unwrap();
        let traj = r.trajectory.unwrap();
        assert!((traj[0].0 - 0.0).abs() < 1e-15);
        for pair in traj.windows(2) {
            let dt_between = pair[1].0 - pair[0].0;
            assert!(
                dt_between <= 7.0 * params.dt + 1e-12,
                "samples at most stride·dt apart"
            );
        }
    }

    #[test]
    fn winding_number_counts_turns() {
        assert_eq!(winding_number(&equally_spaced(3), TOL).unwrap(), 1);
        for n in 2..=20 {
            assert_eq!(
                winding_number(&equally_spaced(n), TOL).unwrap(),
                1,
                "ordered ring of {n} bugs winds once"
            );
        }
        // Star polygon: five bugs at multiples of 4π/5 wind twice.
        let star: Vec<f64> = (0..5).map(|j| (4.0 * PI * j as f64 / 5.0) % TAU).collect();
        assert_eq!(winding_number(&config(&star), TOL).unwrap(), 2);

        assert_eq!(
            winding_number(&config(&[0.0, 0.0, 1.0]), TOL),
            Err(Error::CoincidentAdjacentBugs { index: 0, next: 1 })
        );
        // The wrap-around hop counts as adjacency too.
        assert_eq!(
            winding_number(&config(&[0.5, 1.0, 0.5]), TOL),
            Err(Error::CoincidentAdjacentBugs { index: 2, next: 0 })
        );
    }

    #[test]
    fn two_bugs_never_certify_as_cycle() {
        // The two gaps sum to 2π, so they cannot both lie in (0, π) or both
        // in (π, 2π): the same-direction certificate can never fire.
        for theta in [0.3, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
            let c = config(&[0.0, theta]);
            assert_eq!(all_same_direction(&c, TOL), None, "theta = {theta}");
        }
    }
}
