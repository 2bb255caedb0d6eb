//! Property tests for the dynamics invariants: principal-branch angles,
//! gap-rate consistency, rotation equivariance, cluster monotonicity, the
//! stationary grouping fixed point, and symmetry of the region classifiers.

mod common;

use circle_pursuit::analytic::{classify_3, classify_4};
use circle_pursuit::order_param::order_parameter;
use circle_pursuit::steady_state::winding_number;
use circle_pursuit::{
    gap_rate_law, wrap_angle, BugConfiguration64, SimParams64, DEFAULT_COINCIDENCE_TOL,
};
use common::{any_config, circ_dist, clear_of_half_turns, groups_config, spread_config};
use proptest::prelude::*;
use std::f64::consts::TAU;

const TOL: f64 = DEFAULT_COINCIDENCE_TOL;

proptest! {
    #[test]
    fn wrap_angle_lands_in_the_principal_branch(x in -1.0e6..1.0e6f64) {
        let w = wrap_angle(x);
        prop_assert!((0.0..TAU).contains(&w), "wrap({x}) = {w}");
    }

    #[test]
    fn angles_stay_in_the_principal_branch_under_stepping(c in any_config()) {
        let params = SimParams64::for_n_bugs(c.n_bugs());
        let mut state = c;
        for _ in 0..30 {
            state = state.step(&params).unwrap();
            for a in state.angles() {
                prop_assert!((0.0..TAU).contains(&a.radians()));
            }
        }
    }

    /// Away from merges and direction boundaries, one step moves every gap
    /// by exactly dt × its rate from the ternary gap law.
    #[test]
    fn gap_updates_follow_the_gap_rate_law(c in spread_config(0.05)) {
        let params = SimParams64::for_n_bugs(c.n_bugs()).with_dt(0.01);
        let before = c.gaps();
        let rates = c.gap_rates(params.coincidence_tol);
        let after = c.step(&params).unwrap().gaps();
        for j in 0..before.len() {
            let expected = before[j] + params.dt * rates[j] as f64;
            prop_assert!(
                (after[j] - expected).abs() < 1e-12,
                "gap {j}: {} -> {} but rate {} predicts {expected}",
                before[j], after[j], rates[j]
            );
        }
    }

    /// The interior gap rates must also match the pairwise law applied to
    /// consecutive gaps (the two formulations of the same dynamics agree).
    #[test]
    fn gap_rates_match_the_pairwise_law(c in spread_config(0.05)) {
        let rates = c.gap_rates(TOL);
        let gaps = c.gaps();
        for j in 0..gaps.len().saturating_sub(1) {
            prop_assert_eq!(rates[j], gap_rate_law(gaps[j], gaps[j + 1], TOL));
        }
    }

    /// Every bug travels exactly one dt per step when no event is near
    /// (speeds are ±1; stillness needs a gap of exactly 0 or π).
    #[test]
    fn bugs_move_at_unit_speed(c in spread_config(0.05)) {
        let params = SimParams64::for_n_bugs(c.n_bugs()).with_dt(0.01);
        let next = c.step(&params).unwrap();
        for (a, b) in c.angles().iter().zip(next.angles()) {
            prop_assert!(
                (circ_dist(a.radians(), b.radians()) - params.dt).abs() < 1e-12,
                "step travel must be one dt"
            );
        }
    }

    /// The dynamics commute with rigid rotation of the whole circle.
    #[test]
    fn stepping_commutes_with_rotation(c in spread_config(0.05), delta in 0.0..TAU) {
        let params = SimParams64::for_n_bugs(c.n_bugs()).with_dt(0.01);
        let rotate_then_step = c.rotated(delta).step(&params).unwrap();
        let step_then_rotate = c.step(&params).unwrap().rotated(delta);
        for (a, b) in rotate_then_step.angles().iter().zip(step_then_rotate.angles()) {
            prop_assert!(
                circ_dist(a.radians(), b.radians()) < 1e-12,
                "rotation equivariance broken: {a:?} vs {b:?}"
            );
        }
    }

    /// Merged bugs never separate: the cluster count is non-increasing.
    #[test]
    fn cluster_count_never_increases(c in any_config()) {
        let params = SimParams64::for_n_bugs(c.n_bugs());
        let mut state = c;
        let mut clusters = state.n_clusters();
        for _ in 0..100 {
            state = state.step(&params).unwrap();
            let now = state.n_clusters();
            prop_assert!(now <= clusters, "clusters went {clusters} -> {now}");
            clusters = now;
        }
    }

    /// Antipodal groupings are exact fixed points of the stepper.
    #[test]
    fn groups_configurations_do_not_move(c in groups_config()) {
        let params = SimParams64::for_n_bugs(c.n_bugs());
        let next = c.step(&params).unwrap();
        prop_assert_eq!(&next, &c, "grouping must be stationary");
    }

    /// With all separations far beyond one step's travel, nobody overtakes
    /// anybody within a single step.
    #[test]
    fn no_passes_happen_between_distant_bugs(c in spread_config(0.05)) {
        let params = SimParams64::for_n_bugs(c.n_bugs()).with_dt(0.01);
        prop_assert_eq!(c.max_passes_in_step(&params), 0);
    }

    /// The chase order winds around the circle a whole number of times,
    /// between 1 and N−1.
    #[test]
    fn winding_number_is_a_small_positive_integer(c in spread_config(0.02)) {
        let w = winding_number(&c, TOL).unwrap();
        prop_assert!((1..=c.n_bugs() as u32 - 1).contains(&w), "winding {w}");
    }

    /// 0 ≤ r ≤ 1 always; rotating the configuration leaves r alone and
    /// advances ψ by the rotation.
    #[test]
    fn order_parameter_is_bounded_and_covariant(c in any_config(), delta in 0.0..TAU) {
        let (r, psi) = order_parameter(&c);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r), "r = {r}");
        let (r2, psi2) = order_parameter(&c.rotated(delta));
        prop_assert!((r - r2).abs() < 1e-12, "r must be rotation-invariant");
        if r > 1e-6 {
            let (p, p2) = (psi.unwrap(), psi2.unwrap());
            prop_assert!(
                circ_dist(p + delta, p2) < 1e-9,
                "ψ must rotate with the configuration"
            );
        }
    }

    /// The three-bug phase plane is 2π-periodic in both gap coordinates.
    #[test]
    fn three_bug_regions_are_periodic(
        w1 in 0.0..TAU,
        w2 in 0.0..TAU,
        k in -3i32..=3,
        j in -3i32..=3,
    ) {
        prop_assume!(clear_of_half_turns(w1, 1e-6));
        prop_assume!(clear_of_half_turns(w2, 1e-6));
        prop_assume!(clear_of_half_turns(w1 + w2, 1e-6));
        let shifted = classify_3(w1 + TAU * k as f64, w2 + TAU * j as f64, TOL);
        prop_assert_eq!(shifted, classify_3(w1, w2, TOL));
    }

    /// Reflecting all four bugs through a diameter cannot change the fate.
    #[test]
    fn four_bug_fate_is_reflection_symmetric(
        t2 in 0.0..TAU,
        t3 in 0.0..TAU,
        t4 in 0.0..TAU,
    ) {
        let direct = classify_4(t2, t3, t4, TOL);
        let mirrored = classify_4(TAU - t2, TAU - t3, TAU - t4, TOL);
        match (direct, mirrored) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric boundary handling: {a:?} vs {b:?}"),
        }
    }
}

#[test]
fn crossing_bugs_register_exactly_one_pass() {
    let params = SimParams64::for_n_bugs(4).with_dt(0.01);
    let c = BugConfiguration64::from_angles(&[0.001, 2.0, 0.003, 4.5]).unwrap();
    assert_eq!(c.max_passes_in_step(&params), 1);
}
