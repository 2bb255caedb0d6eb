//! The early-exit certificates promise something about the infinite future:
//! a cycle certificate means the gaps are frozen forever, a coalescence
//! certificate means the bugs really do all meet. Spot-check those promises
//! by integrating well past the certification point on random trials.

use circle_pursuit::monte_carlo::{sample_initial, trial_rng};
use circle_pursuit::steady_state::{classify_now, run_full, run_to_classification};
use circle_pursuit::{Outcome, SimParams64};

#[test]
fn certificates_keep_their_promises() {
    let trials = 3_000u64;
    let mut cycles = 0u64;
    let mut coalesces = 0u64;
    let mut undetermined = 0u64;
    for t in 0..trials {
        let n = 3 + (t % 8) as usize;
        let params = SimParams64::for_n_bugs(n).with_t_max(200.0);
        let mut rng = trial_rng(0x5011D, t);
        let config = sample_initial::<f64, _>(n, &mut rng).unwrap();
        let result = run_to_classification(&config, &params).unwrap();

        assert!(
            result.t_classified <= params.t_max + params.dt,
            "classification time beyond the horizon"
        );
        assert!(
            (result.t_classified - result.steps as f64 * params.dt).abs() < 1e-9,
            "steps and time disagree"
        );

        match result.outcome {
            Outcome::Cycle(_) => {
                cycles += 1;
                // Integrate at least 5 more time units (up to 20): the
                // cluster count and the gaps must stay put.
                let extra_time = (2.0 * result.t_classified).clamp(5.0, 20.0);
                let extra_steps = (extra_time / params.dt).ceil() as u64;
                let start = result.final_config.clone();
                let start_gaps = start.gaps();
                let mut state = start.clone();
                for _ in 0..extra_steps {
                    state = state.step(&params).unwrap();
                }
                assert_eq!(
                    state.n_clusters(),
                    start.n_clusters(),
                    "trial {t}: a certified cycle merged afterwards"
                );
                for (a, b) in start_gaps.iter().zip(state.gaps()) {
                    assert!(
                        (a - b).abs() < 1e-9,
                        "trial {t}: cycle gaps drifted: {a} -> {b}"
                    );
                }
                assert_eq!(
                    classify_now(&state, params.coincidence_tol),
                    result.outcome,
                    "trial {t}: cycle certificate expired"
                );
            }
            Outcome::Coalesce => {
                coalesces += 1;
                let full = run_full(&config, &params, 1_000).unwrap();
                assert_eq!(full.outcome, Outcome::Coalesce);
                assert!(
                    full.final_config.is_fully_coalesced(),
                    "trial {t}: certified coalescence never finished (n = {n})"
                );
            }
            Outcome::Groups => panic!("trial {t}: groups from a generic draw"),
            Outcome::Undetermined => undetermined += 1,
        }
    }
    assert!(cycles > 0 && coalesces > 0, "both fates must occur");
    assert!(
        undetermined * 100 < trials,
        "too many undetermined trials: {undetermined}"
    );
}
