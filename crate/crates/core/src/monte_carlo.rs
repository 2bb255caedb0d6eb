//! Seeded random-trial engine: cycle/coalesce probability estimates with
//! CLT confidence intervals, the grouping-point stability experiment, sweeps
//! over the bug count, and the coalescence power-law fit.
//!
//! Every experiment is reproducible from its master seed alone. Trial `t`
//! draws from an independent counter-indexed stream of one ChaCha12
//! generator, so results do not depend on how trials are scheduled across
//! worker threads; aggregation is a commutative count merge.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{BugConfiguration, SimParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::steady_state::{is_groups, run_to_classification, Outcome};

/// A Monte Carlo probability estimate with its CLT error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate<T> {
    /// Fraction of classified trials that hit the target outcome.
    pub p_hat: T,
    /// Total trials requested, including undetermined ones.
    pub m_trials: u64,
    /// `sqrt(p̂ (1 − p̂) / M)`.
    pub std_err: T,
    /// `p̂ − 1.96 σ`, clamped to [0, 1].
    pub ci95_low: T,
    /// `p̂ + 1.96 σ`, clamped to [0, 1].
    pub ci95_high: T,
    /// Trials that timed out (or landed on a measure-zero stationary
    /// configuration); excluded from `p_hat`'s denominator.
    pub undetermined_count: u64,
}

impl<T: Real> ProbabilityEstimate<T> {
    /// Builds the estimate from outcome counts. `hits + misses +
    /// undetermined` must equal `m_trials`. With no classified trials at all
    /// the estimate is `NaN` (and necessarily unreliable).
    pub fn from_counts(hits: u64, misses: u64, undetermined: u64, m_trials: u64) -> Self {
        debug_assert_eq!(hits + misses + undetermined, m_trials);
        let classified = hits + misses;
        let p_hat = if classified == 0 {
            T::nan()
        } else {
            T::from_u64(hits).expect("count") / T::from_u64(classified).expect("count")
        };
        let m = T::from_u64(m_trials.max(1)).expect("count");
        let std_err = (p_hat * (T::one() - p_hat) / m).sqrt();
        let z = T::lit(1.96);
        ProbabilityEstimate {
            p_hat,
            m_trials,
            std_err,
            ci95_low: (p_hat - z * std_err).max(T::zero()),
            ci95_high: (p_hat + z * std_err).min(T::one()),
            undetermined_count: undetermined,
        }
    }

    /// An estimate is reliable when at most 1% of its trials were
    /// undetermined.
    pub fn is_reliable(&self) -> bool {
        self.undetermined_count * 100 <= self.m_trials
    }

    /// The estimate for the complementary outcome: `p̂ ↦ 1 − p̂` with the
    /// interval mirrored and the same error bar.
    pub fn complement(&self) -> Self {
        ProbabilityEstimate {
            p_hat: T::one() - self.p_hat,
            m_trials: self.m_trials,
            std_err: self.std_err,
            ci95_low: T::one() - self.ci95_high,
            ci95_high: T::one() - self.ci95_low,
            undetermined_count: self.undetermined_count,
        }
    }

    /// True when the closed interval [ci95_low, ci95_high] contains `p`.
    pub fn ci_covers(&self, p: T) -> bool {
        self.ci95_low <= p && p <= self.ci95_high
    }
}

/// Least-squares fit of `p ≈ a·N^p` on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit<T> {
    /// `a = exp(intercept)`.
    pub prefactor: T,
    /// The log-log slope `p`.
    pub exponent: T,
    /// Root-mean-square residual in log space.
    pub rms_log_residual: T,
}

/// One bug-count entry of a coalescence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub n_bugs: usize,
    /// Probability of coalescence (not of cycling) at this N.
    pub estimate: ProbabilityEstimate<T>,
    /// The master seed of the sweep; the row's trials use substreams derived
    /// from `(seed, n_bugs)`.
    pub seed: u64,
}

/// Perturbation of the three-bug antipodal grouping point: both gaps are
/// drawn as `π + Uniform(−α, α)`, uniform on the square of side 2α around
/// the base point ω₁ = ω₂ = π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec<T> {
    /// Half-width of the perturbation square, in (0, π].
    pub alpha: T,
}

impl<T: Real> PerturbationSpec<T> {
    /// Validates `α ∈ (0, π]`.
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() || alpha > T::PI() {
            return Err(Error::AlphaOutOfRange {
                alpha: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(PerturbationSpec { alpha })
    }

    /// The unperturbed gap pair.
    pub fn base_gaps() -> (T, T) {
        (T::PI(), T::PI())
    }

    /// One perturbed gap pair; each gap stays inside (0, 2π).
    pub fn draw_gaps<R: Rng>(&self, rng: &mut R) -> (T, T) {
        let gap = |rng: &mut R| {
            let u = T::lit(rng.random::<f64>());
            T::PI() + (u + u - T::one()) * self.alpha
        };
        (gap(rng), gap(rng))
    }
}

/// The generator for one trial: stream `stream` of the ChaCha12 cipher keyed
/// by `seed`. Streams never overlap, so trials are independent and may run
/// in any order on any number of workers.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent sub-seed from a master seed and a salt (used to
/// give each sweep row its own stream family).
pub fn derive_seed(master: u64, salt: u64) -> u64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix64(splitmix64(master).wrapping_add(salt))
}

/// A uniform random initial configuration: bug 1 pinned at θ = 0, the rest
/// independent Uniform(0, 2π).
pub fn sample_initial<T: Real, R: Rng>(n: usize, rng: &mut R) -> Result<BugConfiguration<T>> {
    if n < 2 {
        return Err(Error::TooFewBugs { n });
    }
    let mut angles = Vec::with_capacity(n);
    angles.push(T::zero());
    for _ in 1..n {
        angles.push(T::lit(rng.random::<f64>()) * T::TAU());
    }
    BugConfiguration::from_angles(&angles)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    hits: u64,
    misses: u64,
    undetermined: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            hits: self.hits + other.hits,
            misses: self.misses + other.misses,
            undetermined: self.undetermined + other.undetermined,
        }
    }

    /// Cycle counts as the hit, coalesce as the miss. A groups outcome is
    /// possible only on measure-zero draws; it is neither, so it lands in
    /// the undetermined bucket rather than biasing the estimate.
    fn of_cycle(outcome: Outcome) -> Tally {
        let mut t = Tally::default();
        match outcome {
            Outcome::Cycle(_) => t.hits = 1,
            Outcome::Coalesce => t.misses = 1,
            Outcome::Groups | Outcome::Undetermined => t.undetermined = 1,
        }
        t
    }
}

fn check_m(m_trials: u64) -> Result<()> {
    if m_trials == 0 {
        return Err(Error::NoTrials);
    }
    debug_assert!(m_trials < 1 << 32, "trial index must fit a stream word");
    Ok(())
}

/// Estimates the probability that `n` uniformly placed bugs reach the cycle
/// steady state, over `m_trials` independent seeded trials.
pub fn estimate_cycle_probability<T: Real>(
    n: usize,
    m_trials: u64,
    params: &SimParams<T>,
    seed: u64,
) -> Result<ProbabilityEstimate<T>> {
    check_m(m_trials)?;
    params.validate(n)?;
    let tally = (0..m_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let config = sample_initial::<T, _>(n, &mut rng).expect("n validated");
            let result = run_to_classification(&config, params).expect("params validated");
            Tally::of_cycle(result.outcome)
        })
        .reduce(Tally::default, Tally::merge);
    Ok(ProbabilityEstimate::from_counts(
        tally.hits,
        tally.misses,
        tally.undetermined,
        m_trials,
    ))
}

/// `count` perturbation half-widths uniformly spaced over (0, π]:
/// kπ/count for k = 1..count.
pub fn uniform_alphas<T: Real>(count: usize) -> Vec<T> {
    let denom = T::from_usize(count.max(1)).expect("count");
    (1..=count)
        .map(|k| T::PI() * T::from_usize(k).expect("index") / denom)
        .collect()
}

/// For each α, perturbs the antipodal grouping point by gaps
/// `π + Uniform(−α, α)` and estimates the probability that the perturbed
/// three-bug system escapes into a cycle.
///
/// The measure-zero event of drawing an exact grouping configuration is
/// resampled (a few retries; a draw that keeps landing there — possible only
/// when α is below the coincidence tolerance — counts as undetermined).
pub fn stability_experiment<T: Real>(
    alphas: &[T],
    m_trials: u64,
    params: &SimParams<T>,
    seed: u64,
) -> Result<Vec<(T, ProbabilityEstimate<T>)>> {
    check_m(m_trials)?;
    params.validate(3)?;
    let specs = alphas
        .iter()
        .map(|&alpha| PerturbationSpec::new(alpha))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(alphas.len() < 1 << 31, "alpha index must fit a stream word");

    let mut curve = Vec::with_capacity(specs.len());
    for (index, spec) in specs.iter().enumerate() {
        let tally = (0..m_trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, ((index as u64) << 32) | t);
                for _ in 0..32 {
                    let (w1, w2) = spec.draw_gaps(&mut rng);
                    let config =
                        BugConfiguration::from_gaps(&[w1, w2]).expect("gaps are finite");
                    if is_groups(&config, params.coincidence_tol) {
                        continue;
                    }
                    let result =
                        run_to_classification(&config, params).expect("params validated");
                    return Tally::of_cycle(result.outcome);
                }
                Tally {
                    undetermined: 1,
                    ..Tally::default()
                }
            })
            .reduce(Tally::default, Tally::merge);
        curve.push((
            spec.alpha,
            ProbabilityEstimate::from_counts(
                tally.hits,
                tally.misses,
                tally.undetermined,
                m_trials,
            ),
        ));
    }
    Ok(curve)
}

/// Runs one cycle-probability estimate per bug count and reports the
/// coalescence probability `1 − p̂_N` for each. Row N draws from streams
/// keyed by `derive_seed(seed, N)`, so the table is reproducible from
/// `(seed, n_values, m_trials, params)` alone.
pub fn sweep<T: Real>(
    n_values: &[usize],
    m_trials: u64,
    params: &SimParams<T>,
    seed: u64,
) -> Result<Vec<SweepRow<T>>> {
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let cycle = estimate_cycle_probability(n, m_trials, params, derive_seed(seed, n as u64))?;
        rows.push(SweepRow {
            n_bugs: n,
            estimate: cycle.complement(),
            seed,
        });
    }
    Ok(rows)
}

/// Ordinary least squares on `(ln N, ln p̂_coalesce)`. Rows with a zero,
/// non-finite, or unreliable estimate are excluded; at least three usable
/// rows are required.
pub fn fit_power_law<T: Real>(rows: &[SweepRow<T>]) -> Result<PowerLawFit<T>> {
    let points: Vec<(T, T)> = rows
        .iter()
        .filter(|row| {
            row.estimate.is_reliable()
                && row.estimate.p_hat.is_finite()
                && row.estimate.p_hat > T::zero()
        })
        .map(|row| {
            let x = T::from_usize(row.n_bugs).expect("bug count").ln();
            (x, row.estimate.p_hat.ln())
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewFitPoints {
            usable: points.len(),
        });
    }
    let m = T::from_usize(points.len()).expect("count");
    let mean_x = points.iter().fold(T::zero(), |acc, p| acc + p.0) / m;
    let mean_y = points.iter().fold(T::zero(), |acc, p| acc + p.1) / m;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in &points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = points.iter().fold(T::zero(), |acc, &(x, y)| {
        let r = y - (intercept + slope * x);
        acc + r * r
    });
    Ok(PowerLawFit {
        prefactor: intercept.exp(),
        exponent: slope,
        rms_log_residual: (ss_res / m).sqrt(),
    })
}
