//! Pursuit dynamics on the unit circle.
//!
//! N bugs sit on the rim of the unit circle; bug j chases bug j+1 (bug N
//! chases bug 1) at unit angular speed along the shorter arc, standing still
//! when its target is coincident or antipodal. Bugs that catch their chased
//! neighbor merge into a cluster and keep chasing collectively; merges are
//! permanent. Integration is forward Euler with explicit catch handling, so
//! a chaser never steps over the bug it is chasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Default tolerance for resolving gap coincidences (gap ≈ 0 or ≈ π).
///
/// Must stay well below any step size in use: events are resolved finer than
/// one step's travel.
pub const DEFAULT_COINCIDENCE_TOL: f64 = 1e-9;

/// An angle on the unit circle, kept in the principal branch `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle<T>(T);

impl<T: Real> Angle<T> {
    /// Wraps an arbitrary finite radian value into `[0, 2π)`.
    pub fn new(raw: T) -> Self {
        Angle(wrap_angle(raw))
    }

    /// The radian value, guaranteed in `[0, 2π)`.
    pub fn radians(self) -> T {
        self.0
    }

    /// This angle advanced by `delta` radians (either sign), rewrapped.
    pub fn offset(self, delta: T) -> Self {
        Angle::new(self.0 + delta)
    }

    /// Counterclockwise arc from `self` to `to`, in `[0, 2π)`.
    pub fn ccw_gap_to(self, to: Angle<T>) -> T {
        wrap_angle(to.0 - self.0)
    }

    /// Shorter-arc distance to `other`, in `[0, π]`.
    pub fn dist_to(self, other: Angle<T>) -> T {
        let g = self.ccw_gap_to(other);
        g.min(T::TAU() - g)
    }
}

/// Sign of a bug's angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Clockwise,
    Still,
    Counterclockwise,
}

impl Direction {
    /// The angular speed as a signed integer: -1, 0, or +1.
    pub fn signum(self) -> i8 {
        match self {
            Direction::Clockwise => -1,
            Direction::Still => 0,
            Direction::Counterclockwise => 1,
        }
    }

    /// Speed law applied to a modular gap in `[0, 2π)`: counterclockwise for
    /// gaps in `(0, π)`, clockwise for gaps in `(π, 2π)`, still within `tol`
    /// of a coincidence (0 or 2π) or the antipode (π).
    pub fn of_gap<T: Real>(gap: T, tol: T) -> Self {
        let pi = T::PI();
        if gap <= tol || gap >= T::TAU() - tol {
            Direction::Still
        } else if (gap - pi).abs() <= tol {
            Direction::Still
        } else if gap < pi {
            Direction::Counterclockwise
        } else {
            Direction::Clockwise
        }
    }
}

/// Direction in which a bug at `from` chases a target at `to`.
pub fn direction<T: Real>(from: Angle<T>, to: Angle<T>, tol: T) -> Direction {
    Direction::of_gap(from.ccw_gap_to(to), tol)
}

/// Rate of change of the gap `ω_j` given the following gap `ω_next`, per the
/// gap-space form of the dynamics. ±2 when the two bounding bugs move toward
/// (or away from) each other, 0 when they move in lockstep or sit still.
///
/// This is the raw law on gap values; it knows nothing about clusters. For a
/// configuration, [`BugConfiguration::gap_rates`] is authoritative.
pub fn gap_rate_law<T: Real>(gap: T, next_gap: T, tol: T) -> i8 {
    Direction::of_gap(next_gap, tol).signum() - Direction::of_gap(gap, tol).signum()
}

/// A maximal run of cyclically consecutive bugs sharing one angle.
///
/// Members are `start, start+1, …, start+len-1` modulo the bug count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterRun {
    pub start: usize,
    pub len: usize,
}

/// Positions of all N bugs.
///
/// Cluster membership is not stored: bugs merged into a cluster share their
/// angle exactly (snapped on merge, advanced identically afterwards), so the
/// partition is always recoverable as maximal runs of equal adjacent angles.
/// Non-adjacent bugs may share an angle without merging; they pass through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BugConfiguration<T> {
    angles: Vec<Angle<T>>,
}

impl<T: Real> BugConfiguration<T> {
    /// Builds a configuration from raw radian values, wrapping each into
    /// `[0, 2π)`. Adjacent bugs listed at identical angles start merged.
    pub fn from_angles(raw: &[T]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooFewBugs { n: raw.len() });
        }
        for (index, &value) in raw.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteAngle { index });
            }
        }
        Ok(BugConfiguration {
            angles: raw.iter().map(|&a| Angle::new(a)).collect(),
        })
    }

    /// Builds the configuration with bug 1 at angle 0 and the given
    /// consecutive gaps: bug j+1 sits at `gaps[0] + … + gaps[j-1]`.
    pub fn from_gaps(gaps: &[T]) -> Result<Self> {
        let mut raw = Vec::with_capacity(gaps.len() + 1);
        let mut acc = T::zero();
        raw.push(acc);
        for &g in gaps {
            acc += g;
            raw.push(acc);
        }
        Self::from_angles(&raw)
    }

    /// Number of bugs (not clusters).
    pub fn n_bugs(&self) -> usize {
        self.angles.len()
    }

    /// All bug angles, indexed by bug.
    pub fn angles(&self) -> &[Angle<T>] {
        &self.angles
    }

    /// Angle of bug `index` (0-based).
    pub fn angle(&self, index: usize) -> Angle<T> {
        self.angles[index]
    }

    /// Every bug shifted by the same offset; cluster structure is preserved.
    pub fn rotated(&self, delta: T) -> Self {
        BugConfiguration {
            angles: self.angles.iter().map(|a| a.offset(delta)).collect(),
        }
    }

    /// The cluster partition: maximal cyclic runs of equal adjacent angles,
    /// in increasing order of their start index. A single run of length N
    /// means the pursuit has fully coalesced.
    pub fn cluster_runs(&self) -> Vec<ClusterRun> {
        let n = self.angles.len();
        let starts: Vec<usize> = (0..n)
            .filter(|&i| self.angles[i] != self.angles[(i + n - 1) % n])
            .collect();
        if starts.is_empty() {
            return vec![ClusterRun { start: 0, len: n }];
        }
        (0..starts.len())
            .map(|k| {
                let start = starts[k];
                let until = starts[(k + 1) % starts.len()];
                let len = (until + n - start) % n;
                ClusterRun {
                    start,
                    len: if len == 0 { n } else { len },
                }
            })
            .collect()
    }

    /// Number of distinct clusters. Never increases along a trajectory.
    pub fn n_clusters(&self) -> usize {
        self.cluster_runs().len()
    }

    /// True once all bugs occupy a single point; the dynamics are frozen.
    pub fn is_fully_coalesced(&self) -> bool {
        self.n_clusters() == 1
    }

    /// Per-bug directions. Every member of a cluster shares the cluster's
    /// direction, computed from its shared angle toward the first bug past
    /// the run in cyclic index order.
    pub fn directions(&self, tol: T) -> Vec<Direction> {
        let n = self.angles.len();
        let runs = self.cluster_runs();
        let mut dirs = vec![Direction::Still; n];
        if runs.len() > 1 {
            for (k, run) in runs.iter().enumerate() {
                let target = runs[(k + 1) % runs.len()].start;
                let d = direction(self.angles[run.start], self.angles[target], tol);
                for m in 0..run.len {
                    dirs[(run.start + m) % n] = d;
                }
            }
        }
        dirs
    }

    /// The N-1 consecutive gaps `ω_j = (θ_{j+1} - θ_j) mod 2π`.
    pub fn gaps(&self) -> Vec<T> {
        (0..self.angles.len() - 1)
            .map(|j| self.angles[j].ccw_gap_to(self.angles[j + 1]))
            .collect()
    }

    /// Instantaneous rate of change of each consecutive gap, as the
    /// difference of the bounding bugs' directions. Away from measure-zero
    /// boundary configurations the values are -2, 0, or +2.
    pub fn gap_rates(&self, tol: T) -> Vec<i8> {
        let dirs = self.directions(tol);
        (0..self.angles.len() - 1)
            .map(|j| dirs[j + 1].signum() - dirs[j].signum())
            .collect()
    }

    /// One forward Euler step of size `params.dt`.
    ///
    /// Every cluster advances by `dt` times its direction. A cluster that
    /// would cross or land on its chased neighbor within the step is placed
    /// exactly at the neighbor's end-of-step angle and the two merge;
    /// catch chains collapse onto their terminal cluster's end position.
    /// After moving, any clusters left adjacent within `coincidence_tol`
    /// are merged as well. Non-adjacent bugs cross freely.
    pub fn step(&self, params: &SimParams<T>) -> Result<Self> {
        params.validate(self.n_bugs())?;
        Ok(self.step_validated(params))
    }

    pub(crate) fn step_validated(&self, params: &SimParams<T>) -> Self {
        let n = self.angles.len();
        let runs = self.cluster_runs();
        let n_runs = runs.len();
        if n_runs == 1 {
            return self.clone();
        }
        let tol = params.coincidence_tol;
        let dt = params.dt;

        let run_dirs: Vec<Direction> = (0..n_runs)
            .map(|k| {
                let target = runs[(k + 1) % n_runs].start;
                direction(self.angles[runs[k].start], self.angles[target], tol)
            })
            .collect();
        let ends: Vec<Angle<T>> = (0..n_runs)
            .map(|k| {
                let speed = T::from_i8(run_dirs[k].signum()).expect("small int");
                self.angles[runs[k].start].offset(dt * speed)
            })
            .collect();

        // Catch detection against start-of-step state. `g` is the ccw gap to
        // the chased neighbor; it changes at the integer rate dir_next - dir.
        let caught: Vec<Option<usize>> = (0..n_runs)
            .map(|k| {
                let next = (k + 1) % n_runs;
                let g = self.angles[runs[k].start].ccw_gap_to(self.angles[runs[next].start]);
                let rel = run_dirs[next].signum() - run_dirs[k].signum();
                let reaches = |arc: T, closing: i8| {
                    closing > 0 && arc <= T::from_i8(closing).expect("small int") * dt
                };
                match run_dirs[k] {
                    Direction::Counterclockwise if reaches(g, -rel) => Some(next),
                    Direction::Clockwise if reaches(T::TAU() - g, rel) => Some(next),
                    _ => None,
                }
            })
            .collect();

        // Resolve catch chains: every cluster in a chain lands on the chain's
        // terminal cluster's end-of-step angle. A closed cycle of catches is
        // cut at the node where the walk re-enters it.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Todo,
            InProgress,
            Done,
        }
        let mut final_angle = ends.clone();
        let mut mark = vec![Mark::Todo; n_runs];
        for k0 in 0..n_runs {
            if mark[k0] == Mark::Done {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = k0;
            let terminal = loop {
                match mark[cur] {
                    Mark::Done => break final_angle[cur],
                    Mark::InProgress => break ends[cur],
                    Mark::Todo => {
                        mark[cur] = Mark::InProgress;
                        path.push(cur);
                        match caught[cur] {
                            Some(next) => cur = next,
                            None => break ends[cur],
                        }
                    }
                }
            };
            for &k in &path {
                final_angle[k] = terminal;
                mark[k] = Mark::Done;
            }
        }

        let mut new_angles = vec![Angle::new(T::zero()); n];
        for (k, run) in runs.iter().enumerate() {
            for m in 0..run.len {
                new_angles[(run.start + m) % n] = final_angle[k];
            }
        }
        let mut next = BugConfiguration { angles: new_angles };

        // Post sweep: merge any chaser left within tolerance of its chased
        // neighbor (covers targets backed into by a still or slower cluster).
        loop {
            let runs = next.cluster_runs();
            if runs.len() <= 1 {
                break;
            }
            let mut merged = false;
            for k in 0..runs.len() {
                let chased = runs[(k + 1) % runs.len()];
                let a = next.angles[runs[k].start];
                let b = next.angles[chased.start];
                if a.dist_to(b) <= tol {
                    for m in 0..runs[k].len {
                        next.angles[(runs[k].start + m) % n] = b;
                    }
                    merged = true;
                    break;
                }
            }
            if !merged {
                break;
            }
        }
        next
    }

    /// Largest number of other bugs any single bug passes during one step
    /// from this configuration. With an admissible step size this never
    /// exceeds 1 away from late-stage pileups; it is a diagnostic, not an
    /// invariant the integrator relies on.
    pub fn max_passes_in_step(&self, params: &SimParams<T>) -> usize {
        let n = self.angles.len();
        let dirs = self.directions(params.coincidence_tol);
        let dt = params.dt;
        let mut worst = 0;
        for i in 0..n {
            let mut passes = 0;
            for k in 0..n {
                if k == i || self.angles[i] == self.angles[k] {
                    continue;
                }
                let g = self.angles[i].ccw_gap_to(self.angles[k]);
                let rel = T::from_i8(dirs[k].signum() - dirs[i].signum()).expect("small int");
                let end = g + rel * dt;
                if end <= T::zero() || end >= T::TAU() {
                    passes += 1;
                }
            }
            worst = worst.max(passes);
        }
        worst
    }
}

/// Integration parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams<T> {
    /// Euler step size; must satisfy `dt < π/N`.
    pub dt: T,
    /// Time horizon after which a run is abandoned as undetermined.
    pub t_max: T,
    /// Steps between classification checks.
    pub check_every: usize,
    /// Tolerance for coincidence and antipode resolution; must stay below `dt`.
    pub coincidence_tol: T,
}

impl<T: Real> SimParams<T> {
    /// Defaults for an N-bug run: `dt = min(0.01, π/(2N))`, `t_max = 100`,
    /// classification every 10 steps, coincidence tolerance 1e-9.
    pub fn for_n_bugs(n: usize) -> Self {
        let half_limit = T::PI() / T::lit(2.0 * n.max(2) as f64);
        SimParams {
            dt: T::lit(0.01).min(half_limit),
            t_max: T::lit(100.0),
            check_every: 10,
            coincidence_tol: T::lit(DEFAULT_COINCIDENCE_TOL),
        }
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_t_max(mut self, t_max: T) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_check_every(mut self, check_every: usize) -> Self {
        self.check_every = check_every;
        self
    }

    pub fn with_coincidence_tol(mut self, tol: T) -> Self {
        self.coincidence_tol = tol;
        self
    }

    /// Checks admissibility for `n` bugs: `0 < dt < π/n` (so no bug can step
    /// over more than one neighbor), `0 <= coincidence_tol < dt`, a finite
    /// non-negative horizon, and a positive check interval.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::TooFewBugs { n });
        }
        let limit = T::PI() / T::lit(n as f64);
        if !self.dt.is_finite() || self.dt <= T::zero() || self.dt >= limit {
            return Err(Error::InvalidTimeStep {
                dt: self.dt.to_f64().unwrap_or(f64::NAN),
                n,
                limit: limit.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(self.coincidence_tol >= T::zero() && self.coincidence_tol < self.dt) {
            return Err(Error::InvalidTolerance {
                tol: self.coincidence_tol.to_f64().unwrap_or(f64::NAN),
                dt: self.dt.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !self.t_max.is_finite() || self.t_max < T::zero() {
            return Err(Error::InvalidTimeHorizon {
                t_max: self.t_max.to_f64().unwrap_or(f64::NAN),
            });
        }
        if self.check_every == 0 {
            return Err(Error::InvalidCheckInterval);
        }
        Ok(())
    }
}
