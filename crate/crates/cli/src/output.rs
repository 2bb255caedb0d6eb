//! Report types and their CSV/JSON renderings.
//!
//! Every report embeds full provenance (tool version, seed, integration
//! parameters, trial count where applicable) so that a consumer can reproduce
//! it exactly; two runs with equal provenance render byte-identical output
//! regardless of the worker count. CSV tables open with `# key: value`
//! comment lines followed by a fixed header row; the schemas are:
//!
//! * simulate (summary):    `outcome,direction,t_classified,steps,winding`
//! * simulate (trajectory): `t,theta_1,...,theta_N`
//! * simulate (order param): `t,r,psi,psi_defined`
//! * montecarlo: `n_bugs,m_trials,p_cycle,cycle_ci95_low,cycle_ci95_high,p_coalesce,coalesce_ci95_low,coalesce_ci95_high,std_err,undetermined,reliable`
//! * stability:  `alpha,p_cycle,ci95_low,ci95_high,analytic,undetermined`
//! * sweep-fit:  `n_bugs,p_coalesce,std_err,ci95_low,ci95_high,undetermined,reliable`
//!
//! JSON reports are pretty-printed with a stable field order and parse back
//! into the producing type without loss.

use serde::{Deserialize, Serialize};

/// Formats a float with 12 significant digits for CSV cells; JSON goes
/// through serde's shortest-round-trip representation instead.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt_sig12(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// Serializes any report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports contain no non-serializable state");
    s.push('\n');
    s
}

/// Reproduction keys stamped on every stochastic report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: u64,
    pub dt: f64,
    pub t_max: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m_trials: Option<u64>,
}

impl Provenance {
    fn csv_comments(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# tool_version: {}\n", self.tool_version));
        s.push_str(&format!("# seed: {}\n", self.seed));
        s.push_str(&format!("# dt: {}\n", sig12(self.dt)));
        s.push_str(&format!("# t_max: {}\n", sig12(self.t_max)));
        if let Some(m) = self.m_trials {
            s.push_str(&format!("# m_trials: {m}\n"));
        }
        s
    }
}

/// One recorded trajectory sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub angles: Vec<f64>,
}

/// One recorded order-parameter sample; `psi` is absent when the centroid is
/// too close to the origin for a phase to mean anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderParamPoint {
    pub t: f64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub psi: Option<f64>,
}

/// Everything a single pursuit run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub provenance: Provenance,
    pub n_bugs: usize,
    pub initial_angles: Vec<f64>,
    /// `coalesce`, `cycle`, `groups`, or `undetermined`.
    pub outcome: String,
    /// `+1` counterclockwise, `-1` clockwise; present iff the outcome is a
    /// cycle.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub direction: Option<i8>,
    pub t_classified: f64,
    pub steps: u64,
    /// Laps per revolution of a cycle; absent for other outcomes and for
    /// cycles formed after a merge (winding is undefined across a zero gap).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub winding: Option<u32>,
    pub final_angles: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order_param: Option<Vec<OrderParamPoint>>,
}

impl SimulateReport {
    /// Comments carry provenance and the classification; the table is the
    /// order-parameter series if recorded, else the trajectory if recorded,
    /// else a single summary row.
    pub fn to_csv(&self) -> String {
        let mut s = self.provenance.csv_comments();
        s.push_str(&format!("# n_bugs: {}\n", self.n_bugs));
        s.push_str(&format!("# outcome: {}\n", self.outcome));
        if let Some(d) = self.direction {
            s.push_str(&format!("# direction: {d:+}\n"));
        }
        s.push_str(&format!("# t_classified: {}\n", sig12(self.t_classified)));
        s.push_str(&format!("# steps: {}\n", self.steps));
        if let Some(w) = self.winding {
            s.push_str(&format!("# winding: {w}\n"));
        }
        if let Some(series) = &self.order_param {
            s.push_str("t,r,psi,psi_defined\n");
            for p in series {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    sig12(p.t),
                    sig12(p.r),
                    opt_sig12(p.psi),
                    p.psi.is_some()
                ));
            }
        } else if let Some(series) = &self.trajectory {
            s.push_str("t");
            for j in 1..=self.n_bugs {
                s.push_str(&format!(",theta_{j}"));
            }
            s.push('\n');
            for p in series {
                s.push_str(&sig12(p.t));
                for a in &p.angles {
                    s.push(',');
                    s.push_str(&sig12(*a));
                }
                s.push('\n');
            }
        } else {
            s.push_str("outcome,direction,t_classified,steps,winding\n");
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                self.outcome,
                self.direction.map(|d| format!("{d:+}")).unwrap_or_default(),
                sig12(self.t_classified),
                self.steps,
                self.winding.map(|w| w.to_string()).unwrap_or_default()
            ));
        }
        s
    }
}

/// A probability with its sampling uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOut {
    pub p_hat: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl From<&circle_pursuit::ProbabilityEstimate64> for EstimateOut {
    fn from(e: &circle_pursuit::ProbabilityEstimate64) -> Self {
        EstimateOut {
            p_hat: e.p_hat,
            std_err: e.std_err,
            ci95_low: e.ci95_low,
            ci95_high: e.ci95_high,
        }
    }
}

/// Cycle and coalescence probability estimates for one bug count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub provenance: Provenance,
    pub n_bugs: usize,
    pub cycle: EstimateOut,
    pub coalesce: EstimateOut,
    pub undetermined: u64,
    /// False when more than 1% of trials timed out.
    pub reliable: bool,
}

impl MonteCarloReport {
    pub fn to_csv(&self) -> String {
        let mut s = self.provenance.csv_comments();
        s.push_str(&format!("# n_bugs: {}\n", self.n_bugs));
        s.push_str(
            "n_bugs,m_trials,p_cycle,cycle_ci95_low,cycle_ci95_high,\
             p_coalesce,coalesce_ci95_low,coalesce_ci95_high,std_err,undetermined,reliable\n",
        );
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            self.n_bugs,
            self.provenance.m_trials.expect("montecarlo always records its trial count"),
            sig12(self.cycle.p_hat),
            sig12(self.cycle.ci95_low),
            sig12(self.cycle.ci95_high),
            sig12(self.coalesce.p_hat),
            sig12(self.coalesce.ci95_low),
            sig12(self.coalesce.ci95_high),
            sig12(self.cycle.std_err),
            self.undetermined,
            self.reliable
        ));
        s
    }
}

/// One α entry of the stability curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub alpha: f64,
    pub p_cycle: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// Closed-form cycle probability at this α.
    pub analytic: f64,
    pub undetermined: u64,
}

/// Cycle survival versus perturbation half-width around the three-bug
/// antipodal grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub provenance: Provenance,
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    pub fn to_csv(&self) -> String {
        let mut s = self.provenance.csv_comments();
        s.push_str("alpha,p_cycle,ci95_low,ci95_high,analytic,undetermined\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig12(r.alpha),
                sig12(r.p_cycle),
                sig12(r.ci95_low),
                sig12(r.ci95_high),
                sig12(r.analytic),
                r.undetermined
            ));
        }
        s
    }
}

/// One bug-count entry of a coalescence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRowOut {
    pub n_bugs: usize,
    pub p_coalesce: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub undetermined: u64,
    pub reliable: bool,
}

/// The fitted power law `p_coalesce ≈ prefactor · N^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOut {
    pub prefactor: f64,
    pub exponent: f64,
    pub rms_log_residual: f64,
}

/// Coalescence probability over a grid of bug counts, with its power-law fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFitReport {
    pub provenance: Provenance,
    pub n_grid: String,
    pub rows: Vec<SweepRowOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<FitOut>,
    /// Why no fit was produced (for example: too few usable rows).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit_error: Option<String>,
}

impl SweepFitReport {
    pub fn to_csv(&self) -> String {
        let mut s = self.provenance.csv_comments();
        s.push_str(&format!("# n_grid: {}\n", self.n_grid));
        if let Some(fit) = &self.fit {
            s.push_str(&format!("# fit_prefactor: {}\n", sig12(fit.prefactor)));
            s.push_str(&format!("# fit_exponent: {}\n", sig12(fit.exponent)));
            s.push_str(&format!("# fit_rms_log_residual: {}\n", sig12(fit.rms_log_residual)));
        }
        if let Some(err) = &self.fit_error {
            s.push_str(&format!("# fit_error: {err}\n"));
        }
        s.push_str("n_bugs,p_coalesce,std_err,ci95_low,ci95_high,undetermined,reliable\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n_bugs,
                sig12(r.p_coalesce),
                sig12(r.std_err),
                sig12(r.ci95_low),
                sig12(r.ci95_high),
                r.undetermined,
                r.reliable
            ));
        }
        s
    }
}

/// Structured form of an analytic query answer (`--format json`); the default
/// output is the plain-text line documented on each query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "snake_case")]
pub enum AnalyticReport {
    P {
        tool_version: String,
        n_bugs: usize,
        numerator: u64,
        denominator: u64,
        value: f64,
    },
    Stab {
        tool_version: String,
        alpha: f64,
        value: f64,
    },
    Classify3 {
        tool_version: String,
        omega_1: f64,
        omega_2: f64,
        region: String,
    },
    Classify4 {
        tool_version: String,
        theta_2: f64,
        theta_3: f64,
        theta_4: f64,
        outcome: String,
    },
    Quad {
        tool_version: String,
        resolution: usize,
        lower_half_mass: f64,
        p_cycle_4: f64,
    },
}
