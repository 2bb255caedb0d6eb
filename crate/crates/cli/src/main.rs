//! `circle-pursuit`: N bugs on the unit circle, each chasing the next.
//!
//! Subcommands run a single pursuit to classification (`simulate`), estimate
//! cycle/coalescence probabilities over random initial conditions
//! (`montecarlo`), trace cycle survival around the three-bug antipodal
//! grouping (`stability`), sweep bug counts and fit the coalescence power law
//! (`sweep-fit`), or evaluate the closed-form results (`analytic`).
//!
//! Outputs are deterministic: the seed, step size, horizon, and trial count
//! are embedded in every report, and rerunning with the same values — under
//! any `--workers` setting — reproduces the bytes exactly. Exit codes:
//! 0 classified, 2 undetermined at the horizon, 1 usage or validation error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use circle_pursuit::analytic::{
    classify_3, classify_4, exact_cycle_probability, four_bug_lower_half_probability,
    four_bug_probability_by_quadrature, stability_probability_3, FourBugOutcome, PhaseRegion,
};
use circle_pursuit::monte_carlo::{
    estimate_cycle_probability, sample_initial, stability_experiment, sweep, trial_rng,
    uniform_alphas,
};
use circle_pursuit::order_param;
use circle_pursuit::steady_state::{run_full, run_to_classification};
use circle_pursuit::{
    BugConfiguration64, Outcome, SimParams64, TrialResult64, DEFAULT_COINCIDENCE_TOL,
};

use circle_pursuit_cli::output::{
    sig12, to_json, AnalyticReport, EstimateOut, FitOut, MonteCarloReport, OrderParamPoint,
    Provenance, SimulateReport, StabilityReport, StabilityRow, SweepFitReport, SweepRowOut,
    TrajectoryPoint,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_UNDETERMINED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "circle-pursuit",
    version,
    about = "Cyclic pursuit of N bugs on the unit circle: simulation, Monte Carlo, and closed forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master RNG seed; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Euler step size. Defaults to min(0.01, π/(2N)) and must satisfy
    /// dt < π/N.
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Time horizon after which an unclassified run is reported undetermined.
    #[arg(long, global = true)]
    t_max: Option<f64>,

    /// Worker threads for Monte Carlo trials (0 = one per core). Outputs are
    /// byte-identical for any worker count.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Output format. Defaults per command: JSON for single structured
    /// results (simulate, montecarlo), CSV for tables (stability, sweep-fit),
    /// plain text for analytic queries.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one pursuit to classification, optionally recording the
    /// trajectory and the order-parameter series.
    Simulate {
        /// Initial angles in radians as one comma-separated list, e.g.
        /// "0,2.0944,4.1888" (at least two).
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_hyphen_values = true,
            required_unless_present = "n",
            conflicts_with = "n",
            value_name = "RADIANS"
        )]
        angles: Option<Vec<f64>>,

        /// Draw N initial angles uniformly at random instead (bug 1 at 0).
        #[arg(long, value_name = "N")]
        n: Option<usize>,

        /// Record the trajectory every STEPS Euler steps.
        #[arg(long, value_name = "STEPS")]
        trajectory_stride: Option<u64>,

        /// Record the order-parameter series (r, ψ) along the run.
        #[arg(long)]
        order_param: bool,
    },

    /// Estimate the cycle and coalescence probabilities for N bugs over M
    /// uniformly random trials.
    Montecarlo {
        /// Number of bugs.
        #[arg(long, value_name = "N")]
        n: usize,

        /// Number of Monte Carlo trials.
        #[arg(long, value_name = "M", default_value_t = 10_000)]
        trials: u64,
    },

    /// Tabulate cycle survival against the half-width α of a uniform
    /// perturbation of the three-bug antipodal grouping.
    Stability {
        /// Number of Monte Carlo trials per α.
        #[arg(long, value_name = "M", default_value_t = 10_000)]
        trials: u64,

        /// Number of α values, placed uniformly in (0, π].
        #[arg(long, value_name = "K", default_value_t = 20)]
        alphas: usize,
    },

    /// Estimate the coalescence probability over a grid of bug counts and
    /// fit a power law through the estimates.
    SweepFit {
        /// Inclusive bug-count grid "start:stop:step".
        #[arg(long, default_value = "2:100:2", value_name = "GRID")]
        n_grid: String,

        /// Number of Monte Carlo trials per bug count.
        #[arg(long, value_name = "M", default_value_t = 2_000)]
        trials: u64,
    },

    /// Evaluate closed-form results: exact probabilities, the stability
    /// curve, phase-region classifiers, and the quadrature cross-check.
    Analytic {
        #[command(subcommand)]
        query: AnalyticQuery,
    },
}

#[derive(Subcommand)]
enum AnalyticQuery {
    /// Exact cycle probability for N bugs (closed forms exist for N ≤ 4);
    /// prints "numerator/denominator = value".
    P { n: usize },

    /// Cycle probability when both gaps of the three-bug antipodal grouping
    /// are perturbed by Uniform(−α, α); α in (0, π].
    Stab {
        #[arg(allow_hyphen_values = true)]
        alpha: f64,
    },

    /// Phase region of the three-bug gap plane at (ω1, ω2).
    Classify3 {
        #[arg(allow_hyphen_values = true)]
        omega_1: f64,
        #[arg(allow_hyphen_values = true)]
        omega_2: f64,
    },

    /// Cycle or coalesce for four bugs at (0, θ2, θ3, θ4), θ2 in (0, π);
    /// boundary inputs are rejected.
    Classify4 {
        #[arg(allow_hyphen_values = true)]
        theta_2: f64,
        #[arg(allow_hyphen_values = true)]
        theta_3: f64,
        #[arg(allow_hyphen_values = true)]
        theta_4: f64,
    },

    /// Midpoint-rule quadrature of the four-bug cycle probability at the
    /// given grid resolution.
    Quad {
        #[arg(default_value_t = 256)]
        resolution: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successes, not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| format!("failed to build the worker pool: {e}"))?;
    pool.install(|| dispatch(&cli))
}

fn dispatch(cli: &Cli) -> Result<u8, String> {
    let (report, code) = match &cli.command {
        Command::Simulate {
            angles,
            n,
            trajectory_stride,
            order_param,
        } => cmd_simulate(cli, angles.as_deref(), *n, *trajectory_stride, *order_param)?,
        Command::Montecarlo { n, trials } => (cmd_montecarlo(cli, *n, *trials)?, EXIT_OK),
        Command::Stability { trials, alphas } => (cmd_stability(cli, *trials, *alphas)?, EXIT_OK),
        Command::SweepFit { n_grid, trials } => (cmd_sweep_fit(cli, n_grid, *trials)?, EXIT_OK),
        Command::Analytic { query } => (cmd_analytic(cli, query)?, EXIT_OK),
    };
    emit(cli, &report)?;
    Ok(code)
}

fn emit(cli: &Cli, content: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// The format actually used: the flag if given, else the command's natural
/// default (JSON for single structured results, CSV for tables).
fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

/// Integration parameters for an N-bug run with any `--dt`/`--t-max`
/// overrides applied. Validation happens inside the core runners so that the
/// diagnostic always cites the dt < π/N rule.
fn params_for(cli: &Cli, n: usize) -> SimParams64 {
    let mut params = SimParams64::for_n_bugs(n);
    if let Some(dt) = cli.dt {
        params.dt = dt;
    }
    if let Some(t_max) = cli.t_max {
        params.t_max = t_max;
    }
    params
}

fn provenance(cli: &Cli, params: &SimParams64, m_trials: Option<u64>) -> Provenance {
    Provenance {
        tool_version: VERSION.to_string(),
        seed: cli.seed,
        dt: params.dt,
        t_max: params.t_max,
        m_trials,
    }
}

fn outcome_name(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Coalesce => "coalesce",
        Outcome::Cycle(_) => "cycle",
        Outcome::Groups => "groups",
        Outcome::Undetermined => "undetermined",
    }
}

fn cmd_simulate(
    cli: &Cli,
    angles: Option<&[f64]>,
    n: Option<usize>,
    trajectory_stride: Option<u64>,
    order_param: bool,
) -> Result<(String, u8), String> {
    let config = match (angles, n) {
        (Some(raw), None) => BugConfiguration64::from_angles(raw).map_err(|e| e.to_string())?,
        (None, Some(n)) => {
            sample_initial(n, &mut trial_rng(cli.seed, 0)).map_err(|e| e.to_string())?
        }
        // clap enforces the XOR; this arm is unreachable through the parser.
        _ => return Err("exactly one of --angles or --n is required".into()),
    };
    let n_bugs = config.n_bugs();
    let params = params_for(cli, n_bugs);
    let initial_angles: Vec<f64> = config.angles().iter().map(|a| a.radians()).collect();

    let record = trajectory_stride.is_some() || order_param;
    let result: TrialResult64 = if record {
        run_full(&config, &params, trajectory_stride.unwrap_or(1))
    } else {
        run_to_classification(&config, &params)
    }
    .map_err(|e| e.to_string())?;

    let samples = result.trajectory.as_deref().unwrap_or(&[]);
    let trajectory = trajectory_stride.map(|_| {
        samples
            .iter()
            .map(|(t, c)| TrajectoryPoint {
                t: *t,
                angles: c.angles().iter().map(|a| a.radians()).collect(),
            })
            .collect::<Vec<_>>()
    });
    let order_series = order_param.then(|| {
        order_param::track(samples)
            .into_iter()
            .map(|s| OrderParamPoint {
                t: s.t,
                r: s.r,
                psi: s.psi,
            })
            .collect::<Vec<_>>()
    });

    let report = SimulateReport {
        provenance: provenance(cli, &params, None),
        n_bugs,
        initial_angles,
        outcome: outcome_name(result.outcome).to_string(),
        direction: result.outcome.cycle_direction().map(|d| d.signum()),
        t_classified: result.t_classified,
        steps: result.steps,
        winding: result.winding,
        final_angles: result
            .final_config
            .angles()
            .iter()
            .map(|a| a.radians())
            .collect(),
        trajectory,
        order_param: order_series,
    };

    let rendered = match format_or(cli, Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            if report.trajectory.is_some() && report.order_param.is_some() {
                return Err(
                    "CSV holds one table; combine --trajectory-stride and --order-param \
                     with --format json, or run twice"
                        .into(),
                );
            }
            report.to_csv()
        }
    };
    let code = if result.outcome == Outcome::Undetermined {
        EXIT_UNDETERMINED
    } else {
        EXIT_OK
    };
    Ok((rendered, code))
}

fn cmd_montecarlo(cli: &Cli, n: usize, trials: u64) -> Result<String, String> {
    let params = params_for(cli, n);
    let cycle = estimate_cycle_probability(n, trials, &params, cli.seed)
        .map_err(|e| e.to_string())?;
    let report = MonteCarloReport {
        provenance: provenance(cli, &params, Some(trials)),
        n_bugs: n,
        cycle: EstimateOut::from(&cycle),
        coalesce: EstimateOut::from(&cycle.complement()),
        undetermined: cycle.undetermined_count,
        reliable: cycle.is_reliable(),
    };
    Ok(match format_or(cli, Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
    })
}

fn cmd_stability(cli: &Cli, trials: u64, alphas: usize) -> Result<String, String> {
    if alphas == 0 {
        return Err("--alphas must be at least 1".into());
    }
    let params = params_for(cli, 3);
    let grid: Vec<f64> = uniform_alphas(alphas);
    let curve = stability_experiment(&grid, trials, &params, cli.seed)
        .map_err(|e| e.to_string())?;
    let rows = curve
        .iter()
        .map(|(alpha, estimate)| {
            let analytic =
                stability_probability_3(*alpha).expect("uniform_alphas stays within (0, π]");
            StabilityRow {
                alpha: *alpha,
                p_cycle: estimate.p_hat,
                ci95_low: estimate.ci95_low,
                ci95_high: estimate.ci95_high,
                analytic,
                undetermined: estimate.undetermined_count,
            }
        })
        .collect();
    let report = StabilityReport {
        provenance: provenance(cli, &params, Some(trials)),
        rows,
    };
    Ok(match format_or(cli, Format::Csv) {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
    })
}

/// Parses an inclusive "start:stop:step" grid of bug counts.
fn parse_n_grid(grid: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("--n-grid expects \"start:stop:step\", got \"{grid}\""));
    }
    let parse = |name: &str, text: &str| {
        text.parse::<usize>()
            .map_err(|_| format!("--n-grid {name} \"{text}\" is not a non-negative integer"))
    };
    let start = parse("start", parts[0])?;
    let stop = parse("stop", parts[1])?;
    let step = parse("step", parts[2])?;
    if start < 2 {
        return Err(format!("--n-grid start must be at least 2 bugs, got {start}"));
    }
    if step == 0 {
        return Err("--n-grid step must be positive".into());
    }
    if stop < start {
        return Err(format!("--n-grid stop {stop} is below start {start}"));
    }
    Ok((start..=stop).step_by(step).collect())
}

fn cmd_sweep_fit(cli: &Cli, n_grid: &str, trials: u64) -> Result<String, String> {
    let ns = parse_n_grid(n_grid)?;
    let n_max = *ns.last().expect("a validated grid is nonempty");
    // One step size serves the whole sweep, so it must respect the largest N.
    let params = params_for(cli, n_max);
    let sweep_rows =
        sweep(&ns, trials, &params, cli.seed).map_err(|e| e.to_string())?;
    let (fit, fit_error) = match circle_pursuit::monte_carlo::fit_power_law(&sweep_rows) {
        Ok(f) => (
            Some(FitOut {
                prefactor: f.prefactor,
                exponent: f.exponent,
                rms_log_residual: f.rms_log_residual,
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let rows = sweep_rows
        .iter()
        .map(|r| SweepRowOut {
            n_bugs: r.n_bugs,
            p_coalesce: r.estimate.p_hat,
            std_err: r.estimate.std_err,
            ci95_low: r.estimate.ci95_low,
            ci95_high: r.estimate.ci95_high,
            undetermined: r.estimate.undetermined_count,
            reliable: r.estimate.is_reliable(),
        })
        .collect();
    let report = SweepFitReport {
        provenance: provenance(cli, &params, Some(trials)),
        n_grid: n_grid.to_string(),
        rows,
        fit,
        fit_error,
    };
    Ok(match format_or(cli, Format::Csv) {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
    })
}

fn region_name(region: PhaseRegion) -> &'static str {
    match region {
        PhaseRegion::CycleCcw => "cycle_ccw",
        PhaseRegion::CycleCw => "cycle_cw",
        PhaseRegion::GroupsPoint => "groups_point",
        PhaseRegion::UnstableCycleLine => "unstable_cycle_line",
        PhaseRegion::Coalesce => "coalesce",
    }
}

fn require_finite(name: &str, x: f64) -> Result<(), String> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be finite, got {x}"))
    }
}

fn cmd_analytic(cli: &Cli, query: &AnalyticQuery) -> Result<String, String> {
    if cli.format == Some(Format::Csv) {
        return Err(
            "analytic answers are single values; use --format json or the default text output"
                .into(),
        );
    }
    let json = cli.format == Some(Format::Json);
    let tool_version = VERSION.to_string();
    match query {
        AnalyticQuery::P { n } => {
            let p = exact_cycle_probability(*n).map_err(|e| e.to_string())?;
            let value: f64 = p.value();
            Ok(if json {
                to_json(&AnalyticReport::P {
                    tool_version,
                    n_bugs: *n,
                    numerator: p.numerator,
                    denominator: p.denominator,
                    value,
                })
            } else {
                format!("{p} = {value}\n")
            })
        }
        AnalyticQuery::Stab { alpha } => {
            let value: f64 = stability_probability_3(*alpha).map_err(|e| e.to_string())?;
            Ok(if json {
                to_json(&AnalyticReport::Stab {
                    tool_version,
                    alpha: *alpha,
                    value,
                })
            } else {
                format!("{value:.5}\n")
            })
        }
        AnalyticQuery::Classify3 { omega_1, omega_2 } => {
            require_finite("omega_1", *omega_1)?;
            require_finite("omega_2", *omega_2)?;
            let region = classify_3(*omega_1, *omega_2, DEFAULT_COINCIDENCE_TOL);
            Ok(if json {
                to_json(&AnalyticReport::Classify3 {
                    tool_version,
                    omega_1: *omega_1,
                    omega_2: *omega_2,
                    region: region_name(region).to_string(),
                })
            } else {
                format!("{}\n", region_name(region))
            })
        }
        AnalyticQuery::Classify4 {
            theta_2,
            theta_3,
            theta_4,
        } => {
            let outcome = classify_4(*theta_2, *theta_3, *theta_4, DEFAULT_COINCIDENCE_TOL)
                .map_err(|e| e.to_string())?;
            let name = match outcome {
                FourBugOutcome::Cycle => "cycle",
                FourBugOutcome::Coalesce => "coalesce",
            };
            Ok(if json {
                to_json(&AnalyticReport::Classify4 {
                    tool_version,
                    theta_2: *theta_2,
                    theta_3: *theta_3,
                    theta_4: *theta_4,
                    outcome: name.to_string(),
                })
            } else {
                format!("{name}\n")
            })
        }
        AnalyticQuery::Quad { resolution } => {
            if *resolution == 0 {
                return Err("quadrature resolution must be positive".into());
            }
            let half: f64 = four_bug_lower_half_probability(*resolution);
            let full: f64 = four_bug_probability_by_quadrature(*resolution);
            Ok(if json {
                to_json(&AnalyticReport::Quad {
                    tool_version,
                    resolution: *resolution,
                    lower_half_mass: half,
                    p_cycle_4: full,
                })
            } else {
                format!(
                    "p_cycle(4) ≈ {} (lower-half mass {}, resolution {resolution})\n",
                    sig12(full),
                    sig12(half)
                )
            })
        }
    }
}
