//! Command-line front end: `solve`, `check`, `oracle`, `list`.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unknown keys,
//! unreadable files), 2 on solve or diagnostic failures.

use crate::error::Error;
use crate::geometry::{ManifoldKind, Point};
use crate::harness::checks::problem_checks;
use crate::harness::diagnostics::diagnostics;
use crate::harness::oracle::{run_oracle_trials, OracleTrialConfig};
use crate::harness::trace::{json_report, trace_rows, write_json_report, write_trace_csv};
use crate::harness::{build_problem, registry, resolve_problem_arg};
use crate::solver::{solve, SolveStatus, SolverConfig};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

/// Direction-solver agreement thresholds enforced by the `oracle` command.
const ORACLE_V_TOL: f64 = 1e-7;
const ORACLE_THETA_TOL: f64 = 1e-9;
const ORACLE_STATIONARITY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "mcsd",
    version,
    about = "Multicriteria steepest descent on Riemannian manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the descent on a registry benchmark or a problem file
    Solve {
        /// Registry key (see `list`) or path to a JSON problem file
        #[arg(long)]
        problem: String,
        /// Start point override, comma-separated coordinates
        #[arg(long)]
        p0: Option<String>,
        /// Armijo sufficient-decrease factor in (0,1)
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Criticality residual at which to stop
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        #[arg(long, default_value_t = 64)]
        max_halvings: u32,
        /// Write the per-iteration trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Keep every Nth record in the trace
        #[arg(long, default_value_t = 1)]
        trace_every: usize,
        /// Write the JSON run report here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Reference point for Fejér/distance diagnostics, comma-separated;
        /// defaults to the run's own terminal point
        #[arg(long)]
        ref_point: Option<String>,
    },
    /// Gradient and geometry self-checks, printed as a pass/fail table
    Check {
        /// Restrict to one registry key; default sweeps all benchmarks
        #[arg(long)]
        problem: Option<String>,
        /// Random feasible points per gradient check
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized direction-solver vs enumeration-oracle comparison
    Oracle {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Fix the number of objectives; default sweeps 1..=5
        #[arg(long)]
        m: Option<usize>,
        /// Fix the dimension parameter; default sweeps 2..=8
        #[arg(long)]
        n: Option<usize>,
        /// Fix the manifold (euclidean|octant|hypercube|spd); default sweeps all
        #[arg(long)]
        manifold: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the benchmark registry
    List,
}

/// Parses and executes a full argv (program name included); returns the
/// process exit status.
pub fn run_cli<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Io(_) => 1,
                _ => 2,
            }
        }
    }
}

fn parse_coords(s: &str, expected: usize, what: &str) -> crate::error::Result<Vec<f64>> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|e| Error::Usage(format!("cannot parse {what} '{s}': {e}")))?;
    if coords.len() != expected {
        return Err(Error::Usage(format!(
            "{what} must have {expected} comma-separated coordinates, got {}",
            coords.len()
        )));
    }
    Ok(coords)
}

fn dispatch(cli: Cli) -> crate::error::Result<i32> {
    match cli.command {
        Command::List => {
            println!("{:<12} {:<20} {:>2}  DEFAULT P0", "KEY", "MANIFOLD", "M");
            for spec in registry::<f64>() {
                let p0: Vec<String> = spec
                    .default_p0
                    .coords
                    .iter()
                    .map(|x| format!("{x}"))
                    .collect();
                println!(
                    "{:<12} {:<20} {:>2}  ({})",
                    spec.key,
                    format!(
                        "{}(n={})",
                        spec.manifold.kind.name(),
                        spec.manifold.dim_param
                    ),
                    spec.m,
                    p0.join(", ")
                );
            }
            Ok(0)
        }
        Command::Oracle {
            trials,
            m,
            n,
            manifold,
            seed,
        } => {
            let manifold = manifold.as_deref().map(ManifoldKind::parse).transpose()?;
            if let Some(m) = m {
                if !(1..=12).contains(&m) {
                    return Err(Error::Usage(format!("--m must lie in 1..=12, got {m}")));
                }
            }
            if let Some(n) = n {
                if n == 0 {
                    return Err(Error::Usage("--n must be at least 1".into()));
                }
            }
            let cfg = OracleTrialConfig {
                trials,
                m,
                n,
                manifold,
                seed,
            };
            let summary = run_oracle_trials::<f64>(&cfg)?;
            let pass = summary.max_v_deviation <= ORACLE_V_TOL
                && summary.max_theta_deviation <= ORACLE_THETA_TOL
                && summary.max_stationarity_residual <= ORACLE_STATIONARITY_TOL;
            println!("trials                  {}", summary.trials);
            println!(
                "max |v_solver - v_oracle|_p   {:.3e}  (tol {ORACLE_V_TOL:.0e})",
                summary.max_v_deviation
            );
            println!(
                "max |theta_s - theta_o|       {:.3e}  (tol {ORACLE_THETA_TOL:.0e})",
                summary.max_theta_deviation
            );
            println!(
                "max stationarity residual     {:.3e}  (tol {ORACLE_STATIONARITY_TOL:.0e})",
                summary.max_stationarity_residual
            );
            println!("{}", if pass { "PASS" } else { "FAIL" });
            Ok(if pass { 0 } else { 2 })
        }
        Command::Check {
            problem,
            points,
            seed,
        } => {
            let specs = match problem {
                Some(key) => vec![resolve_problem_arg(&key)?],
                None => registry::<f64>(),
            };
            let mut all_pass = true;
            println!("{:<12} {:<20} {:<6} DETAIL", "PROBLEM", "CHECK", "STATUS");
            for spec in specs {
                let prob = build_problem(&spec)?;
                for c in problem_checks(&prob, points, seed)? {
                    all_pass &= c.pass;
                    println!(
                        "{:<12} {:<20} {:<6} {}",
                        spec.key,
                        c.name,
                        if c.pass { "PASS" } else { "FAIL" },
                        c.detail
                    );
                }
            }
            Ok(if all_pass { 0 } else { 2 })
        }
        Command::Solve {
            problem,
            p0,
            beta,
            eps,
            max_iters,
            max_halvings,
            trace,
            trace_every,
            report: report_path,
            ref_point,
        } => {
            let mut spec = resolve_problem_arg(&problem)?;
            let ambient = spec.manifold.ambient_len();
            if let Some(p0) = p0 {
                spec.default_p0 = Point::new(parse_coords(&p0, ambient, "--p0")?);
            }
            let explicit_ref = ref_point
                .map(|s| parse_coords(&s, ambient, "--ref-point").map(Point::new))
                .transpose()?;
            let prob = build_problem(&spec)?;
            let cfg = SolverConfig {
                beta,
                eps_crit: eps,
                max_iters,
                max_halvings,
            };
            let report = solve(&prob, &spec.default_p0, &cfg)?;

            // Without an explicit reference, diagnostics use the run's own
            // terminal point: by monotone decrease it is the one point
            // constructively certified to weakly dominate the whole
            // trajectory.
            let ref_for_diag = explicit_ref
                .clone()
                .unwrap_or_else(|| report.final_point.clone());
            let diag = diagnostics(&prob, &report, Some(&ref_for_diag), beta)?;

            println!(
                "problem {} on {}(n={}), m = {}",
                spec.key,
                spec.manifold.kind.name(),
                spec.manifold.dim_param,
                spec.m
            );
            println!(
                "status {} after {} iterations",
                report.status.name(),
                report.records.len()
            );
            println!(
                "final criticality {:.3e} (eps {:.1e})",
                report.final_criticality, eps
            );
            let ff: Vec<String> = report
                .final_f
                .values
                .iter()
                .map(|x| format!("{x:.9e}"))
                .collect();
            println!("final F = [{}]", ff.join(", "));
            println!("monotone decrease: {}", diag.monotone_ok);
            if let Some(fejer) = diag.fejer.as_ref().filter(|f| !f.slacks.is_empty()) {
                println!(
                    "fejer max slack {:.3e} ({}; {} membership violations)",
                    fejer.max_slack(),
                    if explicit_ref.is_some() {
                        "explicit reference"
                    } else {
                        "own terminal point"
                    },
                    fejer.membership_violations.len()
                );
            }
            println!(
                "summability: lhs {:.6e} <= rhs {:.6e}: {}",
                diag.summability.lhs, diag.summability.rhs, diag.summability.ok
            );

            if let Some(path) = trace {
                let m_desc = prob.manifold();
                let rows = trace_rows(&report, &m_desc, explicit_ref.as_ref(), trace_every)?;
                write_trace_csv(&path, &rows, spec.m, explicit_ref.is_some())?;
                println!("trace written to {}", path.display());
            }
            if let Some(path) = report_path {
                write_json_report(&path, &json_report(&report, &cfg, &diag))?;
                println!("report written to {}", path.display());
            }
            Ok(match report.status {
                SolveStatus::Critical | SolveStatus::MaxIters => 0,
                SolveStatus::LineSearchFailure => 2,
            })
        }
    }
}
