//! `olslab` command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use olslab::checker::{GuaranteeChecker, Suite};
use olslab::constructions::{counterexample, tightness_example};
use olslab::experiment::{boundary_csv, phase_csv, run_boundary_sweep, run_phase_experiment, ExperimentConfig};
use olslab::io::{read_sensing_matrix, read_signal, write_matrix, write_signal};
use olslab::ols::{recovered_exactly, run_ols};
use olslab::rip::{exact_rip_constant, rip_definition_spot_check};
use olslab::{Error, SelectionRule, SignalModel, RNG_ALGORITHM};

#[derive(Parser, Debug)]
#[command(name = "olslab", about = "Orthogonal least squares recovery laboratory")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; tabular commands default to csv, the rest to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the OLS solver.
    Ols {
        #[command(subcommand)]
        action: OlsAction,
    },
    /// Exact restricted isometry constants.
    Rip {
        #[command(subcommand)]
        action: RipAction,
    },
    /// Write the explicit extremal instances to files.
    Construct {
        #[command(subcommand)]
        action: ConstructAction,
    },
    /// Check the recovery bounds numerically on a matrix.
    Verify(VerifyArgs),
    /// Monte-Carlo and boundary experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
}

#[derive(Subcommand, Debug)]
enum OlsAction {
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        sparsity: usize,
        #[arg(long, default_value = "projection")]
        rule: SelectionRule,
        /// Write the full per-iteration trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum RipAction {
    Compute {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        order: usize,
        /// Also test the certificate on this many random sparse unit vectors.
        #[arg(long)]
        spot_check: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct InstanceOut {
    #[arg(long = "K")]
    k: usize,
    #[arg(long)]
    out_matrix: PathBuf,
    #[arg(long)]
    out_signal: PathBuf,
}

#[derive(Subcommand, Debug)]
enum ConstructAction {
    Counterexample {
        #[command(flatten)]
        target: InstanceOut,
        #[arg(long)]
        delta: String,
    },
    Tightness {
        #[command(flatten)]
        target: InstanceOut,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    sparsity: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "all")]
    suite: Suite,
}

#[derive(Subcommand, Debug)]
enum ExperimentAction {
    Phase {
        /// Comma-separated measurement counts, e.g. `8,10,12`.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long)]
        n: usize,
        /// Comma-separated sparsities.
        #[arg(long = "K", value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "gaussian")]
        signal: SignalModel,
        #[arg(long, default_value = "projection")]
        rule: SelectionRule,
    },
    Boundary {
        #[arg(long = "K")]
        k: usize,
        /// Comma-separated values in (0, 1); fractions like `2/3` are exact.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<String>,
        #[arg(long, default_value = "projection")]
        rule: SelectionRule,
    },
}

/// Failure of a check that must hold (exit code 2).
struct Violation(String);

enum Failure {
    Input(Error),
    Violation(Violation),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(Error::Io(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(Error::Json(e))
    }
}

type CmdResult = Result<(), Failure>;

fn parse_real(s: &str) -> Result<f64, Error> {
    let bad = || Error::InvalidParameter(format!("not a number: {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            Ok(num / den)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct SolveSummary {
    rule: SelectionRule,
    sparsity: usize,
    selected: Vec<usize>,
    true_support: Vec<usize>,
    support_recovered: bool,
    exact_recovery: bool,
    final_residual_norm: f64,
    estimate: Vec<f64>,
}

fn ols_solve(cli: &Cli, matrix: &Path, signal: &Path, k: usize, rule: SelectionRule, trace_out: Option<&Path>) -> CmdResult {
    let a = read_sensing_matrix::<f64>(matrix)?;
    let x = read_signal::<f64>(signal)?;
    let y = a.apply(&x)?;
    let trace = run_ols(&a, &y, k, rule)?;
    if let Some(p) = trace_out {
        std::fs::write(p, json(&trace)?)?;
    }
    let summary = SolveSummary {
        rule,
        sparsity: k,
        selected: trace.chosen_indices(),
        true_support: x.support().indices().to_vec(),
        support_recovered: trace.support().same_elements(x.support()),
        exact_recovery: recovered_exactly(&trace, &x),
        final_residual_norm: trace.iterations.last().map_or(0.0, |it| it.residual_norm),
        estimate: trace.final_estimate.values().to_vec(),
    };
    let text = if cli.format == Some(Format::Json) {
        json(&summary)?
    } else {
        let mut s = String::new();
        for it in &trace.iterations {
            writeln!(
                s,
                "k={} chosen={} residual_norm={:e}{}",
                it.k,
                it.chosen_index,
                it.residual_norm,
                if it.degenerate { " (degenerate)" } else { "" }
            )
            .expect("string write");
        }
        writeln!(s, "selected: {:?}", summary.selected).expect("string write");
        writeln!(s, "support recovered: {}", summary.support_recovered).expect("string write");
        writeln!(s, "exact recovery: {}", summary.exact_recovery).expect("string write");
        s
    };
    emit(cli.out.as_deref(), &text)?;
    trace
        .check_invariants()
        .map_err(|e| Failure::Violation(Violation(format!("trace invariant broken: {e}"))))
}

#[derive(Serialize)]
struct RipSummary {
    order: usize,
    delta: f64,
    lambda_min: f64,
    lambda_max: f64,
    witness_subset: Vec<usize>,
    subsets_enumerated: u64,
    rip_violated: bool,
    spot_check_trials: Option<usize>,
    spot_check_worst_exceedance: Option<f64>,
}

fn rip_compute(cli: &Cli, matrix: &Path, order: usize, spot: Option<usize>) -> CmdResult {
    let a = read_sensing_matrix::<f64>(matrix)?;
    let est = exact_rip_constant(&a, order)?;
    let worst = spot
        .map(|trials| rip_definition_spot_check(&a, &est, trials, cli.seed))
        .transpose()?;
    let summary = RipSummary {
        order,
        delta: est.delta,
        lambda_min: est.lambda_min,
        lambda_max: est.lambda_max,
        witness_subset: est.witness_subset.indices().to_vec(),
        subsets_enumerated: est.subsets_enumerated,
        rip_violated: est.rip_violated,
        spot_check_trials: spot,
        spot_check_worst_exceedance: worst,
    };
    let text = if cli.format == Some(Format::Json) {
        json(&summary)?
    } else {
        let mut s = format!(
            "order: {}\ndelta: {}\nlambda_min: {}\nlambda_max: {}\nwitness: {}\nsubsets: {}\nrip_violated: {}\n",
            order, est.delta, est.lambda_min, est.lambda_max, est.witness_subset, est.subsets_enumerated, est.rip_violated
        );
        if let Some(w) = worst {
            writeln!(s, "spot_check_worst_exceedance: {w:e}").expect("string write");
        }
        s
    };
    emit(cli.out.as_deref(), &text)?;
    match worst {
        Some(w) if w > 1e-9 => Err(Failure::Violation(Violation(format!(
            "sampled vector exceeds the certificate by {w:e}"
        )))),
        _ => Ok(()),
    }
}

fn construct(cli: &Cli, action: &ConstructAction) -> CmdResult {
    let (target, (a, x)) = match action {
        ConstructAction::Counterexample { target, delta } => (target, counterexample::<f64>(target.k, parse_real(delta)?)?),
        ConstructAction::Tightness { target } => (target, tightness_example::<f64>(target.k)?),
    };
    write_matrix(&target.out_matrix, a.matrix())?;
    write_signal(&target.out_signal, &x)?;
    let y = a.apply(&x)?;
    let scores = a.matrix().tr_mul_vec(&y)?;
    let text = if cli.format == Some(Format::Json) {
        #[derive(Serialize)]
        struct Built<'a> {
            rows: usize,
            cols: usize,
            first_iteration_correlations: Vec<f64>,
            matrix_file: &'a Path,
            signal_file: &'a Path,
        }
        json(&Built {
            rows: a.rows(),
            cols: a.cols(),
            first_iteration_correlations: scores.iter().map(|s| s.abs()).collect(),
            matrix_file: &target.out_matrix,
            signal_file: &target.out_signal,
        })?
    } else {
        format!(
            "wrote {}x{} matrix to {} and signal to {}\n|<y, a_j>|: {:?}\n",
            a.rows(),
            a.cols(),
            target.out_matrix.display(),
            target.out_signal.display(),
            scores.iter().map(|s| s.abs()).collect::<Vec<_>>()
        )
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(())
}

fn verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let a = read_sensing_matrix::<f64>(&args.matrix)?;
    a.ensure_valid()?;
    let checker = GuaranteeChecker::new(&a);
    let report = checker.run_suites(args.suite, args.sparsity, args.trials, cli.seed)?;
    let text = if cli.format == Some(Format::Json) {
        json(&report)?
    } else {
        let mut s = format!(
            "delta_{} = {}  C_{} = {}\n",
            report.sparsity + 1,
            report.delta,
            report.sparsity,
            report.threshold
        );
        for suite in &report.suites {
            writeln!(
                s,
                "{:<9} {} checks={} failures={}{}{}",
                suite.suite,
                if suite.pass { "PASS" } else { "FAIL" },
                suite.checks,
                suite.failures,
                if suite.in_hypothesis { "" } else { " (out of hypothesis)" },
                suite.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default()
            )
            .expect("string write");
        }
        s
    };
    emit(cli.out.as_deref(), &text)?;
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Violation(Violation("a bound that must hold was violated".into())))
    }
}

fn experiment(cli: &Cli, action: &ExperimentAction) -> CmdResult {
    match action {
        ExperimentAction::Phase {
            m,
            n,
            k,
            trials,
            signal,
            rule,
        } => {
            let as_json = cli.format == Some(Format::Json);
            let config = ExperimentConfig {
                m_range: m.clone(),
                n: *n,
                k_range: k.clone(),
                trials_per_cell: *trials,
                signal_model: *signal,
                rule: *rule,
                rng_seed: cli.seed,
                output_path: if as_json { None } else { cli.out.clone() },
            };
            if as_json {
                config.validate()?;
                if let Some(p) = &cli.out {
                    std::fs::File::create(p)?;
                }
            }
            let cells = run_phase_experiment::<f64>(&config)?;
            if as_json {
                emit(cli.out.as_deref(), &json(&cells)?)?;
            } else if cli.out.is_none() {
                print!("{}", phase_csv(&cells));
            }
            Ok(())
        }
        ExperimentAction::Boundary { k, grid, rule } => {
            let grid = grid.iter().map(|g| parse_real(g)).collect::<Result<Vec<f64>, _>>()?;
            let rows = run_boundary_sweep::<f64>(*k, &grid, *rule)?;
            let text = if cli.format == Some(Format::Json) {
                json(&rows)?
            } else {
                boundary_csv(&rows)
            };
            emit(cli.out.as_deref(), &text)?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Ols {
            action:
                OlsAction::Solve {
                    matrix,
                    signal,
                    sparsity,
                    rule,
                    trace,
                },
        } => ols_solve(cli, matrix, signal, *sparsity, *rule, trace.as_deref()),
        Command::Rip {
            action: RipAction::Compute { matrix, order, spot_check },
        } => rip_compute(cli, matrix, *order, *spot_check),
        Command::Construct { action } => construct(cli, action),
        Command::Verify(args) => verify(cli, args),
        Command::Experiment { action } => experiment(cli, action),
    }
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(
        format!("{} (rng: {RNG_ALGORITHM})", env!("CARGO_PKG_VERSION")).into_boxed_str(),
    );
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(Violation(msg))) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(2)
        }
    }
}
