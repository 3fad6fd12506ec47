//! Command-line front-end.
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 usage or
//! config error, 2 runtime error, 3 verification failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds;
use crate::error::{Error, Result};
use crate::harness::{
    check_oracle_inequality, check_risk_hull, emit_figure_data, figure_csv, run_monte_carlo,
    SelectionFamily, SimConfig,
};
use crate::numfmt::fmt_sig;
use crate::seqmodel::{read_sequence_csv, NoiseProfile};
use crate::selectors::{
    estimate_minimax, select_adaptive_threshold, select_exhaustive, select_greedy_full_subset,
    select_sparse_oracle, select_universal, SelectorResult,
};

#[derive(Parser, Debug)]
#[command(
    name = "seqselect",
    version,
    about = "Penalized subset selection for sparse signals in heterogeneous Gaussian noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Significant digits for floating-point output
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,

    /// Worker threads for Monte Carlo runs (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a Monte Carlo study from a JSON config and write a report CSV
    Simulate(SimulateArgs),
    /// Run one selector on `lambda,x,sigma` observations and print JSON
    Estimate(EstimateArgs),
    /// Print minimax risk bounds for a noise profile as JSON
    Bounds(BoundsArgs),
    /// Write per-coordinate figure data for one replication as CSV
    Figure(FigureArgs),
    /// Numerical verification suites; exits 3 when a check fails
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// JSON simulation config
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Override the config's number of coordinates
    #[arg(long)]
    n: Option<usize>,
    /// Override the config's sparsity
    #[arg(long)]
    gamma: Option<f64>,
    /// Override the config's replication count
    #[arg(long = "n_reps", alias = "n-reps")]
    n_reps: Option<u64>,
    /// Override the config's seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EstimateMethod {
    AdaptiveThreshold,
    GreedyFullSubset,
    Exhaustive,
    Universal,
    SparseOracle,
    Minimax,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Input CSV with header `lambda,x,sigma`
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: EstimateMethod,
    /// Sparsity proportion; required by sparse_oracle and minimax
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ProfileKind {
    Linear,
    Fbm,
    Inverse,
    Custom,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Noise profile family
    #[arg(long, value_enum)]
    profile: Option<ProfileKind>,
    /// Number of coordinates (linear and fbm profiles)
    #[arg(long)]
    n: Option<usize>,
    /// Slope of the linear profile
    #[arg(long)]
    slope: Option<f64>,
    /// Noise level for fbm and inverse profiles
    #[arg(long)]
    eps: Option<f64>,
    /// Smoothness of the fbm profile, in [0, 1/2)
    #[arg(long)]
    alpha: Option<f64>,
    /// File of singular values b_lambda, one per line (inverse profile)
    #[arg(long)]
    b_file: Option<PathBuf>,
    /// File of sigma_lambda values, one per line (custom profile)
    #[arg(long)]
    sigma_file: Option<PathBuf>,
}

impl ProfileArgs {
    fn build(&self) -> Result<NoiseProfile> {
        let kind = self
            .profile
            .ok_or_else(|| Error::Config("--profile is required".into()))?;
        let need_n = || self.n.ok_or_else(|| Error::Config("--n is required".into()));
        match kind {
            ProfileKind::Linear => {
                let slope = self
                    .slope
                    .ok_or_else(|| Error::Config("--slope is required for --profile linear".into()))?;
                NoiseProfile::linear(need_n()?, slope)
            }
            ProfileKind::Fbm => {
                let eps = self
                    .eps
                    .ok_or_else(|| Error::Config("--eps is required for --profile fbm".into()))?;
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Config("--alpha is required for --profile fbm".into()))?;
                NoiseProfile::fbm(need_n()?, eps, alpha)
            }
            ProfileKind::Inverse => {
                let path = self.b_file.as_ref().ok_or_else(|| {
                    Error::Config("--b-file is required for --profile inverse".into())
                })?;
                let b = read_value_file(path)?;
                NoiseProfile::inverse(&b, self.eps.unwrap_or(1.0))
            }
            ProfileKind::Custom => {
                let path = self.sigma_file.as_ref().ok_or_else(|| {
                    Error::Config("--sigma-file is required for --profile custom".into())
                })?;
                NoiseProfile::new(read_value_file(path)?)
            }
        }
    }
}

fn read_value_file(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        values.push(t.parse::<f64>().map_err(|_| Error::MalformedInput {
            line: idx + 1,
            msg: format!("cannot parse `{t}` as a number"),
        })?);
    }
    Ok(values)
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long)]
    gamma: f64,
    /// Cube cap for the entropy bound; default (n gamma)^(-1/4)
    #[arg(long)]
    c: Option<f64>,
    /// Number of top variances for the concentrated lower bound
    #[arg(long)]
    top_r: Option<usize>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// JSON simulation config
    #[arg(long)]
    config: PathBuf,
    /// Replication index to render
    #[arg(long, default_value_t = 0)]
    rep: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum VerifySuite {
    Hull,
    Oracle,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: VerifySuite,
    /// Noise profile (hull suite)
    #[command(flatten)]
    profile: ProfileArgs,
    /// Replications for the hull suite
    #[arg(long = "n_reps", alias = "n-reps", default_value_t = 10_000)]
    n_reps: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON simulation config (oracle suite)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Slack parameter of the oracle inequality, in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Selection family for the oracle suite
    #[arg(long, value_enum, default_value_t = SelectionFamily::Threshold)]
    family: SelectionFamily,
}

/// Parse `std::env::args` and run; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
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
    if let Some(threads) = cli.threads {
        // ignored if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let precision = cli.precision;
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, precision),
        Command::Estimate(args) => cmd_estimate(args, precision),
        Command::Bounds(args) => cmd_bounds(args, precision),
        Command::Figure(args) => cmd_figure(args, precision),
        Command::Verify(args) => cmd_verify(args, precision),
    }
}

fn fail(code: i32, err: &Error) -> i32 {
    eprintln!("error: {err}");
    let mut source = std::error::Error::source(err);
    while let Some(e) = source {
        eprintln!("  caused by: {e}");
        source = e.source();
    }
    code
}

/// Print to stdout, treating a closed pipe (e.g. `| head`) as success.
fn emit(text: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn load_config(path: &PathBuf) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    SimConfig::from_json_str(&text)
}

fn cmd_simulate(args: SimulateArgs, precision: usize) -> i32 {
    let mut config = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(gamma) = args.gamma {
        config.gamma = gamma;
    }
    if let Some(n_reps) = args.n_reps {
        config.n_reps = n_reps;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Err(e) = config.validate() {
        return fail(1, &e);
    }
    let report = match run_monte_carlo(&config) {
        Ok(r) => r,
        Err(e) => return fail(2, &e),
    };
    if let Err(e) = std::fs::write(&args.out, report.to_csv_string(precision)) {
        return fail(2, &e.into());
    }
    0
}

fn cmd_estimate(args: EstimateArgs, precision: usize) -> i32 {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return fail(1, &e.into()),
    };
    let data = match read_sequence_csv(&text) {
        Ok(d) => d,
        Err(e) => return fail(1, &e),
    };
    let needs_gamma = matches!(args.method, EstimateMethod::SparseOracle | EstimateMethod::Minimax);
    if needs_gamma && args.gamma.is_none() {
        return fail(
            1,
            &Error::Config(format!("--gamma is required for method {:?}", args.method)),
        );
    }
    let result: Result<SelectorResult> = {
        let ctx = crate::penalty::PenaltyContext::new(data.profile());
        match args.method {
            EstimateMethod::AdaptiveThreshold => select_adaptive_threshold(&data, &ctx),
            EstimateMethod::GreedyFullSubset => select_greedy_full_subset(&data, &ctx),
            EstimateMethod::Exhaustive => select_exhaustive(&data, &ctx),
            EstimateMethod::Universal => select_universal(&data),
            EstimateMethod::SparseOracle => select_sparse_oracle(&data, args.gamma.unwrap()),
            EstimateMethod::Minimax => estimate_minimax(&data, args.gamma.unwrap()),
        }
    };
    match result {
        Ok(r) => match emit(&r.to_json_string(precision)) {
            Ok(()) => 0,
            Err(e) => fail(2, &e.into()),
        },
        Err(e) => fail(2, &e),
    }
}

fn cmd_bounds(args: BoundsArgs, precision: usize) -> i32 {
    if !(args.gamma > 0.0 && args.gamma < 1.0) {
        return fail(
            1,
            &Error::InvalidArgument(format!("gamma must lie in (0, 1), got {}", args.gamma)),
        );
    }
    if let Some(c) = args.c {
        if !(c > 0.0 && c < 1.0) {
            return fail(
                1,
                &Error::InvalidArgument(format!("c must lie in (0, 1), got {c}")),
            );
        }
    }
    let profile = match args.profile.build() {
        Ok(p) => p,
        Err(e) => return fail(1, &e),
    };
    match bounds::report(&profile, args.gamma, args.c, args.top_r) {
        Ok(rep) => match emit(&rep.rounded(precision).to_json_string()) {
            Ok(()) => 0,
            Err(e) => fail(2, &e.into()),
        },
        Err(e @ Error::InvalidArgument(_)) => fail(1, &e),
        Err(e) => fail(2, &e),
    }
}

fn cmd_figure(args: FigureArgs, precision: usize) -> i32 {
    let config = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    if let Err(e) = config.validate() {
        return fail(1, &e);
    }
    let rows = match emit_figure_data(&config, args.rep) {
        Ok(r) => r,
        Err(e) => return fail(2, &e),
    };
    if let Err(e) = std::fs::write(&args.out, figure_csv(&rows, precision)) {
        return fail(2, &e.into());
    }
    0
}

fn cmd_verify(args: VerifyArgs, precision: usize) -> i32 {
    match args.suite {
        VerifySuite::Hull => {
            let profile = match args.profile.build() {
                Ok(p) => p,
                Err(e) => return fail(1, &e),
            };
            let check = match check_risk_hull(&profile, args.n_reps, args.seed) {
                Ok(c) => c,
                Err(e @ Error::InvalidArgument(_)) => return fail(1, &e),
                Err(e) => return fail(2, &e),
            };
            let passed = check.passes();
            let text = format!(
                "suite: hull\nestimate: {} (stderr {})\nbound: {}\nresult: {}",
                fmt_sig(check.estimate, precision),
                fmt_sig(check.stderr, precision),
                fmt_sig(check.bound, precision),
                if passed { "PASS" } else { "FAIL" },
            );
            if let Err(e) = emit(&text) {
                return fail(2, &e.into());
            }
            if passed {
                0
            } else {
                3
            }
        }
        VerifySuite::Oracle => {
            let Some(config_path) = args.config.as_ref() else {
                return fail(1, &Error::Config("--config is required for the oracle suite".into()));
            };
            let config = match load_config(config_path) {
                Ok(c) => c,
                Err(e) => return fail(1, &e),
            };
            let check = match check_oracle_inequality(&config, args.delta, args.family) {
                Ok(c) => c,
                Err(e @ Error::InvalidArgument(_)) => return fail(1, &e),
                Err(e @ Error::Config(_)) => return fail(1, &e),
                Err(e) => return fail(2, &e),
            };
            let passed = check.passes();
            let text = format!(
                "suite: oracle\nlhs: {}\nrhs: {} (omega {}, diff stderr {})\nresult: {}",
                fmt_sig(check.lhs, precision),
                fmt_sig(check.rhs, precision),
                fmt_sig(check.omega, precision),
                fmt_sig(check.diff_stderr, precision),
                if passed { "PASS" } else { "FAIL" },
            );
            if let Err(e) = emit(&text) {
                return fail(2, &e.into());
            }
            if passed {
                0
            } else {
                3
            }
        }
    }
}
