//! Command-line front end.
//!
//! Exit codes: `0` success, `1` cross-check disagreement, `2` invalid
//! arguments or input, `3` numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::linalg::BipartiteOperator;
use crate::montecarlo::monte_carlo_ep_with_tol;
use crate::opfile::{load_operator, FILE_UNITARITY_TOL};
use crate::oracle::entangling_power_permutation_oracle;
use crate::power::entangling_power_with_tol;
use crate::sweep::{default_range, run_sweep, time_average, Methods, Model, SweepConfig, DEFAULT_MC_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Monte Carlo agreement window, in standard errors.
pub const MC_SIGMAS: f64 = 5.0;
/// Oracle agreement tolerance.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "entpow", version, about = "Entangling power of bipartite unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the entangling power over a parameter range as CSV.
    Sweep(SweepArgs),
    /// Print the long-time average of the entangling power.
    TimeAverage(TimeAverageArgs),
    /// Entangling power of a unitary read from an operator file.
    Ep(EpArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the machine's parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// ising, heisenberg or generic.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 2)]
    d1: usize,
    #[arg(long, default_value_t = 2)]
    d2: usize,
    /// Range start (θ for ising, t for heisenberg, exponent p of U^p for generic).
    #[arg(long = "from", allow_hyphen_values = true)]
    from: Option<f64>,
    /// Range end; defaults to one period of the model's curve.
    #[arg(long = "to", allow_hyphen_values = true)]
    to: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Comma-separated subset of analytic, matrix, mc, oracle.
    #[arg(long, default_value = "analytic,matrix")]
    methods: String,
    /// Operator file for the generic model.
    #[arg(long)]
    operator: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = FILE_UNITARITY_TOL)]
    unitarity_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct TimeAverageArgs {
    /// ising or heisenberg.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 2)]
    d1: usize,
    #[arg(long, default_value_t = 2)]
    d2: usize,
    /// Also print the quadrature of the matrix-formula curve and the difference.
    #[arg(long)]
    numeric: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct EpArgs {
    /// Operator file.
    file: PathBuf,
    /// Comma-separated subset of matrix, mc, oracle.
    #[arg(long, default_value = "matrix")]
    methods: String,
    #[arg(long, default_value_t = FILE_UNITARITY_TOL)]
    unitarity_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure>
where
    T: Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn load(path: &Path, tol: f64) -> Result<BipartiteOperator, Failure> {
    load_operator(path, tol).map_err(|e| match e {
        // An unreadable or malformed file is an input problem, whatever the cause.
        Error::Numeric(m) => usage(m),
        other => other.into(),
    })
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model: Model = args.model.parse()?;
    let methods = Methods::parse_list(&args.methods)?;
    let (lo, hi) = default_range(model, args.d2);
    let start = args.from.unwrap_or(lo);
    let end = args.to.unwrap_or(hi);
    let mut cfg = match model {
        Model::Generic => {
            let path = args
                .operator
                .as_ref()
                .ok_or_else(|| usage("the generic model needs --operator FILE"))?;
            SweepConfig::generic(load(path, args.unitarity_tol)?, start, end, args.steps, methods)
        }
        _ => {
            if args.operator.is_some() {
                return Err(usage("--operator only applies to the generic model"));
            }
            SweepConfig::new(model, args.d1, args.d2, start, end, args.steps, methods)
        }
    };
    cfg.mc_samples = args.common.mc_samples;
    cfg.seed = args.common.seed;
    cfg.unitarity_tol = args.unitarity_tol;
    cfg.validate()?;

    let result = with_threads(args.common.threads, || run_sweep(&cfg))??;
    let csv = result.to_csv();
    match args.out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}")))?,
    }
    Ok(EXIT_OK)
}

fn cmd_time_average(args: TimeAverageArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model: Model = args.model.parse()?;
    let report = with_threads(args.threads, || time_average(model, args.d1, args.d2, args.numeric))??;
    let mut text = format!("{}\n", report.closed_form);
    if let (Some(n), Some(diff)) = (report.numeric, report.abs_diff()) {
        text.push_str(&format!("numeric={n}\nabs_diff={diff:e}\n"));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn cmd_ep(args: EpArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let methods = Methods::parse_list(&args.methods)?;
    if methods.analytic {
        return Err(usage("no analytic value for an operator file"));
    }
    let op = load(&args.file, args.unitarity_tol)?;
    let tol = args.unitarity_tol;
    let samples = args.common.mc_samples;
    let seed = args.common.seed;
    if methods.mc && samples < 2 {
        return Err(usage("--mc-samples must be at least 2"));
    }

    let (ep, mc, oracle) = with_threads(args.common.threads, || -> Result<_, Error> {
        let ep = entangling_power_with_tol(&op, tol)?;
        let mc = if methods.mc {
            Some(monte_carlo_ep_with_tol(&op, samples, seed, tol)?)
        } else {
            None
        };
        let oracle = if methods.oracle {
            Some(entangling_power_permutation_oracle(&op)?)
        } else {
            None
        };
        Ok((ep, mc, oracle))
    })??;

    let mut text = format!("ep_matrix={ep}\n");
    let mut consistent = true;
    if let Some(est) = mc {
        text.push_str(&format!(
            "ep_mc={}\nep_mc_stderr={}\nmc_samples={}\nseed={}\n",
            est.mean, est.std_error, est.samples, est.seed
        ));
        // A zero standard error only happens when every sample agrees.
        let window = (MC_SIGMAS * est.std_error).max(1e-12);
        if (est.mean - ep).abs() > window {
            consistent = false;
            let _ = writeln!(
                err,
                "monte carlo estimate {} is {:.2} standard errors from {ep}",
                est.mean,
                (est.mean - ep).abs() / est.std_error
            );
        }
    }
    if let Some(v) = oracle {
        text.push_str(&format!("ep_oracle={v}\n"));
        if (v - ep).abs() > ORACLE_TOL {
            consistent = false;
            let _ = writeln!(err, "permutation oracle {v} differs from {ep} by {:e}", (v - ep).abs());
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write output: {e}")))?;
    Ok(if consistent { EXIT_OK } else { EXIT_INCONSISTENT })
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::TimeAverage(a) => cmd_time_average(a, out),
        Command::Ep(a) => cmd_ep(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
