//! `glyap`: batch reports on random-matrix growth statistics.
//!
//! Five subcommands wire the library end to end: Jack-polynomial expansions,
//! the rotation-averaged determinant series (exact and Monte Carlo),
//! Lyapunov-spectrum estimation with a cross-estimator check, the averaged
//! growth-inequality campaign, and a fixed reproduction suite.  Every run
//! emits one report (JSON or CSV) whose config echo pins the run down;
//! identical configurations give byte-identical JSON under `--no-timestamp`.
//!
//! Exit codes: 0 all checks pass, 1 a verification verdict failed, 2 bad
//! usage or configuration, 3 data-dependent numeric degeneracy.

mod commands;
mod config;
mod report;
mod specs;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use commands::Globals;
use config::{parse_config_file, CliError, Resolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (use json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "glyap",
    version,
    about = "Growth statistics of random invertible matrices: exponent \
             estimators, subspace averages, and exact rotation-group \
             character sums"
)]
struct Cli {
    /// Master seed for all random streams
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of deterministic worker substreams for Monte Carlo loops
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Report format: json or csv
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write the report to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Require an explicit seed (reject the built-in default)
    #[arg(long, global = true)]
    strict: bool,

    /// Omit timestamp and wall-clock fields for byte-stable output
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// key=value file with defaults; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a Jack polynomial in the monomial basis, exactly
    Jack(JackArgs),
    /// Evaluate the rotation-averaged determinant series for a matrix pair
    Jmat(JmatArgs),
    /// Estimate a Lyapunov spectrum and cross-check partial sums
    Lyap(LyapArgs),
    /// Run the averaged growth-inequality verification for one model
    VerifyMain(VerifyArgs),
    /// Reproduce the fixed worked examples and golden checks
    ReproPaper(ReproArgs),
}

#[derive(Args, Debug)]
pub struct JackArgs {
    /// Partition parts, comma separated (example: 3,1,1)
    #[arg(long)]
    pub lambda: Option<String>,
    /// Deformation parameter as p, p/q, or a finite decimal [default: 2]
    #[arg(long)]
    pub alpha: Option<String>,
    /// Number of variables [default: number of parts]
    #[arg(long)]
    pub nvars: Option<usize>,
}

#[derive(Args, Debug)]
pub struct JmatArgs {
    /// Subspace dimension (rows of the inverted-side factor)
    #[arg(long)]
    pub k: Option<usize>,
    /// Ambient dimension; the direct-side factor is (n-k) x (n-k)
    #[arg(long)]
    pub n: Option<usize>,
    /// Matrix spec for the inverted-side factor (k x k)
    #[arg(long)]
    pub b1: Option<String>,
    /// Matrix spec for the direct-side factor ((n-k) x (n-k))
    #[arg(long)]
    pub b2: Option<String>,
    /// Evaluation points, comma separated [default: 1]
    #[arg(long)]
    pub u: Option<String>,
    /// Add Monte Carlo confirmation rows
    #[arg(long)]
    pub mc: bool,
    /// Samples for --mc [default: 100000]
    #[arg(long)]
    pub mc_samples: Option<u64>,
    /// Reproduce a fixed worked example instead: 4-2 or 6-2
    #[arg(long)]
    pub paper_example: Option<String>,
}

#[derive(Args, Debug)]
pub struct LyapArgs {
    /// Model spec: point:<matrix>, lefthaar:<matrix>, or twosided:s1,s2,...
    #[arg(long)]
    pub model: Option<String>,
    /// Ambient dimension (needed when the model spec uses randsv)
    #[arg(long)]
    pub n: Option<usize>,
    /// Cocycle steps [default: 10000]
    #[arg(long)]
    pub m: Option<usize>,
    /// Partial-sum depths, comma separated [default: 1..=n]
    #[arg(long)]
    pub k: Option<String>,
    /// Samples for the subspace estimator [default: 100000]
    #[arg(long)]
    pub nsamples: Option<u64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Model spec: point:<matrix>, lefthaar:<matrix>, or twosided:s1,s2,...
    #[arg(long)]
    pub model: Option<String>,
    /// Ambient dimension (needed when the model spec uses randsv)
    #[arg(long)]
    pub n: Option<usize>,
    /// Subspace dimension under test
    #[arg(long)]
    pub k: Option<usize>,
    /// Samples per Monte Carlo estimate [default: 100000]
    #[arg(long)]
    pub nsamples: Option<u64>,
    /// Samples for the exact per-factor comparison [default: 1000]
    #[arg(long)]
    pub pointwise_samples: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    /// Add Monte Carlo confirmation rows for the worked examples
    #[arg(long)]
    pub mc_confirm: bool,
    /// Samples for --mc-confirm [default: 100000]
    #[arg(long)]
    pub mc_samples: Option<u64>,
}

const GLOBAL_KEYS: &[&str] = &["seed", "workers", "format", "out", "strict", "no-timestamp"];

fn command_keys(cmd: &Command) -> &'static [&'static str] {
    match cmd {
        Command::Jack(_) => &["lambda", "alpha", "nvars"],
        Command::Jmat(_) => &["k", "n", "b1", "b2", "u", "mc", "mc-samples", "paper-example"],
        Command::Lyap(_) => &["model", "n", "m", "k", "nsamples"],
        Command::VerifyMain(_) => &["model", "n", "k", "nsamples", "pointwise-samples"],
        Command::ReproPaper(_) => &["mc-confirm", "mc-samples"],
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Jack(_) => "jack",
        Command::Jmat(_) => "jmat",
        Command::Lyap(_) => "lyap",
        Command::VerifyMain(_) => "verify-main",
        Command::ReproPaper(_) => "repro-paper",
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config_file(&text, &path.display().to_string())?
        }
        None => BTreeMap::new(),
    };

    let mut res = Resolver::new(file);
    let accepted: Vec<&str> =
        GLOBAL_KEYS.iter().chain(command_keys(&cli.command)).copied().collect();
    res.check_keys(&accepted)?;

    let seed_given = res.is_given("seed", cli.seed.is_some());
    let strict = res.switch("strict", cli.strict)?;
    if strict && !seed_given {
        return Err(CliError::usage("--strict requires an explicit --seed"));
    }
    let seed = res.with_default("seed", cli.seed, 0)?;
    let workers = res.with_default("workers", cli.workers, 4)?;
    if workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let format = res.with_default("format", cli.format, Format::Json)?;
    let out: Option<String> = res.opt("out", cli.out.map(|p| p.display().to_string()))?;
    let no_timestamp = res.switch("no-timestamp", cli.no_timestamp)?;

    let globals = Globals { seed, workers };
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::Jack(a) => commands::cmd_jack(a, &mut res)?,
        Command::Jmat(a) => commands::cmd_jmat(a, &globals, &mut res)?,
        Command::Lyap(a) => commands::cmd_lyap(a, &globals, &mut res)?,
        Command::VerifyMain(a) => commands::cmd_verify_main(a, &globals, &mut res)?,
        Command::ReproPaper(a) => commands::cmd_repro_paper(a, &globals, &mut res)?,
    };
    debug_assert_eq!(report.command, command_name(&cli.command));

    report.config = res.echo.clone();
    if !no_timestamp {
        report.timestamp =
            Some(SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
        report.wall_seconds = Some(started.elapsed().as_secs_f64());
    }

    let rendered = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))?,
        None => print!("{rendered}"),
    }

    Ok(if report.any_failure() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
