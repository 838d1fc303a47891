//! plawlab command line: prime generation, oracle verification, and the
//! experiment suites, with reproducible seeded runs.
//!
//! Exit codes: 0 on success or a passing suite, 1 on a failing suite or a
//! runtime failure, 2 on usage errors (bad flags, bad values).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use plawlab::coin::{CoinModel, RngSpec};
use plawlab::error::Error;
use plawlab::experiments::{
    self, ExperimentReport, ReportRows, Verdict, DEFAULT_SCAN_LIMIT,
};
use plawlab::species::{self, Convention, TableMode};

const SEED_ENV: &str = "PLAWLAB_SEED";

#[derive(Parser)]
#[command(
    name = "plawlab",
    version,
    about = "Prime Law generation, classical verification, and seeded prime-distribution experiments"
)]
struct Cli {
    /// Master seed for stochastic suites; PLAWLAB_SEED is consulted when
    /// the flag is absent, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suite output rendering: text summary, primary CSV on stdout, or an
    /// SVG chart added to the run directory.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Root under which run directories are created.
    #[arg(long, global = true, default_value = "runs")]
    runs_dir: PathBuf,

    /// Exact output directory, bypassing run-directory naming.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Fair,
    Prime,
}

impl From<ModelArg> for CoinModel {
    fn from(m: ModelArg) -> CoinModel {
        match m {
            ModelArg::Fair => CoinModel::Fair,
            ModelArg::Prime => CoinModel::PrimeCoin,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate primes with the species table and print them.
    Generate {
        /// Upper bound (inclusive); accepts 1eK shorthand.
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, default_value = "implicit", value_parser = parse_mode)]
        mode: TableMode,
        /// paper: 1 and the odd primes; standard: textbook primes.
        #[arg(long, default_value = "paper", value_parser = parse_convention)]
        convention: Convention,
    },
    /// Verify the generator against the classical oracles (equivalence suite).
    Verify {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, default_value = "implicit", value_parser = parse_mode)]
        mode: TableMode,
    },
    /// Tabulate pi(N) against Li(N) at checkpoints (error-margin suite).
    Pnt {
        /// Comma-separated checkpoints, 1eK shorthand accepted.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_count)]
        checkpoints: Vec<u64>,
    },
    /// Run seeded coin-model batches with their law checks.
    Coin {
        #[arg(long, value_enum, default_value_t = ModelArg::Fair)]
        model: ModelArg,
        /// Tosses per trial (fair) or draw range end (prime).
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Contrast consecutive heads in prime-coin trials with the absence of
    /// adjacent true primes (consecutive suite).
    Consecutive {
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// True-prime pair scan bound; raised to n if smaller.
        #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT, value_parser = parse_count)]
        scan_limit: u64,
    },
    /// Replay a run directory from its config.txt and verify the stored
    /// artifacts reproduce byte for byte.
    Report {
        /// A run directory previously written by a suite command.
        dir: PathBuf,
    },
}

/// Exact integer, plain or `MeK` shorthand (e.g. 1e6, 25e2).
fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Some((mantissa, exponent)) = t.split_once(['e', 'E']) {
        let m: u64 = mantissa
            .parse()
            .map_err(|_| format!("invalid count {t:?}"))?;
        let e: u32 = exponent
            .parse()
            .map_err(|_| format!("invalid count {t:?}"))?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| m.checked_mul(p))
            .ok_or_else(|| format!("count {t:?} does not fit in 64 bits"));
    }
    t.parse().map_err(|_| format!("invalid count {t:?}"))
}

fn parse_mode(s: &str) -> Result<TableMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be a 64-bit unsigned integer, got {raw:?}")),
        Err(_) => Ok(0),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // Bad requests are usage errors; runtime failures are not.
        Error::Domain { .. }
        | Error::Capacity { .. }
        | Error::Overflow { .. }
        | Error::UnknownAlgorithm { .. } => 2,
        Error::Io { .. } | Error::WindowExhausted { .. } => 1,
    }
}

fn verdict_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Pass | Verdict::Informational => 0,
        Verdict::Fail => 1,
    }
}

/// Persists a suite report and prints it per --format. The run directory
/// always receives config, verdict, and CSVs; --format svg adds the chart.
fn emit_report(cli: &Cli, report: &ExperimentReport) -> Result<u8, Error> {
    let with_svg = cli.format == Format::Svg;
    let dir = match &cli.out {
        Some(dir) => {
            experiments::write_into(report, dir, with_svg)?;
            dir.clone()
        }
        None => experiments::write_run_dir(report, &cli.runs_dir, with_svg)?,
    };
    match cli.format {
        Format::Csv => {
            // Pipeable: the suite's primary CSV on stdout, summary on stderr.
            let primary = match &report.rows {
                ReportRows::Checks => "checks.csv",
                ReportRows::Pnt { .. } => "pnt.csv",
                ReportRows::Coin(_) => "coin.csv",
            };
            let content = std::fs::read_to_string(dir.join(primary)).map_err(|e| Error::Io {
                path: dir.join(primary),
                source: e,
            })?;
            print!("{content}");
            eprint!("{}", experiments::text_summary(report));
            eprintln!("run directory: {}", dir.display());
        }
        Format::Text | Format::Svg => {
            print!("{}", experiments::text_summary(report));
            println!("run directory: {}", dir.display());
        }
    }
    Ok(verdict_exit(report.verdict))
}

fn run(cli: &Cli, spec: RngSpec) -> Result<u8, Error> {
    match &cli.command {
        Command::Generate {
            limit,
            mode,
            convention,
        } => {
            eprintln!(
                "config: command=generate limit={limit} mode={mode} convention={convention}"
            );
            let seq = species::generate(*limit, *mode)?.to_convention(*convention);
            let line: Vec<String> = seq.iter().map(|p| p.to_string()).collect();
            println!("{}", line.join(" "));
            Ok(0)
        }
        Command::Verify { limit, mode } => {
            let report = experiments::suite_equivalence(*limit, *mode)?;
            emit_report(cli, &report)
        }
        Command::Pnt { checkpoints } => {
            let report = experiments::suite_error_margin(checkpoints, spec)?;
            emit_report(cli, &report)
        }
        Command::Coin { model, n, trials } => {
            let report = experiments::suite_coin((*model).into(), *n, *trials, spec)?;
            emit_report(cli, &report)
        }
        Command::Consecutive {
            n,
            trials,
            scan_limit,
        } => {
            let report = experiments::suite_consecutive(*n, *trials, spec, *scan_limit)?;
            emit_report(cli, &report)
        }
        Command::Report { dir } => {
            let (report, mismatches) = experiments::replay_run_dir(dir)?;
            print!("{}", experiments::text_summary(&report));
            if mismatches.is_empty() {
                println!("replay of {} reproduced every artifact", dir.display());
                Ok(verdict_exit(report.verdict))
            } else {
                println!(
                    "replay of {} DIVERGED in: {}",
                    dir.display(),
                    mismatches.join(", ")
                );
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = match resolve_seed(cli.seed) {
        Ok(seed) => seed,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, RngSpec::new(seed)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
