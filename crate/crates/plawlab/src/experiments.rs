//! Named experiment suites and their reproducibility surface.
//!
//! A suite runs a fixed set of checks and returns an [`ExperimentReport`]
//! whose `config_echo` is, by construction, enough to re-run the suite
//! bit-identically: [`replay_config`] turns an echo back into a fresh
//! report, and [`replay_run_dir`] does that for a persisted run directory
//! and byte-compares the regenerated artifacts against the stored ones.
//! Timestamps never enter data files; they live only in directory names and
//! the `created_at` line of `config.txt`.
//!
//! Run directory layout:
//! `runs/<suite>-<timestamp>[-s<seed>]/{config.txt, *.csv, *.svg, verdict.txt}`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analytics::{self, PntRow};
use crate::classic;
use crate::coin::{self, CoinModel, CoinRun, RngSpec};
use crate::error::{Error, Result};
use crate::species::{self, TableMode};
use crate::svg;

/// Checkpoints below this are outside the error bound's sensible range;
/// they are reported but do not drive a verdict.
pub const SENSIBLE_MIN_CHECKPOINT: u64 = 1_000;

/// Required relative agreement between the two Li evaluation routes.
pub const LI_AGREEMENT_REL_TOL: f64 = 1e-6;

/// Prime-coin runs contrasted against the deterministic error margin.
pub const CONTRAST_TRIALS: u64 = 20;

/// The contrast draws at min(largest checkpoint, this).
pub const CONTRAST_MAX_N: u64 = 100_000;

/// Minimum fraction of prime-coin trials that must contain a consecutive
/// heads pair, in percent.
pub const PAIR_RATE_MIN_PERCENT: u64 = 99;

/// Default true-prime pair scan bound for the consecutive suite.
pub const DEFAULT_SCAN_LIMIT: u64 = 10_000_000;

/// Statistical band checks need at least this many trials to be meaningful;
/// below it they are reported as informational.
pub const STAT_MIN_TRIALS: u64 = 100;

/// Sample σ must sit within ±10% of the theoretical σ.
pub const STD_BAND_REL: f64 = 0.10;

/// Acceptable fraction of fair-coin trials inside ±2σ.
pub const COVERAGE_BAND: (f64, f64) = (0.93, 0.97);

/// Sample mean must sit within this many standard errors of expectation.
pub const MEAN_SE_BAND: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        })
    }
}

/// One named check inside a suite. Informational checks are recorded but
/// never fail a run; a suite whose meaningful checks all pass is `pass`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    pub detail: String,
}

impl CheckRecord {
    fn new(name: &str, passed: bool, informational: bool, detail: String) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            passed,
            informational,
            detail,
        }
    }
}

/// Suite-specific result rows.
#[derive(Clone, Debug, PartialEq)]
pub enum ReportRows {
    /// The checks themselves are the rows (equivalence suite).
    Checks,
    /// Checkpoint table plus the prime-coin contrast runs.
    Pnt {
        rows: Vec<PntRow>,
        contrast: Vec<CoinRun>,
    },
    /// Trial rows from a coin suite.
    Coin(Vec<CoinRun>),
}

/// A finished suite run.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub suite_name: String,
    /// RFC 3339; excluded from replay comparison.
    pub created_at: String,
    /// `key=value` pairs sufficient to re-run the suite bit-identically.
    pub config_echo: Vec<(String, String)>,
    pub checks: Vec<CheckRecord>,
    pub rows: ReportRows,
    /// Stream family used by stochastic rows, written into coin CSV
    /// headers; None for fully deterministic suites.
    pub rng: Option<RngSpec>,
    pub verdict: Verdict,
}

fn verdict_from(checks: &[CheckRecord]) -> Verdict {
    let meaningful: Vec<&CheckRecord> = checks.iter().filter(|c| !c.informational).collect();
    if meaningful.is_empty() {
        Verdict::Informational
    } else if meaningful.iter().all(|c| c.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn kv(key: &str, value: impl fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

/// Equivalence of the species-table generator with the classical oracles:
/// exact set equality against the sieve, pointwise agreement with the
/// addition-based definition up to min(limit, 10^5), and determinism of a
/// repeated run.
pub fn suite_equivalence(limit: u64, mode: TableMode) -> Result<ExperimentReport> {
    if limit < 2 {
        return Err(Error::domain(format!(
            "equivalence suite needs limit >= 2, got {limit}"
        )));
    }
    let plaw = species::generate(limit, mode)?;
    let expected = classic::sieve_primes(limit)?.to_convention(species::Convention::Paper);
    let set_equal = plaw.values() == expected.values();
    let mut checks = vec![CheckRecord::new(
        "plaw-matches-sieve",
        set_equal,
        false,
        format!(
            "generator produced {} values, sieve-derived set has {}",
            plaw.len(),
            expected.len()
        ),
    )];

    let bound = limit.min(100_000);
    let disagreements = (1..=bound)
        .filter(|&n| classic::is_addition_prime(n) != plaw.contains(n))
        .count();
    checks.push(CheckRecord::new(
        "addition-definition-agrees",
        disagreements == 0,
        false,
        format!("{disagreements} disagreements over 1..={bound}"),
    ));

    let rerun = species::generate(limit, mode)?;
    checks.push(CheckRecord::new(
        "replay-identical",
        rerun == plaw,
        false,
        "second generation compared value for value".to_string(),
    ));

    let verdict = verdict_from(&checks);
    Ok(ExperimentReport {
        suite_name: "equivalence".to_string(),
        created_at: now_rfc3339(),
        config_echo: vec![
            kv("suite", "equivalence"),
            kv("limit", limit),
            kv("mode", mode),
        ],
        checks,
        rows: ReportRows::Checks,
        rng: None,
        verdict,
    })
}

/// π vs Li at the given checkpoints. Pass means no checkpoint's |err|
/// exceeds √N·ln N and the two Li routes agree; checkpoints below
/// [`SENSIBLE_MIN_CHECKPOINT`] downgrade the verdict to informational.
/// A seeded prime-coin contrast shows the stochastic model's error spread
/// next to the single deterministic margin.
pub fn suite_error_margin(checkpoints: &[u64], spec: RngSpec) -> Result<ExperimentReport> {
    match (checkpoints.first(), checkpoints.last()) {
        (Some(&first), Some(&last)) => {
            if first < 100 || last > 100_000_000 {
                return Err(Error::domain(format!(
                    "error-margin checkpoints must lie in [100, 100000000], got [{first}, {last}]"
                )));
            }
        }
        _ => {
            return Err(Error::domain(
                "error-margin suite needs at least one checkpoint".to_string(),
            ))
        }
    }
    let rows = analytics::pnt_table(checkpoints)?;
    let sensible = rows.iter().filter(|r| r.n >= SENSIBLE_MIN_CHECKPOINT).count();

    let worst = rows
        .iter()
        .map(|r| r.err.abs() / r.err_bound)
        .fold(0.0f64, f64::max);
    let mut checks = vec![CheckRecord::new(
        "error-within-bound",
        rows.iter().all(|r| !r.flagged),
        false,
        format!("worst |err|/bound = {worst:.6} over {} checkpoints", rows.len()),
    )];

    let mut worst_rel = 0.0f64;
    for row in &rows {
        let other = analytics::li_fixed_grid(row.n as f64)?;
        let rel = ((row.li - other) / other).abs();
        worst_rel = worst_rel.max(rel);
    }
    checks.push(CheckRecord::new(
        "li-routes-agree",
        worst_rel <= LI_AGREEMENT_REL_TOL,
        false,
        format!("worst relative gap {worst_rel:.3e}, tolerance {LI_AGREEMENT_REL_TOL:.0e}"),
    ));

    checks.push(CheckRecord::new(
        "li-above-first-order",
        rows.iter().all(|r| r.li > r.n_over_ln),
        false,
        "Li(N) exceeds N/ln N at every checkpoint".to_string(),
    ));

    // Contrast: the deterministic margin is one number; the coin's margin
    // is a distribution whose spread dwarfs it.
    let contrast_n = checkpoints.last().copied().unwrap().min(CONTRAST_MAX_N);
    let contrast = coin::run_many(CoinModel::PrimeCoin, contrast_n, spec, CONTRAST_TRIALS)?;
    let li_c = analytics::li(contrast_n as f64)?;
    let coin_errs: Vec<f64> = contrast.iter().map(|r| r.heads as f64 - li_c).collect();
    let (_, spread) = coin::mean_and_sample_std(&coin_errs);
    let det_err = (classic::prime_count(contrast_n)? as f64 - li_c).abs();
    checks.push(CheckRecord::new(
        "coin-contrast-spread",
        spread > det_err,
        true,
        format!(
            "coin error spread {spread:.6} vs deterministic |err| {det_err:.6} at N = {contrast_n}"
        ),
    ));

    let mut verdict = verdict_from(&checks);
    if verdict == Verdict::Pass && sensible == 0 {
        verdict = Verdict::Informational;
    }
    Ok(ExperimentReport {
        suite_name: "error_margin".to_string(),
        created_at: now_rfc3339(),
        config_echo: vec![
            kv("suite", "error_margin"),
            kv(
                "checkpoints",
                checkpoints
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            kv("seed", spec.master_seed()),
            kv("rng", spec.algorithm()),
        ],
        checks,
        rows: ReportRows::Pnt { rows, contrast },
        rng: Some(spec),
        verdict,
    })
}

/// Seeded batch of one coin model with the model's law checks: the fair
/// coin's heads must have sample σ within ±10% of √(n/4) with ±2σ coverage
/// in the normal band, the prime coin's mean heads must sit within
/// [`MEAN_SE_BAND`] standard errors of Σ 1/ln m. Band checks are
/// informational below [`STAT_MIN_TRIALS`] trials.
pub fn suite_coin(
    model: CoinModel,
    n: u64,
    trials: u64,
    spec: RngSpec,
) -> Result<ExperimentReport> {
    let runs = coin::run_many(model, n, spec, trials)?;
    let heads: Vec<f64> = runs.iter().map(|r| r.heads as f64).collect();
    let (mean, sample_sd) = coin::mean_and_sample_std(&heads);
    let informational = trials < STAT_MIN_TRIALS;
    let mut checks = Vec::new();
    match model {
        CoinModel::Fair => {
            let sigma = (n as f64 / 4.0).sqrt();
            checks.push(CheckRecord::new(
                "sample-std-in-band",
                (sample_sd - sigma).abs() <= STD_BAND_REL * sigma,
                informational,
                format!("sample σ {sample_sd:.6}, theoretical {sigma:.6}, band ±10%"),
            ));
            let center = n as f64 / 2.0;
            let inside = heads
                .iter()
                .filter(|&&h| (h - center).abs() <= 2.0 * sigma)
                .count() as f64
                / trials as f64;
            checks.push(CheckRecord::new(
                "two-sigma-coverage",
                (COVERAGE_BAND.0..=COVERAGE_BAND.1).contains(&inside),
                informational,
                format!(
                    "{inside:.6} of trials within ±2σ of n/2, band [{}, {}]",
                    COVERAGE_BAND.0, COVERAGE_BAND.1
                ),
            ));
        }
        CoinModel::PrimeCoin => {
            let expect = coin::prime_coin_expected_heads(n);
            let se = coin::prime_coin_heads_variance(n).sqrt() / (trials as f64).sqrt();
            checks.push(CheckRecord::new(
                "mean-near-expectation",
                (mean - expect).abs() <= MEAN_SE_BAND * se,
                informational,
                format!(
                    "mean heads {mean:.6} vs Σ1/ln m = {expect:.6}, {MEAN_SE_BAND} se = {:.6}",
                    MEAN_SE_BAND * se
                ),
            ));
        }
    }
    let rerun = coin::run_many(model, n, spec, trials)?;
    checks.push(CheckRecord::new(
        "replay-identical",
        rerun == runs,
        false,
        "full batch regenerated from the same spec".to_string(),
    ));

    let verdict = verdict_from(&checks);
    Ok(ExperimentReport {
        suite_name: "coin".to_string(),
        created_at: now_rfc3339(),
        config_echo: vec![
            kv("suite", "coin"),
            kv("model", model),
            kv("n", n),
            kv("trials", trials),
            kv("seed", spec.master_seed()),
            kv("rng", spec.algorithm()),
        ],
        checks,
        rows: ReportRows::Coin(runs),
        rng: Some(spec),
        verdict,
    })
}

/// The consecutive-pair contrast: true primes beyond (2, 3) never sit next
/// to each other (scanned to max(n, scan_limit)), while almost every
/// prime-coin trial tosses consecutive heads somewhere, and no trial's
/// toss sequence reproduces the true primes.
pub fn suite_consecutive(
    n: u64,
    trials: u64,
    spec: RngSpec,
    scan_limit: u64,
) -> Result<ExperimentReport> {
    if n < 1_000 {
        return Err(Error::domain(format!(
            "consecutive suite needs n >= 1000, got {n}"
        )));
    }
    if trials < STAT_MIN_TRIALS {
        return Err(Error::domain(format!(
            "consecutive suite needs at least {STAT_MIN_TRIALS} trials, got {trials}"
        )));
    }
    let scan = scan_limit.max(n);
    let pairs = classic::adjacent_prime_pairs(scan)?;
    let beyond: Vec<u64> = pairs.into_iter().filter(|&p| p != 2).collect();
    let mut checks = vec![CheckRecord::new(
        "no-true-adjacent-pairs",
        beyond.is_empty(),
        false,
        if beyond.is_empty() {
            format!("sieve scan to {scan} found only (2, 3)")
        } else {
            format!("unexpected adjacent prime pairs at {beyond:?}")
        },
    )];

    let runs = coin::run_many(CoinModel::PrimeCoin, n, spec, trials)?;
    let with_pair = runs
        .iter()
        .filter(|r| r.first_consecutive_pair.is_some())
        .count() as u64;
    checks.push(CheckRecord::new(
        "coin-pairs-frequent",
        with_pair * 100 >= PAIR_RATE_MIN_PERCENT * trials,
        false,
        format!("{with_pair} of {trials} trials tossed consecutive heads"),
    ));
    let matching = runs.iter().filter(|r| r.matches_true_primes).count();
    checks.push(CheckRecord::new(
        "no-coin-matches-primes",
        matching == 0,
        false,
        format!("{matching} trials reproduced the true prime indicator"),
    ));

    let verdict = verdict_from(&checks);
    Ok(ExperimentReport {
        suite_name: "consecutive".to_string(),
        created_at: now_rfc3339(),
        config_echo: vec![
            kv("suite", "consecutive"),
            kv("n", n),
            kv("trials", trials),
            kv("scan_limit", scan),
            kv("seed", spec.master_seed()),
            kv("rng", spec.algorithm()),
        ],
        checks,
        rows: ReportRows::Coin(runs),
        rng: Some(spec),
        verdict,
    })
}

/// Output format of [`render_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Csv,
    Svg,
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn checks_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("name,passed,informational,detail\n");
    for c in &report.checks {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.name,
            c.passed as u8,
            c.informational as u8,
            csv_field(&c.detail)
        ));
    }
    out
}

fn pnt_csv(rows: &[PntRow]) -> String {
    let mut out = String::from("n,pi,li,n_over_ln,err,err_norm,err_bound,flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{}\n",
            r.n, r.pi, r.li, r.n_over_ln, r.err, r.err_norm, r.err_bound, r.flagged as u8
        ));
    }
    out
}

fn coin_csv(spec: RngSpec, runs: &[CoinRun]) -> String {
    let mut out = format!(
        "# rng={} master_seed={}\n",
        spec.algorithm(),
        spec.master_seed()
    );
    out.push_str("model,trial,seed,n,heads,first_pair,matches_true\n");
    for r in runs {
        let pair = r
            .first_consecutive_pair
            .map(|p| p.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.model, r.trial, r.seed, r.n, r.heads, pair, r.matches_true_primes as u8
        ));
    }
    out
}

fn verdict_text(report: &ExperimentReport) -> String {
    let mut out = format!("{}\n", report.verdict);
    for c in &report.checks {
        let status = if c.informational {
            if c.passed {
                "info(pass)"
            } else {
                "info(fail)"
            }
        } else if c.passed {
            "pass"
        } else {
            "fail"
        };
        out.push_str(&format!("check {}: {} ({})\n", c.name, status, c.detail));
    }
    out
}

fn report_svg(report: &ExperimentReport) -> Result<Option<(String, String)>> {
    match &report.rows {
        ReportRows::Checks => Ok(None),
        ReportRows::Pnt { rows, .. } => {
            let mut chart = svg::LineChart::new(
                "pi(N) - Li(N), normalized by sqrt(N)",
                "log10(N)",
                "normalized error",
            );
            let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).log10()).collect();
            chart.push(svg::Series::new(
                "(pi-Li)/sqrt(N)",
                xs.iter()
                    .zip(rows)
                    .map(|(&x, r)| (x, r.err_norm))
                    .collect(),
            ));
            chart.push(svg::Series::new(
                "ln(N)",
                xs.iter().zip(rows).map(|(&x, r)| (x, (r.n as f64).ln())).collect(),
            ));
            chart.push(svg::Series::new(
                "-ln(N)",
                xs.iter()
                    .zip(rows)
                    .map(|(&x, r)| (x, -(r.n as f64).ln()))
                    .collect(),
            ));
            Ok(Some(("pnt.svg".to_string(), chart.render()?)))
        }
        ReportRows::Coin(runs) => {
            let expected = match runs.first().map(|r| (r.model, r.n)) {
                Some((CoinModel::Fair, n)) => n as f64 / 2.0,
                Some((CoinModel::PrimeCoin, n)) => coin::prime_coin_expected_heads(n),
                None => 0.0,
            };
            let devs: Vec<f64> = runs.iter().map(|r| r.heads as f64 - expected).collect();
            let lo = devs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = devs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (lo, hi) = if lo < hi { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
            let counts = svg::bin_samples(&devs, lo, hi, 16);
            let mut chart = svg::LineChart::new(
                "heads deviation from expectation",
                "heads - expected",
                "trials",
            );
            chart.push(svg::histogram_series("trials per bin", lo, hi, &counts));
            Ok(Some(("coin.svg".to_string(), chart.render()?)))
        }
    }
}

// Data files (name, content) for a report, CSV flavor.
fn csv_artifacts(report: &ExperimentReport) -> Vec<(String, String)> {
    let mut files = vec![("checks.csv".to_string(), checks_csv(report))];
    match (&report.rows, report.rng) {
        (ReportRows::Pnt { rows, contrast }, Some(spec)) => {
            files.push(("pnt.csv".to_string(), pnt_csv(rows)));
            if !contrast.is_empty() {
                files.push(("coin.csv".to_string(), coin_csv(spec, contrast)));
            }
        }
        (ReportRows::Pnt { rows, .. }, None) => {
            files.push(("pnt.csv".to_string(), pnt_csv(rows)));
        }
        (ReportRows::Coin(runs), Some(spec)) => {
            files.push(("coin.csv".to_string(), coin_csv(spec, runs)));
        }
        (ReportRows::Coin(_), None) | (ReportRows::Checks, _) => {}
    }
    files
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| Error::io(path.clone(), e))?;
    Ok(path)
}

/// Writes the report's data files of one format into `dir` and returns the
/// paths written. CSV always includes `checks.csv`; SVG produces one chart
/// for plottable suites and nothing for check-only reports.
pub fn render_report(
    report: &ExperimentReport,
    format: RenderFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match format {
        RenderFormat::Csv => {
            for (name, content) in csv_artifacts(report) {
                written.push(write_file(dir, &name, &content)?);
            }
        }
        RenderFormat::Svg => {
            if let Some((name, content)) = report_svg(report)? {
                written.push(write_file(dir, &name, &content)?);
            }
        }
    }
    Ok(written)
}

/// Writes the full run-directory contents (config, verdict, CSVs, optional
/// SVG) into an existing-or-created `dir`.
pub fn write_into(report: &ExperimentReport, dir: &Path, with_svg: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.to_path_buf(), e))?;
    let mut config = String::new();
    for (k, v) in &report.config_echo {
        config.push_str(&format!("{k}={v}\n"));
    }
    config.push_str(&format!("created_at={}\n", report.created_at));
    let mut written = vec![
        write_file(dir, "config.txt", &config)?,
        write_file(dir, "verdict.txt", &verdict_text(report))?,
    ];
    written.extend(render_report(report, RenderFormat::Csv, dir)?);
    if with_svg {
        written.extend(render_report(report, RenderFormat::Svg, dir)?);
    }
    Ok(written)
}

/// Creates `runs_root/<suite>-<timestamp>[-s<seed>]` and writes the report
/// into it, suffixing the name on collision.
pub fn write_run_dir(
    report: &ExperimentReport,
    runs_root: &Path,
    with_svg: bool,
) -> Result<PathBuf> {
    let now = chrono::Utc::now();
    let stamp = format!(
        "{}{:03}",
        now.format("%Y%m%dT%H%M%S"),
        now.timestamp_subsec_millis()
    );
    let base = match report.rng {
        Some(spec) => format!("{}-{}-s{}", report.suite_name, stamp, spec.master_seed()),
        None => format!("{}-{}", report.suite_name, stamp),
    };
    fs::create_dir_all(runs_root).map_err(|e| Error::io(runs_root.to_path_buf(), e))?;
    let mut dir = runs_root.join(&base);
    for attempt in 2.. {
        match fs::create_dir(&dir) {
            Ok(()) => break,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists && attempt < 100 => {
                dir = runs_root.join(format!("{base}-{attempt}"));
            }
            Err(e) => return Err(Error::io(dir, e)),
        }
    }
    write_into(report, &dir, with_svg)?;
    Ok(dir)
}

/// Human-readable summary printed by the CLI's text format.
pub fn text_summary(report: &ExperimentReport) -> String {
    let mut out = format!("suite {} -> {}\n", report.suite_name, report.verdict);
    let config: Vec<String> = report
        .config_echo
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    out.push_str(&format!("config: {}\n", config.join(" ")));
    for c in &report.checks {
        let mark = match (c.informational, c.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
    }
    match &report.rows {
        ReportRows::Checks => {}
        ReportRows::Pnt { rows, contrast } => {
            out.push_str(&format!(
                "rows: {} checkpoints, {} contrast trials\n",
                rows.len(),
                contrast.len()
            ));
        }
        ReportRows::Coin(runs) => {
            out.push_str(&format!("rows: {} trials\n", runs.len()));
        }
    }
    out
}

fn config_value<'a>(pairs: &'a [(String, String)], key: &str) -> Result<&'a str> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::domain(format!("config is missing the {key:?} key")))
}

fn parse_u64(value: &str, key: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| Error::domain(format!("config key {key:?} is not an integer: {value:?}")))
}

fn spec_from_config(pairs: &[(String, String)]) -> Result<RngSpec> {
    let seed = parse_u64(config_value(pairs, "seed")?, "seed")?;
    RngSpec::for_algorithm(config_value(pairs, "rng")?, seed)
}

/// Re-runs a suite from a config echo. The result's rows and checks are
/// bit-identical to the original run's; only `created_at` differs.
pub fn replay_config(pairs: &[(String, String)]) -> Result<ExperimentReport> {
    match config_value(pairs, "suite")? {
        "equivalence" => {
            let limit = parse_u64(config_value(pairs, "limit")?, "limit")?;
            let mode: TableMode = config_value(pairs, "mode")?.parse()?;
            suite_equivalence(limit, mode)
        }
        "error_margin" => {
            let spec = spec_from_config(pairs)?;
            let checkpoints = config_value(pairs, "checkpoints")?
                .split(',')
                .map(|c| parse_u64(c, "checkpoints"))
                .collect::<Result<Vec<u64>>>()?;
            suite_error_margin(&checkpoints, spec)
        }
        "coin" => {
            let spec = spec_from_config(pairs)?;
            let model = match config_value(pairs, "model")? {
                "fair" => CoinModel::Fair,
                "prime" => CoinModel::PrimeCoin,
                other => {
                    return Err(Error::domain(format!("unknown coin model {other:?}")))
                }
            };
            let n = parse_u64(config_value(pairs, "n")?, "n")?;
            let trials = parse_u64(config_value(pairs, "trials")?, "trials")?;
            suite_coin(model, n, trials, spec)
        }
        "consecutive" => {
            let spec = spec_from_config(pairs)?;
            let n = parse_u64(config_value(pairs, "n")?, "n")?;
            let trials = parse_u64(config_value(pairs, "trials")?, "trials")?;
            let scan = parse_u64(config_value(pairs, "scan_limit")?, "scan_limit")?;
            suite_consecutive(n, trials, spec, scan)
        }
        other => Err(Error::domain(format!("unknown suite {other:?}"))),
    }
}

/// Parses a `config.txt` of `key=value` lines.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
    let mut pairs = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::domain(format!("malformed config line {line:?} in {}", path.display()))
        })?;
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}

/// Replays the suite recorded in `dir/config.txt` and byte-compares the
/// regenerated `verdict.txt` and CSV files against the stored ones.
/// Returns the fresh report and the names of files that differ or are
/// missing; an empty list is the reproducibility guarantee holding.
pub fn replay_run_dir(dir: &Path) -> Result<(ExperimentReport, Vec<String>)> {
    let config = read_config(&dir.join("config.txt"))?;
    let report = replay_config(&config)?;
    let mut fresh = vec![("verdict.txt".to_string(), verdict_text(&report))];
    fresh.extend(csv_artifacts(&report));
    let mut mismatches = Vec::new();
    for (name, content) in fresh {
        let path = dir.join(&name);
        match fs::read_to_string(&path) {
            Ok(stored) if stored == content => {}
            Ok(_) => mismatches.push(name),
            Err(_) => mismatches.push(format!("{name} (missing)")),
        }
    }
    Ok((report, mismatches))
}
