//! The acceptance gate: every release-blocking property in one target,
//! one printed line per criterion. Criteria run in order inside a single
//! test so the timing budgets are not distorted by parallel siblings.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use plawlab::analytics;
use plawlab::classic::{self, SieveBlock};
use plawlab::coin::{self, CoinModel, RngSpec};
use plawlab::experiments;
use plawlab::species::{self, PrimeLawCache, SpeciesTable, TableMode};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn criterion(&mut self, num: u32, name: &str, pass: bool, elapsed: Duration) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "[acceptance] criterion {num} ({name}): {verdict} ({:.3} s)",
            elapsed.as_secs_f64()
        );
        if !pass {
            self.failures.push(format!("criterion {num} ({name})"));
        }
    }
}

const GOLDEN_1A: &str = "1,1,2\n2,2,4\n";
const GOLDEN_1B: &str = "1,1,2,3,4,5\n2,2,4,6,8,10\n3,3,6,9,12,15\n5,5,10,15,20,25\n";

fn criterion_1(gate: &mut Gate) {
    let start = Instant::now();
    let mut table = SpeciesTable::initial(TableMode::Literal);
    let mut pass = table.to_csv().unwrap() == GOLDEN_1A;
    pass &= table.step().unwrap() == 3;
    pass &= table.step().unwrap() == 5;
    pass &= table.to_csv().unwrap() == GOLDEN_1B;
    pass &= table.smallest_missing().unwrap() == 7;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_millis(1);
    gate.criterion(1, "Table-1 fidelity", pass, elapsed);
}

fn criterion_2(gate: &mut Gate) {
    let start = Instant::now();
    let limit = 1_000_000u64;
    let plaw = species::generate(limit, TableMode::Implicit).unwrap();

    // Independent expectation from the segmented sieve path.
    let base = classic::sieve_primes(1_000).unwrap();
    let mut standard = Vec::new();
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (limit + 1).min(lo + (1 << 18));
        let mut block = SieveBlock::new(lo, hi).unwrap();
        block.sieve(base.values());
        standard.extend(block.primes());
        lo = hi;
    }
    let mut expected = vec![1u64];
    expected.extend(standard.iter().copied().filter(|&p| p != 2));

    let mut pass = standard.len() == 78_498;
    pass &= plaw.len() == 78_498;
    pass &= plaw.values() == expected.as_slice();
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(10);
    gate.criterion(2, "oracle equivalence at 1e6", pass, elapsed);
}

fn criterion_3(gate: &mut Gate) {
    let start = Instant::now();
    let mut cache = PrimeLawCache::new();
    let mut pass = true;
    for n in 1..=100_000u64 {
        if classic::is_addition_prime(n) != cache.is_prime(n).unwrap() {
            pass = false;
            break;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(10);
    gate.criterion(3, "addition-definition agreement to 1e5", pass, elapsed);
}

fn checkpoints() -> Vec<u64> {
    vec![1_000, 10_000, 100_000, 1_000_000, 10_000_000]
}

fn criterion_4(gate: &mut Gate) {
    let start = Instant::now();
    let rows = analytics::pnt_table(&checkpoints()).unwrap();
    let mut pass = rows.len() == 5;
    for row in &rows {
        pass &= row.err.abs() <= row.err_bound && !row.flagged;
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    gate.criterion(4, "error margin within sqrt(N) ln N", pass, elapsed);
}

fn criterion_5(gate: &mut Gate) {
    let start = Instant::now();
    let mut pass = true;
    for n in checkpoints() {
        let a = analytics::li(n as f64).unwrap();
        let b = analytics::li_fixed_grid(n as f64).unwrap();
        pass &= ((a - b) / b).abs() <= 1e-6;
    }
    gate.criterion(5, "independent Li evaluators agree", pass, start.elapsed());
}

fn criterion_6(gate: &mut Gate) {
    let start = Instant::now();
    let n = 10_000u64;
    let runs = coin::run_many(CoinModel::Fair, n, RngSpec::new(0), 1_000).unwrap();
    let heads: Vec<f64> = runs.iter().map(|r| r.heads as f64).collect();
    let (_, sd) = coin::mean_and_sample_std(&heads);
    let mut pass = (45.0..=55.0).contains(&sd);
    let within = heads
        .iter()
        .filter(|&&h| (h - 5_000.0).abs() <= 100.0)
        .count() as f64
        / 1_000.0;
    pass &= (0.93..=0.97).contains(&within);
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    gate.criterion(6, "fair-coin square-root error law", pass, elapsed);
}

fn criterion_7(gate: &mut Gate) {
    let start = Instant::now();
    let runs = coin::run_many(CoinModel::PrimeCoin, 10_000, RngSpec::new(0), 100).unwrap();
    let with_pair = runs
        .iter()
        .filter(|r| r.first_consecutive_pair.is_some())
        .count();
    let mut pass = with_pair >= 99;
    pass &= runs.iter().all(|r| !r.matches_true_primes);
    pass &= classic::adjacent_prime_pairs(10_000_000).unwrap() == vec![2];
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    gate.criterion(7, "prime-coin consecutive-heads contrast", pass, elapsed);
}

fn criterion_8(gate: &mut Gate) {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let mut pass = true;

    // Every suite's run directory must replay bit-identically from its
    // own config.txt.
    let reports = vec![
        experiments::suite_equivalence(2_000, TableMode::Implicit).unwrap(),
        experiments::suite_error_margin(&[1_000, 10_000], RngSpec::new(0)).unwrap(),
        experiments::suite_coin(CoinModel::Fair, 2_000, 50, RngSpec::new(0)).unwrap(),
        experiments::suite_consecutive(1_000, 100, RngSpec::new(0), 10_000).unwrap(),
    ];
    for report in &reports {
        let dir = experiments::write_run_dir(report, tmp.path(), false).unwrap();
        let (_, mismatches) = experiments::replay_run_dir(&dir).unwrap();
        pass &= mismatches.is_empty();
    }

    // Seed independence of the deterministic rows, seed dependence of the
    // stochastic ones, compared through the written artifacts.
    let a_dir = tmp.path().join("seed-a");
    let b_dir = tmp.path().join("seed-b");
    let a = experiments::suite_error_margin(&[1_000, 10_000], RngSpec::new(1)).unwrap();
    let b = experiments::suite_error_margin(&[1_000, 10_000], RngSpec::new(2)).unwrap();
    experiments::write_into(&a, &a_dir, false).unwrap();
    experiments::write_into(&b, &b_dir, false).unwrap();
    let read = |d: &std::path::Path, f: &str| std::fs::read_to_string(d.join(f)).unwrap();
    pass &= read(&a_dir, "pnt.csv") == read(&b_dir, "pnt.csv");
    pass &= read(&a_dir, "coin.csv") != read(&b_dir, "coin.csv");

    gate.criterion(8, "reproducibility from config echo", pass, start.elapsed());
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    criterion_5(&mut gate);
    criterion_6(&mut gate);
    criterion_7(&mut gate);
    criterion_8(&mut gate);
    assert!(
        gate.failures.is_empty(),
        "acceptance failures: {}",
        gate.failures.join(", ")
    );
}
