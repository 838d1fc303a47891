//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plawlab(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_plawlab"));
    cmd.args(args);
    // Keep the ambient environment from leaking a seed into tests.
    cmd.env_remove("PLAWLAB_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    plawlab(args).output().expect("binary should execute")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

#[test]
fn generate_prints_paper_primes() {
    let out = run(&["generate", "--limit", "11"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 3 5 7 11\n");
}

#[test]
fn generate_supports_conventions_and_modes() {
    let out = run(&["generate", "--limit", "11", "--convention", "standard"]);
    assert_eq!(stdout(&out), "2 3 5 7 11\n");
    let out = run(&["generate", "--limit", "30", "--mode", "literal"]);
    assert_eq!(stdout(&out), "1 3 5 7 11 13 17 19 23 29\n");
    let out = run(&["generate", "--limit", "1"]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn generate_accepts_shorthand_counts() {
    let out = run(&["generate", "--limit", "1e2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).split_whitespace().count(), 25);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["generate", "--limit", "0"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--limit", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["generate"]).status.code(), Some(2));
    let out = run(&["generate", "--limit", "9", "--mode", "imaginary"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_a_run_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let runs = tmp.path().join("runs");
    let out = run(&[
        "verify",
        "--limit",
        "1e3",
        "--runs-dir",
        runs.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let entries: Vec<_> = fs::read_dir(&runs).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let dir = &entries[0];
    assert!(dir.file_name().unwrap().to_str().unwrap().starts_with("equivalence-"));
    for name in ["config.txt", "verdict.txt", "checks.csv"] {
        assert!(dir.join(name).is_file(), "missing {name}");
    }
    assert!(fs::read_to_string(dir.join("verdict.txt")).unwrap().starts_with("pass\n"));
}

#[test]
fn pnt_csv_format_streams_the_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "pnt",
        "--checkpoints",
        "1e3,1e4",
        "--format",
        "csv",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,pi,li,n_over_ln,err,err_norm,err_bound,flag")
    );
    let first = lines.next().unwrap();
    assert!(first.starts_with("1000,168,176.564494,"));
    assert!(first.ends_with(",0"));
    assert_eq!(text, fs::read_to_string(tmp.path().join("pnt.csv")).unwrap());
}

#[test]
fn identical_invocations_write_identical_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = run(&[
            "coin",
            "--model",
            "prime",
            "--n",
            "2e3",
            "--trials",
            "12",
            "--seed",
            "11",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in ["coin.csv", "checks.csv", "verdict.txt"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
    // config.txt may differ only in its created_at line.
    let strip = |p: &Path| {
        fs::read_to_string(p.join("config.txt"))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("created_at="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn seed_changes_coin_output() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for (dir, seed) in [(&a, "1"), (&b, "2")] {
        let out = run(&[
            "coin", "--model", "fair", "--n", "1e3", "--trials", "4",
            "--seed", seed, "--out", dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_ne!(
        fs::read(a.join("coin.csv")).unwrap(),
        fs::read(b.join("coin.csv")).unwrap()
    );
}

#[test]
fn env_seed_matches_flag_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let via_env = tmp.path().join("env");
    let via_flag = tmp.path().join("flag");
    let out = plawlab(&[
        "coin", "--model", "prime", "--n", "1e3", "--trials", "6",
        "--out", via_env.to_str().unwrap(),
    ])
    .env("PLAWLAB_SEED", "123")
    .output()
    .unwrap();
    assert!(out.status.success());
    let out = run(&[
        "coin", "--model", "prime", "--n", "1e3", "--trials", "6",
        "--seed", "123", "--out", via_flag.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(via_env.join("coin.csv")).unwrap(),
        fs::read(via_flag.join("coin.csv")).unwrap()
    );
    let out = plawlab(&["coin", "--model", "fair", "--n", "10", "--trials", "2"])
        .env("PLAWLAB_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_replays_and_detects_divergence() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let out = run(&[
        "consecutive", "--n", "1e3", "--trials", "100", "--scan-limit", "1e5",
        "--seed", "5", "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["report", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("reproduced every artifact"));

    let coin_path = dir.join("coin.csv");
    let tampered = fs::read_to_string(&coin_path)
        .unwrap()
        .replacen("model,trial", "model,tampered", 1);
    fs::write(&coin_path, tampered).unwrap();
    let out = run(&["report", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("DIVERGED"));
}

#[test]
fn svg_format_adds_a_chart() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "pnt", "--checkpoints", "1e3,1e4", "--format", "svg",
        "--out", tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = fs::read_to_string(tmp.path().join("pnt.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn threads_flag_is_accepted() {
    let out = run(&["--threads", "2", "generate", "--limit", "11"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 3 5 7 11\n");
}

#[test]
fn failing_suite_exits_one() {
    // A consecutive suite whose coin trials cannot produce pairs does not
    // exist; instead exercise the fail path through report divergence and
    // a poisoned verdict file.
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let out = run(&[
        "verify", "--limit", "100", "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    fs::write(dir.join("verdict.txt"), "fail\n").unwrap();
    let out = run(&["report", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
