use std::process::{Command, Output};
use std::time::{Duration, Instant};

use clap::Parser;
use furst_cli::{run, Cli, CliError};
use furst_core::{sieve, QParam, Result};

fn furst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_furst"))
        .args(args)
        .env_remove("FURST_TABLE_LIMIT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn sieve_csv_round_trips_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sieve.csv");
    for q in ["1.5", "2", "3.7"] {
        let o = furst(&["sieve", "--q", q, "--n", "5000", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        let (header, rows) = read_csv(&std::fs::read_to_string(&path).unwrap());
        assert_eq!(header, ["n", "norm"]);
        let want = sieve::sieve_qnorms(QParam::new(q.parse().unwrap()).unwrap(), 5000).unwrap();
        assert_eq!(rows.len(), 5000);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row[0], (i + 1).to_string());
            assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), want.values()[i].to_bits());
        }
    }
}

#[test]
fn json_mirrors_csv_fields() {
    let csv_out = furst(&["sieve", "--n", "50"]);
    let json_out = furst(&["sieve", "--n", "50", "--format", "json"]);
    let (header, rows) = read_csv(&stdout(&csv_out));
    let json: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(json.len(), rows.len());
    for (obj, row) in json.iter().zip(&rows) {
        assert_eq!(obj.keys().collect::<Vec<_>>(), header.iter().collect::<Vec<_>>());
        assert_eq!(obj["norm"].as_f64().unwrap(), row[1].parse::<f64>().unwrap());
    }
}

#[test]
fn norm_examples() {
    let value = |args: &[&str]| {
        let o = furst(args);
        assert!(o.status.success(), "{args:?}");
        let (_, rows) = read_csv(&stdout(&o));
        (rows[0][2].parse::<f64>().unwrap(), rows[0][3].parse::<f64>().unwrap())
    };
    // divisors 2, 3, 4, 6, 12 of 12: 1/2 − 1/4 − 1/8 − 1/16 − 1/64 − 1/4096
    assert_eq!(value(&["norm", "12"]), (0.046630859375, 0.0));
    assert_eq!(value(&["norm", "-12"]), (0.046630859375, 0.0));
    assert_eq!(value(&["norm", "0"]), (0.0, 0.0));
    assert_eq!(value(&["norm", "1", "--q", "3"]), (1.0 / 6.0, 0.0));
    // 20!+1 is odd and coprime to 2..=20; its smallest divisor above 20 is 20639383
    let (v, tail) = value(&["norm", "--factorial", "20", "--plus", "1"]);
    assert_eq!(v, 0.5);
    assert!(tail > 0.0 && tail < 1e-11);
    // lcm(1..10) = 2520 fits and takes the exact path
    let (v, tail) = value(&["norm", "--lcm", "10"]);
    assert_eq!(tail, 0.0);
    assert_eq!(v, value(&["norm", "2520"]).0);
}

#[test]
fn scatter_defaults() {
    let o = furst(&["scatter"]);
    let (header, rows) = read_csv(&stdout(&o));
    assert_eq!(header, ["n", "norm", "mean_limit"]);
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], "1000");
    assert_eq!(rows[100][0], "1100");
    let limit: f64 = rows[0][2].parse().unwrap();
    assert!((limit - (1.0 - 2f64.ln())).abs() < 1e-16);
}

#[test]
fn gap_columns_empty_below_phi() {
    let o = furst(&["gap", "--q-min", "1.2", "--q-max", "2.0", "--steps", "9"]);
    let (_, rows) = read_csv(&stdout(&o));
    assert_eq!(rows.len(), 9);
    for row in rows {
        let q: f64 = row[0].parse().unwrap();
        assert_eq!(row[1].is_empty(), q <= furst_core::means::PHI, "q = {q}");
        assert_eq!(row[2].is_empty(), row[1].is_empty());
    }
}

#[test]
fn hist_counts_everything() {
    let o = furst(&["hist", "--n", "20000", "--bins", "16"]);
    let (_, rows) = read_csv(&stdout(&o));
    assert_eq!(rows.len(), 16);
    assert_eq!(rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum::<u64>(), 20000);
}

#[test]
fn series_within_tail() {
    for args in [
        &["series", "--kind", "q", "--q", "2", "--s", "2", "--n", "1e4"][..],
        &["series", "--kind", "gamma", "--q", "3", "--s", "1"],
        &["series", "--kind", "xi", "--s", "3", "--n", "1e4"],
    ] {
        let (header, rows) = read_csv(&stdout(&furst(args)));
        assert_eq!(rows[0][header.iter().position(|h| h == "within_tail").unwrap()], "true", "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(furst(&["norm", "5"]).status.code(), Some(0));
    assert_eq!(furst(&["norm", "5", "--q", "1"]).status.code(), Some(2));
    assert_eq!(furst(&["series", "--kind", "q", "--s", "1"]).status.code(), Some(2));
    assert_eq!(furst(&["norm"]).status.code(), Some(2));
    assert_eq!(furst(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(furst(&["norm", "5", "--factorial", "3"]).status.code(), Some(2));
    assert_eq!(furst(&["sieve", "--n", "1001", "--table-limit", "1000"]).status.code(), Some(3));
    assert_eq!(furst(&["norm", "123456", "--table-limit", "1e5"]).status.code(), Some(3));
    assert_eq!(furst(&["--help"]).status.code(), Some(0));
}

#[test]
fn table_limit_precedence() {
    let run_with_env = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_furst")).args(args).env("FURST_TABLE_LIMIT", "100").output().unwrap()
    };
    assert_eq!(run_with_env(&["sieve", "--n", "101"]).status.code(), Some(3));
    assert_eq!(run_with_env(&["sieve", "--n", "100"]).status.code(), Some(0));
    assert_eq!(run_with_env(&["sieve", "--n", "500", "--table-limit", "1000"]).status.code(), Some(0));
    assert_eq!(furst(&["sieve", "--n", "1e6", "--out", "/dev/null"]).status.code(), Some(0));
}

/// The double loop with its subtraction sign flipped.
fn flipped_kernel(q: QParam, n: u64) -> Result<Vec<f64>> {
    let mut v = vec![q.diameter(); n as usize];
    for i in 2..=n as usize {
        for m in (i..=n as usize).step_by(i) {
            v[m - 1] += q.inv_pow(i as u64);
        }
    }
    Ok(v)
}

#[test]
fn verify_catches_flipped_sieve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    for suite in ["sieve", "means", "all"] {
        let cli = Cli::try_parse_from(["furst", "verify", "--suite", suite, "--n-scale", "2000", "--out", out.to_str().unwrap()])
            .unwrap();
        let err = run(&cli, &flipped_kernel).unwrap_err();
        assert!(matches!(err, CliError::VerifyFailed(_)), "{suite}");
        assert_eq!(err.exit_code(), 1);
        let (_, rows) = read_csv(&std::fs::read_to_string(&out).unwrap());
        assert!(rows.iter().any(|r| r[2] == "false"));
        run(&cli, &furst_cli::verify::default_kernel).unwrap();
    }
}

#[test]
fn verify_all_passes_quickly() {
    let start = Instant::now();
    let o = furst(&["verify", "--suite", "all", "--n-scale", "1e4"]);
    assert!(start.elapsed() < Duration::from_secs(60));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (header, rows) = read_csv(&stdout(&o));
    assert_eq!(header, ["suite", "check", "passed", "detail"]);
    let suites: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(suites.len(), 6);
    assert!(rows.iter().all(|r| r[2] == "true"));
}
