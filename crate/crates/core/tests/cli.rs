use std::process::{Command, Output};

use cuspcount::cli::parse_output_number;
use num_bigint::BigInt;
use serde_json::Value;

fn cuspcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspcount"))
        .args(args)
        .env_remove("CUSPCOUNT_CACHE")
        .output()
        .expect("failed to run cuspcount")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn compute_cubic() {
    let o = cuspcount(&["compute", "--degree", "3", "--lines", "10", "--points", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("C_3(10,0) = 17760"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn compute_conic_is_zero() {
    let o = cuspcount(&[
        "--format", "csv", "compute", "--degree", "2", "--lines", "7", "--points", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.ends_with(",0"), "{row}");
}

#[test]
fn dimension_violation_exits_2() {
    let o = cuspcount(&["compute", "--degree", "3", "--lines", "9", "--points", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r + 2s = 3d + 1"), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(
        cuspcount(&["compute", "--degree", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cuspcount(&["--provider", "oracle", "verify"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cuspcount(&["--provider", "table", "verify"]).status.code(),
        Some(2)
    );
}

#[test]
fn table_of_lines_needs_override() {
    let o = cuspcount(&["table", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allow-d1"));
    let o = cuspcount(&["--allow-d1", "--format", "csv", "table", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn table_of_conics_is_zero() {
    let o = cuspcount(&["--format", "csv", "table", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("d,r,s,euler,boundary,count"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",0")));
}

#[test]
fn json_parses_back_to_exact_values() {
    let o = cuspcount(&["--format", "json", "table", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let first = &rows[0];
    for field in ["d", "r", "s", "euler", "boundary", "count"] {
        assert!(first[field].is_string(), "{field} is not a string");
    }
    let e = parse_output_number(first["euler"].as_str().unwrap()).unwrap();
    let b = parse_output_number(first["boundary"].as_str().unwrap()).unwrap();
    let c: BigInt = first["count"].as_str().unwrap().parse().unwrap();
    assert_eq!(c, BigInt::from(10613184));
    assert_eq!(e - b, c.into());
}

#[test]
fn jobs_do_not_change_output() {
    for d in ["3", "5"] {
        let one = cuspcount(&["--jobs", "1", "--format", "json", "table", "--degree", d]);
        let many = cuspcount(&["--jobs", "4", "--format", "json", "table", "--degree", d]);
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, many.stdout);
    }
}

#[test]
fn base_and_phi_queries() {
    let o = cuspcount(&["base", "--degree", "2", "--lines", "8", "--points", "0"]);
    assert_eq!(stdout(&o).trim(), "N_2(8,0,0) = 92");
    let o = cuspcount(&[
        "--format",
        "json",
        "phi",
        "--degree",
        "1",
        "--level",
        "1",
        "--ev-power",
        "0",
        "--lines",
        "4",
        "--points",
        "0",
        "--theta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "-4");
    let o = cuspcount(&[
        "phi",
        "--degree",
        "2",
        "--level",
        "2",
        "--ev-power",
        "1",
        "--lines",
        "6",
        "--points",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let o = cuspcount(&["verify", "--max-degree", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS degree 4 known counts"));
    assert!(!out.contains("FAIL"));
    let o = cuspcount(&["verify", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("known counts"));
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("memo.txt");
    let cache_arg = cache.to_str().unwrap();
    let cold = cuspcount(&["--cache", cache_arg, "table", "--degree", "4"]);
    assert_eq!(cold.status.code(), Some(0));
    let first = std::fs::read_to_string(&cache).unwrap();
    assert!(first.starts_with("cuspcount-cache v1\nring "));
    let warm = cuspcount(&["--cache", cache_arg, "table", "--degree", "4"]);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), first);

    // The environment variable is an alternative to the flag.
    let env = Command::new(env!("CARGO_BIN_EXE_cuspcount"))
        .args(["table", "--degree", "4"])
        .env("CUSPCOUNT_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(env.stdout, cold.stdout);
}

#[test]
fn corrupted_cache_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("memo.txt");
    std::fs::write(
        &cache,
        "cuspcount-cache v1\nring 0000000000000000\nN 1 4 0 1 2\n",
    )
    .unwrap();
    let o = cuspcount(&["--cache", cache.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("fingerprint"), "{}", stderr(&o));

    std::fs::write(&cache, "cuspcount-cache v0\n").unwrap();
    let o = cuspcount(&["--cache", cache.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn wrong_cached_value_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("memo.txt");
    let fp = cuspcount::ring::presentation_fingerprint();
    std::fs::write(
        &cache,
        format!("cuspcount-cache v1\nring {fp}\nPHI 3 2 0 10 0 0 1\n"),
    )
    .unwrap();
    let o = cuspcount(&[
        "--no-check",
        "--cache",
        cache.to_str().unwrap(),
        "verify",
        "--max-degree",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(
        stdout(&o).contains("C_3(10,0): expected 17760, computed"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn table_provider_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("memo.txt");
    let cache_arg = cache.to_str().unwrap();
    let engine = cuspcount(&["--cache", cache_arg, "table", "--degree", "3"]);
    assert_eq!(engine.status.code(), Some(0));
    for provider in ["table", "hybrid"] {
        let o = cuspcount(&[
            "--provider",
            provider,
            "--table",
            cache_arg,
            "table",
            "--degree",
            "3",
        ]);
        assert_eq!(o.status.code(), Some(0), "{provider}: {}", stderr(&o));
        assert_eq!(o.stdout, engine.stdout);
    }
}
