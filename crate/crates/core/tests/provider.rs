use std::path::Path;

use cuspcount::flag_oracle;
use cuspcount::gw_base::{BaseProvider, ProviderConfig, ProviderMode};
use cuspcount::pipeline::valid_rows;
use cuspcount::store::{self, MemoTable};
use cuspcount::{CuspCounter, Error};
use num_bigint::BigInt;

fn header() -> String {
    format!(
        "{}\nring {}\n",
        store::HEADER,
        cuspcount::ring::presentation_fingerprint()
    )
}

fn write_table(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("table.txt");
    std::fs::write(&path, format!("{}{body}", header())).unwrap();
    path
}

fn provider(mode: ProviderMode) -> BaseProvider {
    BaseProvider::new(ProviderConfig {
        mode,
        ..ProviderConfig::default()
    })
    .unwrap()
}

#[test]
fn import_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    assert_eq!(
        provider(ProviderMode::Hybrid).import_table(&path).unwrap(),
        0
    );
}

#[test]
fn import_agreeing_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_table(dir.path(), "N 1 4 0 1 2\n");
    for mode in [ProviderMode::Table, ProviderMode::Hybrid] {
        let p = provider(mode);
        assert_eq!(p.import_table(&path).unwrap(), 1);
        assert_eq!(p.base_number(1, 4, 0, 1).unwrap(), flag_oracle::n1(4, 0, 1));
    }
}

#[test]
fn hybrid_rejects_disagreeing_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_table(dir.path(), "N 1 4 0 1 3\n");
    let err = provider(ProviderMode::Hybrid)
        .import_table(&path)
        .unwrap_err();
    assert!(matches!(err, Error::ProviderMismatch { .. }), "{err}");

    // Table mode trusts the file but degree one still meets the oracle.
    let p = provider(ProviderMode::Table);
    p.import_table(&path).unwrap();
    let err = p.base_number(1, 4, 0, 1).unwrap_err();
    assert!(matches!(err, Error::OracleMismatch { .. }), "{err}");
}

#[test]
fn conflicting_duplicates_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_table(dir.path(), "N 2 8 0 0 92\nN 2 8 0 0 91\n");
    let err = provider(ProviderMode::Table)
        .import_table(&path)
        .unwrap_err();
    assert!(matches!(err, Error::DuplicateKey { .. }), "{err}");
}

#[test]
fn table_mode_reports_missing_keys() {
    let p = provider(ProviderMode::Table);
    let err = p.base_number(2, 8, 0, 0).unwrap_err();
    assert!(matches!(err, Error::MissingFromTable { .. }), "{err}");
    // Off-shell keys never reach the table.
    assert_eq!(p.base_number(2, 7, 0, 0).unwrap(), BigInt::from(0));
}

#[test]
fn schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("old.txt");
    std::fs::write(&path, "cuspcount-cache v0\nring x\nN 1 4 0 1 2\n").unwrap();
    assert!(matches!(
        provider(ProviderMode::Hybrid).import_table(&path),
        Err(Error::VersionMismatch { .. })
    ));
    let path = write_table(dir.path(), "N 1 4 0 one\n");
    match provider(ProviderMode::Hybrid).import_table(&path) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn warm_cache_matches_cold() {
    let cold = CuspCounter::default();
    let mut cold_rows = Vec::new();
    for d in 2..=5 {
        cold_rows.extend(cold.table(d, 1).unwrap());
    }
    let exported = cold.export_cache();
    let text = exported.to_text();

    let warm = CuspCounter::default();
    warm.import_cache(&MemoTable::parse(&text, Path::new("memo")).unwrap())
        .unwrap();
    let mut warm_rows = Vec::new();
    for d in 2..=5 {
        warm_rows.extend(warm.table(d, 3).unwrap());
    }
    assert_eq!(cold_rows, warm_rows);
    assert_eq!(warm.export_cache().to_text(), text);
}

#[test]
fn shared_counter_across_threads() {
    let counter = CuspCounter::default();
    let reference: Vec<_> = valid_rows(4)
        .into_iter()
        .map(|(r, s)| CuspCounter::default().cusp_count(4, r, s).unwrap())
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                scope.spawn(|| {
                    valid_rows(4)
                        .into_iter()
                        .rev()
                        .map(|(r, s)| counter.cusp_count(4, r, s).unwrap())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            let mut rows = h.join().unwrap();
            rows.reverse();
            assert_eq!(rows, reference);
        }
    });
}

#[test]
fn counts_integral_through_degree_six() {
    let counter = CuspCounter::default();
    for d in 2..=6 {
        // `cusp_count` errors on a non-integral difference.
        let rows = counter.table(d, 2).unwrap();
        assert_eq!(rows.len(), valid_rows(d).len());
        for row in rows.iter().filter(|row| row.s >= 4) {
            assert_eq!(
                row.count,
                BigInt::from(0),
                "four points are not coplanar: {row:?}"
            );
        }
    }
}
