//! Versioned text format for memoized base numbers and Φ values.
//!
//! ```text
//! cuspcount-cache v1
//! ring <fingerprint of the ring presentation>
//! N <d> <r> <s> <θ> <value>
//! PHI <d> <i> <j> <r> <s> <θ> <value>
//! ```
//!
//! Values are integers or reduced fractions `p/q` with `q > 0`. Records are written in
//! `(kind, key)` order so equal tables serialize to identical bytes. An empty file is an
//! empty table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::gw_base::{BaseKey, Rational};
use crate::ring;
use crate::taut::PhiKey;

pub const HEADER: &str = "cuspcount-cache v1";
/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "CUSPCOUNT_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordKey {
    N(BaseKey),
    Phi(PhiKey),
}

impl std::fmt::Display for RecordKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecordKey::N(k) => write!(f, "N {} {} {} {}", k.d, k.r, k.s, k.theta),
            RecordKey::Phi(k) => {
                write!(f, "PHI {} {} {} {} {} {}", k.d, k.i, k.j, k.r, k.s, k.theta)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoRecord {
    pub key: RecordKey,
    pub value: Rational,
}

/// A set of records with unique keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MemoTable {
    records: BTreeMap<RecordKey, Rational>,
}

impl MemoTable {
    pub fn new() -> MemoTable {
        MemoTable::default()
    }

    /// Inserts a record; re-inserting an equal value is a no-op.
    pub fn insert(&mut self, key: RecordKey, value: Rational) -> Result<()> {
        match self.records.get(&key) {
            Some(prev) if *prev != value => Err(Error::DuplicateKey {
                key: key.to_string(),
                first: format_rational(prev),
                second: format_rational(&value),
            }),
            Some(_) => Ok(()),
            None => {
                self.records.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn get(&self, key: &RecordKey) -> Option<&Rational> {
        self.records.get(key)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RecordKey, &Rational)> {
        self.records.iter()
    }

    pub fn records(&self) -> Vec<MemoRecord> {
        self.iter()
            .map(|(k, v)| MemoRecord {
                key: *k,
                value: v.clone(),
            })
            .collect()
    }

    /// Serialized text, header included.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "ring {}", ring::presentation_fingerprint()).unwrap();
        for (k, v) in &self.records {
            writeln!(out, "{k} {}", format_rational(v)).unwrap();
        }
        out
    }

    /// Parses the text format; `origin` only labels error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<MemoTable> {
        let mut table = MemoTable::new();
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: line + 1,
            message,
        };

        let Some((_, header)) = lines.find(|(_, l)| !l.trim().is_empty()) else {
            return Ok(table);
        };
        let header = header.trim();
        if header != HEADER {
            return Err(Error::VersionMismatch {
                expected: HEADER.into(),
                found: header.into(),
            });
        }
        let expected = ring::presentation_fingerprint();
        let found = match lines.next() {
            Some((_, l)) => match l.trim().strip_prefix("ring ") {
                Some(fp) => fp.trim().to_string(),
                None => l.trim().to_string(),
            },
            None => String::new(),
        };
        if found != expected {
            return Err(Error::FingerprintMismatch { expected, found });
        }

        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let nums = |fields: &[&str]| -> Result<Vec<u32>> {
                fields
                    .iter()
                    .map(|f| {
                        f.parse::<u32>()
                            .map_err(|e| parse_err(no, format!("bad key field {f:?}: {e}")))
                    })
                    .collect()
            };
            let (key, value) = match fields.first().copied() {
                Some("N") if fields.len() == 6 => {
                    let k = nums(&fields[1..5])?;
                    (
                        RecordKey::N(BaseKey::new(k[0], k[1], k[2], k[3])),
                        fields[5],
                    )
                }
                Some("PHI") if fields.len() == 8 => {
                    let k = nums(&fields[1..7])?;
                    let key = PhiKey {
                        d: k[0],
                        i: k[1],
                        j: k[2],
                        r: k[3],
                        s: k[4],
                        theta: k[5],
                    };
                    (RecordKey::Phi(key), fields[7])
                }
                Some(kind @ ("N" | "PHI")) => {
                    return Err(parse_err(
                        no,
                        format!("wrong field count for {kind} record"),
                    ));
                }
                Some(other) => return Err(parse_err(no, format!("unknown record kind {other:?}"))),
                None => continue,
            };
            let value = parse_rational(value).map_err(|m| parse_err(no, m))?;
            table.insert(key, value)?;
        }
        Ok(table)
    }
}

/// `p/q` in lowest terms, or a bare integer when `q = 1`.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Inverse of [`format_rational`]; rejects non-reduced fractions and non-positive
/// denominators.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let bad = |e: &dyn std::fmt::Display| format!("bad value {s:?}: {e}");
    match s.split_once('/') {
        None => {
            let p: BigInt = s.parse().map_err(|e| bad(&e))?;
            Ok(Rational::from_integer(p))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|e| bad(&e))?;
            let q: BigInt = q.parse().map_err(|e| bad(&e))?;
            if !q.is_positive() {
                return Err(bad(&"denominator must be positive"));
            }
            if !p.gcd(&q).is_one() {
                return Err(bad(&"fraction not in lowest terms"));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Writes the table atomically (temporary file in the same directory, then rename).
pub fn save(path: &Path, table: &MemoTable) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(table.to_text().as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<MemoTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    MemoTable::parse(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn header() -> String {
        format!("{HEADER}\nring {}\n", ring::presentation_fingerprint())
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&r(-6, 4)), "-3/2");
        assert_eq!(format_rational(&r(8, 4)), "2");
        assert_eq!(parse_rational("-3/2").unwrap(), r(-3, 2));
        assert!(parse_rational("6/4").is_err());
        assert!(parse_rational("3/-2").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn empty_file_is_empty_table() {
        let t = MemoTable::parse("", Path::new("e")).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn old_version_rejected() {
        let err = MemoTable::parse("cuspcount-cache v0\nring x\n", Path::new("v0")).unwrap_err();
        assert!(matches!(err, Error::VersionMismatch { .. }));
    }

    #[test]
    fn fingerprint_checked() {
        let err =
            MemoTable::parse(&format!("{HEADER}\nring deadbeef\n"), Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::FingerprintMismatch { .. }));
    }

    #[test]
    fn record_parses() {
        let t = MemoTable::parse(&format!("{}N 1 4 0 1 2\n", header()), Path::new("t")).unwrap();
        assert_eq!(
            t.get(&RecordKey::N(BaseKey::new(1, 4, 0, 1))),
            Some(&r(2, 1))
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = format!("{}N 1 4 0 1 2\nN 1 4 0\n", header());
        match MemoTable::parse(&text, Path::new("t")).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn conflicting_duplicates_rejected() {
        let text = format!("{}N 1 4 0 1 2\nN 1 4 0 1 3\n", header());
        let err = MemoTable::parse(&text, Path::new("t")).unwrap_err();
        assert!(matches!(err, Error::DuplicateKey { .. }));
        let same = format!("{}N 1 4 0 1 2\nN 1 4 0 1 2\n", header());
        assert_eq!(MemoTable::parse(&same, Path::new("t")).unwrap().len(), 1);
    }

    #[test]
    fn sorted_output() {
        let mut t = MemoTable::new();
        let phi = PhiKey {
            d: 1,
            i: 1,
            j: 0,
            r: 4,
            s: 0,
            theta: 1,
        };
        t.insert(RecordKey::Phi(phi), r(-4, 1)).unwrap();
        t.insert(RecordKey::N(BaseKey::new(2, 8, 0, 0)), r(92, 1))
            .unwrap();
        t.insert(RecordKey::N(BaseKey::new(1, 4, 0, 1)), r(2, 1))
            .unwrap();
        let text = t.to_text();
        let body: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(body, ["N 1 4 0 1 2", "N 2 8 0 0 92", "PHI 1 1 0 4 0 1 -4"]);
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let mut t = MemoTable::new();
        t.insert(RecordKey::N(BaseKey::new(3, 11, 0, 0)), r(12960, 1))
            .unwrap();
        save(&path, &t).unwrap();
        assert_eq!(load(&path).unwrap(), t);
    }
}
