//! Low-degree checks run by `cuspcount verify`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flag_oracle;
use crate::pipeline::{valid_rows, CuspCounter};
use crate::ring::{self, Monomial, RingClass};
use crate::taut::{splittings, PhiKey};

/// Known cuspidal counts `(d, r, s, C_d(r, s))` for cubics and quartics.
pub const KNOWN_COUNTS: [(u32, u32, u32, u64); 8] = [
    (3, 10, 0, 17760),
    (3, 8, 1, 2064),
    (3, 6, 2, 240),
    (3, 4, 3, 24),
    (4, 13, 0, 10613184),
    (4, 11, 1, 760368),
    (4, 9, 2, 49152),
    (4, 7, 3, 2304),
];

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Mismatches as `expected vs computed` lines; empty on success.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn timed<F>(name: &str, f: F) -> Result<Check>
where
    F: FnOnce(&mut Vec<String>) -> Result<()>,
{
    let start = Instant::now();
    let mut failures = Vec::new();
    f(&mut failures)?;
    Ok(Check {
        name: name.to_string(),
        passed: failures.is_empty(),
        failures,
        elapsed: start.elapsed(),
    })
}

/// Runs the value checks up to `max_degree` (at least 2) followed by the structural
/// property checks.
pub fn run(counter: &CuspCounter, max_degree: u32) -> Result<Report> {
    let mut report = Report::default();
    let max_degree = max_degree.max(2);

    report.checks.push(timed("conic counts vanish", |fail| {
        for (r, s) in valid_rows(2) {
            let got = counter.cusp_count(2, r, s)?.count;
            if !got.is_zero() {
                fail.push(format!("C_2({r},{s}): expected 0, computed {got}"));
            }
        }
        Ok(())
    })?);

    for d in 3..=max_degree.min(4) {
        report
            .checks
            .push(timed(&format!("degree {d} known counts"), |fail| {
                for &(kd, r, s, want) in KNOWN_COUNTS.iter().filter(|k| k.0 == d) {
                    let got = counter.cusp_count(kd, r, s)?.count;
                    if got != BigInt::from(want) {
                        fail.push(format!("C_{kd}({r},{s}): expected {want}, computed {got}"));
                    }
                }
                Ok(())
            })?);
    }

    report
        .checks
        .push(timed("degree one matches Schubert calculus", |fail| {
            for (r, s, theta) in flag_oracle::degree_one_keys() {
                let want = flag_oracle::n1(r, s, theta);
                let got = counter.taut().base_number(1, r, s, theta)?;
                if got != want {
                    fail.push(format!(
                        "N_1({r},{s},{theta}): expected {want}, computed {got}"
                    ));
                }
            }
            Ok(())
        })?);

    let gate_degree = max_degree.min(4);
    report.checks.push(timed("off-shell keys vanish", |fail| {
        for d in 1..=gate_degree {
            for r in 0..=3 * d + 4 {
                for s in 0..=(3 * d + 4) / 2 {
                    for theta in 0..=4 {
                        if r + 2 * s + theta != 3 * d + 2 {
                            let v = counter.taut().base_number(d, r, s, theta)?;
                            if !v.is_zero() {
                                fail.push(format!("N_{d}({r},{s},{theta}) = {v}, expected 0"));
                            }
                        }
                        for (i, j) in [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)] {
                            let key = PhiKey::new(d, i, j, r, s, theta);
                            if key.is_on_shell() {
                                continue;
                            }
                            let v = counter.taut().phi_key(&key)?;
                            if !v.is_zero() {
                                fail.push(format!("{key} = {v}, expected 0"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })?);

    report.checks.push(timed("boundary identities", |fail| {
        let taut = counter.taut();
        for d in 2..=gate_degree {
            for theta in 0..=3 {
                for s in 0..=(3 * d + 1 - theta) / 2 {
                    let r = 3 * d + 1 - theta - 2 * s;
                    let t1 = taut.t1(d, r, s, theta)?;
                    let t2 = taut.t2(d, r, s, theta)?;
                    if t2 != -BigInt::from(2) * &t1 {
                        fail.push(format!("T₂({d},{r},{s},{theta}) = {t2}, expected −2·{t1}"));
                    }
                    for (k, _) in splittings(d, r, s, theta) {
                        let b = taut.b_split(&k)?;
                        let bt = taut.b_tilde(&k)?;
                        if bt != -BigInt::from(2) * &b {
                            fail.push(format!("B̃{k:?} = {bt}, expected −2·{b}"));
                        }
                        if theta == 0 && taut.b_split(&k.swapped())? != b {
                            fail.push(format!("B{k:?} not symmetric"));
                        }
                    }
                }
            }
        }
        Ok(())
    })?);

    report.checks.push(timed("ring identities", |fail| {
        let one_a_h = &(&RingClass::one() + &RingClass::a()) + &RingClass::h();
        let lhs = ring::mul(&ring::total_chern_w(), &one_a_h).truncate(2);
        let rhs = (&RingClass::one() + &RingClass::h()).pow(4).truncate(2);
        if lhs != rhs {
            fail.push(format!("c(W)(1+a+H) = {lhs}, expected {rhs}"));
        }
        if ring::try_dual_basis().is_err() {
            fail.push("pairing matrix is not unimodular".into());
        }
        for x in Monomial::basis() {
            for y in Monomial::basis() {
                let v =
                    ring::integrate(&ring::mul(&RingClass::monomial(x), &RingClass::monomial(y)));
                if x.degree() + y.degree() != ring::DIM && !v.is_zero() {
                    fail.push(format!("∫ {x}·{y} = {v} in the wrong degree"));
                }
            }
        }
        Ok(())
    })?);

    report.checks.push(timed("counts are integral", |fail| {
        for d in 2..=max_degree {
            for (r, s) in valid_rows(d) {
                match counter.cusp_count(d, r, s) {
                    Ok(_) => {}
                    Err(e @ Error::NonIntegral { .. }) => fail.push(e.to_string()),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    })?);

    Ok(report)
}
