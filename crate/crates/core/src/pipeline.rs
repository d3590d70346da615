//! Cuspidal counts `C_d(r, s)`: the Euler class of `L* ⊗ ev*W` on the one-pointed planar
//! moduli space, minus the ghost-bubble boundary, where the marked point sits on a
//! contracted component joining two curves of degrees `d₁ + d₂ = d`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gw_base::{BaseKey, BaseProvider, ProviderConfig, Rational};
use crate::store::{MemoTable, RecordKey};
use crate::taut::{splittings, PhiKey, Tautological};

/// Multiplicity of the cuspidal locus in the zero set of the derivative section.
pub const CUSP_MULTIPLICITY: u32 = 1;
/// Multiplicity of the ghost-bubble locus.
pub const BOUNDARY_MULTIPLICITY: u32 = 1;

/// Coefficients of `c₁(L*)² + c₁(L*)·c₁(W) + c₂(W)` against `Φ_d(i, j, r, s, θ)`, as
/// `(coefficient, i, j, θ)`. `c₁(W) = 3H − a`, `c₂(W) = a² − 2aH + 3H²`.
pub const EULER_TERMS: [(i64, u32, u32, u32); 6] = [
    (1, 2, 0, 0),
    (-1, 1, 0, 1),
    (3, 1, 1, 0),
    (1, 0, 0, 2),
    (-2, 0, 1, 1),
    (3, 0, 2, 0),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspResult {
    pub d: u32,
    pub r: u32,
    pub s: u32,
    pub euler: Rational,
    pub boundary: Rational,
    pub count: BigInt,
}

/// All `(r, s)` with `r + 2s = 3d + 1`, ordered by `s`.
pub fn valid_rows(d: u32) -> Vec<(u32, u32)> {
    let total = 3 * d + 1;
    (0..=total / 2).map(|s| (total - 2 * s, s)).collect()
}

fn check_dimension(d: u32, r: u32, s: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if r as u64 + 2 * s as u64 != 3 * d as u64 + 1 {
        return Err(Error::DimensionMismatch(format!(
            "need r + 2s = 3d + 1, got r={r}, s={s}, d={d} ({} ≠ {})",
            r as u64 + 2 * s as u64,
            3 * d as u64 + 1
        )));
    }
    Ok(())
}

/// Counts cuspidal planar curves on top of the Φ calculus.
pub struct CuspCounter {
    taut: Tautological,
    allow_d1: bool,
}

impl Default for CuspCounter {
    fn default() -> Self {
        CuspCounter::new(Tautological::default())
    }
}

impl CuspCounter {
    pub fn new(taut: Tautological) -> CuspCounter {
        CuspCounter {
            taut,
            allow_d1: false,
        }
    }

    pub fn with_config(config: ProviderConfig) -> Result<CuspCounter> {
        Ok(CuspCounter::new(Tautological::new(BaseProvider::new(
            config,
        )?)))
    }

    /// Permits `d = 1`, which lies outside the setting where a planar curve determines its
    /// plane.
    pub fn allow_degree_one(mut self, allow: bool) -> CuspCounter {
        self.allow_d1 = allow;
        self
    }

    pub fn taut(&self) -> &Tautological {
        &self.taut
    }

    pub fn euler_class(&self, d: u32, r: u32, s: u32) -> Result<Rational> {
        check_dimension(d, r, s)?;
        let mut total = Rational::zero();
        for (c, i, j, theta) in EULER_TERMS {
            let phi = self.taut.phi(d, i, j, r, s, theta)?;
            total += phi * Rational::from_integer(c.into());
        }
        Ok(total)
    }

    /// `B = ½ Σ d₁ d₂ C(r,r₁) C(s,s₁) B_{d₁,d₂}(r₁,s₁,r₂,s₂,0)`.
    pub fn boundary(&self, d: u32, r: u32, s: u32) -> Result<Rational> {
        check_dimension(d, r, s)?;
        self.boundary_theta(d, r, s, 0)
    }

    /// The boundary sum with a general plane exponent; the count itself uses `θ = 0`.
    pub fn boundary_theta(&self, d: u32, r: u32, s: u32, theta: u32) -> Result<Rational> {
        let mut total = BigInt::zero();
        for (k, w) in splittings(d, r, s, theta) {
            let b = self.taut.b_split(&k)?;
            if !b.is_zero() {
                total += w * BigInt::from(k.d1) * BigInt::from(k.d2) * b;
            }
        }
        Ok(Rational::new(total, BigInt::from(2))
            * Rational::from_integer(BOUNDARY_MULTIPLICITY.into()))
    }

    /// `C_d(r, s) = e − B`.
    pub fn cusp_count(&self, d: u32, r: u32, s: u32) -> Result<CuspResult> {
        check_dimension(d, r, s)?;
        if d == 1 && !self.allow_d1 {
            return Err(Error::InvalidArgument(
                "degree 1 is outside the counted setting; pass --allow-d1 to evaluate it anyway"
                    .into(),
            ));
        }
        let euler = self.euler_class(d, r, s)?;
        let boundary = self.boundary(d, r, s)?;
        let raw = (&euler - &boundary) / Rational::from_integer(CUSP_MULTIPLICITY.into());
        if !raw.is_integer() {
            return Err(Error::NonIntegral {
                what: format!("count C_{d}({r},{s})"),
                value: raw.to_string(),
            });
        }
        let count = raw.to_integer();
        if count.is_negative() {
            log::warn!("C_{d}({r},{s}) = {count} is negative");
        }
        if d == 1 && !count.is_zero() {
            log::warn!("C_1({r},{s}) = {count}; expected 0 for lines");
        }
        Ok(CuspResult {
            d,
            r,
            s,
            euler,
            boundary,
            count,
        })
    }

    /// Every row of degree `d`, computed on `jobs` worker threads. Results are exact, so
    /// the output is independent of `jobs`.
    pub fn table(&self, d: u32, jobs: usize) -> Result<Vec<CuspResult>> {
        let rows = valid_rows(d);
        if d == 1 && !self.allow_d1 {
            return Err(Error::InvalidArgument(
                "degree 1 is outside the counted setting; pass --allow-d1 to evaluate it anyway"
                    .into(),
            ));
        }
        if jobs <= 1 {
            return rows
                .iter()
                .map(|&(r, s)| self.cusp_count(d, r, s))
                .collect();
        }
        let pool = worker_pool(jobs);
        pool.install(|| {
            rows.par_iter()
                .map(|&(r, s)| self.cusp_count(d, r, s))
                .collect()
        })
    }

    /// Memoized base numbers and Φ values, for persisting across runs.
    pub fn export_cache(&self) -> MemoTable {
        let mut table = MemoTable::new();
        for (k, v) in self.taut.base().memo_snapshot() {
            table
                .insert(RecordKey::N(k), Rational::from_integer(v))
                .expect("memo keys are unique");
        }
        for (k, v) in self.taut.memo_snapshot() {
            table
                .insert(RecordKey::Phi(k), v)
                .expect("memo keys are unique");
        }
        table
    }

    /// Seeds the memo tables from a previously exported cache.
    pub fn import_cache(&self, table: &MemoTable) -> Result<()> {
        let mut base: Vec<(BaseKey, BigInt)> = Vec::new();
        let mut phi: Vec<(PhiKey, Rational)> = Vec::new();
        for (k, v) in table.iter() {
            match k {
                RecordKey::N(k) => {
                    if !v.is_integer() {
                        return Err(Error::NonIntegral {
                            what: format!("cached {k}"),
                            value: v.to_string(),
                        });
                    }
                    base.push((*k, v.to_integer()));
                }
                RecordKey::Phi(k) => phi.push((*k, v.clone())),
            }
        }
        self.taut.base().preload(base);
        self.taut.preload(phi);
        Ok(())
    }
}

/// Rayon pool with room for the solver's recursion.
pub fn worker_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .stack_size(256 << 20)
        .build()
        .expect("failed to build worker pool")
}
