//! Intersections of `c₁(L*)` and `ev*H` on the moduli space of one-pointed planar maps,
//! reduced to base numbers.
//!
//! `Φ_d(i, j, r, s, θ)` pairs `c₁(L*)^i (ev*H)^j` against the cycle of degree-`d` planar
//! maps meeting `r` lines and `s` points with plane constraint `a^θ`. Levels 0, 1 and 2 are
//! supported for the `(i, j)` pairs the Euler class needs. The level-1 and level-2 formulas
//! come from writing `c₁(L*)` as `H_L/d² − (2/d) ev*H + (1/d²) Σ d₂² B_{d₁,d₂}`; the
//! boundary strata are evaluated by splitting the diagonal of `P̂³` as `Σ aⁱ ⊗ a^{3−i}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gw_base::{binomial, BaseProvider, Rational};

/// Key of `Φ_d(i, j, r, s, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiKey {
    pub d: u32,
    pub i: u32,
    pub j: u32,
    pub r: u32,
    pub s: u32,
    pub theta: u32,
}

impl PhiKey {
    pub fn new(d: u32, i: u32, j: u32, r: u32, s: u32, theta: u32) -> PhiKey {
        PhiKey {
            d,
            i,
            j,
            r,
            s,
            theta,
        }
    }

    pub fn is_supported(&self) -> bool {
        matches!((self.i, self.j), (0, _) | (1, 0) | (1, 1) | (2, 0))
    }

    /// `r + 2s + θ + i + j = 3d + 3`.
    pub fn is_on_shell(&self) -> bool {
        let lhs =
            self.r as u64 + 2 * self.s as u64 + self.theta as u64 + self.i as u64 + self.j as u64;
        lhs == 3 * self.d as u64 + 3
    }
}

impl fmt::Display for PhiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Φ_{}({},{},{},{},{})",
            self.d, self.i, self.j, self.r, self.s, self.theta
        )
    }
}

/// A two-component degeneration: degrees and constraint splits on each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitKey {
    pub d1: u32,
    pub d2: u32,
    pub r1: u32,
    pub s1: u32,
    pub r2: u32,
    pub s2: u32,
    pub theta: u32,
}

impl SplitKey {
    pub fn new(d1: u32, d2: u32, r1: u32, s1: u32, r2: u32, s2: u32, theta: u32) -> SplitKey {
        SplitKey {
            d1,
            d2,
            r1,
            s1,
            r2,
            s2,
            theta,
        }
    }

    pub fn swapped(&self) -> SplitKey {
        SplitKey::new(
            self.d2, self.d1, self.r2, self.s2, self.r1, self.s1, self.theta,
        )
    }
}

/// Ordered splittings `d₁ + d₂ = d`, `r₁ + r₂ = r`, `s₁ + s₂ = s` with `d₁, d₂ ≥ 1`, each
/// with its weight `C(r, r₁) C(s, s₁)`.
pub fn splittings(d: u32, r: u32, s: u32, theta: u32) -> impl Iterator<Item = (SplitKey, BigInt)> {
    (1..d).flat_map(move |d1| {
        (0..=r).flat_map(move |r1| {
            (0..=s).map(move |s1| {
                let key = SplitKey::new(d1, d - d1, r1, s1, r - r1, s - s1, theta);
                (key, binomial(r, r1) * binomial(s, s1))
            })
        })
    })
}

fn big(v: u32) -> BigInt {
    BigInt::from(v)
}

/// Φ calculus over a base-number provider, with its own memo table.
pub struct Tautological {
    base: BaseProvider,
    memo: RwLock<HashMap<PhiKey, Rational>>,
}

impl Default for Tautological {
    fn default() -> Self {
        Tautological::new(BaseProvider::default())
    }
}

impl Tautological {
    pub fn new(base: BaseProvider) -> Tautological {
        Tautological {
            base,
            memo: RwLock::default(),
        }
    }

    pub fn base(&self) -> &BaseProvider {
        &self.base
    }

    pub fn base_number(&self, d: u32, r: u32, s: u32, theta: u32) -> Result<BigInt> {
        self.base.base_number(d, r, s, theta)
    }

    pub fn preload(&self, values: impl IntoIterator<Item = (PhiKey, Rational)>) {
        self.memo.write().unwrap().extend(values);
    }

    pub fn memo_snapshot(&self) -> Vec<(PhiKey, Rational)> {
        let mut out: Vec<_> = self
            .memo
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// `B_{d₁,d₂}(r₁,s₁,r₂,s₂,θ) = Σᵢ N_{d₁}(r₁,s₁,i) · N_{d₂}(r₂,s₂,θ+3−i)`.
    pub fn b_split(&self, k: &SplitKey) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for i in 0..=3u32 {
            let left = self.base.base_number(k.d1, k.r1, k.s1, i)?;
            if left.is_zero() {
                continue;
            }
            let right = self.base.base_number(k.d2, k.r2, k.s2, k.theta + 3 - i)?;
            total += left * right;
        }
        Ok(total)
    }

    /// Degree of the boundary divisor `B_{d₁,d₂}` cut by `ev*H` and the constraints:
    /// `Σ C(r,r₁) C(s,s₁) d₁² d₂ B_{d₁,d₂}(r₁,s₁,r₂,s₂,θ)`.
    pub fn b_marked(&self, d1: u32, d2: u32, r: u32, s: u32, theta: u32) -> Result<BigInt> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "boundary split needs d₁, d₂ ≥ 1, got ({d1}, {d2})"
            )));
        }
        let weight = big(d1) * big(d1) * big(d2);
        let mut total = BigInt::zero();
        for r1 in 0..=r {
            for s1 in 0..=s {
                let k = SplitKey::new(d1, d2, r1, s1, r - r1, s - s1, theta);
                let b = self.b_split(&k)?;
                if !b.is_zero() {
                    total += binomial(r, r1) * binomial(s, s1) * b;
                }
            }
        }
        Ok(total * weight)
    }

    /// `B̃_{d₁,d₂}(r₁,s₁,r₂,s₂,θ) = Σᵢ Φ_{d₁}(1,0,r₁,s₁,i) · N_{d₂}(r₂,s₂,θ+3−i)`.
    pub fn b_tilde(&self, k: &SplitKey) -> Result<BigInt> {
        let mut total = Rational::zero();
        for i in 0..=3u32 {
            let left = self.phi(k.d1, 1, 0, k.r1, k.s1, i)?;
            if left.is_zero() {
                continue;
            }
            let right = self.base.base_number(k.d2, k.r2, k.s2, k.theta + 3 - i)?;
            total += left * Rational::from_integer(right);
        }
        integral(total, "B̃")
    }

    /// `T₁ = Σ C(r,r₁) C(s,s₁) d₁ d₂³ B_{d₁,d₂}(…, θ)` over all splittings.
    pub fn t1(&self, d: u32, r: u32, s: u32, theta: u32) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (k, w) in splittings(d, r, s, theta) {
            let b = self.b_split(&k)?;
            if !b.is_zero() {
                total += w * big(k.d1) * big(k.d2).pow(3) * b;
            }
        }
        Ok(total)
    }

    /// `T₂`: as `T₁` with `B̃` in place of `B`.
    pub fn t2(&self, d: u32, r: u32, s: u32, theta: u32) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (k, w) in splittings(d, r, s, theta) {
            let b = self.b_tilde(&k)?;
            if !b.is_zero() {
                total += w * big(k.d1) * big(k.d2).pow(3) * b;
            }
        }
        Ok(total)
    }

    pub fn phi(&self, d: u32, i: u32, j: u32, r: u32, s: u32, theta: u32) -> Result<Rational> {
        self.phi_key(&PhiKey::new(d, i, j, r, s, theta))
    }

    pub fn phi_key(&self, key: &PhiKey) -> Result<Rational> {
        if key.d == 0 {
            return Err(Error::InvalidArgument("Φ needs d ≥ 1".into()));
        }
        if !key.is_supported() {
            return Err(Error::UnsupportedLevel { i: key.i, j: key.j });
        }
        if !key.is_on_shell() {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.memo.read().unwrap().get(key) {
            return Ok(v.clone());
        }
        let value = self.compute_phi(key)?;
        if !value.is_integer() {
            log::debug!("{key} = {value} is not an integer");
        }
        self.memo.write().unwrap().insert(*key, value.clone());
        Ok(value)
    }

    fn compute_phi(&self, key: &PhiKey) -> Result<Rational> {
        let PhiKey {
            d,
            i,
            j,
            r,
            s,
            theta,
        } = *key;
        let n = |r, s| -> Result<Rational> {
            Ok(Rational::from_integer(
                self.base.base_number(d, r, s, theta)?,
            ))
        };
        let dd = Rational::from_integer(big(d));
        let inv_d2 = Rational::new(1.into(), big(d) * big(d));
        let two_over_d = Rational::new(2.into(), big(d));
        match (i, j) {
            (0, 0) => Ok(Rational::zero()),
            (0, 1) => Ok(dd * n(r, s)?),
            (0, 2) => n(r + 1, s),
            (0, 3) => n(r, s + 1),
            (0, _) => Ok(Rational::zero()),
            (1, 0) => Ok(n(r, s)? * Rational::from_integer((-2).into())),
            (1, 1) => {
                let mut boundary = BigInt::zero();
                for (k, w) in splittings(d, r, s, theta) {
                    let b = self.b_split(&k)?;
                    if !b.is_zero() {
                        boundary += w * big(k.d1).pow(2) * big(k.d2).pow(3) * b;
                    }
                }
                let v = &inv_d2 * self.phi(d, 0, 1, r + 1, s, theta)?
                    - &two_over_d * self.phi(d, 0, 2, r, s, theta)?
                    + &inv_d2 * Rational::from_integer(boundary);
                Ok(v)
            }
            (2, 0) => {
                let t = self.t1(d, r, s, theta)? + self.t2(d, r, s, theta)?;
                let v = &inv_d2 * self.phi(d, 1, 0, r + 1, s, theta)?
                    - &two_over_d * self.phi(d, 1, 1, r, s, theta)?
                    + &inv_d2 * Rational::from_integer(t);
                Ok(v)
            }
            _ => Err(Error::UnsupportedLevel { i, j }),
        }
    }
}

fn integral(v: Rational, what: &str) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::NonIntegral {
            what: what.into(),
            value: v.to_string(),
        })
    }
}
