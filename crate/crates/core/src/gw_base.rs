//! Base characteristic numbers `N_d(r, s, θ)` of planar rational curves in `P³`.
//!
//! A planar curve of degree `d` together with its plane is the same thing as a stable map
//! to the incidence variety `S` whose class is `d` times the line class of a fiber `P²`
//! (its `a`-degree is zero). `S` is homogeneous, so these genus-zero invariants are
//! enumerative and satisfy the associativity (WDVV) equations; since `a` and `H` generate
//! `H*(S)`, every invariant with at least three insertions is reconstructed from invariants
//! of lower degree, fewer insertions, or a more concentrated degree distribution.
//!
//! Conventions for an `n`-pointed fiber-class invariant `⟨γ₁, …, γₙ⟩_d`:
//! * it vanishes unless `Σ deg γᵢ = 3d + n + 2`;
//! * `⟨H, …⟩_d = d ⟨…⟩_d` and `⟨a, …⟩_d = 0` for `d ≥ 1` (divisor axiom);
//! * `⟨γ₁, γ₂, γ₃⟩_0 = ∫ γ₁γ₂γ₃` and other degree-zero invariants vanish;
//! * the only two-point invariant that is not forced to vanish by moving all `a` factors
//!   onto one insertion is `⟨a³H², H²⟩_1 = 1`: the line in a fixed plane through a fixed
//!   point and the point where a given line meets that plane.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flag_oracle;
use crate::ring::{self, Monomial, RingClass, BASIS_LEN};
use crate::store::{self, MemoTable, RecordKey};

pub type Rational = BigRational;

type Counts = [u16; BASIS_LEN];
type Terms = [(Monomial, i64)];

/// Key of a base number `N_d(r, s, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseKey {
    pub d: u32,
    pub r: u32,
    pub s: u32,
    pub theta: u32,
}

impl BaseKey {
    pub fn new(d: u32, r: u32, s: u32, theta: u32) -> BaseKey {
        BaseKey { d, r, s, theta }
    }

    /// `r + 2s + θ = 3d + 2` with `θ ≤ 3`.
    pub fn is_on_shell(&self) -> bool {
        self.theta <= 3
            && self.r as u64 + 2 * self.s as u64 + self.theta as u64 == 3 * self.d as u64 + 2
    }
}

impl fmt::Display for BaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N_{}({},{},{})", self.d, self.r, self.s, self.theta)
    }
}

/// A fiber degree and a multiset of basis insertions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantKey {
    d: u32,
    counts: Counts,
}

impl InvariantKey {
    pub fn new<I: IntoIterator<Item = Monomial>>(d: u32, insertions: I) -> InvariantKey {
        let mut counts = [0u16; BASIS_LEN];
        for m in insertions {
            counts[m.index()] += 1;
        }
        InvariantKey { d, counts }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Insertions in basis order.
    pub fn insertions(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(Monomial::from_index(i), c as usize));
        }
        out
    }

    pub fn len(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_sum(&self) -> u32 {
        degree_sum(&self.counts)
    }

    pub fn is_on_shell(&self) -> bool {
        self.degree_sum() == 3 * self.d + self.len() + 2
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.insertions().iter().map(|m| m.to_string()).collect();
        write!(f, "<{}>_{}", parts.join(", "), self.d)
    }
}

fn degree_sum(counts: &Counts) -> u32 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as u32 * Monomial::from_index(i).degree())
        .sum()
}

fn count_len(counts: &Counts) -> u32 {
    counts.iter().map(|&c| c as u32).sum()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Genus-zero fiber-class invariants of `S` with a shared memo table.
///
/// The table accepts concurrent readers. Two threads may race to compute the same key;
/// both results are exact, and the second insert asserts equality with the first.
#[derive(Default)]
pub struct GwSolver {
    cache: RwLock<HashMap<(u32, Counts), Rational>>,
}

impl GwSolver {
    pub fn new() -> GwSolver {
        GwSolver::default()
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn clear(&self) {
        self.cache.write().unwrap().clear();
    }

    pub fn invariant(&self, key: &InvariantKey) -> Result<Rational> {
        self.inv(key.d, &key.counts)
    }

    pub fn invariant_of(&self, d: u32, insertions: &[Monomial]) -> Result<Rational> {
        self.invariant(&InvariantKey::new(d, insertions.iter().copied()))
    }

    /// Multilinear extension of [`GwSolver::invariant`] to arbitrary ring classes.
    pub fn invariant_of_classes(&self, d: u32, classes: &[&RingClass]) -> Result<Rational> {
        let terms: Vec<Vec<(Monomial, i64)>> = classes.iter().map(|c| c.small_terms()).collect();
        let refs: Vec<&Terms> = terms.iter().map(Vec::as_slice).collect();
        self.eval_product(d, &[0; BASIS_LEN], &refs)
    }

    /// Reconstruction step for a key whose insertions all have degree at least two.
    pub fn solve_invariant(&self, key: &InvariantKey) -> Result<Rational> {
        if !key.is_on_shell() {
            return Ok(Rational::zero());
        }
        if key.d == 0 || key.insertions().iter().any(|m| m.degree() < 2) {
            return Err(Error::InvalidArgument(format!(
                "solve_invariant needs d ≥ 1 and insertions of degree ≥ 2, got {key}"
            )));
        }
        if key.len() == 2 {
            return Ok(two_point(key.d, &key.counts));
        }
        self.solve(key.d, &key.counts)
    }

    /// `LHS − RHS` of the associativity relation with special slots `(γa, γb, γc, γd)`:
    /// `Σ ⟨γa, γb, A, T_e⟩_{d₁} ⟨T^e, γc, γd, B⟩_{d₂}` minus the same with `γb ↔ γc`,
    /// summed over `d₁ + d₂ = d` and splittings `A ⊔ B` of the extra insertions.
    pub fn wdvv_residual(
        &self,
        d: u32,
        slots: [&RingClass; 4],
        extras: &[Monomial],
    ) -> Result<Rational> {
        let [ga, gb, gc, gd] = slots.map(RingClass::small_terms);
        let extras = InvariantKey::new(0, extras.iter().copied()).counts;
        let lhs = self.relation_side(d, &ga, &gb, &gc, &gd, &extras, false)?;
        let rhs = self.relation_side(d, &ga, &gc, &gb, &gd, &extras, false)?;
        Ok(lhs - rhs)
    }

    fn inv(&self, d: u32, counts: &Counts) -> Result<Rational> {
        let n = count_len(counts);
        if degree_sum(counts) != 3 * d + n + 2 {
            return Ok(Rational::zero());
        }
        if d == 0 {
            if n != 3 {
                return Ok(Rational::zero());
            }
            return Ok(Rational::from_integer(triple_integral(counts)));
        }
        if counts[Monomial::ONE.index()] > 0 || counts[Monomial::A.index()] > 0 {
            return Ok(Rational::zero());
        }
        let h_count = counts[Monomial::H.index()];
        if h_count > 0 {
            let mut rest = *counts;
            rest[Monomial::H.index()] = 0;
            let factor = BigInt::from(d).pow(h_count as u32);
            return Ok(self.inv(d, &rest)? * Rational::from_integer(factor));
        }
        if n < 2 {
            return Ok(Rational::zero());
        }
        if n == 2 {
            return Ok(two_point(d, counts));
        }
        if let Some(v) = self.cache.read().unwrap().get(&(d, *counts)) {
            return Ok(v.clone());
        }
        let value = self.solve(d, counts)?;
        let mut cache = self.cache.write().unwrap();
        if let Some(prev) = cache.get(&(d, *counts)) {
            assert_eq!(prev, &value, "nondeterministic invariant for d={d}");
        } else {
            cache.insert((d, *counts), value.clone());
        }
        Ok(value)
    }

    /// Solves the associativity relation for the target `⟨β, α, γ, E⟩_d` with slots
    /// `(D, β', α, γ)` where `β = D·β'`.
    ///
    /// `α` has maximal degree, so the companion term `⟨D·α, β', γ, E⟩_d` has a strictly
    /// larger sum of squared insertion degrees; every other term has smaller `d` or fewer
    /// insertions. Degrees are bounded by `dim S`, so this terminates.
    fn solve(&self, d: u32, counts: &Counts) -> Result<Rational> {
        let mut ins: Vec<Monomial> = InvariantKey { d, counts: *counts }.insertions();
        ins.sort_by_key(|m| std::cmp::Reverse((m.degree(), m.index())));
        let alpha = ins[0];
        let beta_pos = ins[1..]
            .iter()
            .position(|m| m.a_power() >= 1)
            .map(|p| p + 1)
            .unwrap_or(1);
        let beta = ins[beta_pos];
        if beta.degree() < 2 {
            return Err(Error::Unreachable(format!(
                "no insertion of degree ≥ 2 to split in {}",
                InvariantKey { d, counts: *counts }
            )));
        }
        let (divisor, beta_prime) = if beta.a_power() >= 1 {
            (
                Monomial::A,
                Monomial::new(beta.a_power() - 1, beta.h_power()),
            )
        } else {
            (
                Monomial::H,
                Monomial::new(beta.a_power(), beta.h_power() - 1),
            )
        };
        let beta_prime = beta_prime.expect("lowering an exponent stays in the basis");
        let mut extras = *counts;
        extras[alpha.index()] -= 1;
        extras[beta.index()] -= 1;
        let third = ins
            .iter()
            .enumerate()
            .find(|&(i, _)| i != 0 && i != beta_pos)
            .map(|(_, m)| *m)
            .ok_or_else(|| Error::Unreachable("fewer than three insertions".into()))?;
        extras[third.index()] -= 1;

        let g1 = [(divisor, 1i64)];
        let g2 = [(beta_prime, 1i64)];
        let g3 = [(alpha, 1i64)];
        let g4 = [(third, 1i64)];
        let lhs_rest = self.relation_side(d, &g1, &g2, &g3, &g4, &extras, true)?;
        let rhs = self.relation_side(d, &g1, &g3, &g2, &g4, &extras, false)?;
        Ok(rhs - lhs_rest)
    }

    /// `Σ_{d₁+d₂=d} Σ_{A⊔B=extras} Σ_e ⟨g1, g2, A, T_e⟩_{d₁} ⟨T^e, g3, g4, B⟩_{d₂}`.
    /// With `skip_target`, the `d₁ = 0, A = ∅` term is omitted.
    #[allow(clippy::too_many_arguments)]
    fn relation_side(
        &self,
        d: u32,
        g1: &Terms,
        g2: &Terms,
        g3: &Terms,
        g4: &Terms,
        extras: &Counts,
        skip_target: bool,
    ) -> Result<Rational> {
        let duals = ring::dual_basis_small();
        let g1_is_a = g1.len() == 1 && g1[0].0 == Monomial::A;
        let mut total = Rational::zero();
        for d1 in 0..=d {
            let d2 = d - d1;
            if d1 >= 1 && g1_is_a {
                continue;
            }
            for (a_part, mult) in sub_multisets(extras) {
                let a_len = count_len(&a_part);
                if d1 == 0 && a_len > 0 {
                    continue;
                }
                if skip_target && d1 == 0 && a_len == 0 {
                    continue;
                }
                let mut b_part = *extras;
                for k in 0..BASIS_LEN {
                    b_part[k] -= a_part[k];
                }
                if d2 == 0 && count_len(&b_part) > 0 {
                    continue;
                }
                let mut side = Rational::zero();
                for e in Monomial::basis() {
                    let te = [(e, 1i64)];
                    let left = self.eval_product(d1, &a_part, &[g1, g2, &te])?;
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.eval_product(d2, &b_part, &[&duals[e.index()], g3, g4])?;
                    side += left * right;
                }
                if !side.is_zero() {
                    total += side * Rational::from_integer(mult);
                }
            }
        }
        Ok(total)
    }

    /// `⟨base, f₁, …, f_k⟩_d` expanded multilinearly over the factor classes.
    fn eval_product(&self, d: u32, base: &Counts, factors: &[&Terms]) -> Result<Rational> {
        match factors.split_first() {
            None => self.inv(d, base),
            Some((first, rest)) => {
                let mut total = Rational::zero();
                for &(m, c) in first.iter() {
                    let mut next = *base;
                    next[m.index()] += 1;
                    let v = self.eval_product(d, &next, rest)?;
                    if !v.is_zero() {
                        total += v * int(c);
                    }
                }
                Ok(total)
            }
        }
    }
}

/// Two-point invariants. Moving every `a` factor onto one insertion (the associativity
/// relation with divisor slot `a`, whose other terms all vanish) shows the only nonzero
/// case is `⟨a³H², H²⟩_1 = 1`.
fn two_point(d: u32, counts: &Counts) -> Rational {
    let ins = InvariantKey { d, counts: *counts }.insertions();
    let a_total: u32 = ins.iter().map(|m| m.a_power()).sum();
    let all_h2 = ins.iter().all(|m| m.h_power() == 2);
    if d == 1 && a_total == 3 && all_h2 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

fn triple_integral(counts: &Counts) -> BigInt {
    let ins = InvariantKey {
        d: 0,
        counts: *counts,
    }
    .insertions();
    let product = ins.iter().fold(RingClass::one(), |acc, m| {
        ring::mul(&acc, &RingClass::monomial(*m))
    });
    ring::integrate(&product)
}

/// All sub-multisets of `counts` with their binomial multiplicities.
fn sub_multisets(counts: &Counts) -> Vec<(Counts, BigInt)> {
    let mut out = vec![([0u16; BASIS_LEN], BigInt::one())];
    for k in 0..BASIS_LEN {
        let c = counts[k];
        if c == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
        for (part, mult) in &out {
            for take in 0..=c {
                let mut p = *part;
                p[k] = take;
                next.push((p, mult * binomial(c as u32, take as u32)));
            }
        }
        out = next;
    }
    out
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Where base numbers come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ProviderMode {
    /// Associativity reconstruction only.
    #[default]
    Engine,
    /// Only the imported table; missing on-shell keys are errors.
    Table,
    /// Table first, engine for the rest; keys in both must agree.
    Hybrid,
}

impl FromStr for ProviderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "engine" | "wdvv-engine" => Ok(ProviderMode::Engine),
            "table" | "table-import" => Ok(ProviderMode::Table),
            "hybrid" => Ok(ProviderMode::Hybrid),
            other => Err(Error::InvalidArgument(format!(
                "unknown provider {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProviderConfig {
    pub mode: ProviderMode,
    pub table_path: Option<PathBuf>,
    /// Cross-check degree one against the Schubert oracle and table entries against the
    /// engine.
    pub consistency_check: bool,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig {
            mode: ProviderMode::Engine,
            table_path: None,
            consistency_check: true,
        }
    }
}

/// Source of base numbers with memoization.
pub struct BaseProvider {
    config: ProviderConfig,
    solver: GwSolver,
    table: RwLock<HashMap<BaseKey, BigInt>>,
    memo: RwLock<HashMap<BaseKey, BigInt>>,
}

impl Default for BaseProvider {
    fn default() -> Self {
        BaseProvider::with_config(ProviderConfig::default())
    }
}

impl BaseProvider {
    /// Builds a provider and loads the configured table, if any.
    pub fn new(config: ProviderConfig) -> Result<BaseProvider> {
        let path = config.table_path.clone();
        let provider = BaseProvider::with_config(config);
        if let Some(path) = path {
            provider.import_table(&path)?;
        }
        Ok(provider)
    }

    fn with_config(config: ProviderConfig) -> BaseProvider {
        BaseProvider {
            config,
            solver: GwSolver::new(),
            table: RwLock::default(),
            memo: RwLock::default(),
        }
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    pub fn solver(&self) -> &GwSolver {
        &self.solver
    }

    /// Loads `N` records from a cache-format file into the table source.
    pub fn import_table(&self, path: &Path) -> Result<usize> {
        let records = store::load(path)?;
        self.import_records(&records)
    }

    pub fn import_records(&self, records: &MemoTable) -> Result<usize> {
        let mut count = 0;
        for (key, value) in records.iter() {
            let RecordKey::N(key) = *key else { continue };
            if !value.is_integer() {
                return Err(Error::NonIntegral {
                    what: format!("imported {key}"),
                    value: value.to_string(),
                });
            }
            let value = value.to_integer();
            if self.config.mode == ProviderMode::Hybrid && self.config.consistency_check {
                let engine = self.engine_base_number(key)?;
                if engine != value {
                    return Err(provider_mismatch(key, &value, &engine));
                }
            }
            let mut table = self.table.write().unwrap();
            match table.get(&key) {
                Some(prev) if *prev != value => {
                    return Err(Error::DuplicateKey {
                        key: key.to_string(),
                        first: prev.to_string(),
                        second: value.to_string(),
                    })
                }
                _ => {
                    table.insert(key, value);
                }
            }
            count += 1;
        }
        Ok(count)
    }

    /// Seeds the memo with previously computed values.
    pub fn preload(&self, values: impl IntoIterator<Item = (BaseKey, BigInt)>) {
        let mut memo = self.memo.write().unwrap();
        memo.extend(values);
    }

    pub fn memo_snapshot(&self) -> Vec<(BaseKey, BigInt)> {
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

    /// `N_d(r, s, θ)`.
    pub fn base_number(&self, d: u32, r: u32, s: u32, theta: u32) -> Result<BigInt> {
        if d == 0 {
            return Err(Error::InvalidArgument("base numbers need d ≥ 1".into()));
        }
        let key = BaseKey::new(d, r, s, theta);
        if !key.is_on_shell() {
            return Ok(BigInt::zero());
        }
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = self.provide(key)?;
        if self.config.consistency_check && d == 1 {
            let oracle = flag_oracle::n1(r, s, theta);
            if oracle != value {
                return Err(Error::OracleMismatch {
                    d,
                    r,
                    s,
                    theta,
                    engine: value.to_string(),
                    oracle: oracle.to_string(),
                });
            }
        }
        if value.is_negative() {
            log::warn!("{key} = {value} is negative; not enumerative");
        }
        self.memo.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    fn provide(&self, key: BaseKey) -> Result<BigInt> {
        let tabled = self.table.read().unwrap().get(&key).cloned();
        match (self.config.mode, tabled) {
            (ProviderMode::Engine, _) => self.engine_base_number(key),
            (ProviderMode::Table, Some(v)) => Ok(v),
            (ProviderMode::Table, None) => Err(Error::MissingFromTable {
                d: key.d,
                r: key.r,
                s: key.s,
                theta: key.theta,
            }),
            (ProviderMode::Hybrid, Some(v)) => {
                if self.config.consistency_check {
                    let engine = self.engine_base_number(key)?;
                    if engine != v {
                        return Err(provider_mismatch(key, &v, &engine));
                    }
                }
                Ok(v)
            }
            (ProviderMode::Hybrid, None) => self.engine_base_number(key),
        }
    }

    /// `N_d(r, s, θ) = (1/d) ⟨(H²)^r, pt^s, a^θH⟩_d` where `pt = aH² − a²H + a³` is the
    /// reduced point class of `P³`. The plane condition rides on a marked point that meets
    /// a hyperplane, which the curve does `d` times.
    pub fn engine_base_number(&self, key: BaseKey) -> Result<BigInt> {
        if key.d == 0 {
            return Err(Error::InvalidArgument("base numbers need d ≥ 1".into()));
        }
        if !key.is_on_shell() {
            return Ok(BigInt::zero());
        }
        if key.r > u16::MAX as u32 / 2 || key.s > u16::MAX as u32 / 2 {
            return Err(Error::InvalidArgument(format!("{key} is too large")));
        }
        let mut base = [0u16; BASIS_LEN];
        base[Monomial::LINE.index()] += key.r as u16;
        let marked = Monomial::new(key.theta, 1).expect("θ ≤ 3 checked");
        base[marked.index()] += 1;
        let ah2 = Monomial::new(1, 2).unwrap();
        let a2h = Monomial::new(2, 1).unwrap();
        let a3 = Monomial::new(3, 0).unwrap();
        let s = key.s;
        let mut total = Rational::zero();
        for k1 in 0..=s {
            for k2 in 0..=(s - k1) {
                let k3 = s - k1 - k2;
                let mut counts = base;
                counts[ah2.index()] += k1 as u16;
                counts[a2h.index()] += k2 as u16;
                counts[a3.index()] += k3 as u16;
                let v = self.solver.inv(key.d, &counts)?;
                if v.is_zero() {
                    continue;
                }
                let mut coeff = binomial(s, k1) * binomial(s - k1, k2);
                if k2 % 2 == 1 {
                    coeff = -coeff;
                }
                total += v * Rational::from_integer(coeff);
            }
        }
        let value = total / int(key.d as i64);
        if !value.is_integer() {
            return Err(Error::NonIntegral {
                what: format!("base number {key}"),
                value: value.to_string(),
            });
        }
        Ok(value.to_integer())
    }
}

fn provider_mismatch(key: BaseKey, table: &BigInt, engine: &BigInt) -> Error {
    Error::ProviderMismatch {
        d: key.d,
        r: key.r,
        s: key.s,
        theta: key.theta,
        table: table.to_string(),
        engine: engine.to_string(),
    }
}
