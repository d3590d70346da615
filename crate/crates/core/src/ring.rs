//! Cohomology ring of the incidence variety `S = {(plane, point) : point ∈ plane}`.
//!
//! `S` sits in `P̂³ × P³`; `a` is the hyperplane class of the dual space and `H` the
//! hyperplane class of `P³`. The ring is `Z[a, H] / (a⁴, H³ − aH² + a²H − a³)`, free of
//! rank 12 over the monomials `a^i H^j` with `i ≤ 3`, `j ≤ 2`. The fundamental class is
//! normalized by `∫ a³H² = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Number of basis monomials.
pub const BASIS_LEN: usize = 12;
/// Complex dimension of `S`.
pub const DIM: u32 = 5;

/// A basis monomial `a^a · H^h` with `a ≤ 3`, `h ≤ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    a: u8,
    h: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, h: 0 };
    pub const A: Monomial = Monomial { a: 1, h: 0 };
    pub const H: Monomial = Monomial { a: 0, h: 1 };
    /// Class of curves meeting a line: `H²`.
    pub const LINE: Monomial = Monomial { a: 0, h: 2 };
    /// Point class of `S`.
    pub const POINT: Monomial = Monomial { a: 3, h: 2 };

    pub fn new(a: u32, h: u32) -> Option<Monomial> {
        (a <= 3 && h <= 2).then_some(Monomial {
            a: a as u8,
            h: h as u8,
        })
    }

    pub fn from_index(index: usize) -> Monomial {
        assert!(index < BASIS_LEN, "monomial index {index} out of range");
        Monomial {
            a: (index / 3) as u8,
            h: (index % 3) as u8,
        }
    }

    pub fn index(self) -> usize {
        self.a as usize * 3 + self.h as usize
    }

    pub fn a_power(self) -> u32 {
        self.a as u32
    }

    pub fn h_power(self) -> u32 {
        self.h as u32
    }

    pub fn degree(self) -> u32 {
        (self.a + self.h) as u32
    }

    pub fn basis() -> impl Iterator<Item = Monomial> {
        (0..BASIS_LEN).map(Monomial::from_index)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (sym, e) in [("a", self.a), ("H", self.h)] {
            match e {
                0 => {}
                1 => {
                    write!(f, "{sym}")?;
                    wrote = true;
                }
                e => {
                    write!(f, "{sym}^{e}")?;
                    wrote = true;
                }
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// An element of `H*(S; Z)` written over the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingClass {
    coeffs: [BigInt; BASIS_LEN],
}

impl Default for RingClass {
    fn default() -> Self {
        RingClass::zero()
    }
}

impl RingClass {
    pub fn zero() -> RingClass {
        RingClass {
            coeffs: std::array::from_fn(|_| BigInt::zero()),
        }
    }

    pub fn one() -> RingClass {
        RingClass::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> RingClass {
        let mut c = RingClass::zero();
        c.coeffs[m.index()] = BigInt::one();
        c
    }

    pub fn a() -> RingClass {
        RingClass::monomial(Monomial::A)
    }

    pub fn h() -> RingClass {
        RingClass::monomial(Monomial::H)
    }

    pub fn coeff(&self, m: Monomial) -> &BigInt {
        &self.coeffs[m.index()]
    }

    pub fn set_coeff(&mut self, m: Monomial, value: BigInt) {
        self.coeffs[m.index()] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::from_index(i), c))
    }

    /// `Some(k)` when every nonzero term has degree `k`. The zero class is homogeneous of
    /// every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms().map(|(m, _)| m.degree());
        let first = degrees.next()?;
        degrees.all(|k| k == first).then_some(first)
    }

    /// Part of degree exactly `k`.
    pub fn graded_part(&self, k: u32) -> RingClass {
        let mut out = RingClass::zero();
        for (m, c) in self.terms() {
            if m.degree() == k {
                out.coeffs[m.index()] = c.clone();
            }
        }
        out
    }

    /// Sum of graded parts of degree `≤ k`.
    pub fn truncate(&self, k: u32) -> RingClass {
        let mut out = RingClass::zero();
        for (m, c) in self.terms() {
            if m.degree() <= k {
                out.coeffs[m.index()] = c.clone();
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> RingClass {
        let mut acc = RingClass::one();
        for _ in 0..e {
            acc = mul(&acc, self);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> RingClass {
        RingClass {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * k),
        }
    }

    /// Small-integer view of the class, used by the invariant solver's hot loops.
    pub(crate) fn small_terms(&self) -> Vec<(Monomial, i64)> {
        self.terms()
            .map(|(m, c)| {
                let c = c
                    .to_i64()
                    .expect("ring coefficient does not fit in i64 in solver path");
                (m, c)
            })
            .collect()
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // Highest degree first reads like the usual notation.
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse((m.degree(), m.a)));
        for (m, c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &RingClass {
    type Output = RingClass;
    fn add(self, rhs: &RingClass) -> RingClass {
        RingClass {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl Sub for &RingClass {
    type Output = RingClass;
    fn sub(self, rhs: &RingClass) -> RingClass {
        RingClass {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl Neg for &RingClass {
    type Output = RingClass;
    fn neg(self) -> RingClass {
        RingClass {
            coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
        }
    }
}

impl Mul for &RingClass {
    type Output = RingClass;
    fn mul(self, rhs: &RingClass) -> RingClass {
        mul(self, rhs)
    }
}

/// Reduces an arbitrary integer polynomial in `a` and `H` to the monomial basis using
/// `a⁴ = 0` and `H³ = aH² − a²H + a³`.
pub fn reduce<I>(terms: I) -> RingClass
where
    I: IntoIterator<Item = ((u32, u32), BigInt)>,
{
    let mut out = RingClass::zero();
    let mut work: Vec<((u32, u32), BigInt)> = terms.into_iter().collect();
    while let Some(((i, j), c)) = work.pop() {
        if c.is_zero() || i >= 4 {
            continue;
        }
        if j >= 3 {
            let rest = j - 3;
            work.push(((i + 1, rest + 2), c.clone()));
            work.push(((i + 2, rest + 1), -c.clone()));
            work.push(((i + 3, rest), c));
            continue;
        }
        let m = Monomial::new(i, j).expect("exponents checked above");
        out.coeffs[m.index()] += c;
    }
    out
}

/// Products of basis monomials, reduced. Entries are tiny, so they are kept as `i64`.
pub(crate) struct ProductTable {
    entries: Vec<Vec<(Monomial, i64)>>,
}

impl ProductTable {
    pub(crate) fn get(&self, x: Monomial, y: Monomial) -> &[(Monomial, i64)] {
        &self.entries[x.index() * BASIS_LEN + y.index()]
    }
}

pub(crate) fn product_table() -> &'static ProductTable {
    static TABLE: OnceLock<ProductTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut entries = Vec::with_capacity(BASIS_LEN * BASIS_LEN);
        for x in Monomial::basis() {
            for y in Monomial::basis() {
                let p = reduce([(
                    (x.a_power() + y.a_power(), x.h_power() + y.h_power()),
                    BigInt::one(),
                )]);
                entries.push(p.small_terms());
            }
        }
        ProductTable { entries }
    })
}

/// Reduced product.
pub fn mul(x: &RingClass, y: &RingClass) -> RingClass {
    let table = product_table();
    let mut out = RingClass::zero();
    for (mx, cx) in x.terms() {
        for (my, cy) in y.terms() {
            let c = cx * cy;
            for &(m, k) in table.get(mx, my) {
                out.coeffs[m.index()] += &c * k;
            }
        }
    }
    out
}

/// Degree pairing against the fundamental class: the coefficient of `a³H²`.
pub fn integrate(x: &RingClass) -> BigInt {
    x.coeff(Monomial::POINT).clone()
}

/// `(c₁(W), c₂(W))` for the rank-two bundle `W` of tangent planes, obtained from
/// `c(W) = (1+H)⁴ / (1+a+H)`.
pub fn chern_w() -> (RingClass, RingClass) {
    let c = total_chern_w();
    (c.graded_part(1), c.graded_part(2))
}

/// Total Chern class of `W`, truncated at degree 2 (its rank).
pub fn total_chern_w() -> RingClass {
    let one = RingClass::one();
    let x = &RingClass::a() + &RingClass::h();
    // 1/(1+x) = Σ (−x)^k; x is nilpotent of order ≤ 6 in a 5-dimensional ring.
    let neg_x = -&x;
    let mut inverse = RingClass::zero();
    let mut term = one.clone();
    for _ in 0..=DIM {
        inverse = &inverse + &term;
        term = mul(&term, &neg_x);
    }
    let tangent = (&one + &RingClass::h()).pow(4);
    mul(&tangent, &inverse).truncate(2)
}

/// `g_{ef} = ∫ T_e T_f` over the monomial basis.
pub fn pairing_matrix() -> [[i64; BASIS_LEN]; BASIS_LEN] {
    let mut g = [[0i64; BASIS_LEN]; BASIS_LEN];
    let table = product_table();
    for x in Monomial::basis() {
        for y in Monomial::basis() {
            g[x.index()][y.index()] = table
                .get(x, y)
                .iter()
                .filter(|(m, _)| *m == Monomial::POINT)
                .map(|(_, k)| *k)
                .sum();
        }
    }
    g
}

/// Inverts the pairing matrix over the rationals and checks that the inverse is integral.
pub fn try_dual_basis() -> Result<Vec<RingClass>> {
    let g = pairing_matrix();
    let n = BASIS_LEN;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(g[i][j].into())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::SingularPairing)?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..2 * n {
                    let sub = &f * &m[col][k];
                    m[r][k] = &m[r][k] - sub;
                }
            }
        }
    }
    let mut duals = Vec::with_capacity(n);
    for row in m.iter() {
        let mut class = RingClass::zero();
        for (f, v) in row[n..].iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::SingularPairing);
            }
            class.coeffs[f] = v.to_integer();
        }
        duals.push(class);
    }
    Ok(duals)
}

/// Dual basis element `T^e` with `∫ T_e T^f = δ_ef`.
pub fn poincare_dual(m: Monomial) -> RingClass {
    dual_basis()[m.index()].clone()
}

pub(crate) fn dual_basis() -> &'static [RingClass] {
    static DUALS: OnceLock<Vec<RingClass>> = OnceLock::new();
    DUALS.get_or_init(|| try_dual_basis().expect("pairing on S must be unimodular"))
}

pub(crate) fn dual_basis_small() -> &'static [Vec<(Monomial, i64)>] {
    static DUALS: OnceLock<Vec<Vec<(Monomial, i64)>>> = OnceLock::new();
    DUALS.get_or_init(|| dual_basis().iter().map(RingClass::small_terms).collect())
}

/// Canonical description of the presentation, hashed into cache headers.
pub fn presentation_fingerprint() -> String {
    use sha2::{Digest, Sha256};
    let g = pairing_matrix();
    let mut text =
        String::from("S=P(ker O^4->O(1)) over P^3*; a^4=0; H^3=aH^2-a^2H+a^3; int(a^3H^2)=1;");
    for row in g.iter() {
        for v in row {
            text.push_str(&format!("{v},"));
        }
    }
    let digest = Sha256::digest(text.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
