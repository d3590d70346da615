//! Schubert calculus on the 5-dimensional space of flags (line ⊂ plane) in `P³`.
//!
//! This is the degree-one ground truth for the base numbers: a planar line is a line
//! together with a plane containing it. The flag space is the `P¹`-bundle of planes
//! through a line over the Grassmannian `G(2,4)`, with relation `a² = σ₁a − σ₂`.
//! Meeting a line pulls back `σ₁`, passing through a point pulls back `σ₂`.

use num_bigint::BigInt;

/// Schubert classes of `G(2,4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schubert {
    Unit,
    S1,
    S2,
    S11,
    S21,
    S22,
}

impl Schubert {
    pub const ALL: [Schubert; 6] = [
        Schubert::Unit,
        Schubert::S1,
        Schubert::S2,
        Schubert::S11,
        Schubert::S21,
        Schubert::S22,
    ];

    pub fn codim(self) -> u32 {
        match self {
            Schubert::Unit => 0,
            Schubert::S1 => 1,
            Schubert::S2 | Schubert::S11 => 2,
            Schubert::S21 => 3,
            Schubert::S22 => 4,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Pieri/Giambelli products on `G(2,4)`.
    fn times(self, other: Schubert) -> &'static [Schubert] {
        use Schubert::*;
        let (x, y) = if self <= other {
            (self, other)
        } else {
            (other, self)
        };
        match (x, y) {
            (Unit, Unit) => &[Unit],
            (Unit, S1) => &[S1],
            (Unit, S2) => &[S2],
            (Unit, S11) => &[S11],
            (Unit, S21) => &[S21],
            (Unit, S22) => &[S22],
            (S1, S1) => &[S2, S11],
            (S1, S2) | (S1, S11) => &[S21],
            (S1, S21) => &[S22],
            (S2, S2) | (S11, S11) => &[S22],
            _ => &[],
        }
    }
}

/// A class on the flag space over the basis `σ_λ · a^k`, `k ∈ {0, 1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlagClass {
    coeffs: [[i64; 2]; 6],
}

impl FlagClass {
    pub fn one() -> FlagClass {
        FlagClass::schubert(Schubert::Unit)
    }

    pub fn schubert(s: Schubert) -> FlagClass {
        let mut c = FlagClass::default();
        c.coeffs[s.index()][0] = 1;
        c
    }

    /// Class of the plane constraint.
    pub fn a() -> FlagClass {
        let mut c = FlagClass::default();
        c.coeffs[Schubert::Unit.index()][1] = 1;
        c
    }

    pub fn coeff(&self, s: Schubert, a_power: usize) -> i64 {
        self.coeffs[s.index()][a_power]
    }

    pub fn mul(&self, other: &FlagClass) -> FlagClass {
        let mut out = FlagClass::default();
        for x in Schubert::ALL {
            for k in 0..2 {
                let cx = self.coeffs[x.index()][k];
                if cx == 0 {
                    continue;
                }
                for y in Schubert::ALL {
                    for l in 0..2 {
                        let cy = other.coeffs[y.index()][l];
                        if cy == 0 {
                            continue;
                        }
                        for &z in x.times(y) {
                            out.add_reduced(z, k + l, cx * cy);
                        }
                    }
                }
            }
        }
        out
    }

    /// Adds `c · σ_z · a^k`, rewriting `a² = σ₁a − σ₂`.
    fn add_reduced(&mut self, z: Schubert, k: usize, c: i64) {
        match k {
            0 | 1 => self.coeffs[z.index()][k] += c,
            _ => {
                for &w in z.times(Schubert::S1) {
                    self.add_reduced(w, k - 1, c);
                }
                for &w in z.times(Schubert::S2) {
                    self.add_reduced(w, k - 2, -c);
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> FlagClass {
        (0..e).fold(FlagClass::one(), |acc, _| acc.mul(self))
    }

    /// Degree of the zero-dimensional part: the coefficient of `σ₂₂ · a`.
    pub fn integrate(&self) -> i64 {
        self.coeffs[Schubert::S22.index()][1]
    }
}

/// `N₁(r, s, θ)` by Schubert calculus: `∫ σ₁^r σ₂^s a^θ` over the flag space.
pub fn n1(r: u32, s: u32, theta: u32) -> BigInt {
    if theta > 3 || r as u64 + 2 * s as u64 + theta as u64 != 5 {
        return BigInt::from(0);
    }
    let class = FlagClass::schubert(Schubert::S1)
        .pow(r)
        .mul(&FlagClass::schubert(Schubert::S2).pow(s))
        .mul(&FlagClass::a().pow(theta));
    BigInt::from(class.integrate())
}

/// All on-shell degree-one keys `(r, s, θ)` with `r + 2s + θ = 5`, `θ ≤ 3`.
pub fn degree_one_keys() -> Vec<(u32, u32, u32)> {
    let mut keys = Vec::new();
    for theta in 0..=3u32 {
        for s in 0..=(5 - theta) / 2 {
            keys.push((5 - theta - 2 * s, s, theta));
        }
    }
    keys
}
