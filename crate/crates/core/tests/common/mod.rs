//! Seeded generators shared by the property and acceptance suites.
#![allow(dead_code)]

use cuspcount::ring::{Monomial, RingClass};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

/// Basis monomials of the given degree.
pub fn monomials_of_degree(k: u32) -> Vec<Monomial> {
    Monomial::basis().filter(|m| m.degree() == k).collect()
}

/// `n` insertions of degree ≥ 2 whose degrees sum to `total`, or `None` if impossible.
pub fn insertions_with_sum(rng: &mut StdRng, n: usize, total: u32) -> Option<Vec<Monomial>> {
    let n32 = n as u32;
    if total < 2 * n32 || total > 5 * n32 {
        return None;
    }
    let mut degrees = vec![2u32; n];
    let mut left = total - 2 * n32;
    while left > 0 {
        let i = rng.gen_range(0..n);
        if degrees[i] < 5 {
            degrees[i] += 1;
            left -= 1;
        }
    }
    Some(
        degrees
            .into_iter()
            .map(|k| {
                let ms = monomials_of_degree(k);
                ms[rng.gen_range(0..ms.len())]
            })
            .collect(),
    )
}

/// An on-shell insertion list for fiber degree `d`: `Σ deg = 3d + n + 2`.
pub fn on_shell_insertions(rng: &mut StdRng, d: u32) -> Vec<Monomial> {
    loop {
        let n = rng.gen_range(2..=6);
        if let Some(ins) = insertions_with_sum(rng, n, 3 * d + n as u32 + 2) {
            return ins;
        }
    }
}

/// A random class with small coefficients, homogeneous of degree `k`.
pub fn random_homogeneous(rng: &mut StdRng, k: u32) -> RingClass {
    let mut c = RingClass::zero();
    for m in monomials_of_degree(k) {
        c.set_coeff(m, BigInt::from(rng.gen_range(-3i64..=3)));
    }
    c
}

/// Determinant of a small integer matrix by fraction-free elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Determinant of the pairing block between degrees `k` and `5 − k`.
pub fn pairing_block_det(k: u32) -> i128 {
    let g = cuspcount::ring::pairing_matrix();
    let rows = monomials_of_degree(k);
    let cols = monomials_of_degree(cuspcount::ring::DIM - k);
    assert_eq!(
        rows.len(),
        cols.len(),
        "degree {k} and its complement differ in rank"
    );
    det(rows
        .iter()
        .map(|x| {
            cols.iter()
                .map(|y| g[x.index()][y.index()] as i128)
                .collect()
        })
        .collect())
}
