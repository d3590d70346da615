mod common;

use std::path::Path;

use cuspcount::gw_base::{BaseKey, GwSolver, Rational};
use cuspcount::ring::{self, Monomial, RingClass};
use cuspcount::store::{self, format_rational, parse_rational, MemoTable, RecordKey};
use cuspcount::taut::PhiKey;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn class_strategy() -> impl Strategy<Value = RingClass> {
    prop::array::uniform12(-6i64..=6).prop_map(|c| {
        let mut x = RingClass::zero();
        for (i, v) in c.into_iter().enumerate() {
            x.set_coeff(Monomial::from_index(i), BigInt::from(v));
        }
        x
    })
}

/// Raw polynomial product before reduction; the oracle for `ring::mul`.
fn naive_product(x: &RingClass, y: &RingClass) -> RingClass {
    let mut terms = Vec::new();
    for (mx, cx) in x.terms() {
        for (my, cy) in y.terms() {
            terms.push((
                (mx.a_power() + my.a_power(), mx.h_power() + my.h_power()),
                cx * cy,
            ));
        }
    }
    ring::reduce(terms)
}

fn as_terms(x: &RingClass) -> Vec<((u32, u32), BigInt)> {
    x.terms()
        .map(|(m, c)| ((m.a_power(), m.h_power()), c.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_commutative_and_associative(x in class_strategy(), y in class_strategy(), z in class_strategy()) {
        prop_assert_eq!(ring::mul(&x, &y), ring::mul(&y, &x));
        let left = ring::mul(&ring::mul(&x, &y), &z);
        let right = ring::mul(&x, &ring::mul(&y, &z));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ring_product_matches_naive_reduction(x in class_strategy(), y in class_strategy()) {
        prop_assert_eq!(ring::mul(&x, &y), naive_product(&x, &y));
    }

    #[test]
    fn distributive(x in class_strategy(), y in class_strategy(), z in class_strategy()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn reduce_is_idempotent(raw in prop::collection::vec(((0u32..9, 0u32..9), -20i64..20), 0..12)) {
        let once = ring::reduce(raw.into_iter().map(|(e, c)| (e, BigInt::from(c))));
        let twice = ring::reduce(as_terms(&once));
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn rational_text_round_trip(p in any::<i64>(), q in 1i64..i64::MAX) {
        let v = Rational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
    }
}

fn record_strategy() -> impl Strategy<Value = (RecordKey, Rational)> {
    let n_key = (0u32..8, 0u32..25, 0u32..13, 0u32..4)
        .prop_map(|(d, r, s, t)| RecordKey::N(BaseKey::new(d, r, s, t)));
    let phi_key = (0u32..8, 0u32..3, 0u32..3, 0u32..25, 0u32..13, 0u32..4)
        .prop_map(|(d, i, j, r, s, t)| RecordKey::Phi(PhiKey::new(d, i, j, r, s, t)));
    let value =
        (any::<i64>(), 1i64..1_000_000).prop_map(|(p, q)| Rational::new(p.into(), q.into()));
    (prop_oneof![n_key, phi_key], value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn store_round_trip(records in prop::collection::vec(record_strategy(), 0..1000)) {
        let mut table = MemoTable::new();
        for (k, v) in records {
            if table.get(&k).is_none() {
                table.insert(k, v).unwrap();
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("memo.txt");
        store::save(&path, &table).unwrap();
        let back = store::load(&path).unwrap();
        prop_assert_eq!(&back, &table);
        prop_assert_eq!(back.to_text(), table.to_text());
    }
}

#[test]
fn store_round_trip_thousand_records() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut table = MemoTable::new();
    while table.len() < 1000 {
        let key = if rng.gen_bool(0.5) {
            RecordKey::N(BaseKey::new(
                rng.gen_range(1..8),
                rng.gen_range(0..25),
                rng.gen_range(0..13),
                rng.gen_range(0..4),
            ))
        } else {
            RecordKey::Phi(PhiKey::new(
                rng.gen_range(1..8),
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                rng.gen_range(0..25),
                rng.gen_range(0..13),
                rng.gen_range(0..4),
            ))
        };
        let big = BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<u64>());
        let value = Rational::new(big, BigInt::from(rng.gen_range(1..500u32)));
        if table.get(&key).is_none() {
            table.insert(key, value).unwrap();
        }
    }
    let text = table.to_text();
    let back = MemoTable::parse(&text, Path::new("mem")).unwrap();
    assert_eq!(back.records(), table.records());
    assert_eq!(back.len(), 1000);
}

#[test]
fn pairing_blocks_are_unimodular() {
    for k in 0..=ring::DIM {
        let det = common::pairing_block_det(k);
        assert_eq!(det.abs(), 1, "degree {k} block has determinant {det}");
    }
}

#[test]
fn dual_basis_is_dual() {
    for x in Monomial::basis() {
        for y in Monomial::basis() {
            let v = ring::integrate(&ring::mul(&RingClass::monomial(x), &ring::poincare_dual(y)));
            let want = if x == y {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            assert_eq!(v, want, "∫ {x}·{y}^∨");
        }
    }
}

#[test]
fn divisor_axiom_on_random_keys() {
    let solver = GwSolver::new();
    let mut rng = StdRng::seed_from_u64(11);
    let (mut nonzero, mut drawn) = (0, 0);
    while nonzero < 100 {
        drawn += 1;
        assert!(drawn < 20_000, "sampler found only {nonzero} nonzero keys");
        let d = rng.gen_range(1..=3);
        let rest = common::on_shell_insertions(&mut rng, d);
        let mut with_h = rest.clone();
        with_h.push(Monomial::H);
        let lhs = solver.invariant_of(d, &with_h).unwrap();
        let rhs = solver.invariant_of(d, &rest).unwrap() * Rational::from_integer(d.into());
        assert_eq!(lhs, rhs, "divisor axiom fails for d={d}, {rest:?}");
        // The hyperplane class of the plane pairs to zero with every fiber class.
        let mut with_a = rest.clone();
        with_a.push(Monomial::A);
        assert!(solver.invariant_of(d, &with_a).unwrap().is_zero());
        if !lhs.is_zero() {
            nonzero += 1;
        }
    }
}

#[test]
fn wdvv_residuals_vanish() {
    let solver = GwSolver::new();
    let mut rng = StdRng::seed_from_u64(13);
    let basis: Vec<Monomial> = Monomial::basis().collect();
    let mut tested = 0;
    while tested < 150 {
        let d = rng.gen_range(0..=2);
        let extras: Vec<Monomial> = (0..rng.gen_range(0..=2))
            .map(|_| *basis[1..].choose(&mut rng).unwrap())
            .collect();
        let slots: Vec<Monomial> = (0..4).map(|_| *basis.choose(&mut rng).unwrap()).collect();
        let n = 4 + extras.len() as u32;
        let total: u32 = slots.iter().chain(&extras).map(|m| m.degree()).sum();
        if total != 3 * d + n + 1 {
            continue;
        }
        let classes: Vec<RingClass> = slots.iter().map(|&m| RingClass::monomial(m)).collect();
        let r = solver
            .wdvv_residual(
                d,
                [&classes[0], &classes[1], &classes[2], &classes[3]],
                &extras,
            )
            .unwrap();
        assert!(
            r.is_zero(),
            "residual {r} for d={d}, slots {slots:?}, extras {extras:?}"
        );
        tested += 1;
    }
}

#[test]
fn wdvv_residuals_vanish_for_mixed_classes() {
    let solver = GwSolver::new();
    let mut rng = StdRng::seed_from_u64(17);
    let mut tested = 0;
    while tested < 60 {
        let d = rng.gen_range(1..=2);
        let degs: Vec<u32> = (0..4).map(|_| rng.gen_range(1..=5)).collect();
        if degs.iter().sum::<u32>() != 3 * d + 5 {
            continue;
        }
        let classes: Vec<RingClass> = degs
            .iter()
            .map(|&k| common::random_homogeneous(&mut rng, k))
            .collect();
        let r = solver
            .wdvv_residual(d, [&classes[0], &classes[1], &classes[2], &classes[3]], &[])
            .unwrap();
        assert!(r.is_zero(), "residual {r} for d={d}");
        tested += 1;
    }
}

#[test]
fn invariants_ignore_insertion_order() {
    let solver = GwSolver::new();
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..60 {
        let d = rng.gen_range(1..=3);
        let shape = common::on_shell_insertions(&mut rng, d);
        let mut classes: Vec<RingClass> = shape
            .iter()
            .map(|m| common::random_homogeneous(&mut rng, m.degree()))
            .collect();
        let reference = solver
            .invariant_of_classes(d, &classes.iter().collect::<Vec<_>>())
            .unwrap();
        for _ in 0..3 {
            classes.shuffle(&mut rng);
            let v = solver
                .invariant_of_classes(d, &classes.iter().collect::<Vec<_>>())
                .unwrap();
            assert_eq!(v, reference);
        }
    }
}

#[test]
fn plane_class_moves_between_insertions() {
    // ⟨a·β, α, …⟩ = ⟨β, a·α, …⟩: a is pulled back from the space of planes, constant on fiber curves.
    let solver = GwSolver::new();
    let mut rng = StdRng::seed_from_u64(23);
    let a = RingClass::a();
    let mut checked = 0;
    while checked < 80 {
        let d = rng.gen_range(1..=3);
        let ins = common::on_shell_insertions(&mut rng, d);
        let Some(i) = (0..ins.len()).find(|&i| ins[i].a_power() > 0) else {
            continue;
        };
        let j = (i + 1) % ins.len();
        let beta = Monomial::new(ins[i].a_power() - 1, ins[i].h_power()).unwrap();
        let mut moved: Vec<RingClass> = ins.iter().map(|&m| RingClass::monomial(m)).collect();
        moved[i] = RingClass::monomial(beta);
        moved[j] = ring::mul(&a, &moved[j]);
        let lhs = solver.invariant_of(d, &ins).unwrap();
        let rhs = solver
            .invariant_of_classes(d, &moved.iter().collect::<Vec<_>>())
            .unwrap();
        assert_eq!(lhs, rhs, "d={d}, {ins:?}");
        checked += 1;
    }
}
