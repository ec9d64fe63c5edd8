mod common;

use common::int;
use goodring::oracle::oracle_min_witness_z;
use goodring::ring::{parse_ring, Element, Ring};
use goodring::witness::{
    compose_product_witness, decide_good_point_rational_split, find_good_witness, map_integer_witness,
    refute_integer_poly_point, unit_quotient_group, verify_refutation, verify_witness, QuotientStatus,
    SearchOutcome,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `Π (T − r)` as little-endian rational coefficients.
fn from_roots(roots: &[i64]) -> Vec<BigRational> {
    roots.iter().fold(vec![q(1)], |acc, r| {
        let mut out = vec![q(0); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * q(*r);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn integer_witness_is_minimal(a in -500i64..500, b in -500i64..500) {
        prop_assume!(a != 0 && a.gcd(&b) == 1);
        let r = Ring::Integers;
        let oracle = oracle_min_witness_z(&a.into(), &b.into()).unwrap();
        let out = find_good_witness(&r, &int(a), &int(b), 10_000).unwrap();
        let w = out.witness().expect("Z is good");
        prop_assert!(verify_witness(&r, &int(a), &int(b), w));
        let (n, _, _) = oracle.expect("the oracle finds a witness");
        prop_assert_eq!(w.exponent, n);
    }

    #[test]
    fn finite_ring_witnesses_verify(n in 1u64..40, a in 0u64..40, b in 0u64..40) {
        let r = Ring::IntegersMod(n);
        let (ea, eb) = (Element::Residue(a % n), Element::Residue(b % n));
        match find_good_witness(&r, &ea, &eb, n + 1) {
            Ok(SearchOutcome::Witness(w)) => prop_assert!(verify_witness(&r, &ea, &eb, &w)),
            Ok(other) => prop_assert!(false, "Z/{} is good but got {:?}", n, other),
            Err(_) => prop_assert!(goodring::bezout::bezout(&r, &[ea, eb]).is_none()),
        }
    }
}

#[test]
fn split_decision_agrees_with_bounded_search() {
    let r = Ring::RationalPoly;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut good, mut bad) = (0, 0);
    let mut checked = 0;
    while checked < 100 {
        let k = rng.gen_range(1..=3);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < k {
            let t = rng.gen_range(-4..=4);
            if !roots.contains(&t) {
                roots.push(t);
            }
        }
        let a = from_roots(&roots);
        // half the time force |b| to agree on the roots
        let b: Vec<BigRational> = if rng.gen_bool(0.5) {
            let target: Vec<i64> = roots.iter().map(|_| if rng.gen_bool(0.5) { 3 } else { -3 }).collect();
            lagrange(&roots, &target)
        } else {
            (0..3).map(|_| q(rng.gen_range(-5..=5))).collect::<Vec<_>>()
        };
        let b = trim(b);
        let (ea, eb) = (Element::PolyQ(a.clone()), Element::PolyQ(b.clone()));
        let Ok(decision) = decide_good_point_rational_split(&a, &b) else {
            continue;
        };
        checked += 1;
        let search = find_good_witness(&r, &ea, &eb, 4).unwrap();
        match decision {
            SearchOutcome::Witness(w) => {
                good += 1;
                assert!(verify_witness(&r, &ea, &eb, &w));
                let found = search.witness().expect("bounded search finds N ≤ 2");
                assert_eq!(found.exponent, w.exponent);
            }
            SearchOutcome::Refuted(e) => {
                bad += 1;
                assert!(verify_refutation(&r, &ea, &eb, &e));
                assert!(search.witness().is_none());
            }
            SearchOutcome::Exhausted { .. } => panic!("the decision procedure always decides"),
        }
    }
    assert!(good > 10 && bad > 10, "good={good} bad={bad}");
}

fn lagrange(xs: &[i64], ys: &[i64]) -> Vec<BigRational> {
    let mut out = vec![q(0); xs.len()];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let others: Vec<i64> = xs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect();
        let basis = from_roots(&others);
        let scale = others.iter().fold(q(1), |acc, &x| acc * q(xi - x));
        for (o, c) in out.iter_mut().zip(&basis) {
            *o += c * q(yi) / &scale;
        }
    }
    out
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| *c == q(0)) {
        v.pop();
    }
    v
}

#[test]
fn integer_polynomial_refutations_verify() {
    let r = Ring::RationalPoly;
    // a = T(T − 2), b = 1 + 2T: b(0) = 1 but b(2) = 5
    let a = from_roots(&[0, 2]);
    let b = vec![q(1), q(2)];
    let e = refute_integer_poly_point(&a, &b, None).unwrap().expect("θ = 2 refutes");
    assert!(verify_refutation(&r, &Element::PolyQ(a.clone()), &Element::PolyQ(b), &e));
    // b ≡ ±1 at every root: inconclusive
    let b = vec![q(1), q(-1)];
    assert!(refute_integer_poly_point(&a, &b, None).unwrap().is_none());
    // content shared with a: not primitive
    assert!(refute_integer_poly_point(&[q(2), q(2)], &[q(4)], None).is_err());
}

#[test]
fn integer_quotient_orders() {
    let r = Ring::Integers;
    for a in 2i64..=60 {
        let phi = (1..=a).filter(|k| k.gcd(&a) == 1).count() as u64;
        let image = if a <= 2 { 1 } else { 2 };
        let rep = unit_quotient_group(&r, &int(a));
        assert_eq!(rep.status, QuotientStatus::Finite { order: phi / image }, "a={a}");
        assert_eq!(rep.carrier_size, Some(phi));
    }
}

#[test]
fn witnesses_survive_quotients() {
    let z = Ring::Integers;
    for n in [2u64, 6, 9, 35, 64] {
        let target = Ring::IntegersMod(n);
        for a in 1i64..25 {
            for b in -12i64..12 {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let w = find_good_witness(&z, &int(a), &int(b), 100).unwrap();
                let mapped = map_integer_witness(&target, w.witness().unwrap());
                let (ea, eb) = (target.from_int(a), target.from_int(b));
                assert!(verify_witness(&target, &ea, &eb, &mapped), "Z/{n} a={a} b={b}");
            }
        }
    }
}

#[test]
fn product_witnesses_compose() {
    let ring = parse_ring("prod(Z,Z/15,GF(7))").unwrap();
    let Ring::Product(factors) = &ring else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 50 {
        let pick = |rng: &mut ChaCha8Rng| -> Vec<Element> {
            factors.iter().map(|f| f.from_bigint(&BigInt::from(rng.gen_range(-20..20)))).collect()
        };
        let (av, bv) = (pick(&mut rng), pick(&mut rng));
        let parts: Option<Vec<_>> = factors
            .iter()
            .zip(av.iter().zip(&bv))
            .map(|(f, (x, y))| find_good_witness(f, x, y, 100).ok().and_then(|o| o.witness().cloned()))
            .collect();
        let Some(parts) = parts else { continue };
        let (a, b) = (Element::Tuple(av), Element::Tuple(bv));
        let w = compose_product_witness(&ring, &a, &b, &parts).unwrap();
        assert!(verify_witness(&ring, &a, &b, &w));
        done += 1;
    }
}
