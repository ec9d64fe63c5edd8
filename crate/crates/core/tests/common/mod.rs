//! Shared generators for the integration tests.
#![allow(dead_code)]

use goodring::ring::{parse_ring, Element, Ring};

/// One instance of every ring family, plus a few products.
pub fn sample_rings() -> Vec<Ring> {
    [
        "Z", "Z/1", "Z/2", "Z/12", "Z/36", "GF(5)", "GF(7)[T]", "Q[T]", "locQ(3)",
        "prod(Z/4,Z/9)", "prod(Z,GF(3))", "prod(Z/6,GF(2)[T])",
    ]
    .iter()
    .map(|s| parse_ring(s).unwrap())
    .collect()
}

/// Builds an element from a stream of small integers. Polynomial rings
/// use up to three coefficients; the localized ring divides by `T + k`,
/// which never vanishes on `{0} ∪ {p^k}`.
pub fn element(ring: &Ring, ints: &mut impl Iterator<Item = i64>) -> Element {
    let mut next = || ints.next().unwrap_or(0);
    match ring {
        Ring::PolyOverPrimeField(_) | Ring::RationalPoly => {
            let t = ring.parse_element("T").unwrap();
            (0..3).fold(ring.zero(), |acc, _| ring.add(&ring.mul(&acc, &t), &ring.from_int(next())))
        }
        Ring::LocalizedRationalPoly(_) => {
            let t = ring.parse_element("T").unwrap();
            let num = (0..3).fold(ring.zero(), |acc, _| ring.add(&ring.mul(&acc, &t), &ring.from_int(next())));
            let den = ring.add(&t, &ring.from_int(1 + next().rem_euclid(5)));
            ring.mul(&num, &ring.unit_inverse(&den).expect("T + k is a unit"))
        }
        Ring::Product(factors) => {
            let mut rest = (0..12).map(|_| next()).collect::<Vec<_>>().into_iter();
            Element::Tuple(factors.iter().map(|f| element(f, &mut rest)).collect())
        }
        _ => ring.from_int(next()),
    }
}

pub fn int(v: i64) -> Element {
    Element::Int(v.into())
}
