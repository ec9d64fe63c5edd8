//! Helpers for the localization of `Q[T]` at the multiplicative set of
//! polynomials that vanish nowhere on `{0} ∪ {p^k : k ≥ 1}`.
//!
//! Every root in that set is an integer, so membership and the "avoidable"
//! factorization only ever look at integer roots, which must divide the
//! constant term once denominators are cleared.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::upoly::{self, Rationals};

type QPoly = Vec<BigRational>;

/// The points `p, p^2, ...` that could be integer roots of `x`, i.e. those
/// bounded by the absolute constant term of its primitive integer part.
fn prime_power_candidates(x: &[BigRational], p: u64) -> Vec<BigRational> {
    let ints = upoly::primitive_integer_part(x);
    let c0 = ints.first().map(|c| c.abs()).unwrap_or_default();
    let mut out = Vec::new();
    let p = BigInt::from(p);
    let mut pk = p.clone();
    while pk <= c0 {
        out.push(BigRational::from_integer(pk.clone()));
        pk *= &p;
    }
    out
}

/// Whether `x` has no root in `{0} ∪ {p^k}` (and is nonzero).
pub fn in_multiplicative_set(x: &[BigRational], p: u64) -> bool {
    if x.is_empty() || x[0].is_zero() {
        return false;
    }
    prime_power_candidates(x, p)
        .iter()
        .all(|z| !upoly::eval(&Rationals, x, z).is_zero())
}

/// Splits a nonzero `x` as `zpart * rest` where `zpart` is the monic
/// product of the linear factors `(T - z)` with `z ∈ {0} ∪ {p^k}` (with
/// multiplicity) and `rest` lies in the multiplicative set.
pub fn split_avoidable(x: &[BigRational], p: u64) -> (QPoly, QPoly) {
    let f = Rationals;
    let mut zpart = upoly::constant(&f, BigRational::one());
    let mut rest = x.to_vec();
    while rest.first().is_some_and(|c| c.is_zero()) {
        rest.remove(0);
        zpart = upoly::mul(&f, &zpart, &[BigRational::zero(), BigRational::one()]);
    }
    for z in prime_power_candidates(&rest, p) {
        let lin = upoly::linear(&f, &z);
        loop {
            if !upoly::eval(&f, &rest, &z).is_zero() {
                break;
            }
            let (quo, rem) = upoly::div_rem(&f, &rest, &lin);
            debug_assert!(rem.is_empty());
            rest = quo;
            zpart = upoly::mul(&f, &zpart, &lin);
        }
    }
    (zpart, rest)
}

/// Canonical fraction: `gcd(num, den) = 1`, `den` monic; zero is `0/1`.
pub fn normalize(num: QPoly, den: QPoly) -> (QPoly, QPoly) {
    let f = Rationals;
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return (num, upoly::constant(&f, BigRational::one()));
    }
    let (g, _, _) = upoly::ext_gcd(&f, &num, &den);
    let (num, _) = upoly::div_rem(&f, &num, &g);
    let (den, _) = upoly::div_rem(&f, &den, &g);
    let lc_inv = den.last().unwrap().recip();
    (
        upoly::scale(&f, &num, &lc_inv),
        upoly::scale(&f, &den, &lc_inv),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        v.iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect()
    }

    #[test]
    fn membership_for_p2() {
        assert!(in_multiplicative_set(&q(&[1]), 2));
        assert!(!in_multiplicative_set(&q(&[0, 1]), 2)); // T
        assert!(!in_multiplicative_set(&q(&[-4, 1]), 2)); // T - 4
        assert!(in_multiplicative_set(&q(&[-3, 1]), 2)); // T - 3
        assert!(in_multiplicative_set(&q(&[2, 1]), 2)); // T + 2
        assert!(in_multiplicative_set(&q(&[-1, 1]), 2)); // T - 1, 1 = p^0 is allowed
        assert!(in_multiplicative_set(&q(&[-2, 0, 1]), 2)); // T^2 - 2
    }

    #[test]
    fn split_removes_avoidable_roots() {
        // T^2 (T - 2)(T - 3)
        let x = upoly::mul(&Rationals, &q(&[0, 0, 1]), &q(&[6, -5, 1]));
        let (z, rest) = split_avoidable(&x, 2);
        assert_eq!(z, upoly::mul(&Rationals, &q(&[0, 0, 1]), &q(&[-2, 1])));
        assert_eq!(rest, q(&[-3, 1]));
    }
}
