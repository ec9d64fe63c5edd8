//! Brute-force reference computations for small instances.
//!
//! These deliberately avoid the library's own reduction, unit and
//! elimination routines so that agreement means something.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};
use crate::sab::{SabAlgebra, SabElement};

/// One comparison between an oracle and the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub instance: String,
    pub oracle: String,
    pub library: String,
    pub agree: bool,
}

impl OracleReport {
    pub fn compare(instance: impl Into<String>, oracle: impl ToString, library: impl ToString) -> Self {
        let (oracle, library) = (oracle.to_string(), library.to_string());
        OracleReport {
            instance: instance.into(),
            agree: oracle == library,
            oracle,
            library,
        }
    }
}

/// The least `N` with `b^N ≡ ±1 (mod a)`, preferring `+1`, and the
/// matching `λ = (ε − b^N)/a`.
pub fn oracle_min_witness_z(a: &BigInt, b: &BigInt) -> Result<Option<(u64, BigInt, BigInt)>> {
    if a.is_zero() {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::NotPrimitive);
    }
    let m = a.abs();
    let one = BigInt::one().mod_floor(&m);
    let minus_one = (&m - 1u32).mod_floor(&m);
    let step = b.mod_floor(&m);
    let mut r = one.clone();
    let mut power = BigInt::one();
    let mut n = 0u64;
    // φ(m) ≤ m, so m steps suffice
    while BigInt::from(n) < m {
        n += 1;
        r = (&r * &step).mod_floor(&m);
        power *= b;
        let epsilon = if r == one {
            BigInt::one()
        } else if r == minus_one {
            -BigInt::one()
        } else {
            continue;
        };
        let (lambda, rem) = (&epsilon - &power).div_rem(a);
        assert!(rem.is_zero());
        return Ok(Some((n, lambda, epsilon)));
    }
    Ok(None)
}

/// Units of a finite ring from its multiplication table.
pub fn oracle_unit_set(ring: &Ring) -> Result<Vec<Element>> {
    let elems = ring.elements()?;
    let one = ring.one();
    Ok(elems
        .iter()
        .filter(|x| elems.iter().any(|y| ring.mul(x, y) == one))
        .cloned()
        .collect())
}

/// Units of `B_a` over a finite base, multiplying in `A[T]/(T² − aT)`
/// directly rather than through the algebra's own routines.
pub fn oracle_sab_unit_set(alg: &SabAlgebra) -> Result<Vec<SabElement>> {
    let r = alg.base();
    let base = r.elements()?;
    let pairs: Vec<(Element, Element)> = base
        .iter()
        .flat_map(|x| base.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let product = |(c0, c1): &(Element, Element), (d0, d1): &(Element, Element)| {
        // (c0 + c1 T)(d0 + d1 T) = c0 d0 + (c0 d1 + c1 d0) T + c1 d1 T², T² = aT
        let t2 = r.mul(c1, d1);
        let t1 = r.add(&r.add(&r.mul(c0, d1), &r.mul(c1, d0)), &r.mul(alg.a(), &t2));
        (r.mul(c0, d0), t1)
    };
    let one = (r.one(), r.zero());
    Ok(pairs
        .iter()
        .filter(|z| pairs.iter().any(|w| product(z, w) == one))
        .map(|(x, y)| SabElement::new(x.clone(), y.clone()))
        .collect())
}

/// `dim {Q ∈ F_p[X_0,X_1,X_2]_D : Q(a_0T, a_1T, a_2T) = 0}` by row
/// reduction of the substitution map on monomial coefficients.
pub fn oracle_kernel_span(p: u64, point: [u64; 3], degree: u32) -> usize {
    let mut monos = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            monos.push([i, j, degree - i - j]);
        }
    }
    // Q(aT) = T^D · Σ c_m a^m, so the image lives in the span of T^D.
    let row: Vec<u64> = monos
        .iter()
        .map(|m| {
            (0..3).fold(1u64, |acc, v| {
                let mut x = 1u64;
                for _ in 0..m[v] {
                    x = x * (point[v] % p) % p;
                }
                acc * x % p
            })
        })
        .collect();
    monos.len() - rank(vec![row], p)
}

fn rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, piv);
        // inverse by Fermat
        let mut inv = 1u64;
        let (mut base, mut e) = (m[r][c] % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        let pivot: Vec<u64> = m[r].iter().map(|x| x * inv % p).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r {
                let f = row[c] % p;
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        v.into()
    }

    #[test]
    fn min_witness() {
        assert_eq!(
            oracle_min_witness_z(&big(5), &big(2)).unwrap(),
            Some((2, big(-1), big(-1)))
        );
        assert_eq!(
            oracle_min_witness_z(&big(7), &big(3)).unwrap(),
            Some((3, big(-4), big(-1)))
        );
        assert_eq!(oracle_min_witness_z(&big(2), &big(1)).unwrap(), Some((1, big(0), big(1))));
        assert!(oracle_min_witness_z(&big(4), &big(2)).is_err());
        assert!(oracle_min_witness_z(&big(0), &big(1)).is_err());
    }

    #[test]
    fn unit_sets() {
        assert_eq!(
            oracle_unit_set(&Ring::IntegersMod(6)).unwrap(),
            vec![Element::Residue(1), Element::Residue(5)]
        );
        assert_eq!(oracle_unit_set(&Ring::PrimeField(3)).unwrap().len(), 2);
        let alg = SabAlgebra::new(Ring::IntegersMod(5), Element::Residue(0)).unwrap();
        // θ ↦ 0 and θ ↦ 0: units are x ∈ F_5^×, any y
        assert_eq!(oracle_sab_unit_set(&alg).unwrap().len(), 20);
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(oracle_kernel_span(2, [1, 0, 0], 1), 2);
        assert_eq!(oracle_kernel_span(5, [1, 2, 3], 1), 2);
        assert_eq!(oracle_kernel_span(3, [1, 1, 1], 2), 5);
        assert_eq!(oracle_kernel_span(3, [0, 1, 2], 3), 9);
    }
}
