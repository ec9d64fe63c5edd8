//! Dense univariate polynomials over a field, stored little-endian
//! (index = power of `T`) with no trailing zero coefficients.
//!
//! The coefficient field is passed explicitly so that prime fields with a
//! runtime modulus and the rationals share one implementation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn neg(&self, x: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn inv(&self, x: &Self::E) -> Option<Self::E>;
    fn from_u64(&self, n: u64) -> Self::E;

    fn is_zero(&self, x: &Self::E) -> bool {
        *x == self.zero()
    }
    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E {
        self.add(x, &self.neg(y))
    }
}

/// The prime field `GF(p)` with residues in `[0, p)`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField(pub u64);

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 + *y as u128) % self.0 as u128) as u64
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.0 - x % self.0) % self.0
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 * *y as u128) % self.0 as u128) as u64
    }
    fn inv(&self, x: &u64) -> Option<u64> {
        mod_inverse(*x, self.0)
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.0
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy)]
pub struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn inv(&self, x: &BigRational) -> Option<BigRational> {
        (!x.is_zero()).then(|| x.recip())
    }
    fn from_u64(&self, n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Inverse of `x` modulo `m`, if it exists.
pub fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (x as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub fn trim<F: Field>(f: &F, mut p: Vec<F::E>) -> Vec<F::E> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::E) -> Vec<F::E> {
    trim(f, vec![c])
}

pub fn add<F: Field>(f: &F, x: &[F::E], y: &[F::E]) -> Vec<F::E> {
    let n = x.len().max(y.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.add(x.get(i).unwrap_or(&zero), y.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn neg<F: Field>(f: &F, x: &[F::E]) -> Vec<F::E> {
    x.iter().map(|c| f.neg(c)).collect()
}

pub fn sub<F: Field>(f: &F, x: &[F::E], y: &[F::E]) -> Vec<F::E> {
    add(f, x, &neg(f, y))
}

pub fn scale<F: Field>(f: &F, x: &[F::E], c: &F::E) -> Vec<F::E> {
    trim(f, x.iter().map(|a| f.mul(a, c)).collect())
}

pub fn mul<F: Field>(f: &F, x: &[F::E], y: &[F::E]) -> Vec<F::E> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if f.is_zero(a) {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(a, b));
        }
    }
    trim(f, out)
}

pub fn pow<F: Field>(f: &F, x: &[F::E], mut e: u64) -> Vec<F::E> {
    let mut acc = constant(f, f.one());
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(f, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(f, &base, &base);
        }
    }
    acc
}

/// Euclidean division `x = q*d + r` with `deg r < deg d`. Panics if `d` is zero.
pub fn div_rem<F: Field>(f: &F, x: &[F::E], d: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    let dd = degree(d).expect("division by the zero polynomial");
    let lead_inv = f.inv(&d[dd]).expect("leading coefficient is invertible");
    let mut r = x.to_vec();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - dd];
    while let Some(rd) = degree(&r) {
        if rd < dd {
            break;
        }
        let c = f.mul(&r[rd], &lead_inv);
        let shift = rd - dd;
        for (i, di) in d.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, di));
        }
        q[shift] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn monic<F: Field>(f: &F, x: &[F::E]) -> Vec<F::E> {
    match x.last() {
        None => Vec::new(),
        Some(lc) => scale(f, x, &f.inv(lc).expect("nonzero leading coefficient")),
    }
}

/// Extended gcd: returns `(g, s, t)` with `s*x + t*y = g` and `g` monic
/// (or zero when both inputs are zero).
pub fn ext_gcd<F: Field>(
    f: &F,
    x: &[F::E],
    y: &[F::E],
) -> (Vec<F::E>, Vec<F::E>, Vec<F::E>) {
    let (mut r0, mut r1) = (x.to_vec(), y.to_vec());
    let (mut s0, mut s1) = (constant(f, f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = div_rem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last().cloned() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv(&lc).expect("nonzero leading coefficient");
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

pub fn eval<F: Field>(f: &F, x: &[F::E], at: &F::E) -> F::E {
    x.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, at), c))
}

pub fn derivative<F: Field>(f: &F, x: &[F::E]) -> Vec<F::E> {
    let out = x
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_u64(i as u64)))
        .collect();
    trim(f, out)
}

/// `T - root`.
pub fn linear<F: Field>(f: &F, root: &F::E) -> Vec<F::E> {
    vec![f.neg(root), f.one()]
}

// Integer-specific helpers for rational polynomials.

/// Scales `x` by a positive rational so that the coefficients become
/// coprime integers (the primitive part over Z, leading sign kept).
pub fn primitive_integer_part(x: &[BigRational]) -> Vec<BigInt> {
    let lcm = x
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

pub fn is_integral(x: &[BigRational]) -> bool {
    x.iter().all(|c| c.is_integer())
}

/// All distinct rational roots, ascending.
///
/// Uses the rational root theorem on the primitive integer part: a root
/// `u/v` in lowest terms has `u | c0` and `v | lc`. Errors when a constant
/// is too large to enumerate divisors by trial division.
pub fn rational_roots(x: &[BigRational]) -> crate::Result<Vec<BigRational>> {
    let f = Rationals;
    let mut roots = Vec::new();
    if x.is_empty() {
        return Err(crate::Error::Precondition(
            "the zero polynomial has every rational as a root".into(),
        ));
    }
    let mut p = x.to_vec();
    if p[0].is_zero() {
        roots.push(BigRational::zero());
        while !p.is_empty() && p[0].is_zero() {
            p.remove(0);
        }
    }
    if p.len() <= 1 {
        return Ok(roots);
    }
    let ints = primitive_integer_part(&p);
    let c0 = ints[0].abs();
    let lc = ints.last().unwrap().abs();
    let nums = divisors(&c0)?;
    let dens = divisors(&lc)?;
    let mut found = Vec::new();
    for u in &nums {
        for v in &dens {
            if !u.gcd(v).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let cand = BigRational::new(u * sign, v.clone());
                if eval(&f, &p, &cand).is_zero() {
                    found.push(cand);
                }
            }
        }
    }
    roots.extend(found);
    roots.sort();
    roots.dedup();
    Ok(roots)
}

const MAX_TRIAL_DIVISION: u64 = 1 << 26;

/// Positive divisors of a nonzero integer, ascending.
pub fn divisors(n: &BigInt) -> crate::Result<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Err(crate::Error::Precondition("divisors of zero".into()));
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= m {
        if d > MAX_TRIAL_DIVISION {
            return Err(crate::Error::Unsupported(format!(
                "integer {n} is too large to factor by trial division"
            )));
        }
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        trim(
            &Rationals,
            v.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    #[test]
    fn division_by_quadratic() {
        // T^3 = (T+1)(T^2-T) + T
        let (quo, rem) = div_rem(&Rationals, &q(&[0, 0, 0, 1]), &q(&[0, -1, 1]));
        assert_eq!(quo, q(&[1, 1]));
        assert_eq!(rem, q(&[0, 1]));
    }

    #[test]
    fn ext_gcd_over_gf5() {
        let f = PrimeField(5);
        // (T+1) and (T+2) are coprime
        let (g, s, t) = ext_gcd(&f, &[1, 1], &[2, 1]);
        assert_eq!(g, vec![1]);
        let lhs = add(&f, &mul(&f, &s, &[1, 1]), &mul(&f, &t, &[2, 1]));
        assert_eq!(lhs, vec![1]);
    }

    #[test]
    fn roots_of_split_cubic() {
        // (T)(T-1)(2T+3)
        let p = mul(&Rationals, &q(&[0, -1, 1]), &q(&[3, 2]));
        let roots = rational_roots(&p).unwrap();
        assert_eq!(
            roots,
            vec![
                BigRational::new((-3).into(), 2.into()),
                BigRational::zero(),
                BigRational::one()
            ]
        );
    }

    #[test]
    fn divisors_of_twelve() {
        let d: Vec<i64> = divisors(&BigInt::from(-12))
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 6), None);
        assert_eq!(mod_inverse(0, 1), Some(0));
    }
}
