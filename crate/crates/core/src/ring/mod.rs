//! Concrete commutative rings and their value-semantic elements.
//!
//! A [`Ring`] describes one instance (the integers, `Z/n`, a prime field,
//! `GF(p)[T]`, `Q[T]`, a finite product, or the localization of `Q[T]`
//! used as a non-obvious good ring). Elements are plain data in canonical
//! form; every operation goes through the ring so that moduli and other
//! parameters are never duplicated inside elements.

mod localized;
mod text;
pub mod upoly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use upoly::{PrimeField, Rationals};

pub use text::parse_ring;

/// Largest number of residues `quotient_residues` will enumerate.
pub const MAX_ENUMERATION: u128 = 1 << 20;

/// Height bound for the small-rational search in the localized ring.
pub const LOCALIZED_SEARCH_HEIGHT: i64 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    IntegersMod(u64),
    PrimeField(u64),
    PolyOverPrimeField(u64),
    RationalPoly,
    Product(Vec<Ring>),
    LocalizedRationalPoly(u64),
}

/// An element in canonical form. Which variant is valid depends on the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Int(BigInt),
    /// Residue in `[0, n)` for `Z/n` and `GF(p)`.
    Residue(u64),
    /// Little-endian coefficients in `[0, p)`, trimmed.
    PolyFp(Vec<u64>),
    /// Little-endian rational coefficients, trimmed.
    PolyQ(Vec<BigRational>),
    Tuple(Vec<Element>),
    /// `num / den` with `den` monic in the multiplicative set and coprime to `num`.
    Frac {
        num: Vec<BigRational>,
        den: Vec<BigRational>,
    },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn qconst(c: BigRational) -> Vec<BigRational> {
    upoly::constant(&Rationals, c)
}

fn qone() -> Vec<BigRational> {
    qconst(BigRational::one())
}

impl Ring {
    pub fn integers_mod(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        Ok(Ring::IntegersMod(n))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(Ring::PrimeField(p))
    }

    pub fn poly_over_prime_field(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(Ring::PolyOverPrimeField(p))
    }

    pub fn localized(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(Ring::LocalizedRationalPoly(p))
    }

    pub fn product(factors: Vec<Ring>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "a product ring needs at least one factor".into(),
            ));
        }
        Ok(Ring::Product(factors))
    }

    fn check_prime(p: u64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{p} is not prime")))
        }
    }

    fn wrong(&self, x: &Element) -> Error {
        Error::WrongRing {
            ring: self.to_string(),
            detail: format!("{x:?}"),
        }
    }

    /// Checks that `x` is a well-formed canonical element of this ring.
    pub fn check(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Ring::Integers, Element::Int(_)) => true,
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Element::Residue(r)) => r < n,
            (Ring::PolyOverPrimeField(p), Element::PolyFp(c)) => {
                c.iter().all(|v| v < p) && c.last() != Some(&0)
            }
            (Ring::RationalPoly, Element::PolyQ(c)) => c.last().is_none_or(|v| !v.is_zero()),
            (Ring::Product(rs), Element::Tuple(xs)) => {
                if rs.len() != xs.len() {
                    false
                } else {
                    for (r, x) in rs.iter().zip(xs) {
                        r.check(x)?;
                    }
                    true
                }
            }
            (Ring::LocalizedRationalPoly(p), Element::Frac { num, den }) => {
                localized::in_multiplicative_set(den, *p)
                    && localized::normalize(num.clone(), den.clone()) == (num.clone(), den.clone())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.wrong(x))
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Ring::IntegersMod(_) | Ring::PrimeField(_) => true,
            Ring::Product(rs) => rs.iter().all(Ring::is_finite),
            _ => false,
        }
    }

    pub fn cardinality(&self) -> Option<u128> {
        match self {
            Ring::IntegersMod(n) | Ring::PrimeField(n) => Some(*n as u128),
            Ring::Product(rs) => rs
                .iter()
                .try_fold(1u128, |acc, r| acc.checked_mul(r.cardinality()?)),
            _ => None,
        }
    }

    // ---- arithmetic ----

    pub fn zero(&self) -> Element {
        match self {
            Ring::Integers => Element::Int(BigInt::zero()),
            Ring::IntegersMod(_) | Ring::PrimeField(_) => Element::Residue(0),
            Ring::PolyOverPrimeField(_) => Element::PolyFp(Vec::new()),
            Ring::RationalPoly => Element::PolyQ(Vec::new()),
            Ring::Product(rs) => Element::Tuple(rs.iter().map(Ring::zero).collect()),
            Ring::LocalizedRationalPoly(_) => Element::Frac {
                num: Vec::new(),
                den: qone(),
            },
        }
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Element {
        self.from_bigint(&BigInt::from(v))
    }

    /// The image of an integer under the unique ring map from `Z`.
    pub fn from_bigint(&self, v: &BigInt) -> Element {
        match self {
            Ring::Integers => Element::Int(v.clone()),
            Ring::IntegersMod(n) | Ring::PrimeField(n) => {
                Element::Residue(v.mod_floor(&BigInt::from(*n)).to_u64().unwrap())
            }
            Ring::PolyOverPrimeField(p) => {
                let c = v.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                Element::PolyFp(upoly::constant(&PrimeField(*p), c))
            }
            Ring::RationalPoly => Element::PolyQ(qconst(BigRational::from_integer(v.clone()))),
            Ring::Product(rs) => Element::Tuple(rs.iter().map(|r| r.from_bigint(v)).collect()),
            Ring::LocalizedRationalPoly(_) => Element::Frac {
                num: qconst(BigRational::from_integer(v.clone())),
                den: qone(),
            },
        }
    }

    /// Embeds a rational polynomial; for rings other than `Q[T]` and the
    /// localized ring this fails.
    pub fn from_qpoly(&self, c: Vec<BigRational>) -> Result<Element> {
        let c = upoly::trim(&Rationals, c);
        match self {
            Ring::RationalPoly => Ok(Element::PolyQ(c)),
            Ring::LocalizedRationalPoly(_) => Ok(Element::Frac { num: c, den: qone() }),
            _ => Err(Error::Unsupported(format!(
                "rational polynomials do not embed in {self}"
            ))),
        }
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &Element) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        use Element::*;
        match (self, x, y) {
            (Ring::Integers, Int(a), Int(b)) => Int(a + b),
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Residue(a), Residue(b)) => {
                Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (Ring::PolyOverPrimeField(p), PolyFp(a), PolyFp(b)) => {
                PolyFp(upoly::add(&PrimeField(*p), a, b))
            }
            (Ring::RationalPoly, PolyQ(a), PolyQ(b)) => PolyQ(upoly::add(&Rationals, a, b)),
            (Ring::Product(rs), Tuple(a), Tuple(b)) => Tuple(
                rs.iter()
                    .zip(a.iter().zip(b))
                    .map(|(r, (u, v))| r.add(u, v))
                    .collect(),
            ),
            (Ring::LocalizedRationalPoly(_), Frac { num: n1, den: d1 }, Frac { num: n2, den: d2 }) => {
                let f = Rationals;
                let num = upoly::add(&f, &upoly::mul(&f, n1, d2), &upoly::mul(&f, n2, d1));
                frac(num, upoly::mul(&f, d1, d2))
            }
            _ => panic!("element does not belong to {self}: {x:?}, {y:?}"),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        use Element::*;
        match (self, x) {
            (Ring::Integers, Int(a)) => Int(-a),
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Residue(a)) => Residue((n - a % n) % n),
            (Ring::PolyOverPrimeField(p), PolyFp(a)) => PolyFp(upoly::neg(&PrimeField(*p), a)),
            (Ring::RationalPoly, PolyQ(a)) => PolyQ(upoly::neg(&Rationals, a)),
            (Ring::Product(rs), Tuple(a)) => {
                Tuple(rs.iter().zip(a).map(|(r, u)| r.neg(u)).collect())
            }
            (Ring::LocalizedRationalPoly(_), Frac { num, den }) => Frac {
                num: upoly::neg(&Rationals, num),
                den: den.clone(),
            },
            _ => panic!("element does not belong to {self}: {x:?}"),
        }
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        use Element::*;
        match (self, x, y) {
            (Ring::Integers, Int(a), Int(b)) => Int(a * b),
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Residue(a), Residue(b)) => {
                Residue(((*a as u128 * *b as u128) % *n as u128) as u64)
            }
            (Ring::PolyOverPrimeField(p), PolyFp(a), PolyFp(b)) => {
                PolyFp(upoly::mul(&PrimeField(*p), a, b))
            }
            (Ring::RationalPoly, PolyQ(a), PolyQ(b)) => PolyQ(upoly::mul(&Rationals, a, b)),
            (Ring::Product(rs), Tuple(a), Tuple(b)) => Tuple(
                rs.iter()
                    .zip(a.iter().zip(b))
                    .map(|(r, (u, v))| r.mul(u, v))
                    .collect(),
            ),
            (Ring::LocalizedRationalPoly(_), Frac { num: n1, den: d1 }, Frac { num: n2, den: d2 }) => {
                let f = Rationals;
                frac(upoly::mul(&f, n1, n2), upoly::mul(&f, d1, d2))
            }
            _ => panic!("element does not belong to {self}: {x:?}, {y:?}"),
        }
    }

    pub fn pow(&self, x: &Element, mut e: u64) -> Element {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Element {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product_of<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Element {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    // ---- units ----

    /// The inverse of `x` if it is a unit.
    pub fn unit_inverse(&self, x: &Element) -> Option<Element> {
        use Element::*;
        match (self, x) {
            (Ring::Integers, Int(a)) => (a.abs().is_one()).then(|| Int(a.clone())),
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Residue(a)) => {
                upoly::mod_inverse(*a, *n).map(Residue)
            }
            (Ring::PolyOverPrimeField(p), PolyFp(a)) => match a.as_slice() {
                [c] => upoly::mod_inverse(*c, *p).map(|v| PolyFp(vec![v])),
                _ => None,
            },
            (Ring::RationalPoly, PolyQ(a)) => match a.as_slice() {
                [c] => Some(PolyQ(vec![c.recip()])),
                _ => None,
            },
            (Ring::Product(rs), Tuple(a)) => rs
                .iter()
                .zip(a)
                .map(|(r, u)| r.unit_inverse(u))
                .collect::<Option<Vec<_>>>()
                .map(Tuple),
            (Ring::LocalizedRationalPoly(p), Frac { num, den }) => {
                localized::in_multiplicative_set(num, *p).then(|| frac(den.clone(), num.clone()))
            }
            _ => panic!("element does not belong to {self}: {x:?}"),
        }
    }

    pub fn is_unit(&self, x: &Element) -> bool {
        self.unit_inverse(x).is_some()
    }

    // ---- division by a modulus ----

    /// Division with canonical remainder: returns `(q, r)` with
    /// `x = q*a + r`, where `r` is the canonical representative of the
    /// class of `x` in `A/aA`. For `a = 0` this is `(0, x)`.
    pub fn div_rem(&self, a: &Element, x: &Element) -> (Element, Element) {
        use Element::*;
        if self.is_zero(a) {
            return (self.zero(), x.clone());
        }
        match (self, a, x) {
            (Ring::Integers, Int(m), Int(v)) => {
                let r = v.mod_floor(&m.abs());
                let q = (v - &r) / m;
                (Int(q), Int(r))
            }
            (Ring::IntegersMod(n), Residue(a), Residue(x)) => {
                let (q, r) = div_rem_mod_n(*n, *a, *x);
                (Residue(q), Residue(r))
            }
            (Ring::PrimeField(p), Residue(a), Residue(x)) => {
                let inv = upoly::mod_inverse(*a, *p).unwrap();
                (Residue(((*x as u128 * inv as u128) % *p as u128) as u64), Residue(0))
            }
            (Ring::PolyOverPrimeField(p), PolyFp(a), PolyFp(x)) => {
                let (q, r) = upoly::div_rem(&PrimeField(*p), x, a);
                (PolyFp(q), PolyFp(r))
            }
            (Ring::RationalPoly, PolyQ(a), PolyQ(x)) => {
                let (q, r) = upoly::div_rem(&Rationals, x, a);
                (PolyQ(q), PolyQ(r))
            }
            (Ring::Product(rs), Tuple(a), Tuple(x)) => {
                let (qs, rems) = rs
                    .iter()
                    .zip(a.iter().zip(x))
                    .map(|(r, (u, v))| r.div_rem(u, v))
                    .unzip();
                (Tuple(qs), Tuple(rems))
            }
            (Ring::LocalizedRationalPoly(p), Frac { num: an, den: ad }, Frac { num: xn, den: xd }) => {
                localized_div_rem(*p, an, ad, xn, xd)
            }
            _ => panic!("element does not belong to {self}: {a:?}, {x:?}"),
        }
    }

    /// Canonical representative of `x` modulo `aA`.
    pub fn reduce_mod(&self, a: &Element, x: &Element) -> Element {
        self.div_rem(a, x).1
    }

    /// `y / a` when `a` divides `y`.
    pub fn exact_div(&self, a: &Element, y: &Element) -> Option<Element> {
        if self.is_zero(a) {
            return self.is_zero(y).then(|| self.zero());
        }
        let (q, r) = self.div_rem(a, y);
        self.is_zero(&r).then_some(q)
    }

    // ---- ideals ----

    /// A generator `g` of the ideal generated by `xs` with coefficients
    /// `c` such that `Σ c_i x_i = g`. Every shipped ring is a principal
    /// ideal ring (or a product of them), so this always succeeds.
    pub fn principal_generator(&self, xs: &[Element]) -> (Element, Vec<Element>) {
        use Element::*;
        match self {
            Ring::Integers => {
                let ints: Vec<BigInt> = xs.iter().map(|x| as_int(x).clone()).collect();
                let (g, cs) = int_gcd_chain(&ints);
                (Int(g), cs.into_iter().map(Int).collect())
            }
            Ring::IntegersMod(n) => {
                let nb = BigInt::from(*n);
                let mut ints = vec![nb.clone()];
                ints.extend(xs.iter().map(|x| BigInt::from(as_residue(x))));
                let (g, cs) = int_gcd_chain(&ints);
                let to_res = |v: &BigInt| Residue(v.mod_floor(&nb).to_u64().unwrap());
                (to_res(&g), cs[1..].iter().map(to_res).collect())
            }
            Ring::PrimeField(p) => {
                let mut cs = vec![Residue(0); xs.len()];
                match xs.iter().position(|x| as_residue(x) != 0) {
                    Some(i) => {
                        cs[i] = Residue(upoly::mod_inverse(as_residue(&xs[i]), *p).unwrap());
                        (Residue(1 % p), cs)
                    }
                    None => (Residue(0), cs),
                }
            }
            Ring::PolyOverPrimeField(p) => {
                let polys: Vec<Vec<u64>> = xs
                    .iter()
                    .map(|x| match x {
                        PolyFp(c) => c.clone(),
                        _ => panic!("not an element of {self}"),
                    })
                    .collect();
                let (g, cs) = poly_gcd_chain(&PrimeField(*p), &polys);
                (PolyFp(g), cs.into_iter().map(PolyFp).collect())
            }
            Ring::RationalPoly => {
                let polys: Vec<Vec<BigRational>> = xs.iter().map(|x| as_qpoly(x).clone()).collect();
                let (g, cs) = poly_gcd_chain(&Rationals, &polys);
                (PolyQ(g), cs.into_iter().map(PolyQ).collect())
            }
            Ring::Product(rs) => {
                let mut gens = Vec::with_capacity(rs.len());
                let mut coeffs = vec![Vec::with_capacity(rs.len()); xs.len()];
                for (k, r) in rs.iter().enumerate() {
                    let comp: Vec<Element> = xs.iter().map(|x| as_tuple(x)[k].clone()).collect();
                    let (g, cs) = r.principal_generator(&comp);
                    gens.push(g);
                    for (slot, c) in coeffs.iter_mut().zip(cs) {
                        slot.push(c);
                    }
                }
                (Tuple(gens), coeffs.into_iter().map(Tuple).collect())
            }
            Ring::LocalizedRationalPoly(_) => {
                // x_i = n_i / d_i and Σ s_i n_i = g  ⇒  Σ (s_i d_i) x_i = g.
                let nums: Vec<Vec<BigRational>> = xs
                    .iter()
                    .map(|x| match x {
                        Frac { num, .. } => num.clone(),
                        _ => panic!("not an element of {self}"),
                    })
                    .collect();
                let (g, ss) = poly_gcd_chain(&Rationals, &nums);
                let cs = ss
                    .into_iter()
                    .zip(xs)
                    .map(|(s, x)| match x {
                        Frac { den, .. } => frac(upoly::mul(&Rationals, &s, den), qone()),
                        _ => unreachable!(),
                    })
                    .collect();
                (frac(g, qone()), cs)
            }
        }
    }

    // ---- enumeration ----

    /// Every element exactly once, in a fixed order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        match self {
            Ring::IntegersMod(n) | Ring::PrimeField(n) => {
                Ok((0..*n).map(Element::Residue).collect())
            }
            Ring::Product(rs) => {
                let mut out = vec![Vec::new()];
                for r in rs {
                    let elems = r.elements()?;
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<Element>| {
                            elems.iter().map(move |e| {
                                let mut v = prefix.clone();
                                v.push(e.clone());
                                v
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(Element::Tuple).collect())
            }
            _ => Err(Error::InfiniteRing(self.to_string())),
        }
    }

    /// Generators of the unit group, when known.
    pub fn unit_group_generators(&self) -> Option<Vec<Element>> {
        match self {
            Ring::Integers => Some(vec![self.from_int(-1)]),
            Ring::PolyOverPrimeField(p) => {
                Some((1..*p).map(|c| Element::PolyFp(vec![c])).collect())
            }
            _ if self.is_finite() => Some(
                self.elements()
                    .ok()?
                    .into_iter()
                    .filter(|x| self.is_unit(x))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// The canonical residues of `A/aA`, when that quotient is finite and
    /// small enough to enumerate.
    pub fn quotient_residues(&self, a: &Element) -> Option<Vec<Element>> {
        match (self, a) {
            (Ring::Integers, Element::Int(m)) => {
                let m = m.abs().to_u64()?;
                if m == 0 || m as u128 > MAX_ENUMERATION {
                    return None;
                }
                Some((0..m).map(|r| Element::Int(r.into())).collect())
            }
            (Ring::PolyOverPrimeField(p), Element::PolyFp(c)) => {
                let d = upoly::degree(c)? as u32;
                let count = (*p as u128).checked_pow(d)?;
                if count > MAX_ENUMERATION {
                    return None;
                }
                Some(
                    (0..count as u64)
                        .map(|mut idx| {
                            let mut coeffs = Vec::with_capacity(d as usize);
                            for _ in 0..d {
                                coeffs.push(idx % p);
                                idx /= p;
                            }
                            Element::PolyFp(upoly::trim(&PrimeField(*p), coeffs))
                        })
                        .collect(),
                )
            }
            _ if self.is_finite() => {
                let mut seen = std::collections::HashSet::new();
                let mut out = Vec::new();
                for x in self.elements().ok()? {
                    let r = self.reduce_mod(a, &x);
                    if seen.insert(r.clone()) {
                        out.push(r);
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    // ---- unit residues ----

    /// A unit `ε` in the class of `r` modulo `aA`, together with `λ` such
    /// that `ε - r = λ·a`.
    pub fn unit_residue_witness(&self, a: &Element, r: &Element) -> Option<(Element, Element)> {
        let eps = self.unit_in_class(a, r)?;
        let lambda = self
            .exact_div(a, &self.sub(&eps, r))
            .expect("unit chosen in the residue class of r");
        Some((eps, lambda))
    }

    fn unit_in_class(&self, a: &Element, r: &Element) -> Option<Element> {
        use Element::*;
        if self.is_zero(a) {
            return self.is_unit(r).then(|| r.clone());
        }
        if self.is_unit(a) {
            return Some(self.one());
        }
        let target = self.reduce_mod(a, r);
        match self {
            Ring::Integers => [1i64, -1]
                .into_iter()
                .map(|v| self.from_int(v))
                .find(|e| self.reduce_mod(a, e) == target),
            Ring::IntegersMod(n) => (0..*n)
                .map(Residue)
                .filter(|u| self.is_unit(u))
                .find(|u| self.reduce_mod(a, u) == target),
            // a is neither zero nor a unit in a field: unreachable.
            Ring::PrimeField(_) => None,
            Ring::PolyOverPrimeField(_) | Ring::RationalPoly => {
                self.is_unit(&target).then_some(target)
            }
            Ring::Product(rs) => {
                let (aa, rr) = (as_tuple(a), as_tuple(r));
                rs.iter()
                    .zip(aa.iter().zip(rr))
                    .map(|(ring, (u, v))| ring.unit_in_class(u, v))
                    .collect::<Option<Vec<_>>>()
                    .map(Tuple)
            }
            Ring::LocalizedRationalPoly(p) => {
                let Frac { num: an, .. } = a else { unreachable!() };
                let (zpart, _) = localized::split_avoidable(an, *p);
                let modulus = frac(zpart, qone());
                small_rationals(LOCALIZED_SEARCH_HEIGHT)
                    .map(|mu| {
                        let m = frac(qconst(mu), qone());
                        self.add(&target, &self.mul(&m, &modulus))
                    })
                    .find(|e| self.is_unit(e))
            }
        }
    }
}

/// Rationals `t/s` in lowest terms ordered by height `max(|t|, s)`,
/// starting with zero.
fn small_rationals(height: i64) -> impl Iterator<Item = BigRational> {
    std::iter::once(BigRational::zero()).chain((1..=height).flat_map(|h| {
        (1..=h).flat_map(move |s| {
            (-h..=h).filter_map(move |t| {
                let is_new = t.abs().max(s) == h && t != 0 && t.gcd(&s) == 1;
                is_new.then(|| BigRational::new(t.into(), s.into()))
            })
        })
    }))
}

pub(crate) fn frac(num: Vec<BigRational>, den: Vec<BigRational>) -> Element {
    let (num, den) = localized::normalize(num, den);
    Element::Frac { num, den }
}

fn div_rem_mod_n(n: u64, a: u64, x: u64) -> (u64, u64) {
    if n == 1 {
        return (0, 0);
    }
    let g = a.gcd(&n);
    let r = x % g;
    let n_over = n / g;
    if n_over == 1 {
        return (0, r);
    }
    let a_over = (a / g) % n_over;
    let inv = upoly::mod_inverse(a_over, n_over).expect("a/g is a unit mod n/g");
    let q = (((x - r) / g) as u128 * inv as u128 % n_over as u128) as u64;
    (q, r)
}

fn localized_div_rem(
    p: u64,
    an: &[BigRational],
    ad: &[BigRational],
    xn: &[BigRational],
    xd: &[BigRational],
) -> (Element, Element) {
    let f = Rationals;
    let (zpart, rest) = localized::split_avoidable(an, p);
    if zpart.len() == 1 {
        // a is a unit
        return (frac(upoly::mul(&f, xn, ad), upoly::mul(&f, xd, an)), frac(Vec::new(), qone()));
    }
    // r = xn * xd^{-1} mod zpart; xd is coprime to zpart since it avoids Z.
    let (g, s, _) = upoly::ext_gcd(&f, xd, &zpart);
    debug_assert_eq!(g, qone());
    let (_, r) = upoly::div_rem(&f, &upoly::mul(&f, xn, &s), &zpart);
    // x - r = (xn - r xd)/xd, divisible by zpart; divide by a = zpart*rest/ad.
    let diff = upoly::sub(&f, xn, &upoly::mul(&f, &r, xd));
    let (quo, rem) = upoly::div_rem(&f, &diff, &zpart);
    debug_assert!(rem.is_empty());
    let q = frac(upoly::mul(&f, &quo, ad), upoly::mul(&f, xd, &rest));
    (q, frac(r, qone()))
}

/// Chained extended gcd over `Z`: nonnegative `g` and `c` with `Σ c_i x_i = g`.
fn int_gcd_chain(xs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut cs: Vec<BigInt> = Vec::with_capacity(xs.len());
    for x in xs {
        let e = g.extended_gcd(x);
        for c in cs.iter_mut() {
            *c *= &e.x;
        }
        cs.push(e.y);
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        cs.iter_mut().for_each(|c| *c = -&*c);
    }
    (g, cs)
}

fn poly_gcd_chain<F: upoly::Field>(f: &F, xs: &[Vec<F::E>]) -> (Vec<F::E>, Vec<Vec<F::E>>) {
    let mut g: Vec<F::E> = Vec::new();
    let mut cs: Vec<Vec<F::E>> = Vec::with_capacity(xs.len());
    for x in xs {
        let (ng, s, t) = upoly::ext_gcd(f, &g, x);
        for c in cs.iter_mut() {
            *c = upoly::mul(f, c, &s);
        }
        cs.push(t);
        g = ng;
    }
    (g, cs)
}

pub(crate) fn as_int(x: &Element) -> &BigInt {
    match x {
        Element::Int(v) => v,
        _ => panic!("expected an integer, found {x:?}"),
    }
}

fn as_residue(x: &Element) -> u64 {
    match x {
        Element::Residue(v) => *v,
        _ => panic!("expected a residue, found {x:?}"),
    }
}

pub(crate) fn as_qpoly(x: &Element) -> &Vec<BigRational> {
    match x {
        Element::PolyQ(v) => v,
        _ => panic!("expected a rational polynomial, found {x:?}"),
    }
}

pub(crate) fn as_tuple(x: &Element) -> &[Element] {
    match x {
        Element::Tuple(v) => v,
        _ => panic!("expected a tuple, found {x:?}"),
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::IntegersMod(n) => write!(f, "Z/{n}"),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
            Ring::PolyOverPrimeField(p) => write!(f, "GF({p})[T]"),
            Ring::RationalPoly => write!(f, "Q[T]"),
            Ring::Product(rs) => {
                write!(f, "prod(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
            Ring::LocalizedRationalPoly(p) => write!(f, "locQ({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> Element {
        Element::Int(v.into())
    }

    #[test]
    fn integer_residues_are_least_nonnegative() {
        assert_eq!(Ring::Integers.reduce_mod(&z(5), &z(13)), z(3));
        assert_eq!(Ring::Integers.reduce_mod(&z(-5), &z(-13)), z(2));
        assert_eq!(Ring::Integers.reduce_mod(&z(0), &z(-13)), z(-13));
        assert_eq!(Ring::Integers.reduce_mod(&z(-1), &z(7)), z(0));
    }

    #[test]
    fn quadratic_remainder_over_q() {
        let r = Ring::RationalPoly;
        let a = r.parse_element("T^2-T").unwrap();
        let x = r.parse_element("T^3").unwrap();
        assert_eq!(r.reduce_mod(&a, &x), r.parse_element("T").unwrap());
    }

    #[test]
    fn residue_in_z_mod_n_uses_gcd_ideal() {
        let r = Ring::IntegersMod(12);
        // 8·(Z/12) = 4·(Z/12)
        let (q, rem) = r.div_rem(&Element::Residue(8), &Element::Residue(7));
        assert_eq!(rem, Element::Residue(3));
        assert_eq!(
            r.add(&r.mul(&q, &Element::Residue(8)), &rem),
            Element::Residue(7)
        );
    }

    #[test]
    fn unit_residue_witness_over_z() {
        let r = Ring::Integers;
        assert_eq!(r.unit_residue_witness(&z(5), &z(6)), Some((z(1), z(-1))));
        assert_eq!(r.unit_residue_witness(&z(5), &z(2)), None);
        assert_eq!(r.unit_residue_witness(&z(0), &z(-1)), Some((z(-1), z(0))));
    }

    #[test]
    fn unit_residue_witness_over_qt_constant() {
        let r = Ring::RationalPoly;
        let a = r.parse_element("T").unwrap();
        let three = r.from_int(3);
        assert_eq!(r.unit_residue_witness(&a, &three), Some((three, r.zero())));
    }

    #[test]
    fn zero_ring_everything_is_a_unit() {
        let r = Ring::IntegersMod(1);
        assert_eq!(r.one(), r.zero());
        assert!(r.is_unit(&r.zero()));
        assert_eq!(r.elements().unwrap().len(), 1);
    }

    #[test]
    fn enumeration() {
        assert_eq!(Ring::IntegersMod(3).elements().unwrap().len(), 3);
        let prod = Ring::Product(vec![Ring::IntegersMod(2), Ring::IntegersMod(2)]);
        assert_eq!(prod.elements().unwrap().len(), 4);
        assert!(matches!(Ring::Integers.elements(), Err(Error::InfiniteRing(_))));
        assert!(Ring::RationalPoly.elements().is_err());
        assert!(Ring::LocalizedRationalPoly(2).elements().is_err());
    }

    #[test]
    fn constructors_validate_parameters() {
        assert!(Ring::prime_field(9).is_err());
        assert!(Ring::prime_field(7).is_ok());
        assert!(Ring::integers_mod(0).is_err());
        assert!(Ring::product(vec![]).is_err());
        assert!(Ring::localized(4).is_err());
    }

    #[test]
    fn localized_units_and_residues() {
        let r = Ring::LocalizedRationalPoly(2);
        let t_minus_3 = r.parse_element("T-3").unwrap();
        assert!(r.is_unit(&t_minus_3));
        let t_minus_4 = r.parse_element("T-4").unwrap();
        assert!(!r.is_unit(&t_minus_4));
        // a = T(T-3): only the factor T matters, residues are constants
        let a = r.parse_element("T^2-3*T").unwrap();
        let x = r.parse_element("(T+5)/(T-3)").unwrap();
        let (q, rem) = r.div_rem(&a, &x);
        assert_eq!(r.add(&r.mul(&q, &a), &rem), x);
        assert_eq!(rem, r.parse_element("-5/3").unwrap());
    }

    #[test]
    fn localized_witness_search_finds_units() {
        let r = Ring::LocalizedRationalPoly(2);
        // a = T(T-2)(T-4): residue of b = T-1 is not a unit as is
        let a = r.parse_element("T^3-6*T^2+8*T").unwrap();
        let b = r.parse_element("T-1").unwrap();
        let (eps, lambda) = r.unit_residue_witness(&a, &b).expect("good ring");
        assert!(r.is_unit(&eps));
        assert_eq!(r.sub(&eps, &b), r.mul(&lambda, &a));
    }
}
