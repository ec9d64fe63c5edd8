//! Ring-spec strings and element literals.
//!
//! Ring specs: `Z`, `Z/<n>`, `GF(<p>)`, `GF(<p>)[T]`, `Q[T]`,
//! `prod(<spec>,...)`, `locQ(<p>)`.
//! Elements: integers, rationals `a/b`, polynomials in `T` such as
//! `T^2-3/2*T+1`, tuples `(e1,e2)`, and localized fractions `(P)/(Q)`.
//! Formatting produces exactly the canonical strings the parser accepts.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{self, PrimeField, Rationals};
use super::{frac, localized, Element, Ring};
use crate::error::{parse_err, Error, Result};

pub(crate) struct Cursor<'a> {
    s: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn eat_str(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        let found = match self.s.get(self.pos) {
            Some(c) => format!(" (found '{}')", *c as char),
            None => " (found end of input)".to_string(),
        };
        parse_err(self.pos, format!("{}{found}", msg.into()))
    }

    pub(crate) fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn small(&mut self) -> Result<u64> {
        let start = self.pos;
        self.unsigned()?
            .to_u64()
            .ok_or_else(|| parse_err(start, "parameter does not fit in 64 bits"))
    }

    /// `a` or `a/b` (no sign). A `/` not followed by a digit is left alone.
    pub(crate) fn unsigned_rational(&mut self) -> Result<BigRational> {
        let n = self.unsigned()?;
        let save = self.pos;
        if self.eat(b'/') {
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let dpos = self.pos;
                let d = self.unsigned()?;
                if d.is_zero() {
                    return Err(parse_err(dpos, "zero denominator"));
                }
                return Ok(BigRational::new(n, d));
            }
            self.pos = save;
        }
        Ok(BigRational::from_integer(n))
    }

    pub(crate) fn signed_rational(&mut self) -> Result<BigRational> {
        let neg = self.eat(b'-');
        let v = self.unsigned_rational()?;
        Ok(if neg { -v } else { v })
    }
}

// ---- ring specs ----

pub fn parse_ring(spec: &str) -> Result<Ring> {
    let mut c = Cursor::new(spec);
    let ring = ring_at(&mut c)?;
    c.finish()?;
    Ok(ring)
}

fn ring_at(c: &mut Cursor) -> Result<Ring> {
    let start = {
        c.skip_ws();
        c.pos
    };
    let param_err = |e: Error| match e {
        Error::InvalidParameter(msg) => parse_err(start, msg),
        other => other,
    };
    if c.eat_str("prod") {
        c.expect(b'(')?;
        let mut factors = vec![ring_at(c)?];
        while c.eat(b',') {
            factors.push(ring_at(c)?);
        }
        c.expect(b')')?;
        return Ring::product(factors);
    }
    if c.eat_str("locQ") {
        c.expect(b'(')?;
        let p = c.small()?;
        c.expect(b')')?;
        return Ring::localized(p).map_err(param_err);
    }
    if c.eat_str("GF") {
        c.expect(b'(')?;
        let p = c.small()?;
        c.expect(b')')?;
        if c.eat_str("[T]") {
            return Ring::poly_over_prime_field(p).map_err(param_err);
        }
        return Ring::prime_field(p).map_err(param_err);
    }
    if c.eat_str("Q[T]") {
        return Ok(Ring::RationalPoly);
    }
    if c.eat_str("Z") {
        if c.eat(b'/') {
            let n = c.small()?;
            return Ring::integers_mod(n).map_err(param_err);
        }
        return Ok(Ring::Integers);
    }
    Err(c.error("expected a ring spec"))
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ring(s)
    }
}

// ---- polynomials in T ----

/// Parses `Σ ±c*T^k` with rational coefficients, stopping before any
/// character that cannot continue a polynomial (`,` `)` `;` end).
pub(crate) fn qpoly_at(c: &mut Cursor) -> Result<Vec<BigRational>> {
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut first = true;
    loop {
        let neg = if c.eat(b'-') {
            true
        } else if !first && c.eat(b'+') {
            false
        } else if first {
            c.eat(b'+');
            false
        } else {
            break;
        };
        let (coef, power) = term_at(c)?;
        let coef = if neg { -coef } else { coef };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += coef;
        first = false;
    }
    Ok(upoly::trim(&Rationals, coeffs))
}

fn term_at(c: &mut Cursor) -> Result<(BigRational, usize)> {
    let coef = match c.peek() {
        Some(d) if d.is_ascii_digit() => Some(c.unsigned_rational()?),
        Some(b'T') => None,
        _ => return Err(c.error("expected a coefficient or T")),
    };
    let has_t = if coef.is_some() {
        let save = c.pos;
        if c.eat(b'*') {
            if c.peek() == Some(b'T') {
                true
            } else {
                c.pos = save;
                false
            }
        } else {
            c.peek() == Some(b'T')
        }
    } else {
        true
    };
    if !has_t {
        return Ok((coef.unwrap(), 0));
    }
    c.expect(b'T')?;
    let power = if c.eat(b'^') {
        let at = c.pos;
        c.unsigned()?
            .to_usize()
            .filter(|&e| e <= 1 << 20)
            .ok_or_else(|| parse_err(at, "exponent too large"))?
    } else {
        1
    };
    Ok((coef.unwrap_or_else(BigRational::one), power))
}

fn format_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Descending powers of `T`, unit coefficients elided.
fn format_terms<E>(coeffs: &[E], is_zero: impl Fn(&E) -> bool, to_signed: impl Fn(&E) -> (bool, String, bool)) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let (neg, mag, is_one) = to_signed(c);
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        match k {
            0 => out.push_str(&mag),
            _ => {
                if !is_one {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push('T');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn format_qpoly(coeffs: &[BigRational]) -> String {
    format_terms(
        coeffs,
        |c| c.is_zero(),
        |c| (c.is_negative(), format_rational(&c.abs()), c.abs().is_one()),
    )
}

fn format_fppoly(coeffs: &[u64]) -> String {
    format_terms(coeffs, |c| *c == 0, |c| (false, c.to_string(), *c == 1))
}

fn rational_mod(v: &BigRational, n: u64, pos: usize) -> Result<u64> {
    let nb = BigInt::from(n);
    let num = v.numer().mod_floor(&nb).to_u64().unwrap();
    let den = v.denom().mod_floor(&nb).to_u64().unwrap();
    let inv = upoly::mod_inverse(den, n)
        .ok_or_else(|| parse_err(pos, format!("denominator not invertible modulo {n}")))?;
    Ok(((num as u128 * inv as u128) % n as u128) as u64)
}

// ---- elements ----

impl Ring {
    /// Parses an element literal into canonical form.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let mut c = Cursor::new(s);
        let e = self.element_at(&mut c)?;
        c.finish()?;
        Ok(e)
    }

    pub(crate) fn element_at(&self, c: &mut Cursor) -> Result<Element> {
        let start = {
            c.skip_ws();
            c.pos
        };
        match self {
            Ring::Integers => {
                let v = c.signed_rational()?;
                if !v.is_integer() {
                    return Err(parse_err(start, "expected an integer"));
                }
                Ok(Element::Int(v.to_integer()))
            }
            Ring::IntegersMod(n) | Ring::PrimeField(n) => {
                let v = c.signed_rational()?;
                Ok(Element::Residue(rational_mod(&v, *n, start)?))
            }
            Ring::PolyOverPrimeField(p) => {
                let q = qpoly_at(c)?;
                let coeffs = q
                    .iter()
                    .map(|v| rational_mod(v, *p, start))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::PolyFp(upoly::trim(&PrimeField(*p), coeffs)))
            }
            Ring::RationalPoly => Ok(Element::PolyQ(qpoly_at(c)?)),
            Ring::Product(rs) => {
                c.expect(b'(')?;
                let mut xs = Vec::with_capacity(rs.len());
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        c.expect(b',')?;
                    }
                    xs.push(r.element_at(c)?);
                }
                c.expect(b')')?;
                Ok(Element::Tuple(xs))
            }
            Ring::LocalizedRationalPoly(p) => {
                let num = if c.eat(b'(') {
                    let q = qpoly_at(c)?;
                    c.expect(b')')?;
                    q
                } else {
                    qpoly_at(c)?
                };
                let save = c.pos;
                let den = if c.eat(b'/') {
                    if c.eat(b'(') {
                        let q = qpoly_at(c)?;
                        c.expect(b')')?;
                        q
                    } else {
                        let v = c.unsigned_rational()?;
                        upoly::constant(&Rationals, v)
                    }
                } else {
                    c.pos = save;
                    upoly::constant(&Rationals, BigRational::one())
                };
                if !localized::in_multiplicative_set(&den, *p) {
                    return Err(parse_err(
                        start,
                        "denominator vanishes on {0} ∪ {p^k}, so it is not invertible",
                    ));
                }
                Ok(frac(num, den))
            }
        }
    }

    /// Canonical text for an element; the inverse of [`Ring::parse_element`].
    pub fn format(&self, x: &Element) -> String {
        match (self, x) {
            (Ring::Integers, Element::Int(v)) => v.to_string(),
            (Ring::IntegersMod(_) | Ring::PrimeField(_), Element::Residue(v)) => v.to_string(),
            (Ring::PolyOverPrimeField(_), Element::PolyFp(c)) => format_fppoly(c),
            (Ring::RationalPoly, Element::PolyQ(c)) => format_qpoly(c),
            (Ring::Product(rs), Element::Tuple(xs)) => {
                let parts: Vec<String> = rs.iter().zip(xs).map(|(r, e)| r.format(e)).collect();
                format!("({})", parts.join(","))
            }
            (Ring::LocalizedRationalPoly(_), Element::Frac { num, den }) => {
                if den.len() == 1 {
                    format_qpoly(num)
                } else {
                    format!("({})/({})", format_qpoly(num), format_qpoly(den))
                }
            }
            _ => panic!("element does not belong to {self}: {x:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs() {
        assert_eq!(parse_ring("Z").unwrap(), Ring::Integers);
        assert_eq!(
            parse_ring("prod(Z/4,GF(3))").unwrap(),
            Ring::Product(vec![Ring::IntegersMod(4), Ring::PrimeField(3)])
        );
        assert_eq!(parse_ring("locQ(2)").unwrap(), Ring::LocalizedRationalPoly(2));
        assert_eq!(parse_ring("GF(7)[T]").unwrap(), Ring::PolyOverPrimeField(7));
        assert_eq!(parse_ring(" Q[T] ").unwrap(), Ring::RationalPoly);
    }

    #[test]
    fn ring_spec_errors_carry_positions() {
        match parse_ring("prod(Z,GF(4))") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 7);
                assert!(msg.contains("not prime"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_ring("Z/"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_ring("Zx"), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_ring("prod()").is_err());
        assert!(parse_ring("Z/0").is_err());
    }

    #[test]
    fn polynomial_literals_round_trip() {
        let r = Ring::RationalPoly;
        for s in ["T^2-3/2*T+1", "0", "-T", "1/2", "-7/3*T^5+T"] {
            let e = r.parse_element(s).unwrap();
            assert_eq!(r.format(&e), s);
        }
        let e = r.parse_element("1 + 2T - T + T^2").unwrap();
        assert_eq!(r.format(&e), "T^2+T+1");
    }

    #[test]
    fn fp_polynomials_reduce_coefficients() {
        let r = Ring::PolyOverPrimeField(5);
        let e = r.parse_element("7*T^2-1").unwrap();
        assert_eq!(r.format(&e), "2*T^2+4");
        let half = r.parse_element("1/2").unwrap();
        assert_eq!(r.format(&half), "3");
    }

    #[test]
    fn tuples_and_fractions() {
        let r = parse_ring("prod(Z/4,GF(3))").unwrap();
        let e = r.parse_element("(5,-1)").unwrap();
        assert_eq!(r.format(&e), "(1,2)");
        let l = Ring::LocalizedRationalPoly(2);
        let e = l.parse_element("(2*T+2)/(2*T-6)").unwrap();
        assert_eq!(l.format(&e), "(T+1)/(T-3)");
        assert!(l.parse_element("(1)/(T-4)").is_err());
        let e = l.parse_element("(T^2-9)/(T-3)").unwrap();
        assert_eq!(l.format(&e), "T+3");
    }
}
