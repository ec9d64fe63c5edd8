//! The algebra `B_a = A ⊕ Aθ` with `θ² = aθ`, and the correspondence
//! between good-point witnesses and bivariate forms `P` with
//! `P(0,1) ∈ A×`, `P(a,b) ∈ A×`.

use crate::bezout::BezoutCertificate;
use crate::error::{Error, Result};
use crate::homog::HomogeneousPolynomial;
use crate::ring::{Element, Ring};
use crate::witness::{verify_witness, GoodPointWitness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SabAlgebra {
    base: Ring,
    a: Element,
}

/// `x + yθ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SabElement {
    pub x: Element,
    pub y: Element,
}

impl SabElement {
    pub fn new(x: Element, y: Element) -> Self {
        SabElement { x, y }
    }
}

impl SabAlgebra {
    pub fn new(base: Ring, a: Element) -> Result<Self> {
        base.check(&a)?;
        Ok(SabAlgebra { base, a })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn a(&self) -> &Element {
        &self.a
    }

    pub fn zero(&self) -> SabElement {
        SabElement::new(self.base.zero(), self.base.zero())
    }

    pub fn one(&self) -> SabElement {
        SabElement::new(self.base.one(), self.base.zero())
    }

    pub fn theta(&self) -> SabElement {
        SabElement::new(self.base.zero(), self.base.one())
    }

    pub fn embed(&self, x: Element) -> SabElement {
        SabElement::new(x, self.base.zero())
    }

    pub fn add(&self, z: &SabElement, w: &SabElement) -> SabElement {
        let r = &self.base;
        SabElement::new(r.add(&z.x, &w.x), r.add(&z.y, &w.y))
    }

    pub fn neg(&self, z: &SabElement) -> SabElement {
        SabElement::new(self.base.neg(&z.x), self.base.neg(&z.y))
    }

    pub fn sub(&self, z: &SabElement, w: &SabElement) -> SabElement {
        self.add(z, &self.neg(w))
    }

    /// `(x₁ + y₁θ)(x₂ + y₂θ) = x₁x₂ + (x₁y₂ + y₁x₂ + a·y₁y₂)θ`.
    pub fn mul(&self, z: &SabElement, w: &SabElement) -> SabElement {
        let r = &self.base;
        let x = r.mul(&z.x, &w.x);
        let y = r.sum(&[
            r.mul(&z.x, &w.y),
            r.mul(&z.y, &w.x),
            r.mul(&self.a, &r.mul(&z.y, &w.y)),
        ]);
        SabElement::new(x, y)
    }

    pub fn pow(&self, z: &SabElement, mut e: u64) -> SabElement {
        let mut result = self.one();
        let mut base = z.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// The two ring maps `B_a → A`, `θ ↦ 0` and `θ ↦ a`; together they
    /// embed `B_a` in `A × A`.
    pub fn evaluations(&self, z: &SabElement) -> (Element, Element) {
        let r = &self.base;
        (z.x.clone(), r.add(&z.x, &r.mul(&z.y, &self.a)))
    }

    /// The inverse when `z` is a unit: `x` and `x + ya` must both be units,
    /// and then `z⁻¹ = x⁻¹ − y·x⁻¹·(x + ya)⁻¹·θ`.
    pub fn unit_inverse(&self, z: &SabElement) -> Option<SabElement> {
        let r = &self.base;
        let (at_zero, at_a) = self.evaluations(z);
        let u = r.unit_inverse(&at_zero)?;
        let v = r.unit_inverse(&at_a)?;
        let inv = SabElement::new(u.clone(), r.neg(&r.mul(&z.y, &r.mul(&u, &v))));
        debug_assert_eq!(self.mul(z, &inv), self.one());
        Some(inv)
    }

    pub fn is_unit(&self, z: &SabElement) -> bool {
        self.unit_inverse(z).is_some()
    }

    /// Every element, when the base ring is finite.
    pub fn elements(&self) -> Result<Vec<SabElement>> {
        let base = self.base.elements()?;
        Ok(base
            .iter()
            .flat_map(|x| base.iter().map(move |y| SabElement::new(x.clone(), y.clone())))
            .collect())
    }

    /// Canonical text `x + y*th`; compound components are parenthesized.
    pub fn format(&self, z: &SabElement) -> String {
        format!("{} + {}*th", self.component_text(&z.x), self.component_text(&z.y))
    }

    fn component_text(&self, x: &Element) -> String {
        let s = self.base.format(x);
        let plain = s.strip_prefix('-').unwrap_or(&s);
        let numeric = !plain.is_empty() && plain.bytes().all(|c| c.is_ascii_digit() || c == b'/');
        if numeric || matches!(self.base, Ring::Product(_)) {
            s
        } else {
            format!("({s})")
        }
    }

    /// Accepts `x + y*th`, `x`, `y*th` and `th`.
    pub fn parse(&self, s: &str) -> Result<SabElement> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("th") else {
            return Ok(SabElement::new(self.parse_component(s)?, self.base.zero()));
        };
        let body = body.trim_end();
        let body = body.strip_suffix('*').unwrap_or(body).trim_end();
        let (x_text, y_text) = match top_level_plus(body) {
            Some(i) => (body[..i].trim(), body[i + 1..].trim()),
            None => ("", body),
        };
        let x = if x_text.is_empty() {
            self.base.zero()
        } else {
            self.parse_component(x_text)?
        };
        let y = match y_text {
            "" => self.base.one(),
            "-" => self.base.neg(&self.base.one()),
            t => self.parse_component(t)?,
        };
        Ok(SabElement::new(x, y))
    }

    fn parse_component(&self, s: &str) -> Result<Element> {
        let wrapped = s.starts_with('(') && s.ends_with(')') && matching_close(s) == Some(s.len() - 1);
        if wrapped && !matches!(self.base, Ring::Product(_)) {
            self.base.parse_element(&s[1..s.len() - 1])
        } else {
            self.base.parse_element(s)
        }
    }
}

fn matching_close(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// The first `+` outside parentheses that is not a leading sign.
fn top_level_plus(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 => return Some(i),
            _ => {}
        }
    }
    None
}

// ---- the bridge ----

/// `P(X, Y) = Y^N + λ·X·(a′X + b′Y)^(N−1)` from a certificate
/// `a′a + b′b = 1` and a witness `b^N + λa = ε`; `P(0,1) = 1`, `P(a,b) = ε`.
pub fn witness_to_polynomial(
    ring: &Ring,
    a: &Element,
    b: &Element,
    cert: &BezoutCertificate,
    w: &GoodPointWitness,
) -> Result<HomogeneousPolynomial> {
    let pair = [a.clone(), b.clone()];
    if !cert.verifies(ring, &pair) {
        return Err(Error::Precondition("certificate does not verify for (a, b)".into()));
    }
    if !verify_witness(ring, a, b, w) {
        return Err(Error::Precondition("witness does not verify for (a, b)".into()));
    }
    let x = HomogeneousPolynomial::variable(ring, 2, 0);
    let y = HomogeneousPolynomial::variable(ring, 2, 1);
    let combo = HomogeneousPolynomial::linear(ring, &cert.coefficients);
    let tail = x.mul(ring, &combo.pow(ring, w.exponent - 1)).scale(ring, &w.lambda);
    let p = y.pow(ring, w.exponent).add(ring, &tail);
    if !ring.is_one(&p.eval(ring, &[ring.zero(), ring.one()])?) || p.eval(ring, &pair)? != w.epsilon {
        return Err(Error::Identity("P(0,1) = 1 and P(a,b) = ε".into()));
    }
    Ok(p)
}

/// From `P = Σ a_i X^i Y^(d−i)` with `a_0 = P(0,1)` and `P(a,b)` units:
/// `b^d + λa = a_0⁻¹P(a,b)` with `λ = a_0⁻¹ Σ_{i≥1} a_i b^(d−i) a^(i−1)`.
pub fn polynomial_to_witness(
    ring: &Ring,
    a: &Element,
    b: &Element,
    p: &HomogeneousPolynomial,
) -> Result<GoodPointWitness> {
    if p.n_vars() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: p.n_vars(),
        });
    }
    let d = p.degree();
    if d == 0 || p.is_zero() {
        return Err(Error::Precondition("P must have degree at least 1".into()));
    }
    let a0 = p.eval(ring, &[ring.zero(), ring.one()])?;
    let a0_inv = ring
        .unit_inverse(&a0)
        .ok_or_else(|| Error::Precondition("P(0,1) is not a unit".into()))?;
    let value = p.eval(ring, &[a.clone(), b.clone()])?;
    if !ring.is_unit(&value) {
        return Err(Error::Precondition("P(a,b) is not a unit".into()));
    }
    let mut acc = ring.zero();
    for i in 1..=d {
        if let Some(ai) = p.coefficient(&[i, d - i]) {
            let term = ring.mul(ai, &ring.mul(&ring.pow(b, d - i), &ring.pow(a, i - 1)));
            acc = ring.add(&acc, &term);
        }
    }
    let epsilon = ring.mul(&a0_inv, &value);
    let w = GoodPointWitness {
        exponent: d,
        lambda: ring.mul(&a0_inv, &acc),
        epsilon_inverse: ring.unit_inverse(&epsilon).expect("product of units"),
        epsilon,
    };
    if !verify_witness(ring, a, b, &w) {
        return Err(Error::Identity("b^d + λa = a_0⁻¹P(a,b)".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> Element {
        Element::Int(v.into())
    }

    fn alg(a: i64) -> SabAlgebra {
        SabAlgebra::new(Ring::Integers, z(a)).unwrap()
    }

    #[test]
    fn theta_squared() {
        for a in [-3, 0, 2, 7] {
            let s = alg(a);
            assert_eq!(s.mul(&s.theta(), &s.theta()), SabElement::new(z(0), z(a)));
        }
    }

    #[test]
    fn products() {
        let s = alg(2);
        let u = SabElement::new(z(1), z(-1));
        assert_eq!(s.mul(&u, &u), s.one());
        let w = SabElement::new(z(3), z(5));
        assert_eq!(s.mul(&s.one(), &w), w);
    }

    #[test]
    fn units() {
        assert_eq!(alg(5).unit_inverse(&SabElement::new(z(1), z(1))), None);
        let s = alg(2);
        let u = SabElement::new(z(1), z(-1));
        assert_eq!(s.unit_inverse(&u), Some(u));
        assert_eq!(s.unit_inverse(&s.one()), Some(s.one()));
        let r = SabAlgebra::new(Ring::IntegersMod(9), Element::Residue(3)).unwrap();
        let x = SabElement::new(Element::Residue(2), Element::Residue(4));
        let inv = r.unit_inverse(&x).unwrap();
        assert_eq!(r.mul(&x, &inv), r.one());
    }

    #[test]
    fn evaluations_are_multiplicative() {
        let s = alg(6);
        let p = SabElement::new(z(2), z(-3));
        let q = SabElement::new(z(-1), z(4));
        let (p0, pa) = s.evaluations(&p);
        let (q0, qa) = s.evaluations(&q);
        let (r0, ra) = s.evaluations(&s.mul(&p, &q));
        assert_eq!(r0, Ring::Integers.mul(&p0, &q0));
        assert_eq!(ra, Ring::Integers.mul(&pa, &qa));
    }

    #[test]
    fn text_form() {
        let s = alg(2);
        let e = SabElement::new(z(1), z(-1));
        assert_eq!(s.format(&e), "1 + -1*th");
        assert_eq!(s.parse("1 + -1*th").unwrap(), e);
        assert_eq!(s.parse("th").unwrap(), s.theta());
        assert_eq!(s.parse("3").unwrap(), s.embed(z(3)));
        assert_eq!(s.parse("-2*th").unwrap(), SabElement::new(z(0), z(-2)));
        let q = SabAlgebra::new(Ring::RationalPoly, Ring::RationalPoly.parse_element("T").unwrap()).unwrap();
        let e = q.parse("(T+1) + (T^2-1/2)*th").unwrap();
        assert_eq!(q.format(&e), "(T+1) + (T^2-1/2)*th");
        let p = SabAlgebra::new(
            Ring::Product(vec![Ring::IntegersMod(2), Ring::IntegersMod(3)]),
            Element::Tuple(vec![Element::Residue(1), Element::Residue(0)]),
        )
        .unwrap();
        let e = p.parse("(1,2) + (0,1)*th").unwrap();
        assert_eq!(p.parse(&p.format(&e)).unwrap(), e);
    }

    fn cert(a: i64, b: i64) -> BezoutCertificate {
        BezoutCertificate {
            coefficients: vec![z(a), z(b)],
        }
    }

    fn w(n: u64, l: i64, e: i64) -> GoodPointWitness {
        GoodPointWitness {
            exponent: n,
            lambda: z(l),
            epsilon: z(e),
            epsilon_inverse: z(e),
        }
    }

    #[test]
    fn witness_to_polynomial_examples() {
        let r = Ring::Integers;
        let p = witness_to_polynomial(&r, &z(4), &z(3), &cert(1, -1), &w(1, -1, -1)).unwrap();
        assert_eq!(p.format(&r), "-x1+x2");
        let p = witness_to_polynomial(&r, &z(0), &z(1), &cert(0, 1), &w(1, 0, 1)).unwrap();
        assert_eq!(p.format(&r), "x2");
        let p = witness_to_polynomial(&r, &z(5), &z(2), &cert(1, -2), &w(2, -1, -1)).unwrap();
        assert_eq!(p.format(&r), "-x1^2+2*x1*x2+x2^2");
        assert!(witness_to_polynomial(&r, &z(5), &z(2), &cert(1, 1), &w(2, -1, -1)).is_err());
    }

    #[test]
    fn polynomial_to_witness_examples() {
        let r = Ring::Integers;
        let p = |s| HomogeneousPolynomial::parse(&r, s, Some(2)).unwrap();
        assert_eq!(polynomial_to_witness(&r, &z(4), &z(3), &p("x2-x1")).unwrap(), w(1, -1, -1));
        assert_eq!(polynomial_to_witness(&r, &z(0), &z(1), &p("x2")).unwrap(), w(1, 0, 1));
        assert_eq!(
            polynomial_to_witness(&r, &z(5), &z(2), &p("x2^2-x1^2+2*x1*x2")).unwrap(),
            w(2, -1, -1)
        );
        assert!(matches!(
            polynomial_to_witness(&r, &z(5), &z(2), &p("2*x2")),
            Err(Error::Precondition(_))
        ));
    }
}
