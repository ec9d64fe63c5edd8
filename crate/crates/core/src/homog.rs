//! Sparse homogeneous polynomials over a ring and the inductive
//! construction of polynomials taking unit values on finite sets of
//! primitive points.
//!
//! Extending a polynomial `P` (unit-valued on `p_1..p_k`) to a new point
//! `q`: with `c = P(q)`, pick for each `t` a combination
//! `1 = c·a_t + Σ u_{ij} (p_{i,t} q_j − p_{j,t} q_i)` and the linear form
//! `B_t = Σ u_{ij} (p_{i,t} X_j − p_{j,t} X_i)`, which vanishes at `p_t`.
//! `(Π B_t(q), c^α)` is then primitive; a witness
//! `c^{αN} + λ·Π B_t(q) = ε` gives
//!
//! ```text
//! R = (P^α)^N + λ · Π B_t · W^(N·α·deg P − k)
//! ```
//!
//! where `W` is a linear form with `W(q) = 1`. `R(p_t) = P(p_t)^{αN}` and
//! `R(q) = ε`, both units.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::bezout::{bezout, PrimitivePoint};
use crate::error::{parse_err, Error, Result};
use crate::ring::{Element, Ring};
use crate::witness::{find_good_witness, verify_witness, GoodPointWitness, SearchOutcome};

/// A homogeneous polynomial in `X_1..X_n`. The zero polynomial has no
/// terms and degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    n_vars: usize,
    degree: u64,
    terms: BTreeMap<Vec<u64>, Element>,
}

impl HomogeneousPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        HomogeneousPolynomial {
            n_vars,
            degree: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, n_vars: usize, c: Element) -> Self {
        Self::monomial(ring, vec![0; n_vars], c)
    }

    /// `c · X^e`; zero when `c` is.
    pub fn monomial(ring: &Ring, exponents: Vec<u64>, c: Element) -> Self {
        let n_vars = exponents.len();
        if ring.is_zero(&c) {
            return Self::zero(n_vars);
        }
        HomogeneousPolynomial {
            n_vars,
            degree: exponents.iter().sum(),
            terms: BTreeMap::from([(exponents, c)]),
        }
    }

    pub fn variable(ring: &Ring, n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Self::monomial(ring, e, ring.one())
    }

    /// `Σ c_i X_i`.
    pub fn linear(ring: &Ring, coefficients: &[Element]) -> Self {
        let n = coefficients.len();
        coefficients
            .iter()
            .enumerate()
            .fold(Self::zero(n), |acc, (i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                acc.add(ring, &Self::monomial(ring, e, c.clone()))
            })
    }

    /// Builds from explicit terms, summing duplicates; all exponent vectors
    /// must have the same total degree.
    pub fn from_terms(
        ring: &Ring,
        n_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u64>, Element)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Vec<u64>, Element> = BTreeMap::new();
        let mut degree = None;
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(Error::Arity {
                    expected: n_vars,
                    found: e.len(),
                });
            }
            let d: u64 = e.iter().sum();
            if *degree.get_or_insert(d) != d {
                return Err(Error::Precondition("polynomial is not homogeneous".into()));
            }
            let slot = acc.entry(e).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &c);
        }
        acc.retain(|_, c| !ring.is_zero(c));
        Ok(HomogeneousPolynomial {
            n_vars,
            degree: if acc.is_empty() { 0 } else { degree.unwrap_or(0) },
            terms: acc,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u64], &Element)> {
        self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u64]) -> Option<&Element> {
        self.terms.get(exponents)
    }

    /// Whether every stored exponent vector sums to the declared degree.
    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .keys()
            .all(|e| e.len() == self.n_vars && e.iter().sum::<u64>() == self.degree)
    }

    pub fn add(&self, ring: &Ring, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, c);
        }
        terms.retain(|_, c| !ring.is_zero(c));
        let degree = if terms.is_empty() { 0 } else { self.degree };
        HomogeneousPolynomial {
            n_vars: self.n_vars,
            degree,
            terms,
        }
    }

    pub fn neg(&self, ring: &Ring) -> Self {
        self.scale(ring, &ring.neg(&ring.one()))
    }

    pub fn sub(&self, ring: &Ring, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale(&self, ring: &Ring, c: &Element) -> Self {
        let terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), ring.mul(x, c)))
            .filter(|(_, x)| !ring.is_zero(x))
            .collect();
        let degree = if terms.is_empty() { 0 } else { self.degree };
        HomogeneousPolynomial {
            n_vars: self.n_vars,
            degree,
            terms,
        }
    }

    pub fn mul(&self, ring: &Ring, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut terms: BTreeMap<Vec<u64>, Element> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let prod = ring.mul(c1, c2);
                match terms.get_mut(&e) {
                    Some(slot) => *slot = ring.add(slot, &prod),
                    None => {
                        terms.insert(e, prod);
                    }
                }
            }
        }
        terms.retain(|_, c| !ring.is_zero(c));
        let degree = if terms.is_empty() {
            0
        } else {
            self.degree + other.degree
        };
        HomogeneousPolynomial {
            n_vars: self.n_vars,
            degree,
            terms,
        }
    }

    pub fn pow(&self, ring: &Ring, mut e: u64) -> Self {
        let mut result = Self::constant(ring, self.n_vars, ring.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        result
    }

    pub fn eval(&self, ring: &Ring, point: &[Element]) -> Result<Element> {
        if point.len() != self.n_vars {
            return Err(Error::Arity {
                expected: self.n_vars,
                found: point.len(),
            });
        }
        // powers of each coordinate up to the largest exponent used
        let mut powers: Vec<Vec<Element>> = Vec::with_capacity(self.n_vars);
        for (i, x) in point.iter().enumerate() {
            let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut row = vec![ring.one()];
            for k in 1..=max as usize {
                row.push(ring.mul(&row[k - 1], x));
            }
            powers.push(row);
        }
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                term = ring.mul(&term, &powers[i][k as usize]);
            }
            acc = ring.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Canonical text: `x1^2-x1*x2+x2^2`.
    pub fn format(&self, ring: &Ring) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms() {
            let text = coefficient_text(ring, c);
            let mono = monomial_text(e);
            let term = match (text.as_str(), mono.is_empty()) {
                (_, true) => text.clone(),
                ("1", false) => mono,
                ("-1", false) => format!("-{mono}"),
                (t, false) => format!("{t}*{mono}"),
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }

    /// Parses the text form; `n_vars` fixes the variable count, otherwise it
    /// is the largest index used.
    pub fn parse(ring: &Ring, s: &str, n_vars: Option<usize>) -> Result<Self> {
        let raw = parse_terms(ring, s)?;
        let max_var = raw.iter().flat_map(|(e, _)| e.keys().copied()).max().unwrap_or(0);
        let n = match n_vars {
            Some(n) if max_var > n => {
                return Err(Error::Precondition(format!(
                    "variable x{max_var} exceeds the {n} variables available"
                )))
            }
            Some(n) => n,
            None => max_var.max(1),
        };
        let terms = raw.into_iter().map(|(e, c)| {
            let mut v = vec![0; n];
            for (i, k) in e {
                v[i - 1] += k;
            }
            (v, c)
        });
        Self::from_terms(ring, n, terms)
    }
}

fn monomial_text(e: &[u64]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| match k {
            1 => format!("x{}", i + 1),
            _ => format!("x{}^{k}", i + 1),
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn is_number_literal(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let mut parts = s.splitn(2, '/');
    let digits = |p: Option<&str>| p.is_some_and(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
    let num = parts.next();
    match parts.next() {
        None => digits(num),
        Some(d) => digits(num) && digits(Some(d)),
    }
}

/// Bare when the coefficient is a plain number; tuples keep their own
/// parentheses; anything else is wrapped.
fn coefficient_text(ring: &Ring, c: &Element) -> String {
    let s = ring.format(c);
    if is_number_literal(&s) || matches!(ring, Ring::Product(_)) {
        s
    } else {
        format!("({s})")
    }
}

type RawTerm = (BTreeMap<usize, u64>, Element);

fn parse_terms(ring: &Ring, s: &str) -> Result<Vec<RawTerm>> {
    let b = s.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < b.len() && b[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    skip(&mut pos);
    if pos == b.len() {
        return Err(parse_err(pos, "empty polynomial"));
    }
    let mut first = true;
    while pos < b.len() {
        let mut negative = false;
        if b[pos] == b'+' || b[pos] == b'-' {
            negative = b[pos] == b'-';
            pos += 1;
        } else if !first {
            return Err(parse_err(pos, "expected '+' or '-'"));
        }
        first = false;
        let mut coeff = ring.one();
        let mut exps: BTreeMap<usize, u64> = BTreeMap::new();
        loop {
            skip(&mut pos);
            let start = pos;
            match b.get(pos) {
                Some(b'x') => {
                    pos += 1;
                    let i = read_digits(b, &mut pos).ok_or_else(|| parse_err(pos, "expected a variable index"))?;
                    if i == 0 {
                        return Err(parse_err(start, "variables are numbered from x1"));
                    }
                    skip(&mut pos);
                    let k = if b.get(pos) == Some(&b'^') {
                        pos += 1;
                        skip(&mut pos);
                        read_digits(b, &mut pos).ok_or_else(|| parse_err(pos, "expected an exponent"))? as u64
                    } else {
                        1
                    };
                    *exps.entry(i).or_insert(0) += k;
                }
                Some(b'(') => {
                    let mut depth = 0usize;
                    let mut end = pos;
                    while end < b.len() {
                        match b[end] {
                            b'(' => depth += 1,
                            b')' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                        end += 1;
                    }
                    if end == b.len() {
                        return Err(parse_err(start, "unbalanced parenthesis"));
                    }
                    // a localized fraction `(P)/(Q)` continues after the group
                    let mut stop = end + 1;
                    if matches!(ring, Ring::LocalizedRationalPoly(_)) {
                        let mut look = stop;
                        while look < b.len() && b[look].is_ascii_whitespace() {
                            look += 1;
                        }
                        if b.get(look) == Some(&b'/') {
                            let mut e2 = look + 1;
                            while e2 < b.len() && b[e2].is_ascii_whitespace() {
                                e2 += 1;
                            }
                            if b.get(e2) == Some(&b'(') {
                                let mut d = 0usize;
                                while e2 < b.len() {
                                    match b[e2] {
                                        b'(' => d += 1,
                                        b')' => {
                                            d -= 1;
                                            if d == 0 {
                                                break;
                                            }
                                        }
                                        _ => {}
                                    }
                                    e2 += 1;
                                }
                                stop = e2 + 1;
                            }
                        }
                    }
                    let group = &s[pos..stop.min(s.len())];
                    let inner = &s[pos + 1..end];
                    let value = if stop > end + 1 || matches!(ring, Ring::Product(_)) {
                        ring.parse_element(group)
                    } else {
                        ring.parse_element(inner)
                    }
                    .map_err(|e| shift(e, pos))?;
                    coeff = ring.mul(&coeff, &value);
                    pos = stop;
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut end = pos;
                    while end < b.len() && (b[end].is_ascii_digit() || b[end] == b'/') {
                        end += 1;
                    }
                    let lit = &s[pos..end];
                    let value = number_element(ring, lit).map_err(|e| shift(e, pos))?;
                    coeff = ring.mul(&coeff, &value);
                    pos = end;
                }
                _ => return Err(parse_err(pos, "expected a coefficient or a variable")),
            }
            skip(&mut pos);
            if b.get(pos) == Some(&b'*') {
                pos += 1;
                continue;
            }
            break;
        }
        if negative {
            coeff = ring.neg(&coeff);
        }
        terms.push((exps, coeff));
        skip(&mut pos);
    }
    Ok(terms)
}

fn read_digits(b: &[u8], pos: &mut usize) -> Option<usize> {
    let start = *pos;
    while *pos < b.len() && b[*pos].is_ascii_digit() {
        *pos += 1;
    }
    std::str::from_utf8(&b[start..*pos]).ok()?.parse().ok()
}

fn number_element(ring: &Ring, lit: &str) -> Result<Element> {
    match ring {
        Ring::Product(_) => {
            let mut parts = lit.splitn(2, '/');
            let n: num_bigint::BigInt = parts.next().unwrap_or("").parse().map_err(|_| parse_err(0, "bad number"))?;
            let x = ring.from_bigint(&n);
            match parts.next() {
                None => Ok(x),
                Some(d) => {
                    let d: num_bigint::BigInt = d.parse().map_err(|_| parse_err(0, "bad number"))?;
                    let inv = ring
                        .unit_inverse(&ring.from_bigint(&d))
                        .ok_or_else(|| parse_err(0, "denominator is not invertible"))?;
                    Ok(ring.mul(&x, &inv))
                }
            }
        }
        _ => ring.parse_element(lit),
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

// ---- the constructor ----

/// `W = Σ u_i X_i` from the certificate of `p`, so `W(p) = 1`.
pub fn linear_form_for_point(ring: &Ring, p: &PrimitivePoint) -> HomogeneousPolynomial {
    HomogeneousPolynomial::linear(ring, &p.certificate().coefficients)
}

/// Resource limits for the constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub witness_bound: u64,
    /// Upper bound on the number of monomials of any intermediate form.
    pub max_terms: u128,
    /// Upper bound on the estimated total coefficient size, in printed
    /// characters, of a step's output over an infinite ring.
    pub max_digits: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            witness_bound: 10_000,
            max_terms: 4_096,
            max_digits: 8_000_000,
        }
    }
}

/// The combination chosen for one covered point `p_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorCombination {
    pub point: Vec<Element>,
    /// `(i, j, p_i q_j − p_j q_i)` for `i < j`.
    pub minors: Vec<(usize, usize, Element)>,
    pub a_t: Element,
    /// Aligned with `minors`.
    pub u: Vec<Element>,
    /// `B_t = Σ u_{ij} (p_i X_j − p_j X_i)`.
    pub form: HomogeneousPolynomial,
}

/// Everything needed to re-check one extension step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub input: HomogeneousPolynomial,
    pub q: Vec<Element>,
    pub value_at_q: Element,
    pub combinations: Vec<MinorCombination>,
    /// `P(q)` was already a unit; every `B_t` is zero.
    pub degenerate: bool,
    pub alpha: u64,
    /// `(Π B_t(q), P(q)^α)`, the pair the witness certifies.
    pub witness_pair: (Element, Element),
    pub witness: GoodPointWitness,
    pub filler: HomogeneousPolynomial,
    pub output: HomogeneousPolynomial,
}

fn minors(ring: &Ring, p: &[Element], q: &[Element]) -> Vec<(usize, usize, Element)> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j, ring.sub(&ring.mul(&p[i], &q[j]), &ring.mul(&p[j], &q[i]))));
        }
    }
    out
}

fn binomial_form(ring: &Ring, p: &[Element], minors: &[(usize, usize, Element)], u: &[Element]) -> HomogeneousPolynomial {
    let n = p.len();
    let mut coeffs = vec![ring.zero(); n];
    for ((i, j, _), u) in minors.iter().zip(u) {
        coeffs[*j] = ring.add(&coeffs[*j], &ring.mul(u, &p[*i]));
        coeffs[*i] = ring.sub(&coeffs[*i], &ring.mul(u, &p[*j]));
    }
    HomogeneousPolynomial::linear(ring, &coeffs)
}

fn monomial_count(n_vars: usize, degree: u64) -> u128 {
    // C(degree + n − 1, n − 1), saturating
    let k = n_vars.saturating_sub(1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul(degree as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// `P^e` dominates the output; its coefficients are about `e` times as
/// long as those of `P`. Finite rings have bounded coefficients.
fn check_digits(
    ring: &Ring,
    p: &HomogeneousPolynomial,
    e: u64,
    out_degree: u64,
    limits: &Limits,
) -> Result<()> {
    if ring.is_finite() {
        return Ok(());
    }
    let widest = p.terms.values().map(|c| ring.format(c).len()).max().unwrap_or(1) as u128;
    let digits = monomial_count(p.n_vars, out_degree)
        .saturating_mul(widest)
        .saturating_mul(e as u128);
    if digits > limits.max_digits {
        return Err(Error::CoefficientLimit {
            digits,
            limit: limits.max_digits,
        });
    }
    Ok(())
}

/// The largest `N` with `monomial_count(n, N·step) ≤ max_terms`.
fn max_exponent(n_vars: usize, step: u64, limits: &Limits) -> u64 {
    let fits = |e: u64| monomial_count(n_vars, e.saturating_mul(step)) <= limits.max_terms;
    if !fits(1) {
        return 0;
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while fits(hi) {
        lo = hi;
        if hi >= u64::MAX / 2 {
            return hi;
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_size(n_vars: usize, degree: u64, limits: &Limits) -> Result<()> {
    let terms = monomial_count(n_vars, degree);
    if terms > limits.max_terms {
        return Err(Error::SizeLimit {
            terms,
            limit: limits.max_terms,
        });
    }
    Ok(())
}

fn search(ring: &Ring, a: &Element, b: &Element, bound: u64) -> Result<GoodPointWitness> {
    match find_good_witness(ring, a, b, bound)? {
        SearchOutcome::Witness(w) => Ok(w),
        SearchOutcome::Exhausted { bound } => Err(Error::WitnessExhausted { bound }),
        SearchOutcome::Refuted(e) => Err(Error::Precondition(format!(
            "the ring is not good at this pair: {e:?}"
        ))),
    }
}

/// Chooses `a_t` and `u` with `1 = c·a_t + Σ u·minors`.
///
/// When the minors generate a proper ideal `gA`, `B_t(q) = 1 − c·a_t` is
/// taken to be `±Π_{d∈S} Φ_d(c)` for a set `S` of cyclotomic indices not yet
/// used at this step. Distinct indices keep `Π_t B_t(q)` a divisor of
/// `c^L − 1`, so the later witness exponent stays below `L = lcm(S)`.
fn combine(
    ring: &Ring,
    c: &Element,
    minors: &[(usize, usize, Element)],
    used: &mut BTreeSet<u64>,
    bound: u64,
) -> Result<(Element, Vec<Element>)> {
    let values: Vec<Element> = minors.iter().map(|(_, _, m)| m.clone()).collect();
    let (g, coeffs) = ring.principal_generator(&values);
    if let Some(g_inv) = ring.unit_inverse(&g) {
        return Ok((ring.zero(), coeffs.iter().map(|x| ring.mul(x, &g_inv)).collect()));
    }
    if let Some((b_val, indices)) = cyclotomic_multiple(ring, c, &g, used) {
        let a_t = ring.exact_div(c, &ring.sub(&ring.one(), &b_val));
        let scale = ring.exact_div(&g, &b_val);
        if let (Some(a_t), Some(scale)) = (a_t, scale) {
            used.extend(indices);
            return Ok((a_t, coeffs.iter().map(|x| ring.mul(x, &scale)).collect()));
        }
    }
    if let Ok(w) = search(ring, &g, c, bound) {
        let scale = ring.mul(&w.epsilon_inverse, &w.lambda);
        let a_t = ring.mul(&w.epsilon_inverse, &ring.pow(c, w.exponent - 1));
        return Ok((a_t, coeffs.iter().map(|x| ring.mul(x, &scale)).collect()));
    }
    let mut xs = vec![c.clone()];
    xs.extend(values);
    let cert = bezout(ring, &xs).ok_or(Error::BezoutFailure)?;
    let mut it = cert.coefficients.into_iter();
    let a_t = it.next().expect("nonempty certificate");
    Ok((a_t, it.collect()))
}

const MAX_CYCLOTOMIC: usize = 256;

/// Integer coefficients (constant term first) of `Φ_1, …, Φ_MAX`.
fn cyclotomics() -> &'static [Vec<i64>] {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<i64>> = vec![Vec::new()];
        for d in 1..=MAX_CYCLOTOMIC {
            // T^d − 1 divided by every Φ_e with e | d, e < d
            let mut num = vec![0i64; d + 1];
            num[0] = -1;
            num[d] = 1;
            for e in (1..d).filter(|e| d % e == 0) {
                num = div_monic(&num, &table[e]);
            }
            table.push(num);
        }
        table
    })
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let (n, m) = (num.len() - 1, den.len() - 1);
    let mut rem = num.to_vec();
    let mut q = vec![0i64; n - m + 1];
    for i in (0..=n - m).rev() {
        let lead = rem[i + m];
        q[i] = lead;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= lead * d;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn eval_int_poly(ring: &Ring, coeffs: &[i64], x: &Element, modulus: Option<&Element>) -> Element {
    coeffs.iter().rev().fold(ring.zero(), |acc, &k| {
        let v = ring.add(&ring.mul(&acc, x), &ring.from_int(k));
        match modulus {
            Some(m) => ring.reduce_mod(m, &v),
            None => v,
        }
    })
}

/// `±Π_{d∈S} Φ_d(c)`, normalised to be `≡ 1 (mod c)`, lying in `gA`, with
/// `S` disjoint from `used`.
fn cyclotomic_multiple(
    ring: &Ring,
    c: &Element,
    g: &Element,
    used: &BTreeSet<u64>,
) -> Option<(Element, Vec<u64>)> {
    let table = cyclotomics();
    let mut h = g.clone();
    let mut product = ring.one();
    let mut indices = Vec::new();
    let c_mod = ring.reduce_mod(g, c);
    for (d, phi) in table.iter().enumerate().skip(1) {
        if ring.is_unit(&h) {
            break;
        }
        if used.contains(&(d as u64)) {
            continue;
        }
        let small = eval_int_poly(ring, phi, &c_mod, Some(g));
        let (common, _) = ring.principal_generator(&[h.clone(), small]);
        if ring.is_unit(&common) {
            continue;
        }
        let full = eval_int_poly(ring, phi, c, None);
        let (common, _) = ring.principal_generator(&[h.clone(), full.clone()]);
        h = ring.exact_div(&common, &h)?;
        product = ring.mul(&product, &full);
        indices.push(d as u64);
    }
    if !ring.is_unit(&h) {
        return None;
    }
    // Φ_d(0) = 1 for d > 1 and Φ_1(0) = −1
    if indices.first() == Some(&1) {
        product = ring.neg(&product);
    }
    Some((product, indices))
}

/// One inductive step: from `P` unit-valued on `covered`, a form unit-valued
/// on `covered ∪ {q}`.
pub fn extend_unit_valued(
    ring: &Ring,
    p: &HomogeneousPolynomial,
    covered: &[PrimitivePoint],
    q: &PrimitivePoint,
    limits: &Limits,
) -> Result<(HomogeneousPolynomial, ConstructionTrace)> {
    let n = p.n_vars();
    if q.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: q.len(),
        });
    }
    if p.degree() == 0 {
        return Err(Error::Precondition("P must have degree at least 1".into()));
    }
    for pt in covered {
        if pt.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: pt.len(),
            });
        }
        if !ring.is_unit(&p.eval(ring, pt.coordinates())?) {
            return Err(Error::Precondition("P is not a unit at a covered point".into()));
        }
    }
    let qc = q.coordinates();
    let c = p.eval(ring, qc)?;
    let degenerate = ring.is_unit(&c);
    let mut combinations = Vec::with_capacity(covered.len());
    let mut used = BTreeSet::new();
    for pt in covered {
        let ms = minors(ring, pt.coordinates(), qc);
        let (a_t, u) = if degenerate {
            (ring.unit_inverse(&c).unwrap(), vec![ring.zero(); ms.len()])
        } else {
            combine(ring, &c, &ms, &mut used, limits.witness_bound)?
        };
        let form = binomial_form(ring, pt.coordinates(), &ms, &u);
        combinations.push(MinorCombination {
            point: pt.coordinates().to_vec(),
            minors: ms,
            a_t,
            u,
            form,
        });
    }
    let k = covered.len() as u64;
    let b_at_q: Vec<Element> = combinations
        .iter()
        .map(|m| m.form.eval(ring, qc))
        .collect::<Result<_>>()?;
    let a = ring.product_of(&b_at_q);

    let mut alpha = 1u64;
    let (b, witness) = loop {
        let b = ring.pow(&c, alpha);
        // exponents past `cap` cannot give an output within `max_terms`
        let step = alpha.saturating_mul(p.degree());
        let cap = max_exponent(n, step, limits);
        if cap == 0 {
            check_size(n, step, limits)?;
        }
        let w = match search(ring, &a, &b, cap.min(limits.witness_bound)) {
            Err(Error::WitnessExhausted { .. }) if cap < limits.witness_bound => {
                return Err(Error::SizeLimit {
                    terms: monomial_count(n, (cap + 1).saturating_mul(step)),
                    limit: limits.max_terms,
                });
            }
            other => other?,
        };
        if w.exponent.saturating_mul(alpha).saturating_mul(p.degree()) >= k {
            break (b, w);
        }
        alpha += 1;
    };

    let filler = linear_form_for_point(ring, q);
    let out_degree = witness
        .exponent
        .checked_mul(alpha)
        .and_then(|x| x.checked_mul(p.degree()))
        .ok_or(Error::SizeLimit {
            terms: u128::MAX,
            limit: limits.max_terms,
        })?;
    check_size(n, out_degree, limits)?;
    check_digits(ring, p, alpha * witness.exponent, out_degree, limits)?;
    let output = assemble(ring, p, &combinations, &filler, alpha, &witness, k);

    let trace = ConstructionTrace {
        input: p.clone(),
        q: qc.to_vec(),
        value_at_q: c,
        combinations,
        degenerate,
        alpha,
        witness_pair: (a, b),
        witness,
        filler,
        output: output.clone(),
    };
    Ok((output, trace))
}

fn assemble(
    ring: &Ring,
    p: &HomogeneousPolynomial,
    combinations: &[MinorCombination],
    filler: &HomogeneousPolynomial,
    alpha: u64,
    w: &GoodPointWitness,
    k: u64,
) -> HomogeneousPolynomial {
    let n = p.n_vars();
    let head = p.pow(ring, alpha * w.exponent);
    let product = combinations
        .iter()
        .fold(HomogeneousPolynomial::constant(ring, n, ring.one()), |acc, m| acc.mul(ring, &m.form));
    if product.is_zero() || ring.is_zero(&w.lambda) {
        return head;
    }
    let filler_power = filler.pow(ring, head.degree() - k);
    head.add(ring, &product.mul(ring, &filler_power).scale(ring, &w.lambda))
}

impl ConstructionTrace {
    /// Re-checks every recorded identity with exact arithmetic.
    pub fn replay(&self, ring: &Ring) -> Result<()> {
        let fail = |what: &str| Err(Error::Identity(what.to_string()));
        let c = self.input.eval(ring, &self.q)?;
        if c != self.value_at_q {
            return fail("P(q) does not match the recorded value");
        }
        if self.degenerate != ring.is_unit(&c) {
            return fail("degenerate flag disagrees with P(q)");
        }
        let mut b_values = Vec::new();
        for m in &self.combinations {
            if m.minors != minors(ring, &m.point, &self.q) {
                return fail("recorded minors are wrong");
            }
            let combo = ring.add(
                &ring.mul(&c, &m.a_t),
                &ring.sum(&m.minors.iter().zip(&m.u).map(|((_, _, x), u)| ring.mul(x, u)).collect::<Vec<_>>()),
            );
            if !ring.is_one(&combo) {
                return fail("1 = P(q)·a_t + Σ u·a_ij does not hold");
            }
            if m.form != binomial_form(ring, &m.point, &m.minors, &m.u) {
                return fail("B_t does not match its coefficients");
            }
            if !ring.is_zero(&m.form.eval(ring, &m.point)?) {
                return fail("B_t does not vanish at its point");
            }
            if !self.input.eval(ring, &m.point).map(|v| ring.is_unit(&v))? {
                return fail("P is not a unit at a covered point");
            }
            b_values.push(m.form.eval(ring, &self.q)?);
        }
        let (a, b) = &self.witness_pair;
        if *a != ring.product_of(&b_values) || *b != ring.pow(&c, self.alpha) {
            return fail("witness pair does not match Π B_t(q) and P(q)^α");
        }
        if !verify_witness(ring, a, b, &self.witness) {
            return fail("witness does not verify");
        }
        if !ring.is_one(&self.filler.eval(ring, &self.q)?) {
            return fail("W(q) ≠ 1");
        }
        let k = self.combinations.len() as u64;
        if self.witness.exponent * self.alpha * self.input.degree() < k {
            return fail("N·α·deg P < k");
        }
        let expected = assemble(ring, &self.input, &self.combinations, &self.filler, self.alpha, &self.witness, k);
        if expected != self.output {
            return fail("R differs from (P^α)^N + λ·Π B_t·W^(N·α·deg P − k)");
        }
        if !self.output.is_homogeneous() || self.output.degree() == 0 {
            return fail("R is not homogeneous of positive degree");
        }
        for m in &self.combinations {
            if !ring.is_unit(&self.output.eval(ring, &m.point)?) {
                return fail("R is not a unit at a covered point");
            }
        }
        if self.output.eval(ring, &self.q)? != self.witness.epsilon {
            return fail("R(q) ≠ ε");
        }
        Ok(())
    }
}

/// Result of [`construct_unit_valued`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub polynomial: HomogeneousPolynomial,
    /// The linear form for the first point.
    pub base: HomogeneousPolynomial,
    pub traces: Vec<ConstructionTrace>,
}

impl Construction {
    pub fn replay(&self, ring: &Ring, points: &[PrimitivePoint]) -> Result<()> {
        let first = points.first().ok_or_else(|| Error::Precondition("no points".into()))?;
        if self.base != linear_form_for_point(ring, first) || !ring.is_one(&self.base.eval(ring, first.coordinates())?) {
            return Err(Error::Identity("base form does not take the value 1".into()));
        }
        let mut current = &self.base;
        for t in &self.traces {
            if &t.input != current {
                return Err(Error::Identity("trace steps are not chained".into()));
            }
            t.replay(ring)?;
            current = &t.output;
        }
        if current != &self.polynomial {
            return Err(Error::Identity("final polynomial is not the last step's output".into()));
        }
        for p in points {
            if !ring.is_unit(&self.polynomial.eval(ring, p.coordinates())?) {
                return Err(Error::Identity("final polynomial is not unit-valued".into()));
            }
        }
        Ok(())
    }
}

/// A homogeneous form of positive degree taking unit values at every point.
pub fn construct_unit_valued(ring: &Ring, points: &[PrimitivePoint], limits: &Limits) -> Result<Construction> {
    let first = points
        .first()
        .ok_or_else(|| Error::Precondition("at least one point is required".into()))?;
    let n = first.len();
    if n < 2 {
        return Err(Error::Precondition("points need at least two coordinates".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: p.len(),
            });
        }
        if points[..i].iter().any(|o| o.coordinates() == p.coordinates()) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    let base = linear_form_for_point(ring, first);
    let mut current = base.clone();
    let mut traces = Vec::with_capacity(points.len() - 1);
    for i in 1..points.len() {
        let (next, trace) = extend_unit_valued(ring, &current, &points[..i], &points[i], limits)?;
        current = next;
        traces.push(trace);
    }
    for p in points {
        debug_assert!(ring.is_unit(&current.eval(ring, p.coordinates())?));
    }
    Ok(Construction {
        polynomial: current,
        base,
        traces,
    })
}

// ---- section ideals ----

/// The binomials `a_i X_j − a_j X_i` (`i < j`, zeros dropped) generating the
/// kernel of evaluation along the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionIdeal {
    pub generators: Vec<HomogeneousPolynomial>,
}

pub fn section_ideal_generators(ring: &Ring, p: &PrimitivePoint) -> SectionIdeal {
    let a = p.coordinates();
    let n = a.len();
    let mut generators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut coeffs = vec![ring.zero(); n];
            coeffs[j] = a[i].clone();
            coeffs[i] = ring.neg(&a[j]);
            let g = HomogeneousPolynomial::linear(ring, &coeffs);
            if !g.is_zero() {
                generators.push(g);
            }
        }
    }
    SectionIdeal { generators }
}

/// Exponent vectors of degree `d` in `n` variables, lexicographically descending.
pub fn monomials(n: usize, d: u64) -> Vec<Vec<u64>> {
    fn go(n: usize, d: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            go(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, d, &mut Vec::new(), &mut out);
    }
    out
}

impl SectionIdeal {
    /// Dimension over `F_p` of the degree-`d` part of the ideal: the span of
    /// monomial multiples of the generators.
    pub fn slice_dimension(&self, ring: &Ring, d: u64) -> Result<usize> {
        let Ring::PrimeField(p) = ring else {
            return Err(Error::Unsupported("slice dimensions need a prime field".into()));
        };
        let Some(n) = self.generators.first().map(|g| g.n_vars()) else {
            return Ok(0);
        };
        if d == 0 {
            return Ok(0);
        }
        let basis = monomials(n, d);
        let index: BTreeMap<&Vec<u64>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in &self.generators {
            for m in monomials(n, d - g.degree()) {
                let shifted = HomogeneousPolynomial::monomial(ring, m, ring.one()).mul(ring, g);
                let mut row = vec![0u64; basis.len()];
                for (e, c) in shifted.terms() {
                    let Element::Residue(v) = c else { unreachable!() };
                    row[index[&e.to_vec()]] = *v;
                }
                rows.push(row);
            }
        }
        Ok(rank_mod_p(rows, *p))
    }
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = crate::ring::upoly::mod_inverse(rows[rank][col], p).expect("nonzero mod p");
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
