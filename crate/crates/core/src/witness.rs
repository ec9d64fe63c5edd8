//! Good-point witnesses: search, verification, refutation, and the
//! unit-quotient obstruction group.
//!
//! A primitive pair `(a, b)` is good when `b^N + λ·a` is a unit for some
//! `N ≥ 1` and `λ`. The search walks the powers of `b` in `A/aA` and asks
//! the ring for a unit in each residue class; over rings whose quotients
//! are finite the walk is eventually periodic, so a closed cycle without a
//! hit is a proof that no witness exists.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bezout::bezout;
use crate::error::{Error, Result};
use crate::ring::upoly::{self, Rationals};
use crate::ring::{as_int, as_tuple, Element, Ring};

/// `b^N + λ·a = ε` with `ε·ε⁻¹ = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPointWitness {
    pub exponent: u64,
    pub lambda: Element,
    pub epsilon: Element,
    pub epsilon_inverse: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationEvidence {
    /// The powers of `b` modulo `a` entered a cycle of length `period`
    /// after visiting `residues_visited` distinct classes, none of which
    /// contains a unit.
    CycleWithoutUnit { period: u64, residues_visited: u64 },
    /// `a(θ) = 0` while `|b(θ)| ≠ 1`; over `Z[T]` this rules out
    /// `b^N + λa = ±1`.
    RationalEvaluation {
        root: BigRational,
        value: BigRational,
        reason: String,
    },
    /// `a` vanishes at every listed root and the ratio `b(θ_i)/b(θ_1)` for
    /// the offending root is not `±1`.
    RatioCriterion {
        roots: Vec<BigRational>,
        values: Vec<BigRational>,
        ratio: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(GoodPointWitness),
    Refuted(RefutationEvidence),
    Exhausted { bound: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&GoodPointWitness> {
        match self {
            SearchOutcome::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// Searches for the least `N` such that `b^N` is congruent to a unit mod `a`.
pub fn find_good_witness(ring: &Ring, a: &Element, b: &Element, bound: u64) -> Result<SearchOutcome> {
    if bezout(ring, &[a.clone(), b.clone()]).is_none() {
        return Err(Error::NotPrimitive);
    }
    if bound == 0 {
        return Err(Error::Precondition("search bound must be positive".into()));
    }
    let exact = exact_unit_residues(ring);
    let mut residue = ring.reduce_mod(a, &ring.one());
    let mut seen: HashMap<Element, u64> = HashMap::new();
    for n in 1..=bound {
        residue = ring.reduce_mod(a, &ring.mul(&residue, b));
        if let Some((epsilon, _)) = ring.unit_residue_witness(a, &residue) {
            let power = ring.pow(b, n);
            let lambda = ring
                .exact_div(a, &ring.sub(&epsilon, &power))
                .ok_or_else(|| Error::Identity("ε − b^N is not a multiple of a".into()))?;
            let epsilon_inverse = ring.unit_inverse(&epsilon).expect("ε is a unit");
            return Ok(SearchOutcome::Witness(GoodPointWitness {
                exponent: n,
                lambda,
                epsilon,
                epsilon_inverse,
            }));
        }
        if let Some(&first) = seen.get(&residue) {
            if !exact {
                return Ok(SearchOutcome::Exhausted { bound: n });
            }
            return Ok(SearchOutcome::Refuted(RefutationEvidence::CycleWithoutUnit {
                period: n - first,
                residues_visited: seen.len() as u64,
            }));
        }
        seen.insert(residue.clone(), n);
    }
    Ok(SearchOutcome::Exhausted { bound })
}

/// Whether `unit_residue_witness` decides existence (rather than searching
/// a bounded family) for this ring.
fn exact_unit_residues(ring: &Ring) -> bool {
    match ring {
        Ring::LocalizedRationalPoly(_) => false,
        Ring::Product(rs) => rs.iter().all(exact_unit_residues),
        _ => true,
    }
}

pub fn verify_witness(ring: &Ring, a: &Element, b: &Element, w: &GoodPointWitness) -> bool {
    if w.exponent == 0 {
        return false;
    }
    let lhs = ring.add(&ring.pow(b, w.exponent), &ring.mul(&w.lambda, a));
    lhs == w.epsilon && ring.is_one(&ring.mul(&w.epsilon, &w.epsilon_inverse))
}

/// Re-checks refutation evidence. Cycle evidence is re-derived by walking
/// the residues again; evaluation evidence needs the polynomials.
pub fn verify_refutation(ring: &Ring, a: &Element, b: &Element, e: &RefutationEvidence) -> bool {
    match e {
        RefutationEvidence::CycleWithoutUnit {
            period,
            residues_visited,
        } => {
            let mut residue = ring.reduce_mod(a, &ring.one());
            let mut trail = Vec::new();
            for _ in 0..=*residues_visited {
                residue = ring.reduce_mod(a, &ring.mul(&residue, b));
                if ring.unit_residue_witness(a, &residue).is_some() {
                    return false;
                }
                trail.push(residue.clone());
            }
            let n = trail.len();
            let distinct: HashSet<_> = trail[..n - 1].iter().collect();
            distinct.len() as u64 == *residues_visited
                && (*period as usize) < n
                && trail[n - 1] == trail[n - 1 - *period as usize]
        }
        RefutationEvidence::RationalEvaluation { root, value, .. } => {
            let (Element::PolyQ(pa), Element::PolyQ(pb)) = (a, b) else {
                return false;
            };
            upoly::eval(&Rationals, pa, root).is_zero()
                && upoly::eval(&Rationals, pb, root) == *value
                && !value.abs().is_one()
        }
        RefutationEvidence::RatioCriterion {
            roots,
            values,
            ratio,
        } => {
            let (Element::PolyQ(pa), Element::PolyQ(pb)) = (a, b) else {
                return false;
            };
            roots.len() == values.len()
                && !values.is_empty()
                && roots.iter().zip(values).all(|(t, v)| {
                    upoly::eval(&Rationals, pa, t).is_zero() && upoly::eval(&Rationals, pb, t) == *v
                })
                && values.iter().any(|v| v / &values[0] == *ratio)
                && !ratio.abs().is_one()
        }
    }
}

// ---- the unit-quotient group ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientStatus {
    /// Index of the image of `A×` in `(A/aA)×`.
    Finite { order: u64 },
    /// A residue class whose powers never meet the image of `A×`.
    InfiniteEvidence { generator: Element },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitQuotientReport {
    pub status: QuotientStatus,
    /// `|(A/aA)×|` when it was enumerated.
    pub carrier_size: Option<u64>,
}

/// The group `ρ_a(A)× / ρ_a(A×)` for the reduction `ρ_a : A → A/aA`.
pub fn unit_quotient_group(ring: &Ring, a: &Element) -> UnitQuotientReport {
    if ring.is_zero(a) {
        // ρ_0 is the identity
        let carrier_size = ring
            .unit_group_generators()
            .filter(|_| ring.is_finite() || *ring == Ring::Integers)
            .map(|g| subgroup_closure(ring, &ring.zero(), &g).len() as u64);
        return UnitQuotientReport {
            status: QuotientStatus::Finite { order: 1 },
            carrier_size,
        };
    }
    if let Some(residues) = ring.quotient_residues(a) {
        let units: Vec<&Element> = residues
            .iter()
            .filter(|r| bezout(ring, &[a.clone(), (*r).clone()]).is_some())
            .collect();
        let Some(gens) = ring.unit_group_generators() else {
            return UnitQuotientReport {
                status: QuotientStatus::Unknown,
                carrier_size: Some(units.len() as u64),
            };
        };
        let image = subgroup_closure(ring, a, &gens);
        debug_assert_eq!(units.len() % image.len(), 0);
        return UnitQuotientReport {
            status: QuotientStatus::Finite {
                order: (units.len() / image.len()) as u64,
            },
            carrier_size: Some(units.len() as u64),
        };
    }
    let status = match (ring, a) {
        (Ring::RationalPoly, Element::PolyQ(pa)) => split_roots(pa)
            .ok()
            .filter(|roots| roots.len() >= 2)
            .map(|roots| QuotientStatus::InfiniteEvidence {
                generator: Element::PolyQ(interpolate_two_then_ones(&roots)),
            })
            .unwrap_or(QuotientStatus::Unknown),
        _ => QuotientStatus::Unknown,
    };
    UnitQuotientReport {
        status,
        carrier_size: None,
    }
}

/// The subgroup of `(A/aA)×` generated by the images of `gens`.
fn subgroup_closure(ring: &Ring, a: &Element, gens: &[Element]) -> HashSet<Element> {
    let gens: Vec<Element> = gens.iter().map(|g| ring.reduce_mod(a, g)).collect();
    let one = ring.reduce_mod(a, &ring.one());
    let mut group = HashSet::from([one.clone()]);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = ring.reduce_mod(a, &ring.mul(&x, g));
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    group
}

/// The polynomial of degree `< r` taking the value 2 at the first root and
/// 1 at the others. Its class has infinite order modulo the diagonal `Q×`.
fn interpolate_two_then_ones(roots: &[BigRational]) -> Vec<BigRational> {
    let f = Rationals;
    // 1 + L_0 where L_0 is the Lagrange basis polynomial of the first root.
    let mut basis = upoly::constant(&f, BigRational::one());
    for t in &roots[1..] {
        let lin = upoly::linear(&f, t);
        basis = upoly::scale(&f, &upoly::mul(&f, &basis, &lin), &(&roots[0] - t).recip());
    }
    upoly::add(&f, &basis, &upoly::constant(&f, BigRational::one()))
}

/// The roots of `a` when it is squarefree and splits over `Q`.
fn split_roots(a: &[BigRational]) -> Result<Vec<BigRational>> {
    let roots = upoly::rational_roots(a)?;
    if upoly::degree(a) != Some(roots.len()) {
        return Err(Error::Precondition(
            "a must be squarefree with all roots rational".into(),
        ));
    }
    Ok(roots)
}

// ---- finite rings ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodRingReport {
    pub pairs_checked: u64,
    pub primitive_pairs: u64,
    pub all_good: bool,
    pub max_exponent_seen: u64,
    pub failures: Vec<(Element, Element)>,
}

/// Runs the witness search on every primitive pair of a finite ring.
pub fn check_good_ring_exhaustive(ring: &Ring) -> Result<GoodRingReport> {
    let elems = ring.elements()?;
    let bound = elems.len() as u64;
    let mut report = GoodRingReport {
        pairs_checked: 0,
        primitive_pairs: 0,
        all_good: true,
        max_exponent_seen: 0,
        failures: Vec::new(),
    };
    for a in &elems {
        for b in &elems {
            report.pairs_checked += 1;
            if bezout(ring, &[a.clone(), b.clone()]).is_none() {
                continue;
            }
            report.primitive_pairs += 1;
            match find_good_witness(ring, a, b, bound)? {
                SearchOutcome::Witness(w) => {
                    report.max_exponent_seen = report.max_exponent_seen.max(w.exponent)
                }
                _ => report.failures.push((a.clone(), b.clone())),
            }
        }
    }
    report.all_good = report.failures.is_empty();
    Ok(report)
}

// ---- Q[T] and Z[T] ----

/// Decides goodness of `(a, b)` in `Q[T]` when `a` is squarefree and splits
/// over `Q`: the pair is good iff `b` takes values of equal absolute value
/// at all roots of `a`.
pub fn decide_good_point_rational_split(a: &[BigRational], b: &[BigRational]) -> Result<SearchOutcome> {
    let ring = Ring::RationalPoly;
    let (ea, eb) = (Element::PolyQ(a.to_vec()), Element::PolyQ(b.to_vec()));
    if bezout(&ring, &[ea.clone(), eb.clone()]).is_none() {
        return Err(Error::NotPrimitive);
    }
    if a.is_empty() {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    let roots = split_roots(a)?;
    let values: Vec<BigRational> = roots.iter().map(|t| upoly::eval(&Rationals, b, t)).collect();
    let exponent = match values.split_first() {
        None => 1,
        Some((first, rest)) => {
            let ratios: Vec<BigRational> = rest.iter().map(|v| v / first).collect();
            if let Some(bad) = ratios.iter().find(|r| !r.abs().is_one()) {
                return Ok(SearchOutcome::Refuted(RefutationEvidence::RatioCriterion {
                    ratio: bad.clone(),
                    roots,
                    values,
                }));
            }
            if ratios.iter().all(|r| r.is_one()) {
                1
            } else {
                2
            }
        }
    };
    let c = match values.first() {
        Some(v) => num_traits::pow(v.clone(), exponent),
        None => BigRational::one(),
    };
    let epsilon = ring.from_qpoly(vec![c.clone()])?;
    let lambda = ring
        .exact_div(&ea, &ring.sub(&epsilon, &ring.pow(&eb, exponent as u64)))
        .ok_or_else(|| Error::Identity("c − b^N is not divisible by a".into()))?;
    Ok(SearchOutcome::Witness(GoodPointWitness {
        exponent: exponent as u64,
        lambda,
        epsilon,
        epsilon_inverse: ring.from_qpoly(vec![c.recip()])?,
    }))
}

/// Looks for a rational root `θ` of `a` with `|b(θ)| ≠ 1`. Units of `Z[T]`
/// are `±1`, so such a root rules out `b^N + λa ∈ Z[T]×`. `None` means
/// the test is inconclusive.
///
/// `certificate`, if given, is `(u, v)` in `Z[T]` with `ua + vb = 1`;
/// otherwise primitivity is checked over `Q[T]` together with coprime contents.
pub fn refute_integer_poly_point(
    a: &[BigRational],
    b: &[BigRational],
    certificate: Option<(&[BigRational], &[BigRational])>,
) -> Result<Option<RefutationEvidence>> {
    if !upoly::is_integral(a) || !upoly::is_integral(b) {
        return Err(Error::Precondition("integer coefficients required".into()));
    }
    let f = Rationals;
    match certificate {
        Some((u, v)) => {
            let combo = upoly::add(&f, &upoly::mul(&f, u, a), &upoly::mul(&f, v, b));
            if !upoly::is_integral(u) || !upoly::is_integral(v) || combo != upoly::constant(&f, BigRational::one()) {
                return Err(Error::NotPrimitive);
            }
        }
        None => {
            let ring = Ring::RationalPoly;
            let over_q = bezout(&ring, &[Element::PolyQ(a.to_vec()), Element::PolyQ(b.to_vec())]);
            let content = |p: &[BigRational]| {
                p.iter().fold(num_bigint::BigInt::zero(), |g, c| {
                    num_integer::Integer::gcd(&g, c.numer())
                })
            };
            let coprime = num_integer::Integer::gcd(&content(a), &content(b)).is_one();
            if over_q.is_none() || !coprime {
                return Err(Error::NotPrimitive);
            }
        }
    }
    if a.is_empty() {
        return Ok(None);
    }
    for root in upoly::rational_roots(a)? {
        let value = upoly::eval(&f, b, &root);
        if !value.abs().is_one() {
            return Ok(Some(RefutationEvidence::RationalEvaluation {
                reason: format!(
                    "a vanishes at {root} and |b({root})| = {} ≠ 1, so b^N + λa cannot be ±1",
                    value.abs()
                ),
                root,
                value,
            }));
        }
    }
    Ok(None)
}

// ---- stability under quotients and products ----

/// Maps a witness over `Z` to any ring along the canonical map `Z → A`.
pub fn map_integer_witness(target: &Ring, w: &GoodPointWitness) -> GoodPointWitness {
    GoodPointWitness {
        exponent: w.exponent,
        lambda: target.from_bigint(as_int(&w.lambda)),
        epsilon: target.from_bigint(as_int(&w.epsilon)),
        epsilon_inverse: target.from_bigint(as_int(&w.epsilon_inverse)),
    }
}

/// Combines one witness per factor into a witness over the product with
/// exponent `Π N_i`: raising `b_i^{N_i} ≡ ε_i` to the power `N/N_i`.
pub fn compose_product_witness(
    ring: &Ring,
    a: &Element,
    b: &Element,
    parts: &[GoodPointWitness],
) -> Result<GoodPointWitness> {
    let Ring::Product(factors) = ring else {
        return Err(Error::Precondition("a product ring is required".into()));
    };
    if parts.len() != factors.len() {
        return Err(Error::Arity {
            expected: factors.len(),
            found: parts.len(),
        });
    }
    let exponent = parts
        .iter()
        .try_fold(1u64, |acc, w| acc.checked_mul(w.exponent))
        .ok_or_else(|| Error::Precondition("exponent overflow".into()))?;
    let (aa, bb) = (as_tuple(a), as_tuple(b));
    let mut lambdas = Vec::new();
    let mut epsilons = Vec::new();
    let mut inverses = Vec::new();
    for (((r, w), ai), bi) in factors.iter().zip(parts).zip(aa).zip(bb) {
        let m = exponent / w.exponent;
        let eps = r.pow(&w.epsilon, m);
        let lambda = r
            .exact_div(ai, &r.sub(&eps, &r.pow(bi, exponent)))
            .ok_or_else(|| Error::Identity("component witness does not verify".into()))?;
        lambdas.push(lambda);
        inverses.push(r.pow(&w.epsilon_inverse, m));
        epsilons.push(eps);
    }
    Ok(GoodPointWitness {
        exponent,
        lambda: Element::Tuple(lambdas),
        epsilon: Element::Tuple(epsilons),
        epsilon_inverse: Element::Tuple(inverses),
    })
}
