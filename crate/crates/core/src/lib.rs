//! Exact computations with good rings.
//!
//! A commutative ring `A` is *good* when every primitive pair `(a, b)`
//! admits `N ≥ 1` and `λ` with `b^N + λa` a unit. This crate searches for
//! and verifies such witnesses, refutes them where possible, builds
//! homogeneous polynomials that are unit-valued on finite sets of
//! primitive points, and implements the algebra `B_a = A[θ]/(θ² − aθ)`
//! that links good points to those polynomials.

pub mod bezout;
pub mod cli;
pub mod error;
pub mod homog;
pub mod oracle;
pub mod ring;
pub mod sab;
pub mod witness;

pub use bezout::{bezout, is_primitive, BezoutCertificate, PrimitivePoint};
pub use error::{Error, Result};
pub use homog::{construct_unit_valued, extend_unit_valued, HomogeneousPolynomial, Limits};
pub use ring::{Element, Ring};
pub use sab::{polynomial_to_witness, witness_to_polynomial, SabAlgebra, SabElement};
pub use witness::{
    find_good_witness, verify_witness, GoodPointWitness, RefutationEvidence, SearchOutcome,
};
