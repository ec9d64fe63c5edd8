//! Bezout certificates and primitive points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

/// Coefficients `u_1..u_n` with `Σ u_i x_i = 1` for a fixed tuple `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BezoutCertificate {
    pub coefficients: Vec<Element>,
}

impl BezoutCertificate {
    pub fn verifies(&self, ring: &Ring, xs: &[Element]) -> bool {
        if self.coefficients.len() != xs.len() {
            return false;
        }
        let combo = ring.sum(
            &self
                .coefficients
                .iter()
                .zip(xs)
                .map(|(u, x)| ring.mul(u, x))
                .collect::<Vec<_>>(),
        );
        ring.is_one(&combo)
    }
}

/// A tuple generating the unit ideal, carrying its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitivePoint {
    coordinates: Vec<Element>,
    certificate: BezoutCertificate,
}

impl PrimitivePoint {
    /// Wraps a point with a caller-supplied certificate, checking it.
    pub fn with_certificate(
        ring: &Ring,
        coordinates: Vec<Element>,
        certificate: BezoutCertificate,
    ) -> Result<Self> {
        if coordinates.is_empty() {
            return Err(Error::Precondition("a point needs at least one coordinate".into()));
        }
        if !certificate.verifies(ring, &coordinates) {
            return Err(Error::NotPrimitive);
        }
        Ok(PrimitivePoint {
            coordinates,
            certificate,
        })
    }

    pub fn coordinates(&self) -> &[Element] {
        &self.coordinates
    }

    pub fn certificate(&self) -> &BezoutCertificate {
        &self.certificate
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }
}

/// Bezout coefficients for `xs`, or `None` when they generate a proper ideal.
///
/// Over `Z` and the polynomial rings this is a chained extended gcd; `Z/n`
/// folds the modulus into the chain; products solve each factor and
/// interleave the coefficients.
pub fn bezout(ring: &Ring, xs: &[Element]) -> Option<BezoutCertificate> {
    if xs.is_empty() {
        return None;
    }
    let (g, coeffs) = ring.principal_generator(xs);
    let inv = ring.unit_inverse(&g)?;
    let cert = BezoutCertificate {
        coefficients: coeffs.iter().map(|c| ring.mul(c, &inv)).collect(),
    };
    debug_assert!(cert.verifies(ring, xs));
    Some(cert)
}

/// `Some` exactly when `point` is primitive.
pub fn is_primitive(ring: &Ring, point: &[Element]) -> Option<PrimitivePoint> {
    let certificate = bezout(ring, point)?;
    Some(PrimitivePoint {
        coordinates: point.to_vec(),
        certificate,
    })
}

/// Canonical representative of `x` in `A/aA`.
pub fn reduce_mod(ring: &Ring, a: &Element, x: &Element) -> Element {
    ring.reduce_mod(a, x)
}

/// Text form of a certificate, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateText {
    pub coefficients: Vec<String>,
}

impl BezoutCertificate {
    pub fn to_text(&self, ring: &Ring) -> CertificateText {
        CertificateText {
            coefficients: self.coefficients.iter().map(|c| ring.format(c)).collect(),
        }
    }
}
