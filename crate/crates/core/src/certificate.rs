//! Inequality certificates.
//!
//! A certificate records the verdict of one inequality together with enough
//! evidence to re-derive the verdict without the Jacobi eigensolver: Loewner
//! passes are re-checked by a Cholesky factorization of the shifted
//! difference, Loewner failures by the Rayleigh quotient of the witness, and
//! scalar links by recomputing the slack.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, herm_eig, vec_norm, ComplexMatrix, HermitianMatrix};

/// Gaps with `|gap| < MARGINAL_FACTOR · tol · scale` are flagged marginal.
pub const MARGINAL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `rhs - lhs` and the eigenvector of its smallest eigenvalue.
    Loewner {
        difference: ComplexMatrix,
        witness: Vec<Complex64>,
    },
    /// `lhs ≤ rhs`.
    Scalar { lhs: f64, rhs: f64 },
    /// `lhs = rhs`, for links that hold with equality by an algebraic identity.
    Identity { lhs: f64, rhs: f64 },
    /// Link-by-link certificates of an inequality chain.
    Chain { links: Vec<Certificate> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    /// Minimum eigenvalue of `rhs - lhs`, or the scalar slack `rhs - lhs`.
    pub gap: f64,
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
    pub marginal: bool,
    pub evidence: Evidence,
}

fn is_marginal(gap: f64, tol: f64, scale: f64) -> bool {
    gap.abs() < MARGINAL_FACTOR * tol * scale
}

impl Certificate {
    /// Certifies `lhs ≤ rhs` in the Loewner order given the difference
    /// `rhs - lhs`.
    pub fn loewner(
        name: &str,
        lhs: &str,
        rhs: &str,
        difference: HermitianMatrix,
        tol: f64,
    ) -> Result<Self> {
        let es = herm_eig(&difference)?;
        let gap = es.min();
        let scale = difference.frobenius_norm().max(1.0);
        Ok(Self {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            gap,
            scale,
            tol,
            pass: gap >= -tol * scale,
            marginal: is_marginal(gap, tol, scale),
            evidence: Evidence::Loewner {
                difference: difference.into_matrix(),
                witness: es.min_vector(),
            },
        })
    }

    /// Certifies `m ≥ 0`.
    pub fn psd(name: &str, desc: &str, m: HermitianMatrix, tol: f64) -> Result<Self> {
        Self::loewner(name, "0", desc, m, tol)
    }

    /// `lhs ≤ rhs + tol · max(1, |rhs|)`.
    pub fn scalar(
        name: &str,
        lhs_desc: &str,
        rhs_desc: &str,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) -> Self {
        Self::scalar_scaled(name, lhs_desc, rhs_desc, lhs, rhs, tol, rhs.abs().max(1.0))
    }

    /// Scalar comparison with an explicit scale; log-space comparisons use
    /// scale 1 so the tolerance acts relatively on the underlying products.
    pub fn scalar_scaled(
        name: &str,
        lhs_desc: &str,
        rhs_desc: &str,
        lhs: f64,
        rhs: f64,
        tol: f64,
        scale: f64,
    ) -> Self {
        let gap = rhs - lhs;
        Self {
            name: name.to_string(),
            lhs: lhs_desc.to_string(),
            rhs: rhs_desc.to_string(),
            gap,
            scale,
            tol,
            pass: gap >= -tol * scale,
            marginal: is_marginal(gap, tol, scale),
            evidence: Evidence::Scalar { lhs, rhs },
        }
    }

    /// Two-sided check of a link that is an equality; never marginal.
    pub fn identity(
        name: &str,
        lhs_desc: &str,
        rhs_desc: &str,
        lhs: f64,
        rhs: f64,
        tol: f64,
        scale: f64,
    ) -> Self {
        let gap = -(rhs - lhs).abs();
        Self {
            name: name.to_string(),
            lhs: lhs_desc.to_string(),
            rhs: rhs_desc.to_string(),
            gap,
            scale,
            tol,
            pass: gap >= -tol * scale,
            marginal: false,
            evidence: Evidence::Identity { lhs, rhs },
        }
    }

    /// Aggregates links; the headline gap is the one of the link closest to
    /// failing relative to its own tolerance band.
    pub fn chain(name: &str, lhs: &str, rhs: &str, links: Vec<Certificate>) -> Self {
        assert!(!links.is_empty(), "a chain needs at least one link");
        let critical = links
            .iter()
            .min_by(|a, b| {
                let ra = a.gap / (a.tol * a.scale);
                let rb = b.gap / (b.tol * b.scale);
                ra.total_cmp(&rb)
            })
            .expect("non-empty");
        Self {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            gap: critical.gap,
            scale: critical.scale,
            tol: critical.tol,
            pass: links.iter().all(|l| l.pass),
            marginal: links.iter().any(|l| l.marginal),
            evidence: Evidence::Chain { links },
        }
    }

    pub fn links(&self) -> &[Certificate] {
        match &self.evidence {
            Evidence::Chain { links } => links,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn witness(&self) -> Option<&[Complex64]> {
        match &self.evidence {
            Evidence::Loewner { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Re-derives the verdict from the recorded evidence without the
    /// eigensolver. Returns true when the recorded `pass` is reproduced.
    pub fn recheck(&self) -> bool {
        match &self.evidence {
            Evidence::Loewner {
                difference,
                witness,
            } => {
                let band = self.tol * self.scale;
                if self.pass {
                    let mut shifted = difference.clone();
                    for i in 0..shifted.n() {
                        shifted[(i, i)] += band;
                    }
                    cholesky(&shifted).is_some()
                } else {
                    rayleigh_quotient(difference, witness) < -band
                }
            }
            Evidence::Scalar { lhs, rhs } => (rhs - lhs >= -self.tol * self.scale) == self.pass,
            Evidence::Identity { lhs, rhs } => {
                ((rhs - lhs).abs() <= self.tol * self.scale) == self.pass
            }
            Evidence::Chain { links } => {
                links.iter().all(Certificate::recheck) && links.iter().all(|l| l.pass) == self.pass
            }
        }
    }
}

/// `w* D w / w* w`.
pub fn rayleigh_quotient(d: &ComplexMatrix, w: &[Complex64]) -> f64 {
    let norm = vec_norm(w);
    d.quadratic_form(w).re / (norm * norm)
}

/// Certifies `m ≤ n` in the Loewner order: pass iff
/// `λ_min(n - m) ≥ -tol · max(1, ‖n - m‖_F)`.
pub fn loewner_leq(m: &HermitianMatrix, n: &HermitianMatrix, tol: f64) -> Result<Certificate> {
    if m.n() != n.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: n.n(),
        });
    }
    Certificate::loewner("loewner", "M", "N", n - m, tol)
}
