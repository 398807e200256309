//! Eigenvalue certificates for local (scalar) and infinitesimal (Ricci)
//! rigidity.

use super::{hess_g, hess_g_first_term, negative_curvature_edges, ricci_curvature, MetricState};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Relative strictness margin: certified requires
/// `λ_max < −CERTIFICATE_TOL · (1 + |λ_min|)`.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    /// Negative definiteness of the full curvature Hessian.
    Scalar,
    /// Negative definiteness of the first Hessian term alone.
    Ricci,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Uncertified,
    HypothesisFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisChecks {
    pub weight_tier: bool,
    /// Edges with weight above `arccos(1/3)`.
    pub weight_edges: Vec<usize>,
    /// Only checked in scalar mode.
    pub curvature_sign: bool,
    /// Edges with `K_e sin²Φ_e < 0`.
    pub curvature_edges: Vec<usize>,
}

impl HypothesisChecks {
    pub fn passed(&self) -> bool {
        self.weight_tier && self.curvature_sign
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub mode: CertificateMode,
    pub hypotheses: HypothesisChecks,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

fn extreme_eigenvalues(h: &DMatrix<f64>) -> (f64, f64) {
    let sym = (h + h.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    (eig.min(), eig.max())
}

/// Computes the certificate. Failed hypotheses are reported in the verdict,
/// not as an error.
pub fn evaluate_certificate(state: &MetricState, mode: CertificateMode) -> Result<Certificate> {
    state.require_admissible()?;
    let weight_edges = state.weights().edges_outside_rigidity_tier();
    let curvature_edges = match mode {
        CertificateMode::Scalar => negative_curvature_edges(state, &ricci_curvature(state)?),
        CertificateMode::Ricci => Vec::new(),
    };
    let hypotheses = HypothesisChecks {
        weight_tier: weight_edges.is_empty(),
        weight_edges,
        curvature_sign: curvature_edges.is_empty(),
        curvature_edges,
    };
    let h = match mode {
        CertificateMode::Scalar => hess_g(state)?,
        CertificateMode::Ricci => hess_g_first_term(state)?,
    };
    let (lambda_min, lambda_max) = extreme_eigenvalues(&h);
    let threshold = -CERTIFICATE_TOL * (1.0 + lambda_min.abs());
    let verdict = if !hypotheses.passed() {
        Verdict::HypothesisFailed
    } else if lambda_max < threshold {
        Verdict::Certified
    } else {
        Verdict::Uncertified
    };
    Ok(Certificate {
        mode,
        hypotheses,
        lambda_min,
        lambda_max,
        threshold,
        verdict,
    })
}

/// As [`evaluate_certificate`], but failed hypotheses become
/// [`Error::HypothesisFailed`].
pub fn rigidity_certificate(state: &MetricState, mode: CertificateMode) -> Result<Certificate> {
    let cert = evaluate_certificate(state, mode)?;
    if cert.verdict == Verdict::HypothesisFailed {
        return Err(Error::HypothesisFailed {
            weight_edges: cert.hypotheses.weight_edges,
            curvature_edges: cert.hypotheses.curvature_edges,
        });
    }
    Ok(cert)
}
