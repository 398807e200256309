//! Damped Newton iteration for prescribed scalar curvature, and the
//! path-integral potential whose gradient is the scalar curvature.

use crate::complex::RadiusMap;
use crate::curvature::{
    evaluate_certificate, hess_g, negative_curvature_edges, ricci_curvature, scalar_curvature,
    CertificateMode, MetricState, Verdict,
};
use crate::hyptrig::MAX_RADIUS;
use crate::quadrature::composite_gauss;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Tolerance on the max-norm of `K − target`.
    pub residual_tol: f64,
    pub step_shrink: f64,
    pub min_step: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            residual_tol: 1e-10,
            step_shrink: 0.5,
            min_step: 1e-12,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.residual_tol > 0.0
            && self.step_shrink > 0.0
            && self.step_shrink < 1.0
            && self.min_step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid solver options {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    SingularHessian,
    LeftAdmissible,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub radii: Vec<f64>,
    pub iterations: usize,
    /// Max-norm residual at every iterate, starting with the initial state.
    pub residual_history: Vec<f64>,
    /// Radii at every iterate, starting with the initial state.
    pub iterates: Vec<Vec<f64>>,
    /// Accepted step lengths.
    pub steps: Vec<f64>,
    pub termination: Termination,
    /// True when the weight-tier and `K_e sin²Φ_e ≥ 0` hypotheses held at
    /// every iterate and the final curvature Hessian is certified negative
    /// definite.
    pub certified: bool,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// Converts a non-converged run into the matching error.
    pub fn into_result(self) -> Result<Self> {
        let residual = self.residual_history.last().copied().unwrap_or(f64::NAN);
        match self.termination {
            Termination::Converged => Ok(self),
            Termination::SingularHessian => Err(Error::SingularHessian),
            Termination::LeftAdmissible => Err(Error::LeftAdmissible {
                iteration: self.iterations,
            }),
            Termination::MaxIterations => Err(Error::MaxIterations {
                iterations: self.iterations,
                residual,
            }),
        }
    }
}

fn max_norm(k: &[f64], target: &[f64]) -> f64 {
    k.iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn hypotheses_hold(state: &MetricState) -> Result<bool> {
    Ok(state.weights().edges_outside_rigidity_tier().is_empty()
        && negative_curvature_edges(state, &ricci_curvature(state)?).is_empty())
}

fn newton_direction(h: &DMatrix<f64>, residual: &DVector<f64>) -> Option<DVector<f64>> {
    // H δ = −residual; −H is positive definite near a rigid solution
    let neg = -h;
    if let Some(chol) = neg.clone().cholesky() {
        return Some(chol.solve(residual));
    }
    let lu = h.clone().lu();
    lu.solve(&(-residual))
        .filter(|d| d.iter().all(|x| x.is_finite()))
}

/// Runs the iteration and records how it ended. Only precondition failures
/// (bad options, wrong target length, inadmissible start) are errors.
pub fn newton_solve(
    state: &MetricState,
    target: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    opts.validate()?;
    let n = state.triangulation().vertex_count();
    if target.len() != n {
        return Err(Error::InvalidInput(format!(
            "target has {} entries for {n} vertices",
            target.len()
        )));
    }
    state.require_admissible()?;
    let mut current = state.clone();
    let mut k = scalar_curvature(&current)?;
    let mut residual = max_norm(&k, target);
    let mut result = SolveResult {
        radii: current.radii().values().to_vec(),
        iterations: 0,
        residual_history: vec![residual],
        iterates: vec![current.radii().values().to_vec()],
        steps: Vec::new(),
        termination: Termination::MaxIterations,
        certified: false,
    };
    let mut hypotheses = hypotheses_hold(&current)?;
    loop {
        if residual <= opts.residual_tol {
            result.termination = Termination::Converged;
            break;
        }
        if result.iterations >= opts.max_iterations {
            result.termination = Termination::MaxIterations;
            break;
        }
        let h = hess_g(&current)?;
        let rhs = DVector::from_iterator(n, k.iter().zip(target).map(|(a, b)| a - b));
        let Some(delta) = newton_direction(&h, &rhs) else {
            result.termination = Termination::SingularHessian;
            break;
        };
        let r0 = current.radii().values().to_vec();
        let mut step = 1.0;
        let accepted = loop {
            if step < opts.min_step {
                break None;
            }
            let trial: Vec<f64> = r0
                .iter()
                .zip(delta.iter())
                .map(|(r, d)| r + step * d)
                .collect();
            if trial.iter().all(|&r| r > 0.0 && r <= MAX_RADIUS) {
                let next = current.with_radii(RadiusMap::new(trial)?)?;
                if next.is_admissible() {
                    if let Ok(k_next) = scalar_curvature(&next) {
                        let res_next = max_norm(&k_next, target);
                        if res_next <= residual {
                            break Some((next, k_next, res_next));
                        }
                    }
                }
            }
            step *= opts.step_shrink;
        };
        let Some((next, k_next, res_next)) = accepted else {
            result.termination = Termination::LeftAdmissible;
            break;
        };
        current = next;
        k = k_next;
        residual = res_next;
        result.iterations += 1;
        result.steps.push(step);
        result.residual_history.push(residual);
        result.iterates.push(current.radii().values().to_vec());
        hypotheses &= hypotheses_hold(&current)?;
    }
    result.radii = current.radii().values().to_vec();
    result.certified = hypotheses
        && evaluate_certificate(&current, CertificateMode::Scalar)?.verdict == Verdict::Certified;
    Ok(result)
}

/// Solves `K(r) = target` from the given state; any termination other than
/// convergence is returned as an error.
pub fn solve_prescribed_scalar(
    state: &MetricState,
    target: &[f64],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    newton_solve(state, target, opts)?.into_result()
}

/// `G(b) − G(a) = ∫ K · dr` along the straight radius segment from `a` to `b`.
///
/// Both states must share triangulation and weights.
pub fn relative_potential(a: &MetricState, b: &MetricState, steps: usize) -> Result<f64> {
    if a.triangulation() != b.triangulation() || a.weights() != b.weights() {
        return Err(Error::InvalidInput(
            "potential endpoints must share triangulation and weights".into(),
        ));
    }
    a.require_admissible()?;
    b.require_admissible()?;
    let ra = a.radii().values();
    let rb = b.radii().values();
    let delta: Vec<f64> = rb.iter().zip(ra).map(|(x, y)| x - y).collect();
    if delta.iter().all(|&d| d == 0.0) {
        return Ok(0.0);
    }
    let at = |s: f64| -> Result<Vec<f64>> {
        let r: Vec<f64> = ra.iter().zip(&delta).map(|(r, d)| r + s * d).collect();
        let leave = || Error::PathLeavesAdmissible { at: s };
        let state = a.with_radii(RadiusMap::new(r).map_err(|_| leave())?)?;
        scalar_curvature(&state).map_err(|_| leave())
    };
    let steps = steps.max(1);
    for p in 0..=steps {
        at(p as f64 / steps as f64)?;
    }
    composite_gauss(0.0, 1.0, steps, |s| {
        Ok(at(s)?.iter().zip(&delta).map(|(k, d)| k * d).sum())
    })
}
