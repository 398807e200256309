//! Volume differences of hyper-ideal tetrahedra from the Schläfli
//! differential `2 dV + Σ l dβ = 0`.
//!
//! There is no closed-form volume here; only differences along straight
//! segments in length space, `V(L) − V(L₀) = −½ ∫ lᵀ (∂β/∂l) (L − L₀) ds`.

use super::{dbeta_dl, TetLengths};
use crate::quadrature::composite_gauss;
use crate::{Error, Result};
use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

/// Default panel count for the volume integral.
pub const DEFAULT_STEPS: usize = 64;

/// Largest acceptable gap between the `steps/2` and `steps` estimates.
pub const RICHARDSON_TOL: f64 = 1e-6;

/// `vol(lengths) − vol(reference)` along the straight segment from
/// `reference` to `lengths`, with `steps` quadrature panels.
///
/// Every quadrature node (and each panel end) must be nondegenerate,
/// otherwise [`Error::PathLeavesAdmissible`] is returned.
pub fn relative_volume(lengths: &TetLengths, reference: &TetLengths, steps: usize) -> Result<f64> {
    let to = Vector6::from(lengths.values());
    let from = Vector6::from(reference.values());
    let delta = to - from;
    if delta.amax() == 0.0 {
        return Ok(0.0);
    }
    let at = |s: f64| -> Result<(Vector6<f64>, nalgebra::Matrix6<f64>)> {
        let l = from + delta * s;
        let tl = TetLengths::new(l.into()).map_err(|_| Error::PathLeavesAdmissible { at: s })?;
        let m = dbeta_dl(&tl).map_err(|_| Error::PathLeavesAdmissible { at: s })?;
        Ok((l, m))
    };
    let steps = steps.max(1);
    for p in 0..=steps {
        at(p as f64 / steps as f64)?;
    }
    composite_gauss(0.0, 1.0, steps, |s| {
        let (l, m) = at(s)?;
        Ok(-0.5 * l.dot(&(m * delta)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Estimate with half as many panels.
    pub coarse: f64,
    pub richardson_gap: f64,
    pub converged: bool,
}

/// [`relative_volume`] with `steps` and `steps / 2` panels, flagging whether
/// they agree within [`RICHARDSON_TOL`].
pub fn relative_volume_checked(
    lengths: &TetLengths,
    reference: &TetLengths,
    steps: usize,
) -> Result<VolumeEstimate> {
    let steps = steps.max(2);
    let value = relative_volume(lengths, reference, steps)?;
    let coarse = relative_volume(lengths, reference, steps / 2)?;
    let richardson_gap = (value - coarse).abs();
    Ok(VolumeEstimate {
        value,
        coarse,
        richardson_gap,
        converged: richardson_gap < RICHARDSON_TOL,
    })
}
