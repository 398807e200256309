//! Scalar hyperbolic trigonometry kernels.
//!
//! Everything here is a pure function of `f64` inputs. Lengths are hyperbolic
//! distances, angles are radians.

use crate::{Error, Result};

/// Single geometric tolerance shared by the clamped inverse cosh and the
/// degenerate-triangle tests.
pub const EPS_GEOM: f64 = 1e-12;

/// Upper bound on radii; beyond this `sinh`/`cosh` products overflow.
pub const MAX_RADIUS: f64 = 50.0;

/// `cosh⁻¹(max(x, 1))`, accepting arguments down to `1 - tol`.
pub fn acosh_clamped(x: f64, tol: f64) -> Result<f64> {
    if !x.is_finite() || x < 1.0 - tol {
        return Err(Error::Domain { value: x });
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    Ok(x.acosh())
}

/// The pentagon cosine-law argument `sinh rᵢ sinh rⱼ + cos Φ cosh rᵢ cosh rⱼ`,
/// i.e. `cosh lᵢⱼ` when the edge exists.
#[inline]
pub fn pentagon_cosh_length(r_i: f64, r_j: f64, cos_phi: f64) -> f64 {
    r_i.sinh() * r_j.sinh() + cos_phi * r_i.cosh() * r_j.cosh()
}

/// Edge length between the vertex triangles of two spheres with radii
/// `r_i`, `r_j` meeting at angle `phi`.
///
/// The length exists only when the cosine-law argument exceeds 1. For
/// `phi > 0` this fails for small radii (as `r → 0` the argument tends to
/// `cos phi`), which is reported as [`Error::UndefinedLength`].
pub fn pentagon_edge_length(r_i: f64, r_j: f64, phi: f64) -> Result<f64> {
    check_pentagon_inputs(r_i, r_j, phi)?;
    pentagon_edge_length_cos(r_i, r_j, phi.cos())
}

/// As [`pentagon_edge_length`] but taking `cos phi` directly.
pub fn pentagon_edge_length_cos(r_i: f64, r_j: f64, cos_phi: f64) -> Result<f64> {
    let c = pentagon_cosh_length(r_i, r_j, cos_phi);
    if !c.is_finite() || c <= 1.0 {
        return Err(Error::UndefinedLength { cosh: c });
    }
    let m = pentagon_cosh_length_m1(r_i, r_j, cos_phi, c);
    Ok((m + (m * (m + 2.0)).sqrt()).ln_1p())
}

/// `cosh l − 1` without the cancellation of forming `cosh l` first, via
/// `2 sinh²((rᵢ+rⱼ)/2) − (1 − cos Φ) cosh rᵢ cosh rⱼ`. Falls back to `c − 1`
/// where the two terms cancel.
fn pentagon_cosh_length_m1(r_i: f64, r_j: f64, cos_phi: f64, c: f64) -> f64 {
    let half = (0.5 * (r_i + r_j)).sinh();
    let m = 2.0 * half * half - (1.0 - cos_phi) * r_i.cosh() * r_j.cosh();
    if m > 0.0 {
        m
    } else {
        c - 1.0
    }
}

/// `cosh θᵢⱼ = ∂lᵢⱼ/∂rᵢ`, the factor attached at the `r_i` end of the edge.
///
/// Orientation matters: swapping the radii gives `cosh θⱼᵢ`.
pub fn pentagon_cosh_theta(r_i: f64, r_j: f64, phi: f64) -> Result<f64> {
    check_pentagon_inputs(r_i, r_j, phi)?;
    pentagon_cosh_theta_cos(r_i, r_j, phi.cos())
}

pub fn pentagon_cosh_theta_cos(r_i: f64, r_j: f64, cos_phi: f64) -> Result<f64> {
    let c = pentagon_cosh_length(r_i, r_j, cos_phi);
    if !c.is_finite() || c <= 1.0 {
        return Err(Error::UndefinedLength { cosh: c });
    }
    let m = pentagon_cosh_length_m1(r_i, r_j, cos_phi, c);
    let s = (m * (m + 2.0)).sqrt();
    Ok((r_i.cosh() * r_j.sinh() + cos_phi * r_i.sinh() * r_j.cosh()) / s)
}

fn check_pentagon_inputs(r_i: f64, r_j: f64, phi: f64) -> Result<()> {
    let radius_ok = |r: f64| r.is_finite() && r > 0.0 && r <= MAX_RADIUS;
    if !radius_ok(r_i) || !radius_ok(r_j) {
        return Err(Error::InvalidInput(format!(
            "radii must lie in (0, {MAX_RADIUS}], got ({r_i}, {r_j})"
        )));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2 + EPS_GEOM).contains(&phi) {
        return Err(Error::InvalidInput(format!(
            "weight {phi} outside [0, pi/2]"
        )));
    }
    Ok(())
}

/// `cosh` of the side opposite `l_opp` in a right-angled hexagon whose
/// alternate sides are `l_a`, `l_b`, `l_opp`.
#[inline]
pub fn hexagon_cosh_opposite(cosh_a: f64, cosh_b: f64, cosh_opp: f64) -> f64 {
    let sinh_a = (cosh_a * cosh_a - 1.0).sqrt();
    let sinh_b = (cosh_b * cosh_b - 1.0).sqrt();
    (cosh_a * cosh_b + cosh_opp) / (sinh_a * sinh_b)
}

/// Right-angled hexagon cosine law. The argument of the inverse cosh is
/// always above 1 for positive inputs.
pub fn hexagon_opposite_side(l_a: f64, l_b: f64, l_opp: f64) -> Result<f64> {
    if !(l_a > 0.0 && l_b > 0.0 && l_opp > 0.0) {
        return Err(Error::InvalidInput(format!(
            "hexagon sides must be positive, got ({l_a}, {l_b}, {l_opp})"
        )));
    }
    let x = (l_a.cosh() * l_b.cosh() + l_opp.cosh()) / (l_a.sinh() * l_b.sinh());
    acosh_clamped(x, EPS_GEOM)
}

fn triangle_slack(x_1: f64, x_2: f64, x_3: f64) -> f64 {
    (x_1 + x_2 - x_3).min(x_1 + x_3 - x_2).min(x_2 + x_3 - x_1)
}

/// Interior angle between sides `x_1` and `x_2` of a hyperbolic triangle,
/// opposite `x_3`.
///
/// Triangles that violate the triangle inequality by at most `EPS_GEOM`
/// (relative to the longest side) are accepted and yield the collapsed angle
/// `0` or `π`.
pub fn triangle_angle(x_1: f64, x_2: f64, x_3: f64) -> Result<f64> {
    check_triangle_sides(x_1, x_2, x_3)?;
    let scale = 1.0 + x_1.max(x_2).max(x_3);
    if triangle_slack(x_1, x_2, x_3) < -EPS_GEOM * scale {
        return Err(Error::DegenerateTriangle {
            sides: [x_1, x_2, x_3],
        });
    }
    Ok(angle_from_sides(x_1, x_2, x_3))
}

/// Like [`triangle_angle`] but rejects collapsed triangles: every triangle
/// inequality must hold with margin above `EPS_GEOM`.
pub fn triangle_angle_strict(x_1: f64, x_2: f64, x_3: f64) -> Result<f64> {
    check_triangle_sides(x_1, x_2, x_3)?;
    let scale = 1.0 + x_1.max(x_2).max(x_3);
    if triangle_slack(x_1, x_2, x_3) <= EPS_GEOM * scale {
        return Err(Error::DegenerateTriangle {
            sides: [x_1, x_2, x_3],
        });
    }
    Ok(angle_from_sides(x_1, x_2, x_3))
}

fn check_triangle_sides(x_1: f64, x_2: f64, x_3: f64) -> Result<()> {
    if x_1 > 0.0 && x_2 > 0.0 && x_3 > 0.0 && (x_1 + x_2 + x_3).is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "triangle sides must be positive, got ({x_1}, {x_2}, {x_3})"
        )))
    }
}

fn angle_from_sides(x_1: f64, x_2: f64, x_3: f64) -> f64 {
    let cos = (x_1.cosh() * x_2.cosh() - x_3.cosh()) / (x_1.sinh() * x_2.sinh());
    cos.clamp(-1.0, 1.0).acos()
}

/// Gram-type discriminant `1 + 2XYZ − X² − Y² − Z²` of a triangle given by
/// the hyperbolic cosines of its sides. Equals `4 Π sinh(half-perimeter
/// terms)`, hence is positive exactly for nondegenerate triangles.
#[inline]
pub fn triangle_gram(cosh_1: f64, cosh_2: f64, cosh_3: f64) -> f64 {
    1.0 + 2.0 * cosh_1 * cosh_2 * cosh_3 - cosh_1 * cosh_1 - cosh_2 * cosh_2 - cosh_3 * cosh_3
}
