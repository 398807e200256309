//! The nondegeneracy polynomials of a weighted truncated tetrahedron.
//!
//! With `t_ν = tanh r_ν` and weight cosines `(a, b, c, d, e, f)` in slot
//! order, the tetrahedron is nondegenerate iff `Q₂(t) > 0`. `Q₂` splits as
//! `Σ t_ν h_ν + Q₃` and, viewed as a quadratic in one `t_ν`, yields the
//! coefficients `A_ν, B_ν, C_ν` whose discriminant factors through `Q₃`.
//!
//! [`q2_from_tanh`] and [`q1_from_cosh`] are written out term by term and
//! share no code with the generic per-apex helpers (`h_vector`,
//! `apex_quadratic`), so each route can check the other.

use super::{complement, opposite_slot, slot, TetRadii, TetWeights};
use crate::hyptrig::EPS_GEOM;
use serde::{Deserialize, Serialize};

/// `Q₃ = 2abef + 2acdf + 2bcde + 2abd + 2ace + 2bcf + 2def
///       + a² + b² + c² + d² + e² + f² − a²f² − b²e² − c²d² − 1`.
pub fn q3(weights: &TetWeights) -> f64 {
    let [a, b, c, d, e, f] = weights.cosines();
    2.0 * a * b * e * f
        + 2.0 * a * c * d * f
        + 2.0 * b * c * d * e
        + 2.0 * a * b * d
        + 2.0 * a * c * e
        + 2.0 * b * c * f
        + 2.0 * d * e * f
        + a * a
        + b * b
        + c * c
        + d * d
        + e * e
        + f * f
        - a * a * f * f
        - b * b * e * e
        - c * c * d * d
        - 1.0
}

/// `Q₂` as an explicit polynomial in `t = tanh r` and the weight cosines.
pub fn q2_from_tanh(t: [f64; 4], weights: &TetWeights) -> f64 {
    let [ti, tj, tk, th] = t;
    let [a, b, c, d, e, f] = weights.cosines();
    ti * ti * (1.0 - d * d - e * e - f * f - 2.0 * d * e * f)
        + tj * tj * (1.0 - b * b - c * c - f * f - 2.0 * b * c * f)
        + tk * tk * (1.0 - a * a - c * c - e * e - 2.0 * a * c * e)
        + th * th * (1.0 - a * a - b * b - d * d - 2.0 * a * b * d)
        + 2.0 * ti * tj * ((1.0 - f * f) * a + b * d + c * e + b * e * f + c * d * f)
        + 2.0 * ti * tk * ((1.0 - e * e) * b + a * d + c * f + a * e * f + c * d * e)
        + 2.0 * ti * th * ((1.0 - d * d) * c + a * e + b * f + a * d * f + b * d * e)
        + 2.0 * tj * tk * ((1.0 - c * c) * d + a * b + e * f + a * c * f + b * c * e)
        + 2.0 * tj * th * ((1.0 - b * b) * e + a * c + d * f + a * b * f + b * c * d)
        + 2.0 * tk * th * ((1.0 - a * a) * f + b * c + d * e + a * b * e + a * c * d)
        + 2.0 * a * b * e * f
        + 2.0 * a * c * d * f
        + 2.0 * b * c * d * e
        + 2.0 * a * b * d
        + 2.0 * a * c * e
        + 2.0 * b * c * f
        + 2.0 * d * e * f
        + a * a
        + b * b
        + c * c
        + d * d
        + e * e
        + f * f
        - a * a * f * f
        - b * b * e * e
        - c * c * d * d
        - 1.0
}

pub fn q2(radii: &TetRadii, weights: &TetWeights) -> f64 {
    q2_from_tanh(radii.tanh(), weights)
}

/// `Q₁` in the hyperbolic cosines `c = cosh l` of the six edges (slot order).
/// `Q₁ = Q₂ · Π cosh² r_ν` when the lengths come from radii.
pub fn q1_from_cosh(c: [f64; 6]) -> f64 {
    let [cij, cik, cih, cjk, cjh, ckh] = c;
    cij * cij + cik * cik + cih * cih + cjk * cjk + cjh * cjh + ckh * ckh
        - cij * cij * ckh * ckh
        - cik * cik * cjh * cjh
        - cih * cih * cjk * cjk
        + 2.0 * cij * cik * cjk
        + 2.0 * cik * cih * ckh
        + 2.0 * cjk * cjh * ckh
        + 2.0 * cij * cih * cjh
        + 2.0 * cik * cih * cjk * cjh
        + 2.0 * cij * cik * cjh * ckh
        + 2.0 * cij * cih * cjk * ckh
        - 1.0
}

/// Nondegeneracy test `Q₂ > EPS_GEOM`.
pub fn is_nondegenerate(radii: &TetRadii, weights: &TetWeights) -> bool {
    q2(radii, weights) > EPS_GEOM
}

/// The three weight cosines on the face opposite `nu`.
fn face_cosines(weights: &TetWeights, nu: usize) -> [f64; 3] {
    let others: Vec<usize> = (0..4).filter(|&v| v != nu).collect();
    [
        weights.cos_between(others[0], others[1]),
        weights.cos_between(others[0], others[2]),
        weights.cos_between(others[1], others[2]),
    ]
}

/// `A_ν = x² + y² + z² + 2xyz − 1` over the face opposite `ν`.
pub fn a_coefficient(weights: &TetWeights, nu: usize) -> f64 {
    let [x, y, z] = face_cosines(weights, nu);
    x * x + y * y + z * z + 2.0 * x * y * z - 1.0
}

/// Mixed coefficient of `2 t_μ t_ν` in `Q₂`.
fn pair_coefficient(weights: &TetWeights, mu: usize, nu: usize) -> f64 {
    let x = weights.cos_between(mu, nu);
    let y = weights.cosines()[opposite_slot(slot(mu, nu))];
    let (p, q) = complement(mu, nu);
    let c = |u, v| weights.cos_between(u, v);
    (1.0 - y * y) * x
        + c(mu, p) * c(nu, p)
        + c(mu, q) * c(nu, q)
        + y * (c(mu, p) * c(nu, q) + c(mu, q) * c(nu, p))
}

/// `(h_i, h_j, h_k, h_h)` with `Q₂ = Σ t_ν h_ν + Q₃`.
pub fn h_vector(radii: &TetRadii, weights: &TetWeights) -> [f64; 4] {
    h_vector_from_tanh(radii.tanh(), weights)
}

pub fn h_vector_from_tanh(t: [f64; 4], weights: &TetWeights) -> [f64; 4] {
    let mut h = [0.0; 4];
    for nu in 0..4 {
        h[nu] = -t[nu] * a_coefficient(weights, nu)
            + (0..4)
                .filter(|&mu| mu != nu)
                .map(|mu| t[mu] * pair_coefficient(weights, nu, mu))
                .sum::<f64>();
    }
    h
}

/// `Q₂ ≤ 0` rewritten as `A t² + B t + C ≥ 0` in `t = t_apex`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApexQuadratic {
    pub apex: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `B² − 4AC`, computed from the coefficients.
    pub discriminant: f64,
    /// `4 Q₃ (A + Σ …)`, the factored form of the discriminant.
    pub factored: f64,
    /// `|discriminant − factored| / max(1, |discriminant|)`.
    pub residual: f64,
}

/// Coefficients of `Q₂ ≤ 0` as a quadratic in `t_apex`. `A`, `B`, `C` depend
/// only on the other three `t` values.
pub fn apex_quadratic(apex: usize, radii: &TetRadii, weights: &TetWeights) -> ApexQuadratic {
    apex_quadratic_from_tanh(apex, radii.tanh(), weights)
}

pub fn apex_quadratic_from_tanh(apex: usize, t: [f64; 4], weights: &TetWeights) -> ApexQuadratic {
    assert!(apex < 4, "apex {apex} out of range");
    let others: Vec<usize> = (0..4).filter(|&v| v != apex).collect();
    let q3 = q3(weights);

    let a = a_coefficient(weights, apex);
    let b = -2.0
        * others
            .iter()
            .map(|&mu| t[mu] * pair_coefficient(weights, apex, mu))
            .sum::<f64>();
    let mut rest = q3;
    for (n, &mu) in others.iter().enumerate() {
        rest -= t[mu] * t[mu] * a_coefficient(weights, mu);
        for &kappa in &others[n + 1..] {
            rest += 2.0 * t[mu] * t[kappa] * pair_coefficient(weights, mu, kappa);
        }
    }
    let c = -rest;
    let discriminant = b * b - 4.0 * a * c;

    let mut bracket = a;
    for (n, &mu) in others.iter().enumerate() {
        let y = weights.cosines()[opposite_slot(slot(apex, mu))];
        bracket += t[mu] * t[mu] * (1.0 - y * y);
        for &kappa in &others[n + 1..] {
            let eta = others
                .iter()
                .copied()
                .find(|&v| v != mu && v != kappa)
                .unwrap();
            let coeff = weights.cos_between(mu, kappa)
                + weights.cos_between(mu, eta) * weights.cos_between(kappa, eta);
            bracket += 2.0 * t[mu] * t[kappa] * coeff;
        }
    }
    let factored = 4.0 * q3 * bracket;
    let residual = (discriminant - factored).abs() / discriminant.abs().max(1.0);

    ApexQuadratic {
        apex,
        a,
        b,
        c,
        discriminant,
        factored,
        residual,
    }
}

/// Lower boundary `(−B + √Δ)/(2A)` of the degenerate region at `apex` in the
/// `t_apex` coordinate, or `None` when `A_apex ≤ 0` (no such region).
///
/// A value above 1 means the region misses every radius vector, since
/// `t = tanh r < 1`.
pub fn v_threshold(apex: usize, radii: &TetRadii, weights: &TetWeights) -> Option<f64> {
    v_threshold_from_tanh(apex, radii.tanh(), weights)
}

pub fn v_threshold_from_tanh(apex: usize, t: [f64; 4], weights: &TetWeights) -> Option<f64> {
    let quad = apex_quadratic_from_tanh(apex, t, weights);
    if quad.a <= 0.0 || quad.discriminant <= 0.0 {
        return None;
    }
    Some((-quad.b + quad.discriminant.sqrt()) / (2.0 * quad.a))
}
