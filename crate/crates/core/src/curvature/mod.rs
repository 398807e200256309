//! Metric-level quantities over a triangulation: edge lengths, Ricci and
//! scalar curvature, the curvature Hessian and rigidity certificates.

mod certificate;

pub use certificate::{
    evaluate_certificate, rigidity_certificate, Certificate, CertificateMode, HypothesisChecks,
    Verdict, CERTIFICATE_TOL,
};

use crate::complex::{RadiusMap, Triangulation, WeightMap};
use crate::hyptrig::{self, EPS_GEOM};
use crate::trunctet::{self, TetLengths, TetStatus, SLOTS};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Radii and weights on a triangulation, with the induced edge lengths and
/// per-tet classification computed once.
#[derive(Debug, Clone)]
pub struct MetricState<'a> {
    triangulation: &'a Triangulation,
    weights: WeightMap,
    radii: RadiusMap,
    lengths: Vec<Option<f64>>,
    statuses: Vec<TetStatus>,
}

impl<'a> MetricState<'a> {
    pub fn new(
        triangulation: &'a Triangulation,
        weights: WeightMap,
        radii: RadiusMap,
    ) -> Result<Self> {
        weights.check_against(triangulation)?;
        radii.check_against(triangulation)?;
        let r = radii.values();
        let lengths = triangulation
            .edges()
            .iter()
            .map(|e| {
                let (v, w) = e.endpoints;
                hyptrig::pentagon_edge_length(r[v], r[w], weights.values()[e.id]).ok()
            })
            .collect();
        let statuses = triangulation
            .tets()
            .iter()
            .map(|t| {
                trunctet::classify(
                    &triangulation.tet_radii(&radii, t),
                    &triangulation.tet_weights(&weights, t),
                )
            })
            .collect();
        Ok(Self {
            triangulation,
            weights,
            radii,
            lengths,
            statuses,
        })
    }

    /// Same triangulation and weights, new radii.
    pub fn with_radii(&self, radii: RadiusMap) -> Result<Self> {
        Self::new(self.triangulation, self.weights.clone(), radii)
    }

    pub fn triangulation(&self) -> &'a Triangulation {
        self.triangulation
    }

    pub fn weights(&self) -> &WeightMap {
        &self.weights
    }

    pub fn radii(&self) -> &RadiusMap {
        &self.radii
    }

    /// Per-edge lengths; `None` where the pentagon argument does not exceed 1.
    pub fn lengths(&self) -> &[Option<f64>] {
        &self.lengths
    }

    pub fn statuses(&self) -> &[TetStatus] {
        &self.statuses
    }

    pub fn is_admissible(&self) -> bool {
        self.statuses.iter().all(TetStatus::is_admissible)
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            return Ok(());
        }
        Err(Error::InadmissibleState {
            tets: (0..self.statuses.len())
                .filter(|&t| !self.statuses[t].is_admissible())
                .collect(),
            edges: (0..self.lengths.len())
                .filter(|&e| self.lengths[e].is_none())
                .collect(),
        })
    }

    fn tet_lengths(&self, tet: usize) -> Result<TetLengths> {
        let t = &self.triangulation.tets()[tet];
        let mut l = [0.0; 6];
        for (s, &e) in t.edge_refs.iter().enumerate() {
            l[s] = self.lengths[e].ok_or(Error::InadmissibleState {
                tets: vec![tet],
                edges: vec![e],
            })?;
        }
        TetLengths::new(l)
    }

    /// Dihedral angles of every tet, slot order.
    pub fn dihedral_angles(&self) -> Result<Vec<[f64; 6]>> {
        self.require_admissible()?;
        (0..self.statuses.len())
            .map(|t| trunctet::dihedral_angles(&self.tet_lengths(t)?))
            .collect()
    }

    /// `cosh θ` at each end of edge `e`, as `(at first endpoint, at second)`.
    pub fn cosh_theta(&self, e: usize) -> Result<(f64, f64)> {
        let edge = self.triangulation.edge(e)?;
        let (v, w) = edge.endpoints;
        let r = self.radii.values();
        let phi = self.weights.values()[e];
        Ok((
            hyptrig::pentagon_cosh_theta(r[v], r[w], phi)?,
            hyptrig::pentagon_cosh_theta(r[w], r[v], phi)?,
        ))
    }
}

/// `K_e = 2π − Σ β` over the star of each edge, counted with multiplicity.
pub fn ricci_curvature(state: &MetricState) -> Result<Vec<f64>> {
    let angles = state.dihedral_angles()?;
    Ok(ricci_from_angles(state, &angles))
}

fn ricci_from_angles(state: &MetricState, angles: &[[f64; 6]]) -> Vec<f64> {
    let mut k = vec![TAU; state.triangulation.edges().len()];
    for (tet, t) in state.triangulation.tets().iter().enumerate() {
        for (s, &e) in t.edge_refs.iter().enumerate() {
            k[e] -= angles[tet][s];
        }
    }
    k
}

/// `K_v = Σ K_e cosh θ` over edge ends at `v`. A loop contributes at both ends.
pub fn scalar_curvature(state: &MetricState) -> Result<Vec<f64>> {
    let ricci = ricci_curvature(state)?;
    scalar_from_ricci(state, &ricci)
}

fn scalar_from_ricci(state: &MetricState, ricci: &[f64]) -> Result<Vec<f64>> {
    let mut k = vec![0.0; state.triangulation.vertex_count()];
    for e in state.triangulation.edges() {
        let (at_v, at_w) = state.cosh_theta(e.id)?;
        k[e.endpoints.0] += ricci[e.id] * at_v;
        k[e.endpoints.1] += ricci[e.id] * at_w;
    }
    Ok(k)
}

/// Link-surface comparison `K_v` against `2πχ + Area` of the vertex link.
///
/// The identity holds when every weight at the vertex is zero, since then
/// all `cosh θ` factors equal 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCheck {
    pub vertex: usize,
    pub euler_characteristic: i64,
    pub area: f64,
    pub predicted: f64,
    pub scalar_curvature: f64,
    pub gap: f64,
    pub tangential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub edge_curvature: Vec<f64>,
    pub vertex_curvature: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_checks: Option<Vec<LinkCheck>>,
}

pub fn curvature_report(state: &MetricState) -> Result<CurvatureReport> {
    let angles = state.dihedral_angles()?;
    let edge_curvature = ricci_from_angles(state, &angles);
    let vertex_curvature = scalar_from_ricci(state, &edge_curvature)?;
    let link_checks = state.triangulation.link_euler_characteristics().map(|chi| {
        let t = state.triangulation;
        let mut area = vec![0.0; t.vertex_count()];
        for (tet, rec) in t.tets().iter().enumerate() {
            for apex in 0..4 {
                let sum: f64 = SLOTS
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| a == apex || b == apex)
                    .map(|(s, _)| angles[tet][s])
                    .sum();
                area[rec.vertices[apex]] += PI - sum;
            }
        }
        let mut tangential = vec![true; t.vertex_count()];
        for e in t.edges() {
            if state.weights.values()[e.id] != 0.0 {
                tangential[e.endpoints.0] = false;
                tangential[e.endpoints.1] = false;
            }
        }
        (0..t.vertex_count())
            .map(|v| {
                let predicted = TAU * chi[v] as f64 + area[v];
                LinkCheck {
                    vertex: v,
                    euler_characteristic: chi[v],
                    area: area[v],
                    predicted,
                    scalar_curvature: vertex_curvature[v],
                    gap: (vertex_curvature[v] - predicted).abs(),
                    tangential: tangential[v],
                }
            })
            .collect()
    });
    Ok(CurvatureReport {
        edge_curvature,
        vertex_curvature,
        link_checks,
    })
}

/// The two parts of the curvature Hessian: `−Σ_σ (∂l/∂r)(∂β/∂l)(∂l/∂r)ᵀ`
/// scattered to vertices, and `Σ_e K_e Hess_r(l_e)`.
pub fn hess_g_terms(state: &MetricState) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    state.require_admissible()?;
    let t = state.triangulation;
    let n = t.vertex_count();
    let first = hess_g_first_term(state)?;
    let ricci = ricci_curvature(state)?;
    let mut second = DMatrix::zeros(n, n);
    let r = state.radii.values();
    for e in t.edges() {
        let (v, w) = e.endpoints;
        let h = trunctet::hess_edge_length(r[v], r[w], state.weights.values()[e.id])? * ricci[e.id];
        let idx = [v, w];
        for a in 0..2 {
            for b in 0..2 {
                second[(idx[a], idx[b])] += h[(a, b)];
            }
        }
    }
    Ok((first, second))
}

/// `−Σ_σ (∂l/∂r)_σ (∂β/∂l)_σ (∂l/∂r)_σᵀ`, the Hessian of the Ricci-rigidity
/// functional at its critical point.
pub fn hess_g_first_term(state: &MetricState) -> Result<DMatrix<f64>> {
    state.require_admissible()?;
    let t = state.triangulation;
    let n = t.vertex_count();
    let mut first = DMatrix::zeros(n, n);
    for (tet, rec) in t.tets().iter().enumerate() {
        let d = trunctet::dl_dr(
            &t.tet_radii(&state.radii, rec),
            &t.tet_weights(&state.weights, rec),
        )?;
        let m = trunctet::dbeta_dl(&state.tet_lengths(tet)?)?;
        let local = -(d * m * d.transpose());
        for a in 0..4 {
            for b in 0..4 {
                first[(rec.vertices[a], rec.vertices[b])] += local[(a, b)];
            }
        }
    }
    Ok(first)
}

/// `Hess G = ∂K_i/∂r_j`.
pub fn hess_g(state: &MetricState) -> Result<DMatrix<f64>> {
    let (first, second) = hess_g_terms(state)?;
    Ok(first + second)
}

/// Edges where `K_e sin²Φ_e < 0`.
pub fn negative_curvature_edges(state: &MetricState, ricci: &[f64]) -> Vec<usize> {
    (0..ricci.len())
        .filter(|&e| ricci[e] * state.weights.values()[e].sin().powi(2) < -EPS_GEOM)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{double4, fan6, fujii2};
    use approx::assert_abs_diff_eq;

    const BETA_REGULAR_2: f64 = 0.956_191_756_566_071_1;

    fn state<'a>(t: &'a Triangulation, phi: f64, r: f64) -> MetricState<'a> {
        MetricState::new(
            t,
            WeightMap::constant(t.edges().len(), phi).unwrap(),
            RadiusMap::constant(t.vertex_count(), r).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn regular_double4() {
        let t = double4();
        let s = state(&t, 0.0, 1.0);
        let rep = curvature_report(&s).unwrap();
        for k in &rep.edge_curvature {
            assert_abs_diff_eq!(*k, TAU - 2.0 * BETA_REGULAR_2, epsilon = 1e-12);
            assert_abs_diff_eq!(*k, 4.370_801_8, epsilon = 1e-7);
        }
        for (v, k) in rep.vertex_curvature.iter().enumerate() {
            assert_abs_diff_eq!(*k, 3.0 * rep.edge_curvature[0], epsilon = 1e-12);
            let link = &rep.link_checks.as_ref().unwrap()[v];
            assert!(link.tangential);
            assert_abs_diff_eq!(
                link.predicted,
                4.0 * PI + 2.0 * (PI - 3.0 * BETA_REGULAR_2),
                epsilon = 1e-12
            );
            assert!(link.gap < 1e-12);
        }
    }

    #[test]
    fn fan6_central_edge() {
        let t = fan6();
        let k = ricci_curvature(&state(&t, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(k[0], TAU - 6.0 * BETA_REGULAR_2, epsilon = 1e-12);
        assert_abs_diff_eq!(k[0], 0.546_034_8, epsilon = 1e-7);
        assert_abs_diff_eq!(k[18], TAU - BETA_REGULAR_2, epsilon = 1e-12);
    }

    #[test]
    fn self_glued_link_identity() {
        let t = fujii2();
        let rep = curvature_report(&state(&t, 0.0, 0.8)).unwrap();
        let link = &rep.link_checks.unwrap()[0];
        assert_eq!(link.euler_characteristic, -2);
        assert!(link.gap < 1e-11, "{link:?}");
        assert_abs_diff_eq!(
            rep.vertex_curvature[0],
            2.0 * rep.edge_curvature[0],
            epsilon = 1e-12
        );
    }

    #[test]
    fn inadmissible_state_reports_culprits() {
        let t = double4();
        let s = state(&t, std::f64::consts::FRAC_PI_2, 0.3);
        assert!(!s.is_admissible());
        let Err(Error::InadmissibleState { tets, edges }) = ricci_curvature(&s) else {
            panic!("expected inadmissible");
        };
        assert_eq!(tets, vec![0, 1]);
        assert_eq!(edges, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn hessian_second_term_vanishes_when_tangential() {
        let t = fan6();
        let (first, second) = hess_g_terms(&state(&t, 0.0, 0.7)).unwrap();
        assert_eq!(second.amax(), 0.0);
        assert!((&first - first.transpose()).amax() < 1e-12);
    }

    fn fd_jacobian(s: &MetricState, h: f64) -> DMatrix<f64> {
        let n = s.triangulation().vertex_count();
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            let shifted = |d: f64| {
                let mut r = s.radii().values().to_vec();
                r[j] += d;
                scalar_curvature(&s.with_radii(RadiusMap::new(r).unwrap()).unwrap()).unwrap()
            };
            let (p, m) = (shifted(h), shifted(-h));
            for i in 0..n {
                out[(i, j)] = (p[i] - m[i]) / (2.0 * h);
            }
        }
        out
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let t = double4();
        let s = MetricState::new(
            &t,
            WeightMap::new(vec![0.3, 0.8, 1.1, 0.5, 0.9, 0.2]).unwrap(),
            RadiusMap::new(vec![1.2, 1.5, 0.9, 1.8]).unwrap(),
        )
        .unwrap();
        assert!(s.is_admissible());
        let h = hess_g(&s).unwrap();
        let fd = fd_jacobian(&s, 1e-5);
        assert!((&h - &fd).amax() < 1e-6 * (1.0 + h.amax()), "{h} vs {fd}");
        assert!((&h - h.transpose()).amax() < 1e-10);
    }

    #[test]
    fn hessian_matches_finite_differences_on_loop_edge() {
        let t = fujii2();
        let s = state(&t, 0.6, 1.3);
        assert!(s.is_admissible());
        let h = hess_g(&s).unwrap();
        let fd = fd_jacobian(&s, 1e-5);
        assert_abs_diff_eq!(
            h[(0, 0)],
            fd[(0, 0)],
            epsilon = 1e-6 * (1.0 + h[(0, 0)].abs())
        );
    }
}
