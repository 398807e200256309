//! Ideal triangulations with explicit edge records, plus per-edge weights
//! and per-vertex radii.
//!
//! Edges are records of their own rather than vertex pairs: under gluing,
//! distinct edges may join the same two vertices and one tetrahedron may
//! meet an edge in several slots.

mod fixtures;
mod format;

pub use fixtures::{double4, fan6, fujii2, DOUBLE4_JSON, FAN6_JSON, FUJII2_JSON};
pub use format::{
    parse_document, parse_radii, parse_triangulation, parse_weights, to_json, Document,
};

use crate::hyptrig::MAX_RADIUS;
use crate::trunctet::{TetRadii, TetWeights, WeightTier, RIGIDITY_COSINE, SLOTS, SLOT_NAMES};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub endpoints: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tet {
    pub id: usize,
    /// Vertex labels `(i, j, k, h)`. Labels repeat under self-gluing.
    pub vertices: [usize; 4],
    /// Edge ids in slot order `(ij, ik, ih, jk, jh, kh)`.
    pub edge_refs: [usize; 6],
}

/// A validated triangulation. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    vertex_count: usize,
    edges: Vec<Edge>,
    tets: Vec<Tet>,
    allow_self_gluing: bool,
    link_euler_characteristics: Option<Vec<i64>>,
    stars: Vec<Vec<(usize, usize)>>,
}

/// Structural summary produced by [`validate_triangulation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub tet_count: usize,
    /// Number of tet slots on each edge, counted with multiplicity.
    pub star_sizes: Vec<usize>,
    /// Number of edge ends at each vertex (a loop counts twice).
    pub vertex_degrees: Vec<usize>,
    pub loop_edges: Vec<usize>,
}

impl Triangulation {
    /// Builds and validates a triangulation, collecting every violation.
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        tets: Vec<Tet>,
        allow_self_gluing: bool,
        link_euler_characteristics: Option<Vec<i64>>,
    ) -> Result<Self> {
        let problems = violations(
            vertex_count,
            &edges,
            &tets,
            allow_self_gluing,
            link_euler_characteristics.as_deref(),
        );
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let mut stars = vec![Vec::new(); edges.len()];
        for tet in &tets {
            for (s, &e) in tet.edge_refs.iter().enumerate() {
                stars[e].push((tet.id, s));
            }
        }
        Ok(Self {
            vertex_count,
            edges,
            tets,
            allow_self_gluing,
            link_euler_characteristics,
            stars,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tets(&self) -> &[Tet] {
        &self.tets
    }

    pub fn allow_self_gluing(&self) -> bool {
        self.allow_self_gluing
    }

    /// Euler characteristics of the vertex links, when supplied as metadata.
    pub fn link_euler_characteristics(&self) -> Option<&[i64]> {
        self.link_euler_characteristics.as_deref()
    }

    pub fn edge(&self, id: usize) -> Result<&Edge> {
        self.edges
            .get(id)
            .ok_or(Error::UnknownId { kind: "edge", id })
    }

    pub fn tet(&self, id: usize) -> Result<&Tet> {
        self.tets
            .get(id)
            .ok_or(Error::UnknownId { kind: "tet", id })
    }

    /// Weights of one tet in slot order.
    pub fn tet_weights(&self, weights: &WeightMap, tet: &Tet) -> TetWeights {
        let angles = tet.edge_refs.map(|e| weights.0[e]);
        TetWeights::from_angles(angles).expect("weight map validated against [0, pi/2]")
    }

    pub fn tet_radii(&self, radii: &RadiusMap, tet: &Tet) -> TetRadii {
        TetRadii::new(tet.vertices.map(|v| radii.0[v])).expect("radius map validated")
    }

    /// Returns a copy with the tets listed in a different order and
    /// renumbered accordingly. `order[n]` is the old id of the new tet `n`.
    pub fn reorder_tets(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.tets.len()];
        if order.len() != self.tets.len()
            || order
                .iter()
                .any(|&o| o >= seen.len() || std::mem::replace(&mut seen[o], true))
        {
            return Err(Error::InvalidInput(
                "tet order must be a permutation".into(),
            ));
        }
        let tets = order
            .iter()
            .enumerate()
            .map(|(n, &o)| Tet {
                id: n,
                ..self.tets[o].clone()
            })
            .collect();
        Self::new(
            self.vertex_count,
            self.edges.clone(),
            tets,
            self.allow_self_gluing,
            self.link_euler_characteristics.clone(),
        )
    }
}

fn violations(
    vertex_count: usize,
    edges: &[Edge],
    tets: &[Tet],
    allow_self_gluing: bool,
    chi: Option<&[i64]>,
) -> Vec<String> {
    let mut out = Vec::new();
    if vertex_count == 0 {
        out.push("vertex_count must be at least 1".to_string());
    }
    if tets.is_empty() {
        out.push("triangulation has no tets".to_string());
    }
    let mut id_seen = vec![false; edges.len()];
    for (n, e) in edges.iter().enumerate() {
        if e.id >= edges.len() {
            out.push(format!("edge {}: id out of range 0..{}", e.id, edges.len()));
        } else if std::mem::replace(&mut id_seen[e.id], true) {
            out.push(format!("edge {}: duplicate id", e.id));
        } else if e.id != n {
            out.push(format!("edge {}: listed at position {n}", e.id));
        }
        let (v, w) = e.endpoints;
        if v >= vertex_count || w >= vertex_count {
            out.push(format!(
                "edge {}: endpoint out of range 0..{vertex_count}",
                e.id
            ));
        }
        if v == w && !allow_self_gluing {
            out.push(format!(
                "edge {}: both endpoints are vertex {v} but allow_self_gluing is not set",
                e.id
            ));
        }
    }
    let mut tet_seen = vec![false; tets.len()];
    let mut referenced = vec![false; edges.len()];
    for (n, t) in tets.iter().enumerate() {
        if t.id >= tets.len() || std::mem::replace(&mut tet_seen[t.id], true) || t.id != n {
            out.push(format!("tet {}: id must equal its position {n}", t.id));
        }
        if let Some(&v) = t.vertices.iter().find(|&&v| v >= vertex_count) {
            out.push(format!(
                "tet {}: vertex {v} out of range 0..{vertex_count}",
                t.id
            ));
            continue;
        }
        for (s, &(a, b)) in SLOTS.iter().enumerate() {
            let e = t.edge_refs[s];
            let Some(edge) = edges.get(e) else {
                out.push(format!(
                    "tet {} slot {}: unknown edge {e}",
                    t.id, SLOT_NAMES[s]
                ));
                continue;
            };
            referenced[e] = true;
            let want = sorted(t.vertices[a], t.vertices[b]);
            let have = sorted(edge.endpoints.0, edge.endpoints.1);
            if want != have {
                out.push(format!(
                    "tet {} slot {}: edge {e} has endpoints {{{}, {}}}, expected {{{}, {}}}",
                    t.id, SLOT_NAMES[s], have.0, have.1, want.0, want.1
                ));
            }
        }
    }
    for (e, r) in referenced.iter().enumerate() {
        if !r {
            out.push(format!("edge {e}: referenced by no tet"));
        }
    }
    if let Some(chi) = chi {
        if chi.len() != vertex_count {
            out.push(format!(
                "link_euler_characteristics has {} entries for {vertex_count} vertices",
                chi.len()
            ));
        }
    }
    out
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Re-checks every invariant and summarizes the structure. Manifold topology
/// is not examined.
pub fn validate_triangulation(t: &Triangulation) -> Result<ValidationReport> {
    let problems = violations(
        t.vertex_count,
        &t.edges,
        &t.tets,
        t.allow_self_gluing,
        t.link_euler_characteristics.as_deref(),
    );
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    let mut vertex_degrees = vec![0; t.vertex_count];
    for e in &t.edges {
        vertex_degrees[e.endpoints.0] += 1;
        vertex_degrees[e.endpoints.1] += 1;
    }
    Ok(ValidationReport {
        vertex_count: t.vertex_count,
        edge_count: t.edges.len(),
        tet_count: t.tets.len(),
        star_sizes: t.stars.iter().map(Vec::len).collect(),
        vertex_degrees,
        loop_edges: t
            .edges
            .iter()
            .filter(|e| e.is_loop())
            .map(|e| e.id)
            .collect(),
    })
}

/// All `(tet id, slot)` pairs on an edge, with multiplicity, in tet order.
pub fn edge_star(t: &Triangulation, edge: usize) -> Result<&[(usize, usize)]> {
    t.stars
        .get(edge)
        .map(Vec::as_slice)
        .ok_or(Error::UnknownId {
            kind: "edge",
            id: edge,
        })
}

/// Per-edge intersection angles in radians, validated against `[0, π/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightMap(Vec<f64>);

impl WeightMap {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        let bad: Vec<String> = angles
            .iter()
            .enumerate()
            .filter(|(_, &p)| !(0.0..=FRAC_PI_2 + crate::hyptrig::EPS_GEOM).contains(&p))
            .map(|(e, p)| format!("edge {e}: weight {p} outside [0, pi/2]"))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(Self(angles.into_iter().map(|p| p.min(FRAC_PI_2)).collect()))
    }

    pub fn constant(edge_count: usize, phi: f64) -> Result<Self> {
        Self::new(vec![phi; edge_count])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tier(&self) -> WeightTier {
        if self
            .0
            .iter()
            .all(|p| p.cos() >= RIGIDITY_COSINE - crate::hyptrig::EPS_GEOM)
        {
            WeightTier::Rigidity
        } else {
            WeightTier::General
        }
    }

    /// Edges whose weight exceeds `arccos(1/3)`.
    pub fn edges_outside_rigidity_tier(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&e| self.0[e].cos() < RIGIDITY_COSINE - crate::hyptrig::EPS_GEOM)
            .collect()
    }

    pub fn check_against(&self, t: &Triangulation) -> Result<()> {
        if self.0.len() != t.edges.len() {
            return Err(Error::Validation(vec![format!(
                "weight map has {} entries for {} edges",
                self.0.len(),
                t.edges.len()
            )]));
        }
        Ok(())
    }
}

/// Per-vertex radii in `(0, MAX_RADIUS]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RadiusMap(Vec<f64>);

impl RadiusMap {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        let bad: Vec<String> = radii
            .iter()
            .enumerate()
            .filter(|(_, &r)| !(r > 0.0 && r <= MAX_RADIUS))
            .map(|(v, r)| format!("vertex {v}: radius {r} outside (0, {MAX_RADIUS}]"))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(Self(radii))
    }

    pub fn constant(vertex_count: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; vertex_count])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_against(&self, t: &Triangulation) -> Result<()> {
        if self.0.len() != t.vertex_count {
            return Err(Error::Validation(vec![format!(
                "radius map has {} entries for {} vertices",
                self.0.len(),
                t.vertex_count
            )]));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double4_structure() {
        let t = double4();
        let rep = validate_triangulation(&t).unwrap();
        assert_eq!(rep.star_sizes, vec![2; 6]);
        assert_eq!(rep.vertex_degrees, vec![3; 4]);
        for e in 0..6 {
            assert_eq!(edge_star(&t, e).unwrap(), &[(0, e), (1, e)]);
        }
        assert_eq!(t.link_euler_characteristics(), Some(&[2, 2, 2, 2][..]));
    }

    #[test]
    fn fan6_structure() {
        let t = fan6();
        let rep = validate_triangulation(&t).unwrap();
        assert_eq!(rep.star_sizes[0], 6);
        assert_eq!(rep.star_sizes.iter().filter(|&&s| s == 2).count(), 12);
        assert_eq!(rep.star_sizes.iter().filter(|&&s| s == 1).count(), 6);
        assert_eq!(rep.star_sizes.iter().sum::<usize>(), 6 * t.tets().len());
    }

    #[test]
    fn self_glued_star_lists_tet_repeatedly() {
        let t = fujii2();
        let star = edge_star(&t, 0).unwrap();
        assert_eq!(star.len(), 12);
        assert_eq!(star.iter().filter(|(tet, _)| *tet == 0).count(), 6);
        assert_eq!(validate_triangulation(&t).unwrap().loop_edges, vec![0]);
    }

    #[test]
    fn unknown_ids() {
        let t = double4();
        assert_eq!(
            edge_star(&t, 6),
            Err(Error::UnknownId {
                kind: "edge",
                id: 6
            })
        );
        assert!(t.tet(2).is_err());
    }

    #[test]
    fn constructor_rejects_violations() {
        let edges = vec![
            Edge {
                id: 0,
                endpoints: (0, 1),
            },
            Edge {
                id: 0,
                endpoints: (1, 1),
            },
        ];
        let tets = vec![Tet {
            id: 0,
            vertices: [0, 1, 0, 1],
            edge_refs: [0; 6],
        }];
        let Err(Error::Validation(problems)) = Triangulation::new(2, edges, tets, false, None)
        else {
            panic!("expected validation failure");
        };
        assert!(problems.iter().any(|p| p.contains("duplicate id")));
        assert!(problems.iter().any(|p| p.contains("allow_self_gluing")));
        assert!(problems.iter().any(|p| p.contains("slot ik")));
    }

    #[test]
    fn weight_and_radius_maps() {
        assert!(WeightMap::new(vec![0.0, FRAC_PI_2]).is_ok());
        assert!(WeightMap::new(vec![-0.1]).is_err());
        assert!(WeightMap::new(vec![1.6]).is_err());
        assert_eq!(
            WeightMap::constant(3, 0.5).unwrap().tier(),
            WeightTier::Rigidity
        );
        let w = WeightMap::new(vec![0.2, 1.3]).unwrap();
        assert_eq!(w.tier(), WeightTier::General);
        assert_eq!(w.edges_outside_rigidity_tier(), vec![1]);
        assert!(RadiusMap::new(vec![1.0, 0.0]).is_err());
        assert!(RadiusMap::new(vec![f64::NAN]).is_err());
        assert!(RadiusMap::new(vec![51.0]).is_err());
        let t = double4();
        assert!(RadiusMap::constant(3, 1.0)
            .unwrap()
            .check_against(&t)
            .is_err());
        assert!(WeightMap::constant(6, 0.0)
            .unwrap()
            .check_against(&t)
            .is_ok());
    }

    #[test]
    fn reorder_keeps_multiplicities() {
        let t = fan6();
        let r = t.reorder_tets(&[5, 4, 3, 2, 1, 0]).unwrap();
        for e in 0..t.edges().len() {
            assert_eq!(
                edge_star(&t, e).unwrap().len(),
                edge_star(&r, e).unwrap().len()
            );
        }
        assert!(t.reorder_tets(&[0, 0, 1, 2, 3, 4]).is_err());
    }
}
