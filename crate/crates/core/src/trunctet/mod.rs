//! Geometry of a single truncated (hyper-ideal) tetrahedron.
//!
//! Vertices are numbered `0..4` (`i, j, k, h`). Every per-edge quantity is
//! stored in the fixed slot order `(ij, ik, ih, jk, jh, kh)`, see [`SLOTS`].
//!
//! Weights come in two tiers. The general tier allows every intersection
//! angle in `[0, π/2]`; the rigidity tier restricts them to
//! `[0, arccos(1/3)]`, i.e. every cosine in `[1/3, 1]`.

mod angles;
mod poly;
mod volume;

pub use angles::{dbeta_dl, dihedral_angles, dihedral_angles_checked, dl_dr, hess_edge_length};
pub use poly::{
    a_coefficient, apex_quadratic, apex_quadratic_from_tanh, h_vector, h_vector_from_tanh,
    is_nondegenerate, q1_from_cosh, q2, q2_from_tanh, q3, v_threshold, v_threshold_from_tanh,
    ApexQuadratic,
};
pub use volume::{
    relative_volume, relative_volume_checked, VolumeEstimate, DEFAULT_STEPS, RICHARDSON_TOL,
};

use crate::hyptrig::{self, EPS_GEOM, MAX_RADIUS};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Vertex pairs in slot order `(ij, ik, ih, jk, jh, kh)`.
pub const SLOTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub const SLOT_NAMES: [&str; 6] = ["ij", "ik", "ih", "jk", "jh", "kh"];

/// Cosine bound of the rigidity tier.
pub const RIGIDITY_COSINE: f64 = 1.0 / 3.0;

/// `arccos(1/3)`, the largest weight of the rigidity tier.
pub fn rigidity_angle() -> f64 {
    RIGIDITY_COSINE.acos()
}

/// Slot index of the edge joining local vertices `a` and `b`.
pub fn slot(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no slot joins local vertices {a} and {b}"),
    }
}

/// Slot of the edge opposite `s` (`ij ↔ kh`, `ik ↔ jh`, `ih ↔ jk`).
#[inline]
pub fn opposite_slot(s: usize) -> usize {
    5 - s
}

/// The two local vertices other than `a` and `b`, in increasing order.
pub fn complement(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// Which weight tier a configuration belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightTier {
    /// Every weight in `[0, arccos(1/3)]`.
    Rigidity,
    /// Every weight in `[0, π/2]`, at least one above `arccos(1/3)`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetRadii([f64; 4]);

impl TetRadii {
    pub fn new(radii: [f64; 4]) -> Result<Self> {
        if let Some(r) = radii
            .iter()
            .find(|r| !(r.is_finite() && **r > 0.0 && **r <= MAX_RADIUS))
        {
            return Err(Error::InvalidInput(format!(
                "radius {r} outside (0, {MAX_RADIUS}]"
            )));
        }
        Ok(Self(radii))
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    /// `t_ν = tanh r_ν ∈ (0, 1)`.
    pub fn tanh(&self) -> [f64; 4] {
        self.0.map(f64::tanh)
    }

    /// Relabels vertices: new vertex `a` is old vertex `perm[a]`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        Self(perm.map(|p| self.0[p]))
    }
}

/// Six intersection angles in slot order together with their cosines
/// `(a, b, c, d, e, f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetWeights {
    angles: [f64; 6],
    cosines: [f64; 6],
}

impl TetWeights {
    /// Weights from angles in radians, each in `[0, π/2]`.
    pub fn from_angles(angles: [f64; 6]) -> Result<Self> {
        for phi in angles {
            if !(phi.is_finite() && (-EPS_GEOM..=FRAC_PI_2 + EPS_GEOM).contains(&phi)) {
                return Err(Error::InvalidInput(format!(
                    "weight {phi} outside [0, pi/2]"
                )));
            }
        }
        let angles = angles.map(|p| p.clamp(0.0, FRAC_PI_2));
        Ok(Self {
            angles,
            cosines: angles.map(f64::cos),
        })
    }

    /// Weights from cosines, each in `[0, 1]`.
    pub fn from_cosines(cosines: [f64; 6]) -> Result<Self> {
        for c in cosines {
            if !(c.is_finite() && (-EPS_GEOM..=1.0 + EPS_GEOM).contains(&c)) {
                return Err(Error::InvalidInput(format!(
                    "weight cosine {c} outside [0, 1]"
                )));
            }
        }
        let cosines = cosines.map(|c| c.clamp(0.0, 1.0));
        Ok(Self {
            angles: cosines.map(f64::acos),
            cosines,
        })
    }

    pub fn constant_cosine(c: f64) -> Result<Self> {
        Self::from_cosines([c; 6])
    }

    pub fn zero() -> Self {
        Self {
            angles: [0.0; 6],
            cosines: [1.0; 6],
        }
    }

    pub fn angles(&self) -> [f64; 6] {
        self.angles
    }

    pub fn cosines(&self) -> [f64; 6] {
        self.cosines
    }

    /// Cosine of the weight on the edge joining local vertices `a`, `b`.
    #[inline]
    pub fn cos_between(&self, a: usize, b: usize) -> f64 {
        self.cosines[slot(a, b)]
    }

    pub fn tier(&self) -> WeightTier {
        if self
            .cosines
            .iter()
            .all(|&c| c >= RIGIDITY_COSINE - EPS_GEOM)
        {
            WeightTier::Rigidity
        } else {
            WeightTier::General
        }
    }

    /// Whether the weights lie in the excluded set: cosine 1 on one pair of
    /// opposite edges and 0 on the other four. Such weights degenerate every
    /// radius vector.
    pub fn is_always_degenerate(&self) -> bool {
        (0..3).any(|s| {
            self.cosines.iter().enumerate().all(|(t, &c)| {
                let target = if t == s || t == opposite_slot(s) {
                    1.0
                } else {
                    0.0
                };
                (c - target).abs() <= EPS_GEOM
            })
        })
    }

    /// Relabels vertices: new vertex `a` is old vertex `perm[a]`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let mut angles = [0.0; 6];
        let mut cosines = [0.0; 6];
        for (s, &(a, b)) in SLOTS.iter().enumerate() {
            let old = slot(perm[a], perm[b]);
            angles[s] = self.angles[old];
            cosines[s] = self.cosines[old];
        }
        Self { angles, cosines }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetLengths([f64; 6]);

impl TetLengths {
    pub fn new(lengths: [f64; 6]) -> Result<Self> {
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "edge length {l} must be positive"
            )));
        }
        Ok(Self(lengths))
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }

    pub fn cosh(&self) -> [f64; 6] {
        self.0.map(f64::cosh)
    }

    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let mut out = [0.0; 6];
        for (s, &(a, b)) in SLOTS.iter().enumerate() {
            out[s] = self.0[slot(perm[a], perm[b])];
        }
        Self(out)
    }
}

/// Six edge lengths from radii and weights. Fails with
/// [`Error::UndefinedLength`] when some pentagon argument does not exceed 1.
pub fn lengths_from_radii(radii: &TetRadii, weights: &TetWeights) -> Result<TetLengths> {
    let r = radii.values();
    let mut out = [0.0; 6];
    for (s, &(a, b)) in SLOTS.iter().enumerate() {
        out[s] = hyptrig::pentagon_edge_length_cos(r[a], r[b], weights.cosines[s])?;
    }
    TetLengths::new(out)
}

/// Pentagon arguments `cosh l` for all six slots, whether or not they exceed 1.
pub fn cosh_lengths_from_radii(radii: &TetRadii, weights: &TetWeights) -> [f64; 6] {
    let r = radii.values();
    let mut out = [0.0; 6];
    for (s, &(a, b)) in SLOTS.iter().enumerate() {
        out[s] = hyptrig::pentagon_cosh_length(r[a], r[b], weights.cosines[s]);
    }
    out
}

/// Side lengths of the vertex triangle at `apex`, via the hexagon law.
///
/// With the other three vertices `p < q < s`, returns
/// `(x^apex_pq, x^apex_ps, x^apex_qs)`; for apex `i` this is
/// `(x^i_jk, x^i_jh, x^i_kh)`.
pub fn vertex_triangle_sides(lengths: &TetLengths, apex: usize) -> Result<[f64; 3]> {
    if apex >= 4 {
        return Err(Error::UnknownId {
            kind: "vertex",
            id: apex,
        });
    }
    let l = lengths.values();
    let others: Vec<usize> = (0..4).filter(|&v| v != apex).collect();
    let (p, q, s) = (others[0], others[1], others[2]);
    let side = |u: usize, v: usize| {
        hyptrig::hexagon_opposite_side(l[slot(apex, u)], l[slot(apex, v)], l[slot(u, v)])
    };
    Ok([side(p, q)?, side(p, s)?, side(q, s)?])
}

/// Ground-truth nondegeneracy test: compute the edge lengths and all four
/// vertex triangles, then check every strict triangle inequality.
///
/// Errors with [`Error::UndefinedLength`] when the radii and weights do not
/// define six edge lengths.
pub fn nondegeneracy_oracle(radii: &TetRadii, weights: &TetWeights) -> Result<bool> {
    let lengths = lengths_from_radii(radii, weights)?;
    lengths_nondegenerate_oracle(&lengths)
}

/// Vertex-triangle test on given lengths.
pub fn lengths_nondegenerate_oracle(lengths: &TetLengths) -> Result<bool> {
    for apex in 0..4 {
        let [x1, x2, x3] = vertex_triangle_sides(lengths, apex)?;
        let margin = EPS_GEOM * (1.0 + x1.max(x2).max(x3));
        let slack = (x1 + x2 - x3).min(x1 + x3 - x2).min(x2 + x3 - x1);
        if slack <= margin {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classification of a single tetrahedron under a radius/weight assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TetStatus {
    Nondegenerate,
    Degenerate,
    /// Weights in the excluded set; degenerate for every radius vector.
    AlwaysDegenerate,
    /// Some pentagon argument is `<= 1`, so the listed slots have no length.
    UndefinedLength {
        slots: Vec<usize>,
    },
}

impl TetStatus {
    pub fn is_admissible(&self) -> bool {
        matches!(self, TetStatus::Nondegenerate)
    }
}

pub fn classify(radii: &TetRadii, weights: &TetWeights) -> TetStatus {
    if weights.is_always_degenerate() {
        return TetStatus::AlwaysDegenerate;
    }
    let cosh = cosh_lengths_from_radii(radii, weights);
    let slots: Vec<usize> = (0..6).filter(|&s| !(cosh[s] > 1.0)).collect();
    if !slots.is_empty() {
        return TetStatus::UndefinedLength { slots };
    }
    if is_nondegenerate(radii, weights) {
        TetStatus::Nondegenerate
    } else {
        TetStatus::Degenerate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn slot_bookkeeping() {
        for (s, &(a, b)) in SLOTS.iter().enumerate() {
            assert_eq!(slot(a, b), s);
            assert_eq!(slot(b, a), s);
            let (p, q) = complement(a, b);
            assert_eq!(slot(p, q), opposite_slot(s));
        }
    }

    #[test]
    fn lengths_examples() {
        let r = TetRadii::new([1.0; 4]).unwrap();
        let l = lengths_from_radii(&r, &TetWeights::zero()).unwrap();
        for v in l.values() {
            assert_abs_diff_eq!(v, 2.0, epsilon = 1e-14);
        }
        let w = TetWeights::from_angles([FRAC_PI_2; 6]).unwrap();
        for v in lengths_from_radii(&r, &w).unwrap().values() {
            assert_abs_diff_eq!(v, 0.847_450_581_295_851_4, epsilon = 1e-12);
        }
        let r = TetRadii::new([0.5, 1.2, 1.0, 1.0]).unwrap();
        let w = TetWeights::from_angles([(1.0f64 / 3.0).acos(), 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let l = lengths_from_radii(&r, &w).unwrap().values();
        assert_abs_diff_eq!(l[0], 0.932_446_909_887_466_1, epsilon = 1e-12);
        assert_abs_diff_eq!(l[3], 2.2, epsilon = 1e-14);
    }

    #[test]
    fn vertex_triangle_examples() {
        let l2 = TetLengths::new([2.0; 6]).unwrap();
        for x in vertex_triangle_sides(&l2, 0).unwrap() {
            assert_abs_diff_eq!(x, 0.827_136_901_638_556_8, epsilon = 1e-12);
        }
        let l1 = TetLengths::new([1.0; 6]).unwrap();
        for apex in 0..4 {
            for x in vertex_triangle_sides(&l1, apex).unwrap() {
                assert_abs_diff_eq!(x, 1.704_912_832_358_013_7, epsilon = 1e-12);
            }
        }
        assert!(vertex_triangle_sides(&l1, 4).is_err());
    }

    #[test]
    fn vertex_triangle_invariant_under_apex_fixing_relabel() {
        let l = TetLengths::new([1.1, 1.7, 2.3, 1.4, 0.9, 2.0]).unwrap();
        let sides = vertex_triangle_sides(&l, 0).unwrap();
        // swap j and k: i stays the apex
        let swapped = vertex_triangle_sides(&l.permuted([0, 2, 1, 3]), 0).unwrap();
        let mut a = sides.to_vec();
        let mut b = swapped.to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_validation_and_tiers() {
        assert!(TetWeights::from_angles([2.0; 6]).is_err());
        assert!(TetWeights::from_cosines([-0.5; 6]).is_err());
        assert_eq!(TetWeights::zero().tier(), WeightTier::Rigidity);
        assert_eq!(
            TetWeights::constant_cosine(1.0 / 3.0).unwrap().tier(),
            WeightTier::Rigidity
        );
        assert_eq!(
            TetWeights::constant_cosine(0.2).unwrap().tier(),
            WeightTier::General
        );
        let s = TetWeights::from_angles([0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 0.0])
            .unwrap();
        assert!(s.is_always_degenerate());
        assert!(!TetWeights::zero().is_always_degenerate());
        assert!(TetRadii::new([1.0, 1.0, 0.0, 1.0]).is_err());
        assert!(TetRadii::new([1.0, 1.0, 51.0, 1.0]).is_err());
    }

    #[test]
    fn oracle_examples() {
        let r = TetRadii::new([1.0; 4]).unwrap();
        assert!(nondegeneracy_oracle(&r, &TetWeights::zero()).unwrap());
        let s = TetWeights::from_cosines([1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        for &a in &[1.0, 2.5, 4.0] {
            for &b in &[1.5, 3.0] {
                let r = TetRadii::new([a, b, b, a]).unwrap();
                assert!(!nondegeneracy_oracle(&r, &s).unwrap());
            }
        }
        // small radii with right-angle weights: no lengths at all
        let r = TetRadii::new([0.3; 4]).unwrap();
        let w = TetWeights::from_angles([FRAC_PI_2; 6]).unwrap();
        assert!(matches!(
            nondegeneracy_oracle(&r, &w),
            Err(Error::UndefinedLength { .. })
        ));
        assert!(matches!(
            classify(&r, &w),
            TetStatus::UndefinedLength { .. }
        ));
    }
}
