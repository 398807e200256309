//! Seeded random configurations.
//!
//! Radii are log-uniform on `[0.05, 5]`; weights are uniform on the angle
//! cube of the requested tier.

use crate::complex::{RadiusMap, Triangulation, WeightMap};
use crate::curvature::{negative_curvature_edges, ricci_curvature, MetricState};
use crate::trunctet::{rigidity_angle, TetRadii, TetWeights, WeightTier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

pub const RADIUS_MIN: f64 = 0.05;
pub const RADIUS_MAX: f64 = 5.0;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a named task, so that adding or reordering tasks
/// leaves the other streams unchanged.
pub fn stream(seed: u64, name: &str) -> SampleRng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(h);
    r
}

pub fn radius<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(RADIUS_MIN.ln()..=RADIUS_MAX.ln()).exp()
}

pub fn max_angle(tier: WeightTier) -> f64 {
    match tier {
        WeightTier::General => FRAC_PI_2,
        WeightTier::Rigidity => rigidity_angle(),
    }
}

pub fn angle<R: Rng>(rng: &mut R, tier: WeightTier) -> f64 {
    rng.gen_range(0.0..=max_angle(tier))
}

pub fn tet_radii<R: Rng>(rng: &mut R) -> TetRadii {
    TetRadii::new(std::array::from_fn(|_| radius(rng))).expect("radii in range")
}

pub fn tet_weights<R: Rng>(rng: &mut R, tier: WeightTier) -> TetWeights {
    TetWeights::from_angles(std::array::from_fn(|_| angle(rng, tier))).expect("angles in range")
}

pub fn radius_map<R: Rng>(rng: &mut R, n: usize) -> RadiusMap {
    RadiusMap::new((0..n).map(|_| radius(rng)).collect()).expect("radii in range")
}

pub fn weight_map<R: Rng>(rng: &mut R, n: usize, tier: WeightTier) -> WeightMap {
    WeightMap::new((0..n).map(|_| angle(rng, tier)).collect()).expect("angles in range")
}

/// Draws weights and radii until the state is admissible, or gives up after
/// `max_tries` draws.
pub fn admissible_state<'a, R: Rng>(
    rng: &mut R,
    t: &'a Triangulation,
    tier: WeightTier,
    max_tries: usize,
) -> Option<MetricState<'a>> {
    (0..max_tries).find_map(|_| {
        let w = weight_map(rng, t.edges().len(), tier);
        let r = radius_map(rng, t.vertex_count());
        MetricState::new(t, w, r)
            .ok()
            .filter(MetricState::is_admissible)
    })
}

/// As [`admissible_state`], additionally requiring `K_e sin²Φ_e ≥ 0` on
/// every edge.
pub fn admissible_state_with_curvature_sign<'a, R: Rng>(
    rng: &mut R,
    t: &'a Triangulation,
    tier: WeightTier,
    max_tries: usize,
) -> Option<MetricState<'a>> {
    (0..max_tries).find_map(|_| {
        let s = admissible_state(rng, t, tier, 1)?;
        let k = ricci_curvature(&s).ok()?;
        negative_curvature_edges(&s, &k).is_empty().then_some(s)
    })
}

/// Radii perturbed multiplicatively by factors in `[1 − frac, 1 + frac]`.
pub fn perturb<R: Rng>(rng: &mut R, radii: &RadiusMap, frac: f64) -> RadiusMap {
    RadiusMap::new(
        radii
            .values()
            .iter()
            .map(|r| r * rng.gen_range(1.0 - frac..=1.0 + frac))
            .collect(),
    )
    .expect("perturbed radii in range")
}
