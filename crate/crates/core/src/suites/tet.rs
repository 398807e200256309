//! Suites on single tetrahedra.

use super::{rel_err, Tally};
use crate::hyptrig::EPS_GEOM;
use crate::sampling::{self, SampleRng};
use crate::trunctet::{
    self, a_coefficient, apex_quadratic_from_tanh, h_vector_from_tanh, q1_from_cosh, q2,
    q2_from_tanh, rigidity_angle, TetLengths, TetRadii, TetWeights, WeightTier,
};
use nalgebra::Matrix6;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Slots of the face opposite each vertex.
const FACE_SLOTS: [[usize; 3]; 4] = [[3, 4, 5], [1, 2, 5], [0, 2, 4], [0, 1, 3]];

/// Excluded weight patterns, as cosines.
pub const S_PATTERNS: [[f64; 6]; 3] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
];

fn tanh4(rng: &mut SampleRng) -> [f64; 4] {
    sampling::tet_radii(rng).tanh()
}

/// Sign of `Q₂` against the vertex-triangle oracle on random radii and
/// general-tier weights.
pub fn oracle_equivalence(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("oracle_equivalence", "mismatch", 0.0);
    for _ in 0..n {
        let r = sampling::tet_radii(rng);
        let w = sampling::tet_weights(rng, WeightTier::General);
        let q = q2(&r, &w);
        match trunctet::nondegeneracy_oracle(&r, &w) {
            Err(crate::Error::UndefinedLength { .. }) => tally.skip("undefined_length"),
            Err(_) => tally.fail(),
            Ok(_) if q.abs() <= EPS_GEOM => tally.skip("boundary"),
            Ok(oracle) => {
                if !oracle {
                    tally.count("degenerate");
                }
                tally.residual(if oracle == (q > 0.0) { 0.0 } else { 1.0 });
            }
        }
    }
    tally.finish()
}

/// Sign of `Q₁` against the vertex-triangle oracle on random edge lengths.
pub fn length_oracle(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("length_oracle", "mismatch", 0.0);
    for _ in 0..n {
        let l: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.05..4.0));
        let lengths = TetLengths::new(l).expect("positive lengths");
        let c = lengths.cosh();
        let q = q1_from_cosh(c);
        let scale = c.iter().fold(1f64, |m, &x| m.max(x)).powi(4);
        if q.abs() <= EPS_GEOM * scale {
            tally.skip("boundary");
            continue;
        }
        match trunctet::lengths_nondegenerate_oracle(&lengths) {
            Ok(oracle) => {
                if !oracle {
                    tally.count("degenerate");
                }
                tally.residual(if oracle == (q > 0.0) { 0.0 } else { 1.0 });
            }
            Err(_) => tally.fail(),
        }
    }
    tally.finish()
}

/// `Q₁(cosh l) = Q₂ · Π cosh² r`.
pub fn q1_q2_relation(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("q1_q2_relation", "relative residual", 1e-10);
    for _ in 0..n {
        let r = sampling::tet_radii(rng);
        let w = sampling::tet_weights(rng, WeightTier::General);
        let p: f64 = r.values().iter().map(|x| x.cosh().powi(2)).product();
        let q1 = q1_from_cosh(trunctet::cosh_lengths_from_radii(&r, &w));
        tally.residual(rel_err(q1 / p, q2(&r, &w)));
    }
    tally.finish()
}

/// `Q₂ = Σ t_ν h_ν + Q₃`, with `Q₃` supplied by the caller.
pub fn f5_decomposition(
    rng: &mut SampleRng,
    n: usize,
    q3: fn(&TetWeights) -> f64,
) -> super::SuiteOutcome {
    let mut tally = Tally::new("f5_decomposition", "relative residual", 1e-10);
    for _ in 0..n {
        let t = tanh4(rng);
        let w = sampling::tet_weights(rng, WeightTier::General);
        let h = h_vector_from_tanh(t, &w);
        let sum: f64 = (0..4).map(|v| t[v] * h[v]).sum::<f64>() + q3(&w);
        tally.residual(rel_err(q2_from_tanh(t, &w), sum));
    }
    tally.finish()
}

/// `B² − 4AC` against its factored form, at every apex.
pub fn discriminant_identity(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("discriminant_identity", "relative residual", 1e-10);
    for _ in 0..n {
        let t = tanh4(rng);
        let w = sampling::tet_weights(rng, WeightTier::General);
        for apex in 0..4 {
            let quad = apex_quadratic_from_tanh(apex, t, &w);
            tally.residual(quad.residual);
            if quad.a > 0.0 {
                tally.count("a_positive");
                if !(quad.discriminant > 0.0) {
                    tally.fail();
                    tally.count("nonpositive_discriminant_with_a_positive");
                }
            }
        }
    }
    tally.finish()
}

/// Some `A_ν ≥ 0` implies `Q₃ ≥ 0`, strictly when `A_ν > 0`, over a cosine
/// grid with `side` points per axis plus `n` random weights.
pub fn q3_sign(rng: &mut SampleRng, n: usize, side: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("q3_sign", "violation", 0.0);
    let check = |w: TetWeights, tally: &mut Tally| {
        let a_max = (0..4)
            .map(|v| a_coefficient(&w, v))
            .fold(f64::NEG_INFINITY, f64::max);
        let q = trunctet::q3(&w);
        tally.extreme_min(
            "min_q3_given_a_nonnegative",
            if a_max >= 0.0 { q } else { f64::INFINITY },
        );
        if a_max >= 0.0 {
            tally.count("hypothesis_met");
            let ok = q >= -EPS_GEOM && (a_max <= 1e-9 || q > 0.0);
            tally.residual(if ok { 0.0 } else { 1.0 });
        } else {
            tally.skip("all_a_negative");
        }
    };
    let side = side.max(2);
    let mut idx = [0usize; 6];
    loop {
        let c = idx.map(|i| i as f64 / (side - 1) as f64);
        check(
            TetWeights::from_cosines(c).expect("grid cosines"),
            &mut tally,
        );
        let mut k = 0;
        while k < 6 {
            idx[k] += 1;
            if idx[k] < side {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 6 {
            break;
        }
    }
    for _ in 0..n {
        check(sampling::tet_weights(rng, WeightTier::General), &mut tally);
    }
    tally.finish()
}

/// Every radius vector is degenerate for the excluded patterns: `|Q₂|` stays
/// at zero on a geometric radius grid in `[0.1, 5]` with `side` points per
/// axis, the classifier says so, and the oracle agrees where lengths exist.
pub fn degenerate_set(side: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("degenerate_set", "|Q2|", EPS_GEOM);
    let side = side.max(2);
    let axis: Vec<f64> = (0..side)
        .map(|i| (0.1f64.ln() + (5f64.ln() - 0.1f64.ln()) * i as f64 / (side - 1) as f64).exp())
        .collect();
    for pattern in S_PATTERNS {
        let w = TetWeights::from_cosines(pattern).expect("pattern cosines");
        for n in 0..side.pow(4) {
            let r = TetRadii::new([
                axis[n % side],
                axis[n / side % side],
                axis[n / side / side % side],
                axis[n / side / side / side],
            ])
            .expect("grid radii");
            tally.residual(q2(&r, &w).abs());
            if trunctet::classify(&r, &w) != trunctet::TetStatus::AlwaysDegenerate {
                tally.fail();
            }
            match trunctet::nondegeneracy_oracle(&r, &w) {
                Ok(true) => {
                    tally.fail();
                    tally.count("oracle_nondegenerate");
                }
                Ok(false) => tally.count("oracle_degenerate"),
                Err(_) => tally.count("undefined_length"),
            }
        }
    }
    tally.finish()
}

/// Constant weights with cosine in `{1/3, 0.4, 0.5, 0.75, 1}` admit every
/// radius vector.
pub fn constant_weights(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("constant_weights", "degenerate count", 0.0);
    for c in [1.0 / 3.0, 0.4, 0.5, 0.75, 1.0] {
        let w = TetWeights::constant_cosine(c).expect("cosine in range");
        for _ in 0..n {
            let r = sampling::tet_radii(rng);
            let q = q2(&r, &w);
            tally.extreme_min("min_q2", q);
            tally.residual(if trunctet::is_nondegenerate(&r, &w) {
                0.0
            } else {
                1.0
            });
        }
    }
    tally.finish()
}

/// Rigidity-tier weights with at least three face sums `≥ π` admit every
/// radius vector. Angles are drawn from `[π/4, arccos(1/3)]` and kept when
/// three face sums reach `π`.
pub fn face_sums(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("face_sums", "degenerate count", 0.0);
    let mut kept = 0;
    let mut draws = 0;
    while kept < n && draws < 1000 * n.max(1) {
        draws += 1;
        let angles: [f64; 6] = std::array::from_fn(|_| rng.gen_range(FRAC_PI_4..=rigidity_angle()));
        let big = FACE_SLOTS
            .iter()
            .filter(|f| f.iter().map(|&s| angles[s]).sum::<f64>() >= PI)
            .count();
        if big < 3 {
            continue;
        }
        kept += 1;
        let w = TetWeights::from_angles(angles).expect("angles in range");
        let r = sampling::tet_radii(rng);
        tally.extreme_min("min_q2", q2(&r, &w));
        tally.residual(if trunctet::is_nondegenerate(&r, &w) {
            0.0
        } else {
            1.0
        });
    }
    tally.set_count("weight_draws", draws);
    if kept < n {
        tally.fail();
    }
    tally.finish()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrichotomyStats {
    pub draws: usize,
    pub degenerate: usize,
    pub one_negative: usize,
    pub all_positive: usize,
    pub two_nonpositive: usize,
}

/// Degenerate configurations found by rejection in `t`-space. Every one
/// must have at most one non-positive `h_ν`; in the rigidity tier exactly one
/// must be negative. Fails when fewer than `need` are found.
pub fn trichotomy(
    rng: &mut SampleRng,
    tier: WeightTier,
    budget: usize,
    need: usize,
) -> (super::SuiteOutcome, TrichotomyStats) {
    let name = match tier {
        WeightTier::General => "trichotomy_general",
        WeightTier::Rigidity => "trichotomy_rigidity",
    };
    let mut tally = Tally::new(name, "violation", 0.0);
    let mut stats = TrichotomyStats {
        draws: budget,
        ..Default::default()
    };
    for _ in 0..budget {
        let t = tanh4(rng);
        let w = sampling::tet_weights(rng, tier);
        if w.is_always_degenerate() {
            continue;
        }
        let q = q2_from_tanh(t, &w);
        if q > 0.0 {
            continue;
        }
        if q.abs() <= EPS_GEOM {
            tally.skip("boundary");
            continue;
        }
        stats.degenerate += 1;
        let h = h_vector_from_tanh(t, &w);
        let negative = h.iter().filter(|&&x| x < 0.0).count();
        let nonpositive = h.iter().filter(|&&x| x <= 0.0).count();
        match negative {
            0 => stats.all_positive += 1,
            1 => stats.one_negative += 1,
            _ => {}
        }
        if nonpositive >= 2 {
            stats.two_nonpositive += 1;
        }
        let ok = nonpositive <= 1 && (tier == WeightTier::General || negative == 1);
        tally.residual(if ok { 0.0 } else { 1.0 });
    }
    tally.set_count("draws", stats.draws);
    tally.set_count("degenerate", stats.degenerate);
    tally.set_count("one_negative", stats.one_negative);
    tally.set_count("all_positive", stats.all_positive);
    tally.set_count("two_nonpositive", stats.two_nonpositive);
    if stats.degenerate < need {
        tally.fail();
    }
    (tally.finish(), stats)
}

/// In the rigidity tier every degenerate-region threshold exceeds 1.
pub fn rigidity_thresholds(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("rigidity_thresholds", "1 - threshold", 0.0);
    for _ in 0..n {
        let t = tanh4(rng);
        let w = sampling::tet_weights(rng, WeightTier::Rigidity);
        for apex in 0..4 {
            match trunctet::v_threshold_from_tanh(apex, t, &w) {
                Some(tau) => {
                    tally.count("present");
                    tally.residual(1.0 - tau);
                }
                None => tally.skip("absent"),
            }
        }
    }
    tally.finish()
}

/// `Q₂` vanishes at every present threshold (relative to the size of its
/// terms there). Thresholds below 1 are counted separately.
pub fn threshold_boundary(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("threshold_boundary", "relative |Q2| at threshold", 1e-8);
    for _ in 0..n {
        let t = tanh4(rng);
        let w = sampling::tet_weights(rng, WeightTier::General);
        for apex in 0..4 {
            let Some(tau) = trunctet::v_threshold_from_tanh(apex, t, &w) else {
                tally.skip("absent");
                continue;
            };
            let mut on = t;
            on[apex] = tau;
            let quad = apex_quadratic_from_tanh(apex, t, &w);
            let scale = 1f64.max(quad.a.abs() * tau * tau + quad.b.abs() * tau + quad.c.abs());
            let value = q2_from_tanh(on, &w);
            if tau < 1.0 {
                tally.count("below_one");
                tally.extreme_max("max_abs_q2_below_one", value.abs());
            }
            tally.residual(value.abs() / scale);
        }
    }
    tally.finish()
}

fn random_nondegenerate_lengths(rng: &mut SampleRng, lo: f64, hi: f64) -> TetLengths {
    loop {
        let l = TetLengths::new(std::array::from_fn(|_| rng.gen_range(lo..hi))).expect("positive");
        if trunctet::lengths_nondegenerate_oracle(&l) == Ok(true) {
            return l;
        }
    }
}

/// Five-point central differences of the dihedral angles, step `h`.
pub fn fd_dbeta_dl(lengths: &TetLengths, h: f64) -> crate::Result<Matrix6<f64>> {
    let l = lengths.values();
    let mut m = Matrix6::zeros();
    for col in 0..6 {
        let at = |offset: f64| -> crate::Result<[f64; 6]> {
            let mut v = l;
            v[col] += offset;
            trunctet::dihedral_angles(&TetLengths::new(v)?)
        };
        let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
        for row in 0..6 {
            m[(row, col)] = (8.0 * (p1[row] - m1[row]) - (p2[row] - m2[row])) / (12.0 * h);
        }
    }
    Ok(m)
}

/// [`fd_dbeta_dl`] over halving steps from `1e-3 · min l`, keeping the
/// estimate that agrees best with its predecessor. Steps that leave the
/// nondegenerate region are skipped, so nearly flat tetrahedra still get a
/// usable difference quotient.
pub fn fd_dbeta_dl_adaptive(lengths: &TetLengths) -> crate::Result<Matrix6<f64>> {
    let l_min = lengths
        .values()
        .iter()
        .fold(f64::INFINITY, |m, x| m.min(*x));
    let mut prev: Option<Matrix6<f64>> = None;
    let mut best: Option<(f64, Matrix6<f64>)> = None;
    let mut last_err = None;
    for k in 0..12 {
        let h = 1e-3 * l_min / f64::from(1u32 << k);
        let d = match fd_dbeta_dl(lengths, h) {
            Ok(d) => d,
            Err(e) => {
                last_err = Some(e);
                prev = None;
                continue;
            }
        };
        if let Some(p) = prev {
            let gap = (d - p).amax();
            if best.as_ref().is_none_or(|(g, _)| gap < *g) {
                best = Some((gap, d));
            }
        }
        prev = Some(d);
    }
    match (best, last_err) {
        (Some((_, d)), _) => Ok(d),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least two steps are evaluated"),
    }
}

/// `∂β/∂l` is symmetric, positive definite, and matches finite differences.
pub fn dihedral_jacobian(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new(
        "dihedral_jacobian",
        "finite-difference relative error",
        1e-6,
    );
    for _ in 0..n {
        let l = random_nondegenerate_lengths(rng, 0.1, 3.0);
        let m = match trunctet::dbeta_dl(&l) {
            Ok(m) => m,
            Err(_) => {
                tally.fail();
                continue;
            }
        };
        let asym = (m - m.transpose()).amax();
        let lambda_min = m.symmetric_eigenvalues().min();
        tally.extreme_max("max_asymmetry", asym);
        tally.extreme_min("min_eigenvalue", lambda_min);
        if !(asym < 1e-8) {
            tally.fail();
            tally.count("asymmetric");
        }
        if !(lambda_min > 0.0) {
            tally.fail();
            tally.count("not_positive_definite");
        }
        match fd_dbeta_dl_adaptive(&l) {
            Ok(fd) => tally.residual((m - fd).amax() / 1f64.max(m.amax())),
            Err(_) => tally.skip("fd_left_domain"),
        }
    }
    tally.finish()
}

/// Schläfli volume differences are path independent and antisymmetric on
/// random waypoint triangles in length space.
pub fn schlafli_integrability(rng: &mut SampleRng, n: usize) -> super::SuiteOutcome {
    let mut tally = Tally::new("schlafli_integrability", "path residual", 1e-6);
    let mut found = 0;
    let mut draws = 0;
    while found < n && draws < 10_000 * n.max(1) {
        draws += 1;
        let a = random_nondegenerate_lengths(rng, 0.3, 2.5);
        let near = |rng: &mut SampleRng| {
            let v = a.values().map(|x| x + rng.gen_range(-0.3..0.3));
            TetLengths::new(v)
                .ok()
                .filter(|l| trunctet::lengths_nondegenerate_oracle(l) == Ok(true))
        };
        let (Some(b), Some(w)) = (near(rng), near(rng)) else {
            continue;
        };
        let steps = trunctet::DEFAULT_STEPS;
        let legs = (
            trunctet::relative_volume_checked(&b, &a, steps),
            trunctet::relative_volume(&a, &b, steps),
            trunctet::relative_volume(&w, &a, steps),
            trunctet::relative_volume(&b, &w, steps),
        );
        let (Ok(ab), Ok(ba), Ok(aw), Ok(wb)) = legs else {
            tally.skip("path_left_domain");
            continue;
        };
        found += 1;
        let antisym = (ab.value + ba).abs();
        tally.extreme_max("max_antisymmetry", antisym);
        tally.extreme_max("max_richardson_gap", ab.richardson_gap);
        if !(antisym < 1e-9) {
            tally.fail();
            tally.count("antisymmetry_violated");
        }
        tally.residual((ab.value - (aw + wb)).abs());
    }
    tally.set_count("triangles", found);
    if found < n {
        tally.fail();
    }
    tally.finish()
}
