//! Suites on metric states over the bundled triangulations.

use super::{rel_err, SuiteOutcome, Tally};
use crate::complex::{double4, fan6, fujii2, RadiusMap, Triangulation, WeightMap};
use crate::curvature::{
    curvature_report, evaluate_certificate, hess_g, scalar_curvature, CertificateMode, MetricState,
    Verdict,
};
use crate::hyptrig;
use crate::sampling::{self, SampleRng};
use crate::solver::{newton_solve, relative_potential, SolveOptions};
use crate::trunctet::{self, WeightTier};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Ricci curvature of a double4 edge with zero weights and unit radii.
pub const REGULAR_EDGE_CURVATURE: f64 = 4.370_801_794_047_444;
/// Scalar curvature of a double4 vertex in the same state.
pub const REGULAR_VERTEX_CURVATURE: f64 = 13.112_405_382_142_332;
/// Ricci curvature of the fan6 central edge in the same state.
pub const FAN6_CENTRE_CURVATURE: f64 = 0.546_034_767_783_159;

const SAMPLER_TRIES: usize = 100_000;

/// Curvature tolerance for recovering `goal` to within about 1e-9 in radii.
///
/// A residual `τ` pins radii to roughly `τ / λ_min(−Hess G)`, and `λ_min`
/// drops to about 5e-4 when radii approach 5, so the default 1e-10 is too
/// loose there. Near an undefined edge the Hessian is stiff instead and one
/// ulp of radius moves `K` by `ε λ_max ‖r‖∞`; the tolerance never goes below
/// that floor.
pub fn recovery_tolerance(goal: &MetricState) -> crate::Result<f64> {
    let eig = (-hess_g(goal)?).symmetric_eigenvalues();
    let radius = goal.radii().values().iter().fold(0f64, |m, r| m.max(*r));
    let pinned = (1e-9 * eig.min()).min(SolveOptions::default().residual_tol);
    let floor = 4.0 * f64::EPSILON * eig.max() * radius;
    Ok(pinned.max(floor))
}

fn unit_state(t: &Triangulation) -> MetricState<'_> {
    MetricState::new(
        t,
        WeightMap::constant(t.edges().len(), 0.0).expect("zero weights"),
        RadiusMap::constant(t.vertex_count(), 1.0).expect("unit radii"),
    )
    .expect("sizes match")
}

/// Fixed curvature values of the tangential unit-radius states, and the
/// link identity `K_v = 2πχ + Area` on every fixture with link data.
pub fn regular_reference() -> SuiteOutcome {
    let mut tally = Tally::new("regular_reference", "absolute error", 1e-5);
    let d4 = double4();
    match curvature_report(&unit_state(&d4)) {
        Ok(rep) => {
            for k in &rep.edge_curvature {
                tally.residual((k - REGULAR_EDGE_CURVATURE).abs());
            }
            for k in &rep.vertex_curvature {
                tally.residual((k - REGULAR_VERTEX_CURVATURE).abs());
            }
            for link in rep.link_checks.iter().flatten() {
                tally.residual(link.gap);
            }
        }
        Err(_) => tally.fail(),
    }
    let f6 = fan6();
    match curvature_report(&unit_state(&f6)) {
        Ok(rep) => tally.residual((rep.edge_curvature[0] - FAN6_CENTRE_CURVATURE).abs()),
        Err(_) => tally.fail(),
    }
    let f2 = fujii2();
    match curvature_report(&unit_state(&f2)) {
        Ok(rep) => {
            for link in rep.link_checks.iter().flatten() {
                tally.residual(link.gap);
            }
        }
        Err(_) => tally.fail(),
    }
    tally.finish()
}

/// Normwise `max|a − b| / max(1, max|a|)`.
fn mat_rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / 1f64.max(a.amax())
}

/// Central differences of the scalar curvature in the radii, step `h`.
pub fn fd_hess_g(state: &MetricState, h: f64) -> crate::Result<DMatrix<f64>> {
    let n = state.triangulation().vertex_count();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let shifted = |d: f64| -> crate::Result<Vec<f64>> {
            let mut r = state.radii().values().to_vec();
            r[j] += d;
            scalar_curvature(&state.with_radii(RadiusMap::new(r)?)?)
        };
        let (p, m) = (shifted(h)?, shifted(-h)?);
        for i in 0..n {
            out[(i, j)] = (p[i] - m[i]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// Analytic derivatives against central differences on one state, recording
/// the worst relative error of each layer. Steps shrink with the shortest
/// edge, since derivatives grow like `1 / sinh l` near the length domain
/// boundary.
pub fn derivative_errors(state: &MetricState, tally: &mut Tally) {
    let l_min = state
        .lengths()
        .iter()
        .flatten()
        .fold(1f64, |m, &l| m.min(l));
    let h_step = 1e-6 * l_min;
    let t = state.triangulation();
    let r = state.radii().values();
    let w = state.weights().values();
    for e in t.edges() {
        let (v, u) = e.endpoints;
        let (ri, rj, phi) = (r[v], r[u], w[e.id]);
        let len = |a: f64, b: f64| hyptrig::pentagon_edge_length(a, b, phi);
        let theta = |a: f64, b: f64| hyptrig::pentagon_cosh_theta(a, b, phi);
        let fd = (|| -> crate::Result<([f64; 2], [f64; 4])> {
            let dl = [
                (len(ri + h_step, rj)? - len(ri - h_step, rj)?) / (2.0 * h_step),
                (len(ri, rj + h_step)? - len(ri, rj - h_step)?) / (2.0 * h_step),
            ];
            let dd = [
                (theta(ri + h_step, rj)? - theta(ri - h_step, rj)?) / (2.0 * h_step),
                (theta(ri, rj + h_step)? - theta(ri, rj - h_step)?) / (2.0 * h_step),
                (theta(rj + h_step, ri)? - theta(rj - h_step, ri)?) / (2.0 * h_step),
                (theta(rj, ri + h_step)? - theta(rj, ri - h_step)?) / (2.0 * h_step),
            ];
            Ok((dl, dd))
        })();
        let Ok((dl, dd)) = fd else {
            tally.skip("fd_left_domain");
            continue;
        };
        let (Ok(ti), Ok(tj), Ok(hess)) = (
            theta(ri, rj),
            theta(rj, ri),
            trunctet::hess_edge_length(ri, rj, phi),
        ) else {
            tally.fail();
            continue;
        };
        let cosh_theta_err = rel_err(ti, dl[0]).max(rel_err(tj, dl[1]));
        tally.extreme_max("cosh_theta", cosh_theta_err);
        tally.residual(cosh_theta_err);
        let hess_err = [
            rel_err(hess[(0, 0)], dd[0]),
            rel_err(hess[(0, 1)], dd[1]),
            rel_err(hess[(1, 1)], dd[2]),
            rel_err(hess[(1, 0)], dd[3]),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        tally.extreme_max("hess_edge_length", hess_err);
        tally.residual(hess_err);
    }
    for rec in t.tets() {
        let radii = t.tet_radii(state.radii(), rec);
        let weights = t.tet_weights(state.weights(), rec);
        let Ok(analytic) = trunctet::dl_dr(&radii, &weights) else {
            tally.fail();
            continue;
        };
        let fd = (|| -> crate::Result<DMatrix<f64>> {
            let mut m = DMatrix::zeros(4, 6);
            for a in 0..4 {
                let mut p = radii.values();
                let mut q = radii.values();
                p[a] += h_step;
                q[a] -= h_step;
                let lp = trunctet::lengths_from_radii(&trunctet::TetRadii::new(p)?, &weights)?;
                let lq = trunctet::lengths_from_radii(&trunctet::TetRadii::new(q)?, &weights)?;
                for s in 0..6 {
                    m[(a, s)] = (lp.values()[s] - lq.values()[s]) / (2.0 * h_step);
                }
            }
            Ok(m)
        })();
        match fd {
            Ok(fd) => {
                let analytic = DMatrix::from_column_slice(4, 6, analytic.as_slice());
                let err = mat_rel(&analytic, &fd);
                tally.extreme_max("dl_dr", err);
                tally.residual(err);
            }
            Err(_) => tally.skip("fd_left_domain"),
        }
    }
    match (hess_g(state), fd_hess_g(state, 1e-5 * l_min)) {
        (Ok(h), Ok(fd)) => {
            tally.extreme_max("hess_g_asymmetry", (&h - h.transpose()).amax());
            let err = mat_rel(&h, &fd);
            tally.extreme_max("hess_g", err);
            tally.residual(err);
        }
        (Ok(_), Err(_)) => tally.skip("fd_left_domain"),
        (Err(_), _) => tally.fail(),
    }
}

/// `cosh θ`, `∂l/∂r`, the edge-length Hessian and the curvature Hessian
/// against finite differences on `n` admissible general-tier states,
/// alternating double4 and fan6.
pub fn derivative_stack(rng: &mut SampleRng, n: usize) -> SuiteOutcome {
    let mut tally = Tally::new("derivative_stack", "finite-difference relative error", 1e-5);
    let fixtures = [double4(), fan6()];
    let mut states = 0;
    for k in 0..n {
        let t = &fixtures[k % 2];
        let Some(state) = sampling::admissible_state(rng, t, WeightTier::General, SAMPLER_TRIES)
        else {
            tally.fail();
            tally.count("sampler_exhausted");
            continue;
        };
        states += 1;
        derivative_errors(&state, &mut tally);
    }
    tally.set_count("states", states);
    tally.finish()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateStats {
    pub scalar_states: usize,
    pub scalar_certified: usize,
    pub ricci_certified_on_scalar_states: usize,
    pub ricci_states: usize,
    pub ricci_certified: usize,
    pub max_lambda_scalar: f64,
    pub max_lambda_ricci: f64,
}

/// On `n` rigidity-tier admissible states with `K_e sin²Φ_e ≥ 0` both
/// certificates hold; on `n` further states without the sign condition the
/// Ricci certificate holds. States alternate double4 and fan6.
pub fn certificates(rng: &mut SampleRng, n: usize) -> (SuiteOutcome, CertificateStats) {
    let mut tally = Tally::new("certificates", "uncertified count", 0.0);
    let mut stats = CertificateStats {
        max_lambda_scalar: f64::NEG_INFINITY,
        max_lambda_ricci: f64::NEG_INFINITY,
        ..Default::default()
    };
    let fixtures = [double4(), fan6()];
    let mut certify = |state: &MetricState, mode: CertificateMode, tally: &mut Tally| -> bool {
        match evaluate_certificate(state, mode) {
            Ok(c) => {
                let slot = match mode {
                    CertificateMode::Scalar => &mut stats.max_lambda_scalar,
                    CertificateMode::Ricci => &mut stats.max_lambda_ricci,
                };
                *slot = slot.max(c.lambda_max);
                let ok = c.verdict == Verdict::Certified && c.lambda_max < 0.0;
                tally.residual(if ok { 0.0 } else { 1.0 });
                ok
            }
            Err(_) => {
                tally.fail();
                false
            }
        }
    };
    let mut counts = (0, 0, 0, 0, 0);
    for k in 0..n {
        let t = &fixtures[k % 2];
        match sampling::admissible_state_with_curvature_sign(
            rng,
            t,
            WeightTier::Rigidity,
            SAMPLER_TRIES,
        ) {
            Some(s) => {
                counts.0 += 1;
                counts.1 += usize::from(certify(&s, CertificateMode::Scalar, &mut tally));
                counts.2 += usize::from(certify(&s, CertificateMode::Ricci, &mut tally));
            }
            None => tally.fail(),
        }
    }
    for k in 0..n {
        let t = &fixtures[k % 2];
        match sampling::admissible_state(rng, t, WeightTier::Rigidity, SAMPLER_TRIES) {
            Some(s) => {
                counts.3 += 1;
                counts.4 += usize::from(certify(&s, CertificateMode::Ricci, &mut tally));
            }
            None => tally.fail(),
        }
    }
    stats.scalar_states = counts.0;
    stats.scalar_certified = counts.1;
    stats.ricci_certified_on_scalar_states = counts.2;
    stats.ricci_states = counts.3;
    stats.ricci_certified = counts.4;
    tally.observe(stats.max_lambda_scalar.max(stats.max_lambda_ricci));
    tally.set_count("scalar_states", stats.scalar_states);
    tally.set_count("ricci_states", stats.ricci_states);
    (tally.finish(), stats)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub trials: usize,
    pub recovered: usize,
    pub max_iterations: usize,
    pub max_radius_error: f64,
    pub max_double_start_gap: f64,
    pub max_quadratic_ratio: f64,
    pub potential_decreases: usize,
    pub certified: usize,
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Construct-and-recover trials on double4: a random rigidity-tier state
/// with `K_e sin²Φ_e ≥ 0` fixes the target, Newton starts from two 10%
/// multiplicative perturbations, and both runs must return the original
/// radii within 30 iterations.
pub fn solver_recovery(rng: &mut SampleRng, n: usize) -> (SuiteOutcome, SolverStats) {
    let mut tally = Tally::new("solver_recovery", "radius error", 1e-8);
    let mut stats = SolverStats::default();
    let t = double4();
    for _ in 0..n {
        let Some(goal) = sampling::admissible_state_with_curvature_sign(
            rng,
            &t,
            WeightTier::Rigidity,
            SAMPLER_TRIES,
        ) else {
            tally.fail();
            continue;
        };
        stats.trials += 1;
        let target = scalar_curvature(&goal).expect("admissible");
        let Ok(residual_tol) = recovery_tolerance(&goal) else {
            tally.fail();
            continue;
        };
        let opts = SolveOptions {
            residual_tol,
            ..SolveOptions::default()
        };
        let mut start = || loop {
            let r = sampling::perturb(rng, goal.radii(), 0.1);
            if let Ok(s) = goal.with_radii(r) {
                if s.is_admissible() {
                    break s;
                }
            }
        };
        let (s1, s2) = (start(), start());
        let (Ok(a), Ok(b)) = (
            newton_solve(&s1, &target, &opts),
            newton_solve(&s2, &target, &opts),
        ) else {
            tally.fail();
            continue;
        };
        for run in [&a, &b] {
            let err = max_diff(&run.radii, goal.radii().values());
            stats.max_radius_error = stats.max_radius_error.max(err);
            stats.max_iterations = stats.max_iterations.max(run.iterations);
            stats.certified += usize::from(run.certified);
            let ok = run.converged() && run.iterations <= 30;
            if !ok {
                tally.fail();
                tally.count("not_converged_in_30");
            }
            tally.residual(err);
            let h = &run.residual_history;
            let tail = h.len().saturating_sub(4);
            for w in h[tail..].windows(2) {
                if w[0] > 0.0 && w[1] > 0.0 {
                    stats.max_quadratic_ratio = stats.max_quadratic_ratio.max(w[1] / (w[0] * w[0]));
                }
            }
            for w in run.iterates.windows(2) {
                let (Ok(p), Ok(q)) = (
                    goal.with_radii(RadiusMap::new(w[0].clone()).expect("iterate")),
                    goal.with_radii(RadiusMap::new(w[1].clone()).expect("iterate")),
                ) else {
                    continue;
                };
                let Ok(dg) = relative_potential(&p, &q, 16) else {
                    continue;
                };
                let drift: f64 = target
                    .iter()
                    .zip(w[1].iter().zip(&w[0]))
                    .map(|(k, (b, a))| k * (b - a))
                    .sum();
                if dg - drift < -1e-9 * (1.0 + dg.abs()) {
                    stats.potential_decreases += 1;
                }
            }
        }
        if a.converged() && b.converged() {
            stats.recovered += 1;
        }
        let gap = max_diff(&a.radii, &b.radii);
        stats.max_double_start_gap = stats.max_double_start_gap.max(gap);
        if !(gap < 1e-7) {
            tally.fail();
            tally.count("double_start_disagree");
        }
    }
    if !stats.max_quadratic_ratio.is_finite() {
        tally.fail();
    }
    if stats.potential_decreases > 0 {
        tally.fail();
    }
    tally.set_count("trials", stats.trials);
    tally.set_count("recovered", stats.recovered);
    tally.set_count("max_iterations", stats.max_iterations);
    tally.set_count("potential_decreases", stats.potential_decreases);
    tally.extreme_max("max_double_start_gap", stats.max_double_start_gap);
    tally.extreme_max("max_quadratic_ratio", stats.max_quadratic_ratio);
    (tally.finish(), stats)
}

const POTENTIAL_STEPS: usize = 32;

/// The radius-space potential is antisymmetric and path independent on
/// double4 waypoint triangles.
pub fn potential_path_independence(rng: &mut SampleRng, n: usize) -> SuiteOutcome {
    let mut tally = Tally::new(
        "potential_path_independence",
        "relative path residual",
        1e-6,
    );
    let t = double4();
    let mut done = 0;
    let mut draws = 0;
    while done < n && draws < 1000 * n.max(1) {
        draws += 1;
        let Some(a) = sampling::admissible_state(rng, &t, WeightTier::Rigidity, SAMPLER_TRIES)
        else {
            break;
        };
        let b = a
            .with_radii(sampling::perturb(rng, a.radii(), 0.1))
            .expect("sizes match");
        let m = a
            .with_radii(sampling::perturb(rng, a.radii(), 0.1))
            .expect("sizes match");
        let legs = (
            relative_potential(&a, &b, POTENTIAL_STEPS),
            relative_potential(&b, &a, POTENTIAL_STEPS),
            relative_potential(&a, &m, POTENTIAL_STEPS),
            relative_potential(&m, &b, POTENTIAL_STEPS),
        );
        let (Ok(ab), Ok(ba), Ok(am), Ok(mb)) = legs else {
            tally.skip("path_left_domain");
            continue;
        };
        done += 1;
        let antisym = (ab + ba).abs();
        tally.extreme_max("max_antisymmetry", antisym);
        if !(antisym < 1e-9) {
            tally.fail();
        }
        let scale = 1f64.max(ab.abs()).max(am.abs()).max(mb.abs());
        tally.residual((ab - am - mb).abs() / scale);
    }
    tally.set_count("triangles", done);
    if done < n {
        tally.fail();
    }
    tally.finish()
}
