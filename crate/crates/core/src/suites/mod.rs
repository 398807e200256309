//! Seeded property suites behind `hyperpack verify`.
//!
//! Each suite draws from its own random stream derived from the run seed and
//! the suite name, so results do not depend on which other suites run.

mod global;
mod tet;

pub use global::{
    certificates, derivative_errors, derivative_stack, fd_hess_g, potential_path_independence,
    recovery_tolerance, regular_reference, solver_recovery, CertificateStats, SolverStats,
    FAN6_CENTRE_CURVATURE, REGULAR_EDGE_CURVATURE, REGULAR_VERTEX_CURVATURE,
};
pub use tet::{
    constant_weights, degenerate_set, dihedral_jacobian, discriminant_identity, f5_decomposition,
    face_sums, fd_dbeta_dl, fd_dbeta_dl_adaptive, length_oracle, oracle_equivalence,
    q1_q2_relation, q3_sign, rigidity_thresholds, schlafli_integrability, threshold_boundary,
    trichotomy, TrichotomyStats,
};

use crate::sampling::{stream, SampleRng};
use crate::trunctet::{TetWeights, WeightTier};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Result of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    /// What `worst` and `tolerance` measure.
    pub metric: String,
    pub checked: usize,
    /// Samples excluded from the comparison (see `counts` for reasons).
    pub skipped: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub counts: BTreeMap<String, usize>,
    /// Further named worst-case values.
    pub extremes: BTreeMap<String, f64>,
}

/// Accumulates checks for a [`SuiteOutcome`].
#[derive(Debug, Clone)]
pub struct Tally {
    outcome: SuiteOutcome,
}

impl Tally {
    pub fn new(name: &str, metric: &str, tolerance: f64) -> Self {
        Self {
            outcome: SuiteOutcome {
                name: name.to_string(),
                passed: true,
                metric: metric.to_string(),
                checked: 0,
                skipped: 0,
                failures: 0,
                worst: 0.0,
                tolerance,
                counts: BTreeMap::new(),
                extremes: BTreeMap::new(),
            },
        }
    }

    /// Records a residual that must not exceed the tolerance. NaN fails.
    pub fn residual(&mut self, r: f64) {
        self.outcome.checked += 1;
        if r.is_nan() || r > self.outcome.tolerance {
            self.outcome.failures += 1;
        }
        if r.is_nan() || r > self.outcome.worst {
            self.outcome.worst = r;
        }
    }

    /// Records a pass/fail check whose metric is tracked separately.
    pub fn check(&mut self, ok: bool) {
        self.outcome.checked += 1;
        if !ok {
            self.outcome.failures += 1;
        }
    }

    /// Tracks a worst-case value without counting a check.
    pub fn observe(&mut self, v: f64) {
        if v.is_nan() || v > self.outcome.worst {
            self.outcome.worst = v;
        }
    }

    pub fn skip(&mut self, reason: &str) {
        self.outcome.skipped += 1;
        self.count(reason);
    }

    pub fn count(&mut self, key: &str) {
        *self.outcome.counts.entry(key.to_string()).or_default() += 1;
    }

    pub fn set_count(&mut self, key: &str, n: usize) {
        self.outcome.counts.insert(key.to_string(), n);
    }

    /// Keeps the largest value seen under `key`.
    pub fn extreme_max(&mut self, key: &str, v: f64) {
        let e = self.outcome.extremes.entry(key.to_string()).or_insert(v);
        if v.is_nan() || v > *e {
            *e = v;
        }
    }

    /// Keeps the smallest value seen under `key`.
    pub fn extreme_min(&mut self, key: &str, v: f64) {
        let e = self.outcome.extremes.entry(key.to_string()).or_insert(v);
        if v.is_nan() || v < *e {
            *e = v;
        }
    }

    /// Forces failure regardless of the recorded checks.
    pub fn fail(&mut self) {
        self.outcome.failures += 1;
    }

    pub fn finish(mut self) -> SuiteOutcome {
        self.outcome.passed = self.outcome.failures == 0;
        self.outcome
    }
}

/// `|a − b| / max(1, |a|, |b|)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Sizes and hooks for a verify run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    /// `Q₃` as used by the decomposition suite; replaceable for mutation
    /// checks.
    pub q3: fn(&TetWeights) -> f64,
}

impl VerifyConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        Self {
            seed,
            samples: samples.max(1),
            q3: crate::trunctet::q3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

type SuiteFn = fn(&VerifyConfig, &mut SampleRng) -> SuiteOutcome;

/// Registered suites in run order, with their sample budgets derived from
/// `VerifyConfig::samples`.
pub const REGISTRY: &[(&str, SuiteFn)] = &[
    ("oracle_equivalence", |c, r| {
        oracle_equivalence(r, c.samples)
    }),
    ("length_oracle", |c, r| length_oracle(r, c.samples)),
    ("q1_q2_relation", |c, r| q1_q2_relation(r, c.samples)),
    ("f5_decomposition", |c, r| {
        f5_decomposition(r, c.samples, c.q3)
    }),
    ("discriminant_identity", |c, r| {
        discriminant_identity(r, c.samples)
    }),
    ("q3_sign", |c, r| q3_sign(r, c.samples, 6)),
    ("degenerate_set", |c, _| {
        degenerate_set(grid_side(c.samples))
    }),
    ("constant_weights", |c, r| constant_weights(r, c.samples)),
    ("face_sums", |c, r| face_sums(r, c.samples)),
    ("trichotomy_general", |c, r| {
        trichotomy(r, WeightTier::General, c.samples * 50, 0).0
    }),
    ("trichotomy_rigidity", |c, r| {
        trichotomy(r, WeightTier::Rigidity, c.samples * 50, 0).0
    }),
    ("rigidity_thresholds", |c, r| {
        rigidity_thresholds(r, c.samples)
    }),
    ("threshold_boundary", |c, r| {
        threshold_boundary(r, c.samples)
    }),
    ("dihedral_jacobian", |c, r| {
        dihedral_jacobian(r, c.samples.min(1000))
    }),
    ("schlafli_integrability", |c, r| {
        schlafli_integrability(r, c.samples.min(50))
    }),
    ("regular_reference", |_, _| regular_reference()),
    ("derivative_stack", |c, r| {
        derivative_stack(r, c.samples.min(200))
    }),
    ("certificates", |c, r| certificates(r, c.samples.min(100)).0),
    ("solver_recovery", |c, r| {
        solver_recovery(r, c.samples.min(50)).0
    }),
    ("potential_path_independence", |c, r| {
        potential_path_independence(r, c.samples.min(50))
    }),
];

/// Side of a four-dimensional radius grid with about `samples` points.
fn grid_side(samples: usize) -> usize {
    ((samples as f64).powf(0.25).round() as usize).max(2)
}

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// Runs one suite by name.
pub fn run_suite(config: &VerifyConfig, name: &str) -> Option<SuiteOutcome> {
    let (_, f) = REGISTRY.iter().find(|(n, _)| *n == name)?;
    let mut rng = stream(config.seed, name);
    let mut outcome = f(config, &mut rng);
    outcome.name = name.to_string();
    Some(outcome)
}

/// Runs every registered suite.
pub fn verify(config: &VerifyConfig) -> VerifyReport {
    let suites: Vec<SuiteOutcome> = REGISTRY
        .iter()
        .map(|(name, _)| run_suite(config, name).expect("registered"))
        .collect();
    VerifyReport {
        seed: config.seed,
        samples: config.samples,
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}
