//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use hyperpack_core::sampling::stream;
use hyperpack_core::suites::{
    certificates, constant_weights, degenerate_set, derivative_stack, dihedral_jacobian,
    discriminant_identity, oracle_equivalence, regular_reference, schlafli_integrability,
    solver_recovery, trichotomy, SuiteOutcome,
};
use hyperpack_core::trunctet::WeightTier;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn suite(o: &SuiteOutcome) -> Self {
        let mut detail = format!(
            "{} worst={:e} tol={:e} checked={} skipped={} failures={}",
            o.metric, o.worst, o.tolerance, o.checked, o.skipped, o.failures
        );
        for (k, v) in &o.counts {
            detail.push_str(&format!(" {k}={v}"));
        }
        Self {
            passed: o.passed,
            detail,
        }
    }

    fn and(mut self, ok: bool, note: String) -> Self {
        self.passed &= ok;
        if !note.is_empty() {
            self.detail.push_str(&format!(" {note}"));
        }
        self
    }
}

fn c1() -> Verdict {
    let start = Instant::now();
    let o = oracle_equivalence(&mut stream(0, "oracle_equivalence"), 100_000);
    let elapsed = start.elapsed();
    Verdict::suite(&o).and(
        elapsed < Duration::from_secs(30),
        format!("runtime={:.2}s", elapsed.as_secs_f64()),
    )
}

fn c2() -> Verdict {
    Verdict::suite(&discriminant_identity(
        &mut stream(0, "discriminant_identity"),
        100_000,
    ))
}

fn c3() -> Verdict {
    let o = degenerate_set(10);
    Verdict::suite(&o).and(o.checked >= 3 * 10_000, "grid=10^4 per pattern".into())
}

fn c4() -> Verdict {
    let o = constant_weights(&mut stream(0, "constant_weights"), 10_000);
    Verdict::suite(&o).and(o.checked >= 5 * 10_000, String::new())
}

fn c5() -> Verdict {
    let (o, stats) = trichotomy(
        &mut stream(0, "trichotomy_rigidity"),
        WeightTier::Rigidity,
        2_000_000,
        1000,
    );
    Verdict::suite(&o).and(
        stats.two_nonpositive == 0,
        format!("found={} need=1000", stats.degenerate),
    )
}

fn c6() -> Verdict {
    Verdict::suite(&dihedral_jacobian(
        &mut stream(0, "dihedral_jacobian"),
        1000,
    ))
}

fn c7() -> Verdict {
    Verdict::suite(&derivative_stack(&mut stream(0, "derivative_stack"), 200))
}

fn c8() -> Verdict {
    Verdict::suite(&regular_reference())
}

fn c9() -> Verdict {
    let (o, stats) = certificates(&mut stream(0, "certificates"), 100);
    let ok = stats.scalar_states == 100
        && stats.scalar_certified == 100
        && stats.ricci_states == 100
        && stats.ricci_certified == 100;
    Verdict::suite(&o).and(
        ok,
        format!(
            "scalar={}/{} ricci={}/{} max_lambda_scalar={:e} max_lambda_ricci={:e}",
            stats.scalar_certified,
            stats.scalar_states,
            stats.ricci_certified,
            stats.ricci_states,
            stats.max_lambda_scalar,
            stats.max_lambda_ricci
        ),
    )
}

fn c10() -> Verdict {
    let (o, stats) = solver_recovery(&mut stream(0, "solver_recovery"), 50);
    let ok = stats.trials == 50
        && stats.recovered == 50
        && stats.max_iterations <= 30
        && stats.max_radius_error < 1e-8
        && stats.max_double_start_gap < 1e-7;
    Verdict::suite(&o).and(
        ok,
        format!(
            "recovered={}/{} max_iterations={} max_radius_error={:e} max_double_start_gap={:e}",
            stats.recovered,
            stats.trials,
            stats.max_iterations,
            stats.max_radius_error,
            stats.max_double_start_gap
        ),
    )
}

fn c11() -> Verdict {
    let o = schlafli_integrability(&mut stream(0, "schlafli_integrability"), 50);
    let extremes: Vec<String> = o
        .extremes
        .iter()
        .map(|(k, v)| format!("{k}={v:e}"))
        .collect();
    Verdict::suite(&o).and(o.checked >= 50, extremes.join(" "))
}

fn c12() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hyperpack"))
            .args(["verify", "--seed", "0"])
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => Verdict {
            passed: !a.stdout.is_empty() && a.stdout == b.stdout,
            detail: format!(
                "bytes={} identical={}",
                a.stdout.len(),
                a.stdout == b.stdout
            ),
        },
        (Err(e), _) | (_, Err(e)) => Verdict {
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", c1),
        ("discriminant identity", c2),
        ("degenerate weight set", c3),
        ("constant weights nondegenerate", c4),
        ("trichotomy in the rigidity tier", c5),
        ("dihedral jacobian", c6),
        ("derivative stack", c7),
        ("regular double4 reference", c8),
        ("rigidity certificates", c9),
        ("solver recovery", c10),
        ("schlafli integrability", c11),
        ("verify determinism", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.passed {
            failed += 1;
        }
        println!(
            "{} C{:<2} {name}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
