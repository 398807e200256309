use crate::input::Loaded;
use crate::{Failure, Report, Table};
use hyperpack_core::complex::{validate_triangulation, RadiusMap, Triangulation};
use hyperpack_core::curvature::{
    curvature_report, evaluate_certificate, hess_g_terms, CertificateMode, MetricState,
};
use hyperpack_core::report::format_f64;
use hyperpack_core::solver::{newton_solve, SolveOptions};
use hyperpack_core::suites::{verify as run_suites, VerifyConfig};
use hyperpack_core::trunctet::{self, TetStatus, VolumeEstimate};
use hyperpack_core::{hyptrig, sampling};
use nalgebra::DMatrix;
use serde::Serialize;

fn num(v: f64) -> String {
    format_f64(v)
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> Table {
    Table {
        header: header.iter().map(|h| h.to_string()).collect(),
        rows,
    }
}

pub fn validate(t: &Triangulation) -> Result<Report, Failure> {
    let report = validate_triangulation(t)?;
    let rows = t
        .edges()
        .iter()
        .map(|e| {
            vec![
                e.id.to_string(),
                e.endpoints.0.to_string(),
                e.endpoints.1.to_string(),
                report.star_sizes[e.id].to_string(),
            ]
        })
        .collect();
    Ok(Report::new(
        &report,
        table(&["edge", "v", "w", "star_size"], rows),
    ))
}

#[derive(Serialize)]
struct EdgeLength {
    edge: usize,
    endpoints: (usize, usize),
    weight: f64,
    cosh_argument: f64,
    length: Option<f64>,
}

#[derive(Serialize)]
struct TetEntry {
    tet: usize,
    #[serde(flatten)]
    status: TetStatus,
}

#[derive(Serialize)]
struct LengthsReport {
    admissible: bool,
    edges: Vec<EdgeLength>,
    tets: Vec<TetEntry>,
}

fn tet_entries(state: &MetricState) -> Vec<TetEntry> {
    state
        .statuses()
        .iter()
        .enumerate()
        .map(|(tet, status)| TetEntry {
            tet,
            status: status.clone(),
        })
        .collect()
}

pub fn lengths(state: &MetricState) -> Result<Report, Failure> {
    let t = state.triangulation();
    let (w, r) = (state.weights().values(), state.radii().values());
    let edges: Vec<EdgeLength> = t
        .edges()
        .iter()
        .map(|e| EdgeLength {
            edge: e.id,
            endpoints: e.endpoints,
            weight: w[e.id],
            cosh_argument: hyptrig::pentagon_cosh_length(
                r[e.endpoints.0],
                r[e.endpoints.1],
                w[e.id].cos(),
            ),
            length: state.lengths()[e.id],
        })
        .collect();
    let rows = edges
        .iter()
        .map(|e| {
            vec![
                e.edge.to_string(),
                e.endpoints.0.to_string(),
                e.endpoints.1.to_string(),
                num(e.weight),
                num(e.cosh_argument),
                e.length.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let report = LengthsReport {
        admissible: state.is_admissible(),
        edges,
        tets: tet_entries(state),
    };
    Ok(Report::new(
        &report,
        table(
            &["edge", "v", "w", "weight", "cosh_argument", "length"],
            rows,
        ),
    ))
}

#[derive(Serialize)]
struct TetCheck {
    tet: usize,
    #[serde(flatten)]
    status: TetStatus,
    q2: f64,
    h: [f64; 4],
}

#[derive(Serialize)]
struct CheckReport {
    admissible: bool,
    always_degenerate: bool,
    undefined_edges: Vec<usize>,
    tets: Vec<TetCheck>,
}

pub fn check(state: &MetricState) -> Result<Report, Failure> {
    let t = state.triangulation();
    let tets: Vec<TetCheck> = t
        .tets()
        .iter()
        .zip(state.statuses())
        .map(|(tet, status)| {
            let radii = t.tet_radii(state.radii(), tet);
            let weights = t.tet_weights(state.weights(), tet);
            TetCheck {
                tet: tet.id,
                status: status.clone(),
                q2: trunctet::q2(&radii, &weights),
                h: trunctet::h_vector(&radii, &weights),
            }
        })
        .collect();
    let report = CheckReport {
        admissible: state.is_admissible(),
        always_degenerate: tets.iter().any(|c| c.status == TetStatus::AlwaysDegenerate),
        undefined_edges: (0..t.edges().len())
            .filter(|&e| state.lengths()[e].is_none())
            .collect(),
        tets,
    };
    let rows = report
        .tets
        .iter()
        .map(|c| {
            let status = serde_json::to_value(&c.status).expect("status serializes");
            let name = status["status"].as_str().unwrap_or_default().to_string();
            vec![c.tet.to_string(), name, num(c.q2)]
        })
        .collect();
    Ok(Report::new(&report, table(&["tet", "status", "q2"], rows)))
}

pub fn curvature(state: &MetricState) -> Result<Report, Failure> {
    let report = curvature_report(state)?;
    let mut rows: Vec<Vec<String>> = report
        .edge_curvature
        .iter()
        .enumerate()
        .map(|(e, k)| vec!["edge".into(), e.to_string(), num(*k)])
        .collect();
    rows.extend(
        report
            .vertex_curvature
            .iter()
            .enumerate()
            .map(|(v, k)| vec!["vertex".into(), v.to_string(), num(*k)]),
    );
    Ok(Report::new(
        &report,
        table(&["kind", "index", "curvature"], rows),
    ))
}

#[derive(Serialize)]
struct HessianReport {
    hessian: Vec<Vec<f64>>,
    ricci_term: Vec<Vec<f64>>,
    edge_term: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn hessian(state: &MetricState) -> Result<Report, Failure> {
    let (first, second) = hess_g_terms(state)?;
    let full = &first + &second;
    let mut eigenvalues: Vec<f64> = full.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let report = HessianReport {
        hessian: rows_of(&full),
        ricci_term: rows_of(&first),
        edge_term: rows_of(&second),
        eigenvalues,
    };
    let n = report.hessian.len();
    let header: Vec<String> = std::iter::once("row".to_string())
        .chain((0..n).map(|j| format!("c{j}")))
        .collect();
    let rows = report
        .hessian
        .iter()
        .enumerate()
        .map(|(i, r)| {
            std::iter::once(i.to_string())
                .chain(r.iter().map(|v| num(*v)))
                .collect()
        })
        .collect();
    Ok(Report::new(&report, Table { header, rows }))
}

fn ids(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn certify(state: &MetricState, mode: CertificateMode) -> Result<Report, Failure> {
    let c = evaluate_certificate(state, mode)?;
    let rows = vec![vec![
        label(&c.mode),
        label(&c.verdict),
        num(c.lambda_min),
        num(c.lambda_max),
        num(c.threshold),
        ids(&c.hypotheses.weight_edges),
        ids(&c.hypotheses.curvature_edges),
    ]];
    let header = [
        "mode",
        "verdict",
        "lambda_min",
        "lambda_max",
        "threshold",
        "weight_edges",
        "curvature_edges",
    ];
    Ok(Report::new(&c, table(&header, rows)))
}

/// Snake-case name of a unit enum variant, via its serde form.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn solve(
    state: &MetricState,
    target: Vec<f64>,
    tol: Option<f64>,
    max_iterations: Option<usize>,
) -> Result<Report, Failure> {
    let defaults = SolveOptions::default();
    let opts = SolveOptions {
        residual_tol: tol.unwrap_or(defaults.residual_tol),
        max_iterations: max_iterations.unwrap_or(defaults.max_iterations),
        ..defaults
    };
    let result = newton_solve(state, &target, &opts)?;
    let rows = result
        .radii
        .iter()
        .zip(&target)
        .enumerate()
        .map(|(v, (r, k))| vec![v.to_string(), num(*r), num(*k)])
        .collect();
    let ok = result.converged();
    if !ok {
        eprintln!("solve did not converge: {:?}", result.termination);
    }
    let mut report = Report::new(&result, table(&["vertex", "radius", "target"], rows));
    report.ok = ok;
    Ok(report)
}

#[derive(Serialize)]
struct BoundaryPoint {
    /// `tanh r` per tet vertex, with the apex entry set to the threshold.
    t: [f64; 4],
    threshold: f64,
    /// Whether the threshold lies in `(0, 1)`, i.e. is reached by radii.
    in_range: bool,
}

#[derive(Serialize)]
struct SampleReport {
    tet: usize,
    apex: usize,
    seed: u64,
    draws: usize,
    in_range: usize,
    out_of_range: usize,
    no_region: usize,
    points: Vec<BoundaryPoint>,
}

pub fn sample(
    loaded: &Loaded,
    apex: usize,
    tet: usize,
    seed: u64,
    draws: usize,
) -> Result<Report, Failure> {
    if apex >= 4 {
        return Err(Failure::Input(format!("apex must be 0..4, got {apex}")));
    }
    let t = &loaded.triangulation;
    let weights = loaded.weights()?;
    weights.check_against(t)?;
    let tw = t.tet_weights(weights, t.tet(tet)?);
    let mut rng = sampling::stream(seed, "sample");
    let mut report = SampleReport {
        tet,
        apex,
        seed,
        draws,
        in_range: 0,
        out_of_range: 0,
        no_region: 0,
        points: Vec::new(),
    };
    for _ in 0..draws {
        let mut coords: [f64; 4] = std::array::from_fn(|_| sampling::radius(&mut rng).tanh());
        let Some(threshold) = trunctet::v_threshold_from_tanh(apex, coords, &tw) else {
            report.no_region += 1;
            continue;
        };
        coords[apex] = threshold;
        let in_range = threshold > 0.0 && threshold < 1.0;
        if in_range {
            report.in_range += 1;
        } else {
            report.out_of_range += 1;
        }
        report.points.push(BoundaryPoint {
            t: coords,
            threshold,
            in_range,
        });
    }
    let rows = report
        .points
        .iter()
        .map(|p| {
            p.t.iter()
                .map(|v| num(*v))
                .chain([p.in_range.to_string()])
                .collect()
        })
        .collect();
    Ok(Report::new(
        &report,
        table(&["t0", "t1", "t2", "t3", "in_range"], rows),
    ))
}

#[derive(Serialize)]
struct TetVolume {
    tet: usize,
    #[serde(flatten)]
    estimate: VolumeEstimate,
}

#[derive(Serialize)]
struct VolumeReport {
    total: f64,
    converged: bool,
    tets: Vec<TetVolume>,
}

pub fn volume(state: &MetricState, reference: &RadiusMap, steps: usize) -> Result<Report, Failure> {
    state.require_admissible()?;
    let base = state.with_radii(reference.clone())?;
    base.require_admissible()?;
    let t = state.triangulation();
    let mut tets = Vec::new();
    for tet in t.tets() {
        let w = t.tet_weights(state.weights(), tet);
        let here = trunctet::lengths_from_radii(&t.tet_radii(state.radii(), tet), &w)?;
        let there = trunctet::lengths_from_radii(&t.tet_radii(reference, tet), &w)?;
        let estimate = trunctet::relative_volume_checked(&here, &there, steps)?;
        tets.push(TetVolume {
            tet: tet.id,
            estimate,
        });
    }
    let report = VolumeReport {
        total: tets.iter().map(|v| v.estimate.value).sum(),
        converged: tets.iter().all(|v| v.estimate.converged),
        tets,
    };
    let rows = report
        .tets
        .iter()
        .map(|v| {
            let e = &v.estimate;
            vec![
                v.tet.to_string(),
                num(e.value),
                num(e.coarse),
                num(e.richardson_gap),
                e.converged.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(
        &report,
        table(
            &["tet", "value", "coarse", "richardson_gap", "converged"],
            rows,
        ),
    ))
}

pub fn verify(seed: u64, samples: usize) -> Report {
    let result = run_suites(&VerifyConfig::new(seed, samples));
    let rows = result
        .suites
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.passed.to_string(),
                s.metric.clone(),
                num(s.worst),
                num(s.tolerance),
                s.checked.to_string(),
                s.skipped.to_string(),
                s.failures.to_string(),
            ]
        })
        .collect();
    let header = [
        "suite",
        "passed",
        "metric",
        "worst",
        "tolerance",
        "checked",
        "skipped",
        "failures",
    ];
    let mut report = Report::new(&result, table(&header, rows));
    report.ok = result.passed;
    report
}
