//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use mingraph_cli::commands::{demo_theorem, fit_exponent, level};
use mingraph_cli::config::ExperimentConfig;
use mingraph_core::grid::{DiskGrid, ScalarField};
use mingraph_core::harmonic::{sample, HarmonicSeed};
use mingraph_core::msolver::{ms_residual, nonlinearity_f, picard_run, IterationReport, PicardConfig};
use mingraph_core::poisson::{solve_dirichlet, PoissonProblem};

type Outcome = Result<(bool, String), String>;

const ORDER: (f64, f64) = (1.7, 2.3);

fn grid(h: f64) -> Arc<DiskGrid> {
    Arc::new(DiskGrid::new(h).expect("valid spacing"))
}

fn orders(spacings: &[f64], errors: &[f64]) -> Vec<f64> {
    spacings.windows(2).zip(errors.windows(2)).map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect()
}

fn sci(values: impl Iterator<Item = f64>) -> String {
    let parts: Vec<String> = values.map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn in_order_range(os: &[f64]) -> bool {
    os.iter().all(|o| (ORDER.0..=ORDER.1).contains(o))
}

fn poisson_engine() -> Outcome {
    let tol = 1e-10;
    let g = grid(0.02);
    let rhs = ScalarField::from_fn(&g, |_, _| -4.0).map_err(|e| e.to_string())?;
    let (w, _) = solve_dirichlet(&PoissonProblem::new(rhs), tol).map_err(|e| e.to_string())?;
    let exact = ScalarField::from_fn(&g, |x, y| 1.0 - x * x - y * y).map_err(|e| e.to_string())?;
    let quad = w.sub(&exact).map_err(|e| e.to_string())?.sup_norm();

    // u = φ q with φ = sin(πx) sin(πy), Δφ = -2π²φ, q = 1 - r², Δq = -4.
    let exact = |x: f64, y: f64| (PI * x).sin() * (PI * y).sin() * (1.0 - x * x - y * y);
    let rhs = |x: f64, y: f64| {
        let (sx, cx, sy, cy) = ((PI * x).sin(), (PI * x).cos(), (PI * y).sin(), (PI * y).cos());
        let (phi, q) = (sx * sy, 1.0 - x * x - y * y);
        -2.0 * PI * PI * phi * q - 4.0 * PI * (x * cx * sy + y * sx * cy) - 4.0 * phi
    };
    let spacings = [0.04, 0.02, 0.01];
    let mut errors = Vec::new();
    for &h in &spacings {
        let g = grid(h);
        let f = ScalarField::from_fn(&g, rhs).map_err(|e| e.to_string())?;
        let (w, _) = solve_dirichlet(&PoissonProblem::new(f), tol).map_err(|e| e.to_string())?;
        let u = ScalarField::from_fn(&g, exact).map_err(|e| e.to_string())?;
        errors.push(w.sub(&u).map_err(|e| e.to_string())?.sup_norm());
    }
    let os = orders(&spacings, &errors);
    Ok((quad < 1e-6 && in_order_range(&os), format!("1-r^2 error {quad:.2e}; product solution orders {os:.3?}")))
}

fn cubic_smallness() -> Outcome {
    let g = grid(0.02);
    let u = ScalarField::from_fn(&g, |x, y| 0.02 * (x * y + (1.5 * x).sin() * (1.5 * y).cosh())).map_err(|e| e.to_string())?;
    let base = nonlinearity_f(&u).map_err(|e| e.to_string())?.sup_norm();
    let mut ratios = Vec::new();
    for c in [0.1, 0.01] {
        let scaled = nonlinearity_f(&u.scale(c)).map_err(|e| e.to_string())?.sup_norm();
        ratios.push(scaled / base / (c * c * c));
    }
    Ok((ratios.iter().all(|r| (r - 1.0).abs() < 0.05), format!("|F(cu)|/(c^3 |F(u)|) for c = 0.1, 0.01: {ratios:.5?}")))
}

/// The iterate norms of one Picard run.
struct Trace {
    epsilon: f64,
    converged: bool,
    norms: Vec<f64>,
}

impl From<&IterationReport> for Trace {
    fn from(r: &IterationReport) -> Self {
        Trace { epsilon: r.epsilon, converged: r.converged, norms: r.iterate_norms() }
    }
}

fn induction_bound(traces: &[Trace]) -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for r in traces.iter().filter(|r| r.converged) {
        let norms = &r.norms;
        let first = *norms.first().ok_or("empty trace")?;
        if (first - r.epsilon / 2.0).abs() > 1e-12 * r.epsilon {
            return Ok((false, format!("|u_0| = {first:e} differs from epsilon/2 = {:e}", r.epsilon / 2.0)));
        }
        for &n in norms {
            worst = worst.max(n / r.epsilon);
        }
        count += 1;
    }
    Ok((count > 0 && worst < 1.0, format!("{count} converged runs, max |u_j|/epsilon = {worst:.6}")))
}

fn contraction_law(runs: &[(f64, IterationReport)]) -> Outcome {
    let rho = |eps: f64| runs.iter().find(|(e, _)| *e == eps).and_then(|(_, r)| r.rho_bar);
    match (rho(0.1), rho(0.05)) {
        (Some(a), Some(b)) => {
            let q = b / a;
            Ok(((0.15..=0.4).contains(&q), format!("rho_bar 0.1: {a:.3e}, 0.05: {b:.3e}, ratio {q:.4}")))
        }
        _ => Ok((false, "rho_bar not available".into())),
    }
}

fn deviation_law(runs: &[(f64, IterationReport)]) -> Outcome {
    let points: Vec<(f64, f64)> = runs.iter().map(|(e, r)| (*e, r.deviation_c0)).collect();
    match fit_exponent(points.iter().copied()) {
        Some(p) => Ok(((ORDER.0..=ORDER.1).contains(&p), format!("exponent {p:.4} from deviations {}", sci(points.iter().map(|q| q.1))))),
        None => Ok((false, "exponent not available".into())),
    }
}

fn demo_config(dir: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.grid.h = 0.005;
    cfg.picard.epsilon = 0.05;
    cfg.demo.target_c = 10.0;
    cfg.output.dir = dir.to_path_buf();
    cfg
}

fn read_trace(path: &Path) -> Result<Trace, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut norms = Vec::new();
    let mut last = None;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        match v["kind"].as_str() {
            Some("iteration") => norms.push(v["u_norm"].as_f64().ok_or("u_norm")?),
            Some("final") => last = Some(v),
            _ => return Err(format!("unexpected line {line}")),
        }
    }
    let last = last.ok_or("missing final line")?;
    let epsilon = last["epsilon"].as_f64().ok_or("epsilon")?;
    let converged = last["converged"].as_bool().ok_or("converged")?;
    if !norms.is_empty() {
        norms.push(last["final_u_norm"].as_f64().ok_or("final_u_norm")?);
    }
    Ok(Trace { epsilon, converged, norms })
}

fn demo_outcome(dir: &Path) -> Outcome {
    let s = demo_theorem(&demo_config(dir)).map_err(|e| e.to_string())?;
    let m = s.transversality_margin.unwrap_or(0.0);
    Ok((
        s.length > 10.0 && s.area <= s.area_bound && m > 0.0,
        format!("k = {}, length {:.4}, area {:.7} <= {:.7}, margin {m:.2e}", s.k, s.length, s.area, s.area_bound),
    ))
}

fn level_config(dir: &Path, curve: &str, degree: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.grid.h = 0.01;
    cfg.picard.epsilon = 0.05;
    cfg.level.curve = curve.into();
    cfg.level.degree = degree;
    cfg.output.dir = dir.to_path_buf();
    cfg
}

fn level_pipeline(root: &Path, traces: &mut Vec<Trace>) -> Outcome {
    let h = 0.01;
    let dir = root.join("segment");
    let seg = level(&level_config(&dir, "segment", 8)).map_err(|e| e.to_string())?;
    traces.push(read_trace(&dir.join("iterations.jsonl"))?);
    let seg_ok = seg.distance <= 10.0 * h;

    let floor = (0.05f64 * 0.05).max(h * h);
    let mut distances = Vec::new();
    for m in [4, 6, 8, 10, 12] {
        let dir = root.join(format!("arc-{m}"));
        let s = level(&level_config(&dir, "arc", m)).map_err(|e| e.to_string())?;
        traces.push(read_trace(&dir.join("iterations.jsonl"))?);
        distances.push(s.distance);
    }
    let arc_ok = distances.windows(2).all(|d| d[1] <= d[0] + floor);
    Ok((
        seg_ok && arc_ok,
        format!("segment {:.3e} <= {:.3e}; arc M = 4..12: {} (floor {floor:.1e})", seg.distance, 10.0 * h, sci(distances.iter().copied())),
    ))
}

fn scherk_residual() -> Outcome {
    let spacings = [0.04, 0.02, 0.01];
    let mut errors = Vec::new();
    for &h in &spacings {
        let g = grid(h);
        let u = ScalarField::from_fn(&g, |x, y| (x.cos() / y.cos()).ln()).map_err(|e| e.to_string())?;
        let r = ms_residual(&u).map_err(|e| e.to_string())?;
        let sup = g.nodes().iter().zip(r.values()).filter(|(n, _)| n.x.hypot(n.y) <= 0.9).fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        errors.push(sup);
    }
    let os = orders(&spacings, &errors);
    Ok((in_order_range(&os), format!("sup residual on r <= 0.9: {}, orders {os:.3?}", sci(errors.iter().copied()))))
}

fn determinism(root: &Path) -> Outcome {
    let a = root.join("demo-a");
    let b = root.join("demo-b");
    demo_theorem(&demo_config(&b)).map_err(|e| e.to_string())?;
    let read = |d: &Path| std::fs::read(d.join("summary.json")).map_err(|e| e.to_string());
    let (x, y) = (read(&a)?, read(&b)?);
    Ok((x == y, format!("summary.json {} and {} bytes, identical: {}", x.len(), y.len(), x == y)))
}

fn report(n: usize, name: &str, secs: f64, outcome: Outcome) -> bool {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    println!("{} criterion {n} {name}: {detail} [{secs:.1}s]", if passed { "PASS" } else { "FAIL" });
    passed
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let root = tempfile::tempdir().expect("temporary directory");
    let mut results = Vec::new();

    let (o, t) = timed(poisson_engine);
    results.push(report(1, "poisson", t, o));
    let (o, t) = timed(cubic_smallness);
    results.push(report(2, "cubic-smallness", t, o));

    // Shared by criteria 3 to 5.
    let (sweep, sweep_time) = timed(|| {
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &grid(0.01)).expect("stripe seed");
        [0.1, 0.05, 0.025]
            .into_iter()
            .map(|epsilon| (epsilon, picard_run(&v, &PicardConfig::with_epsilon(epsilon)).expect("picard run").report))
            .collect::<Vec<_>>()
    });

    // The runs behind criteria 6 and 7 also feed the induction check.
    let (demo, demo_time) = timed(|| demo_outcome(&root.path().join("demo-a")));
    let mut traces: Vec<Trace> = sweep.iter().map(|(_, r)| Trace::from(r)).collect();
    if let Ok(r) = read_trace(&root.path().join("demo-a").join("iterations.jsonl")) {
        traces.push(r);
    }
    let (level_result, level_time) = timed(|| level_pipeline(root.path(), &mut traces));

    let (o, t) = timed(|| induction_bound(&traces));
    results.push(report(3, "induction-bound", t, o));
    results.push(report(4, "contraction-law", sweep_time, contraction_law(&sweep)));
    results.push(report(5, "deviation-law", sweep_time, deviation_law(&sweep)));
    results.push(report(6, "demo-length", demo_time, demo));
    results.push(report(7, "level-pipeline", level_time, level_result));
    let (o, t) = timed(scherk_residual);
    results.push(report(8, "scherk-residual", t, o));
    let (o, t) = timed(|| determinism(root.path()));
    results.push(report(9, "determinism", t, o));

    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
