use mingraph_core::grid::{gradient, hessian, laplacian, NodeKind, ScalarField};
use mingraph_core::harmonic::{sample, HarmonicSeed};
use mingraph_core::msolver::{gamma_of, ms_residual, nonlinearity_f};
use mingraph_core::poisson::{solve_dirichlet, PoissonProblem};
use serde::{Deserialize, Serialize};

use super::{grid, Check};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::OutputDir;

const ORDER_RANGE: (f64, f64) = (1.7, 2.3);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    /// Grid spacings of the refinement study, if any.
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    /// Observed order between consecutive spacings.
    pub orders: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateSummary {
    pub poisson_tol: f64,
    pub measurements: Vec<Measurement>,
    pub checks: Vec<Check>,
}

fn orders(spacings: &[f64], errors: &[f64]) -> Vec<f64> {
    spacings.windows(2).zip(errors.windows(2)).map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect()
}

fn in_range(o: f64) -> bool {
    (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&o)
}

fn sup_where(f: &ScalarField, keep: impl Fn(f64, f64, NodeKind) -> bool) -> f64 {
    f.grid().nodes().iter().zip(f.values()).filter(|(n, _)| keep(n.x, n.y, n.kind)).fold(0.0, |m, (_, v)| m.max(v.abs()))
}

fn interior(_: f64, _: f64, kind: NodeKind) -> bool {
    kind == NodeKind::Interior
}

fn study(name: &str, spacings: &[f64], err: impl Fn(f64) -> CliResult<f64>) -> CliResult<Measurement> {
    let errors = spacings.iter().map(|&h| err(h)).collect::<CliResult<Vec<f64>>>()?;
    Ok(Measurement { name: name.into(), spacings: spacings.to_vec(), orders: orders(spacings, &errors), errors })
}

fn order_check(m: &Measurement) -> Check {
    let passed = m.orders.iter().all(|&o| in_range(o));
    Check::new(&format!("{}-order", m.name), passed, format!("orders {:?}, expected within {ORDER_RANGE:?}", m.orders))
}

/// The manufactured-solution suite: grid operators, Poisson solver, the
/// nonlinearity and the minimal-surface residual.
pub fn validate(cfg: &ExperimentConfig) -> CliResult<ValidateSummary> {
    cfg.validate()?;
    let out = OutputDir::create(&cfg.output.dir, cfg)?;
    let tol = cfg.picard.poisson_tol;
    let mut measurements = Vec::new();
    let mut checks = Vec::new();

    // Smooth test function with its exact derivatives.
    let f = |x: f64, y: f64| (2.0 * x).sin() * y.cosh() + x * y * y;
    let fx = |x: f64, y: f64| 2.0 * (2.0 * x).cos() * y.cosh() + y * y;
    let fxy = |x: f64, y: f64| 2.0 * (2.0 * x).cos() * y.sinh() + 2.0 * y;
    let lap = |x: f64, y: f64| -3.0 * (2.0 * x).sin() * y.cosh() + 2.0 * x;
    let coarse = [0.04, 0.02];

    let m = study("gradient", &coarse, |h| {
        let g = grid(h)?;
        let d = gradient(&ScalarField::from_fn(&g, f)?).component(0);
        Ok(sup_where(&d.sub(&ScalarField::from_fn(&g, fx)?)?, interior))
    })?;
    checks.push(order_check(&m));
    measurements.push(m);

    let m = study("hessian", &coarse, |h| {
        let g = grid(h)?;
        let hess = hessian(&ScalarField::from_fn(&g, f)?);
        let values: Vec<f64> = hess.values().iter().map(|v| v[1]).collect();
        let d = ScalarField::new(g.clone(), values, None)?;
        Ok(sup_where(&d.sub(&ScalarField::from_fn(&g, fxy)?)?, interior))
    })?;
    checks.push(order_check(&m));
    measurements.push(m);

    let m = study("laplacian", &coarse, |h| {
        let g = grid(h)?;
        let d = laplacian(&ScalarField::from_fn(&g, f)?);
        Ok(sup_where(&d.sub(&ScalarField::from_fn(&g, lap)?)?, interior))
    })?;
    checks.push(order_check(&m));
    measurements.push(m);

    // Quadratic solution: exact up to the solver tolerance.
    let g = grid(0.04)?;
    let (w, _) = solve_dirichlet(&PoissonProblem::new(ScalarField::from_fn(&g, |_, _| -4.0)?), tol)?;
    let err = w.sub(&ScalarField::from_fn(&g, |x, y| 1.0 - x * x - y * y)?)?.sup_norm();
    measurements.push(Measurement { name: "poisson-quadratic".into(), spacings: vec![0.04], errors: vec![err], orders: vec![] });
    checks.push(Check::new("poisson-quadratic", err < 1e-6, format!("max error {err:.3e} against 1 - r^2, expected < 1e-6")));

    let exact = |x: f64, y: f64| (2.0 * x).sin() * (2.0 * y).sin() * (1.0 - x * x - y * y);
    let rhs = |x: f64, y: f64| {
        let (s, q) = ((2.0 * x).sin() * (2.0 * y).sin(), 1.0 - x * x - y * y);
        -8.0 * s * q - 8.0 * (x * (2.0 * x).cos() * (2.0 * y).sin() + y * (2.0 * x).sin() * (2.0 * y).cos()) - 4.0 * s
    };
    let m = study("poisson", &[0.04, 0.02, 0.01], |h| {
        let g = grid(h)?;
        let (w, _) = solve_dirichlet(&PoissonProblem::new(ScalarField::from_fn(&g, rhs)?), tol)?;
        Ok(w.sub(&ScalarField::from_fn(&g, exact)?)?.sup_norm())
    })?;
    checks.push(order_check(&m));
    measurements.push(m);

    // F against the closed form for the paraboloid, where every stencil is exact.
    let g = grid(0.04)?;
    let para = nonlinearity_f(&ScalarField::from_fn(&g, |x, y| 0.5 * (x * x + y * y))?)?;
    let err = para.sub(&ScalarField::from_fn(&g, |x, y| (x * x + y * y) / (1.0 + x * x + y * y))?)?.sup_norm();
    measurements.push(Measurement { name: "f-paraboloid".into(), spacings: vec![0.04], errors: vec![err], orders: vec![] });
    checks.push(Check::new("f-paraboloid", err < 1e-8, format!("max error {err:.3e}, expected < 1e-8")));

    let g = grid(0.02)?;
    let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &g)?;
    let u = v.scale(gamma_of(&v, 0.1)?);
    let base = nonlinearity_f(&u)?.sup_norm();
    for c in [0.1, 0.01] {
        let ratio = nonlinearity_f(&u.scale(c))?.sup_norm() / base / (c * c * c);
        checks.push(Check::new(
            &format!("f-cubic-{c}"),
            (ratio - 1.0).abs() < 0.05,
            format!("|F(cu)| / (c^3 |F(u)|) = {ratio:.6}, expected within 5% of 1"),
        ));
    }

    let m = study("scherk-residual", &[0.04, 0.02, 0.01], |h| {
        let g = grid(h)?;
        let r = ms_residual(&ScalarField::from_fn(&g, |x, y| (x.cos() / y.cos()).ln())?)?;
        Ok(sup_where(&r, |x, y, _| x.hypot(y) <= 0.9))
    })?;
    checks.push(order_check(&m));
    measurements.push(m);

    let summary = ValidateSummary { poisson_tol: tol, measurements, checks };
    out.write_json("validate.json", &summary)?;
    Ok(summary)
}
