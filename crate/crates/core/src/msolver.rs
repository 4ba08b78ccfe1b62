//! The minimal surface equation `Δu = F(u)` and the Picard iteration that promotes a
//! small harmonic seed to an exact minimal graph.
//!
//! Starting from `u_0 = γ v` with `γ = ε / (2 ‖v‖_{C²})`, each step solves
//! `Δw_j = F(u_j)` with `w_j = 0` on the circle and sets `u_{j+1} = γ v + w_j`.
//! The returned scaling `λ = 1/γ` makes `λ u` comparable to the seed `v`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ck_norm, gradient, hessian, laplacian, ScalarField};
use crate::poisson::{assemble, LinearSolveStats, DEFAULT_TOLERANCE};

/// `F(u) = ½ ∇u·∇log(1+|∇u|²)`, evaluated in the expanded form
/// `∇uᵀ H ∇u / (1 + |∇u|²)`. Fails only if the result overflows.
pub fn nonlinearity_f(u: &ScalarField) -> Result<ScalarField> {
    let grad = gradient(u);
    let hess = hessian(u);
    let values = grad
        .values()
        .iter()
        .zip(hess.values())
        .map(|(&[gx, gy], &[hxx, hxy, hyy])| {
            (gx * gx * hxx + 2.0 * gx * gy * hxy + gy * gy * hyy) / (1.0 + gx * gx + gy * gy)
        })
        .collect();
    ScalarField::new(u.grid().clone(), values, None)
}

/// `Δu − F(u)` at every node.
pub fn ms_residual(u: &ScalarField) -> Result<ScalarField> {
    laplacian(u).sub(&nonlinearity_f(u)?)
}

/// `div(∇u / √(1+|∇u|²))` by differencing the flux; equals `(Δu − F(u)) / √(1+|∇u|²)`.
pub fn divergence_residual(u: &ScalarField) -> ScalarField {
    let grad = gradient(u);
    let grid = u.grid().clone();
    let flux = |axis: usize| {
        let values = grad.values().iter().map(|g| g[axis] / (1.0 + g[0] * g[0] + g[1] * g[1]).sqrt()).collect();
        ScalarField::new(grid.clone(), values, None).expect("flux of a finite field is finite")
    };
    let (qx, qy) = (gradient(&flux(0)), gradient(&flux(1)));
    let values = qx.values().iter().zip(qy.values()).map(|(a, b)| a[0] + b[1]).collect();
    ScalarField::new(grid, values, None).expect("divergence of a finite flux is finite")
}

/// `γ = ε / (2 ‖v‖_{C²})`.
pub fn gamma_of(v: &ScalarField, epsilon: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")));
    }
    let norm = ck_norm(v, 2)?;
    if norm == 0.0 {
        return Err(Error::DegenerateSeed);
    }
    Ok(epsilon / (2.0 * norm))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardConfig {
    pub epsilon: f64,
    /// Stop once `‖u_{j+1} − u_j‖_{C²}` drops below this.
    pub stop_tol: f64,
    pub max_iters: usize,
    /// Relative residual for each Poisson solve.
    pub poisson_tol: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig { epsilon: 0.05, stop_tol: 1e-12, max_iters: 100, poisson_tol: DEFAULT_TOLERANCE }
    }
}

impl PicardConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        PicardConfig { epsilon, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon", format!("must be positive, got {}", self.epsilon)));
        }
        if !(self.stop_tol.is_finite() && self.stop_tol > 0.0) {
            return Err(Error::invalid("stop_tol", format!("must be positive, got {}", self.stop_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        if !(self.poisson_tol > 0.0 && self.poisson_tol <= 1e-2) {
            return Err(Error::invalid("poisson_tol", format!("must lie in (0, 1e-2], got {}", self.poisson_tol)));
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.epsilon > 0.1 {
            out.push(format!("epsilon = {} is above 0.1; the iteration may fail to contract", self.epsilon));
        }
        out
    }
}

/// One Picard step `u_j -> u_{j+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `‖u_j‖_{C²}`.
    pub u_norm: f64,
    /// `‖u_{j+1} − u_j‖_{C²}`.
    pub step_norm: f64,
    /// `step_norm / previous step_norm`; absent on the first step.
    pub ratio: Option<f64>,
    /// `‖F(u_j)‖_{C⁰}`.
    pub f_norm: f64,
    pub poisson: LinearSolveStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub epsilon: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub seed_norm: f64,
    pub records: Vec<IterationRecord>,
    pub converged: bool,
    /// Why the run stopped early, if it did.
    pub failure: Option<String>,
    /// `‖u_{j+1}‖_{C²}` after the last step.
    pub final_u_norm: f64,
    /// Geometric mean of the recorded contraction ratios.
    pub rho_bar: Option<f64>,
    pub deviation_c0: f64,
    pub deviation_c2: f64,
    /// Sup of `|Δu − F(u)|` over all nodes and over nodes with full stencils.
    pub residual_sup: f64,
    pub residual_sup_interior: f64,
    /// `‖u − γv − Δ⁻¹F(u)‖_{C⁰}` with a fresh solve; only for converged runs.
    pub fixed_point_residual: Option<f64>,
}

impl IterationReport {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Norms of `u_0, u_1, ...` including the final iterate.
    pub fn iterate_norms(&self) -> Vec<f64> {
        let mut norms: Vec<f64> = self.records.iter().map(|r| r.u_norm).collect();
        if !self.records.is_empty() {
            norms.push(self.final_u_norm);
        }
        norms
    }

    /// JSON lines: one `{"kind":"iteration",...}` object per step, then one
    /// `{"kind":"final",...}` object.
    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        #[derive(Serialize)]
        struct Tagged<'a, T: Serialize> {
            kind: &'static str,
            #[serde(flatten)]
            body: &'a T,
        }
        #[derive(Serialize)]
        struct Final<'a> {
            epsilon: f64,
            gamma: f64,
            lambda: f64,
            seed_norm: f64,
            iterations: usize,
            converged: bool,
            failure: &'a Option<String>,
            final_u_norm: f64,
            rho_bar: Option<f64>,
            deviation_c0: f64,
            deviation_c2: f64,
            residual_sup: f64,
            residual_sup_interior: f64,
            fixed_point_residual: Option<f64>,
        }
        for r in &self.records {
            serde_json::to_writer(&mut out, &Tagged { kind: "iteration", body: r }).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        let fin = Final {
            epsilon: self.epsilon,
            gamma: self.gamma,
            lambda: self.lambda,
            seed_norm: self.seed_norm,
            iterations: self.iterations(),
            converged: self.converged,
            failure: &self.failure,
            final_u_norm: self.final_u_norm,
            rho_bar: self.rho_bar,
            deviation_c0: self.deviation_c0,
            deviation_c2: self.deviation_c2,
            residual_sup: self.residual_sup,
            residual_sup_interior: self.residual_sup_interior,
            fixed_point_residual: self.fixed_point_residual,
        };
        serde_json::to_writer(&mut out, &Tagged { kind: "final", body: &fin }).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    }
}

/// Outcome of a Picard run that got far enough to produce a report.
#[derive(Clone, Debug)]
pub struct PicardRun {
    /// The last iterate; meaningful only when `report.converged`.
    pub u: ScalarField,
    pub lambda: f64,
    pub report: IterationReport,
}

/// Runs the iteration and returns the report even when it fails to contract.
///
/// Each step solves for the increment `u_{j+1} − u_j = Δ⁻¹(F(u_j) − F(u_{j−1}))`,
/// which makes small steps and their ratios resolvable below the solver tolerance.
/// Invalid input and Poisson stalls are returned as errors.
pub fn picard_run(v: &ScalarField, cfg: &PicardConfig) -> Result<PicardRun> {
    cfg.validate()?;
    let seed_norm = ck_norm(v, 2)?;
    let gamma = gamma_of(v, cfg.epsilon)?;
    let lambda = 1.0 / gamma;
    let op = assemble(v.grid());
    let base = v.scale(gamma);

    let mut u = base.clone();
    let mut w = ScalarField::zeros(v.grid());
    let mut f_prev: Option<ScalarField> = None;
    let mut records = Vec::new();
    let mut failure = None;
    let mut converged = false;
    let mut final_u_norm = ck_norm(&u, 2)?;

    for iteration in 0..cfg.max_iters {
        let u_norm = final_u_norm;
        let f = match nonlinearity_f(&u) {
            Ok(f) => f,
            Err(Error::NonFinite { node }) => {
                failure = Some(format!("F(u) is not finite at node {node}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let rhs = match &f_prev {
            Some(prev) => f.sub(prev)?,
            None => f.clone(),
        };
        let (delta, poisson) = op.solve(&rhs, None, cfg.poisson_tol)?;
        w = w.axpy(1.0, &delta)?;
        let next = base.axpy(1.0, &w)?;
        let step_norm = ck_norm(&delta, 2)?;
        let ratio = records.last().map(|r: &IterationRecord| step_norm / r.step_norm);
        records.push(IterationRecord { iteration, u_norm, step_norm, ratio, f_norm: f.sup_norm(), poisson });
        final_u_norm = ck_norm(&next, 2)?;
        u = next;
        f_prev = Some(f);

        if let Some(r) = ratio {
            if !(r < 1.0) {
                failure = Some(format!("contraction ratio {r:.3e} >= 1 at iteration {iteration}; reduce epsilon"));
                break;
            }
        }
        if !(final_u_norm < cfg.epsilon) {
            failure = Some(format!(
                "iterate C2 norm {final_u_norm:.3e} reached epsilon {} at iteration {iteration}; reduce epsilon",
                cfg.epsilon
            ));
            break;
        }
        if step_norm < cfg.stop_tol {
            converged = true;
            break;
        }
    }
    if !converged && failure.is_none() {
        failure = Some(format!("no convergence within {} iterations", cfg.max_iters));
    }

    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).filter(|r| *r > 0.0).collect();
    let rho_bar = (!ratios.is_empty()).then(|| (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp());
    let deviation = u.scale(lambda).sub(v)?;
    let (residual_sup, residual_sup_interior) = match ms_residual(&u) {
        Ok(r) => (r.sup_norm(), r.sup_norm_interior()),
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };
    let fixed_point_residual = if converged {
        let (w_fresh, _) = op.solve(&nonlinearity_f(&u)?, None, cfg.poisson_tol)?;
        Some(u.sub(&base)?.sub(&w_fresh)?.sup_norm())
    } else {
        None
    };
    let report = IterationReport {
        epsilon: cfg.epsilon,
        gamma,
        lambda,
        seed_norm,
        records,
        converged,
        failure,
        final_u_norm,
        rho_bar,
        deviation_c0: deviation.sup_norm(),
        deviation_c2: ck_norm(&deviation, 2)?,
        residual_sup,
        residual_sup_interior,
        fixed_point_residual,
    };
    Ok(PicardRun { u, lambda, report })
}

/// Runs the iteration to convergence, turning a failed contraction into an error.
pub fn picard_solve(v: &ScalarField, cfg: &PicardConfig) -> Result<(ScalarField, f64, IterationReport)> {
    let run = picard_run(v, cfg)?;
    match &run.report.failure {
        Some(reason) => Err(Error::ContractionFailure { iteration: run.report.iterations(), reason: reason.clone() }),
        None => Ok((run.u, run.lambda, run.report)),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::DiskGrid;
    use crate::harmonic::{sample, HarmonicSeed};

    fn grid(h: f64) -> Arc<DiskGrid> {
        Arc::new(DiskGrid::new(h).unwrap())
    }

    /// `½ ∇u·∇log(1+|∇u|²)` from an analytic gradient, with the log term
    /// differentiated by central differences.
    fn log_form(grad: impl Fn(f64, f64) -> [f64; 2], x: f64, y: f64) -> f64 {
        let ell = |x: f64, y: f64| {
            let g = grad(x, y);
            (1.0 + g[0] * g[0] + g[1] * g[1]).ln()
        };
        let d = 1e-5;
        let lx = (ell(x + d, y) - ell(x - d, y)) / (2.0 * d);
        let ly = (ell(x, y + d) - ell(x, y - d)) / (2.0 * d);
        let g = grad(x, y);
        0.5 * (g[0] * lx + g[1] * ly)
    }

    #[test]
    fn affine_fields_have_no_nonlinearity() {
        let g = grid(0.05);
        let u = ScalarField::from_fn(&g, |x, y| 0.3 - 2.0 * x + 0.7 * y).unwrap();
        // Exact up to rounding amplified by the short arms at cut nodes.
        assert!(nonlinearity_f(&u).unwrap().sup_norm() < 1e-10);
        assert!(ms_residual(&u).unwrap().sup_norm() < 1e-10);
    }

    #[test]
    fn paraboloid_matches_log_form() {
        let g = grid(0.05);
        let u = ScalarField::from_fn(&g, |x, y| 0.5 * (x * x + y * y)).unwrap();
        let f = nonlinearity_f(&u).unwrap();
        for (node, value) in g.nodes().iter().zip(f.values()) {
            let oracle = log_form(|x, y| [x, y], node.x, node.y);
            let closed = (node.x * node.x + node.y * node.y) / (1.0 + node.x * node.x + node.y * node.y);
            assert!((oracle - closed).abs() < 1e-8);
            assert!((value - closed).abs() < 1e-8, "{value} vs {closed}");
        }
    }

    #[test]
    fn expanded_form_equals_log_form() {
        // u = sin(2x) e^y: compare the rational expression from exact derivatives with
        // the differenced log form.
        let grad = |x: f64, y: f64| [2.0 * (2.0 * x).cos() * y.exp(), (2.0 * x).sin() * y.exp()];
        for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.7, -0.6), (0.0, 0.9)] {
            let [gx, gy] = grad(x, y);
            let (hxx, hxy, hyy) =
                (-4.0 * (2.0 * x).sin() * y.exp(), 2.0 * (2.0 * x).cos() * y.exp(), (2.0 * x).sin() * y.exp());
            let rational = (gx * gx * hxx + 2.0 * gx * gy * hxy + gy * gy * hyy) / (1.0 + gx * gx + gy * gy);
            assert!((rational - log_form(grad, x, y)).abs() < 1e-7);
        }
    }

    #[test]
    fn nonlinearity_is_cubic_for_small_fields() {
        let g = grid(0.02);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &g).unwrap();
        let u = v.scale(gamma_of(&v, 0.1).unwrap());
        let base = nonlinearity_f(&u).unwrap().sup_norm();
        for c in [0.1, 0.01] {
            let ratio = nonlinearity_f(&u.scale(c)).unwrap().sup_norm() / base;
            assert!((ratio / (c * c * c) - 1.0).abs() < 0.05, "c = {c}: {ratio}");
        }
    }

    #[test]
    fn divergence_form_agrees_at_interior_nodes() {
        let g = grid(0.02);
        let u = ScalarField::from_fn(&g, |x, y| 0.5 * (x * x - 0.3 * y * y) + 0.2 * (x * y).sin()).unwrap();
        let ms = ms_residual(&u).unwrap();
        let div = divergence_residual(&u);
        let grad = gradient(&u);
        let mut worst: f64 = 0.0;
        for ((node, d), (m, gr)) in g.nodes().iter().zip(div.values()).zip(ms.values().iter().zip(grad.values())) {
            if node.x.hypot(node.y) < 0.8 {
                let w = (1.0 + gr[0] * gr[0] + gr[1] * gr[1]).sqrt();
                worst = worst.max((d - m / w).abs());
            }
        }
        assert!(worst < 5e-3, "{worst}");
    }

    #[test]
    fn gamma_examples() {
        let g = grid(0.05);
        let v = ScalarField::from_fn(&g, |x, _| x).unwrap();
        assert!((ck_norm(&v, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((gamma_of(&v, 0.05).unwrap() - 0.025).abs() < 1e-14);
        assert_eq!(gamma_of(&v.scale(2.0), 0.05).unwrap(), gamma_of(&v, 0.05).unwrap() / 2.0);
        assert!(matches!(gamma_of(&v, 0.0), Err(Error::InvalidParameter { name: "epsilon", .. })));
        assert!(matches!(gamma_of(&ScalarField::zeros(&g), 0.05), Err(Error::DegenerateSeed)));
    }

    #[test]
    fn config_validation() {
        assert!(PicardConfig::default().validate().is_ok());
        assert!(PicardConfig::with_epsilon(-1.0).validate().is_err());
        assert!(PicardConfig { stop_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(PicardConfig { poisson_tol: 0.1, ..Default::default() }.validate().is_err());
        assert!(PicardConfig::with_epsilon(0.5).warnings().len() == 1);
        assert!(PicardConfig::with_epsilon(0.05).warnings().is_empty());
    }

    #[test]
    fn affine_seed_converges_immediately() {
        let g = grid(0.05);
        let v = sample(&HarmonicSeed::HarmonicPolynomialReZm { m: 1 }, &g).unwrap();
        let (u, lambda, report) = picard_solve(&v, &PicardConfig::with_epsilon(0.05)).unwrap();
        assert_eq!(report.iterations(), 1);
        assert!(report.converged);
        assert!(u.scale(lambda).sub(&v).unwrap().sup_norm() < 1e-15);
        assert!(report.deviation_c0 < 1e-15);
    }

    #[test]
    fn stripe_seed_deviation_scales_quadratically() {
        let g = grid(0.02);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &g).unwrap();
        let run = |eps: f64| picard_solve(&v, &PicardConfig::with_epsilon(eps)).unwrap().2;
        let (a, b) = (run(0.05), run(0.025));
        for r in [&a, &b] {
            assert!(r.converged);
            let norms = r.iterate_norms();
            assert!(norms[0] <= r.epsilon / 2.0 * (1.0 + 1e-15));
            assert!(norms.iter().all(|&n| n < r.epsilon));
            assert!(r.records.iter().filter_map(|x| x.ratio).all(|x| x < 1.0));
            assert!(r.fixed_point_residual.unwrap() <= 2e-12);
        }
        let factor = a.deviation_c0 / b.deviation_c0;
        assert!((3.0..=5.0).contains(&factor), "{factor}");
    }

    #[test]
    fn large_epsilon_fails_to_contract() {
        let g = grid(0.04);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &g).unwrap();
        // Observed threshold for this seed lies between 10 and 30.
        let err = picard_solve(&v, &PicardConfig::with_epsilon(100.0)).unwrap_err();
        assert!(matches!(err, Error::ContractionFailure { .. }), "{err}");
        let run = picard_run(&v, &PicardConfig::with_epsilon(100.0)).unwrap();
        assert!(!run.report.converged);
        assert!(run.report.failure.is_some());
        assert!(!run.report.records.is_empty());
    }

    #[test]
    fn seed_scaling_is_invisible() {
        let g = grid(0.04);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 6.0 }, &g).unwrap();
        let cfg = PicardConfig::with_epsilon(0.05);
        let (u1, l1, _) = picard_solve(&v, &cfg).unwrap();
        let (u2, l2, _) = picard_solve(&v.scale(3.0), &cfg).unwrap();
        assert!(u1.sub(&u2).unwrap().sup_norm() < 1e-12);
        assert!((l2 / l1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn scherk_surface_residual_is_second_order() {
        // Scherk's surface exp(z) cos(y) = cos(x) is an exact minimal graph on |x|, |y| < pi/2.
        let err = |h: f64| {
            let g = grid(h);
            let u = ScalarField::from_fn(&g, |x, y| (x.cos() / y.cos()).ln()).unwrap();
            let r = ms_residual(&u).unwrap();
            g.nodes()
                .iter()
                .zip(r.values())
                .filter(|(n, _)| n.x.hypot(n.y) <= 0.9)
                .fold(0.0f64, |m, (_, v)| m.max(v.abs()))
        };
        let (a, b) = (err(0.04), err(0.02));
        let order = (a / b).log2();
        assert!((1.7..=2.3).contains(&order), "{a} {b} {order}");
    }

    #[test]
    fn report_serialises_as_json_lines() {
        let g = grid(0.05);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 4.0 }, &g).unwrap();
        let (_, _, report) = picard_solve(&v, &PicardConfig::with_epsilon(0.05)).unwrap();
        let mut buf = Vec::new();
        report.write_jsonl(&mut buf).unwrap();
        let lines: Vec<serde_json::Value> =
            String::from_utf8(buf).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), report.iterations() + 1);
        assert_eq!(lines[0]["kind"], "iteration");
        assert!(lines[0]["ratio"].is_null());
        assert!(lines[0]["poisson"]["iterations"].is_u64());
        let last = lines.last().unwrap();
        assert_eq!(last["kind"], "final");
        assert_eq!(last["converged"], true);
        for key in ["lambda", "deviation_c0", "deviation_c2", "residual_sup", "rho_bar"] {
            assert!(last.get(key).is_some(), "{key}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(12))]

            #[test]
            fn gamma_is_inverse_homogeneous(c in 1e-3f64..1e3, eps in 1e-3f64..1.0) {
                let g = grid(0.1);
                let v = ScalarField::from_fn(&g, |x, y| x * x - y * y + 0.5 * x).unwrap();
                let a = gamma_of(&v, eps).unwrap();
                let b = gamma_of(&v.scale(c), eps).unwrap();
                prop_assert!((b * c / a - 1.0).abs() < 1e-12);
            }
        }
    }
}
