use std::f64::consts::PI;

use mingraph_core::geometry::{extract_zero_set, graph_area};
use mingraph_core::harmonic::{predicted_nodal_length, sample, HarmonicSeed};
use mingraph_core::msolver::picard_run;
use serde::{Deserialize, Serialize};

use super::{grid, Check};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

/// Smallest admissible stripe frequency whose predicted nodal length exceeds
/// `1.1 c`. Admissible frequencies are `pi` (a single diameter) and the integers
/// from 4 up.
pub fn select_frequency(c: f64) -> f64 {
    let target = 1.1 * c;
    if predicted_nodal_length(PI) > target {
        return PI;
    }
    (4u32..).map(f64::from).find(|&k| predicted_nodal_length(k) > target).expect("nodal length grows without bound")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoSummary {
    pub target_c: f64,
    pub k: f64,
    pub predicted_length: f64,
    pub h: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rho_bar: Option<f64>,
    pub deviation_c0: f64,
    pub length: f64,
    pub chains: usize,
    pub perturbed_zeros: usize,
    /// `min |grad u|` along the zero set of the unscaled solution.
    pub transversality_margin: Option<f64>,
    pub area: f64,
    pub area_bound: f64,
    pub checks: Vec<Check>,
}

/// Builds a minimal graph whose zero set is longer than `target_c`.
pub fn demo_theorem(cfg: &ExperimentConfig) -> CliResult<DemoSummary> {
    cfg.validate()?;
    let out = OutputDir::create(&cfg.output.dir, cfg)?;
    let c = cfg.demo.target_c;
    let k = select_frequency(c);
    let g = grid(cfg.grid.h)?;
    let v = sample(&HarmonicSeed::StripeSinCosh { k }, &g)?;
    let run = picard_run(&v, &cfg.picard)?;
    out.write_iterations(&run.report)?;
    if let Some(reason) = &run.report.failure {
        return Err(CliError::Numerical(format!("{reason} (k = {k})")));
    }
    let ls = extract_zero_set(&run.u)?;
    out.write_zero_set("zero_set.txt", &ls)?;
    let area = graph_area(&run.u);
    let eps = cfg.picard.epsilon;
    let area_bound = (1.0 + 2.0 * eps * eps) * PI;
    let margin = ls.min_gradient;
    let checks = vec![
        Check::new("length", ls.total_length > c, format!("zero-set length {:.6} vs target {c}", ls.total_length)),
        Check::new("transversality", margin.is_some_and(|m| m > 0.0), format!("min |grad u| on the zero set {margin:?}")),
        Check::new("area", area <= area_bound, format!("graph area {area:.9} vs bound {area_bound:.9}")),
    ];
    let summary = DemoSummary {
        target_c: c,
        k,
        predicted_length: predicted_nodal_length(k),
        h: cfg.grid.h,
        epsilon: eps,
        lambda: run.lambda,
        iterations: run.report.iterations(),
        converged: run.report.converged,
        rho_bar: run.report.rho_bar,
        deviation_c0: run.report.deviation_c0,
        length: ls.total_length,
        chains: ls.polylines.len(),
        perturbed_zeros: ls.perturbed_zeros,
        transversality_margin: margin,
        area,
        area_bound,
        checks,
    };
    out.write_json("summary.json", &summary)?;
    Ok(summary)
}
