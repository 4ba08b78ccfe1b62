use mingraph_core::geometry::{extract_zero_set, graph_area, LevelSetSummary};
use mingraph_core::harmonic::{fit_cauchy_data, sample, CurveSpec, FitOptions, HarmonicSeed};
use mingraph_core::msolver::{picard_run, IterationReport};
use serde::{Deserialize, Serialize};

use super::grid;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub seed: HarmonicSeed,
    pub h: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub rho_bar: Option<f64>,
    pub deviation_c0: f64,
    pub deviation_c2: f64,
    pub residual_sup: f64,
    pub zero_set: LevelSetSummary,
    pub area: f64,
}

/// One Picard run from the configured seed, or from a Cauchy fit when `curve` is set.
pub fn solve(cfg: &ExperimentConfig, curve: Option<&str>) -> CliResult<SolveSummary> {
    cfg.validate()?;
    let seed = match curve {
        Some(name) => {
            let spec = CurveSpec::load(name)?;
            spec.check_injective()?;
            fit_cauchy_data(&spec, cfg.level.degree, &FitOptions::default())?.0
        }
        None => cfg.seed.clone(),
    };
    let out = OutputDir::create(&cfg.output.dir, cfg)?;
    let g = grid(cfg.grid.h)?;
    let v = sample(&seed, &g)?;
    let run = picard_run(&v, &cfg.picard)?;
    out.write_iterations(&run.report)?;
    if let Some(reason) = &run.report.failure {
        return Err(CliError::Numerical(reason.clone()));
    }
    out.write_field("field.txt", &run.u)?;
    let ls = extract_zero_set(&run.u)?;
    out.write_zero_set("zero_set.txt", &ls)?;
    let IterationReport { rho_bar, deviation_c0, deviation_c2, residual_sup, .. } = run.report.clone();
    let summary = SolveSummary {
        seed,
        h: cfg.grid.h,
        epsilon: cfg.picard.epsilon,
        lambda: run.lambda,
        iterations: run.report.iterations(),
        rho_bar,
        deviation_c0,
        deviation_c2,
        residual_sup,
        zero_set: ls.summary(),
        area: graph_area(&run.u),
    };
    out.write_json("summary.json", &summary)?;
    Ok(summary)
}
