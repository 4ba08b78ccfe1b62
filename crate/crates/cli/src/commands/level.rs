use mingraph_core::geometry::{extract_zero_set, hausdorff_distance, restrict_to_tube, transversality_margin, LevelSet};
use mingraph_core::harmonic::{fit_cauchy_data, sample, CauchyFitReport, CurveSpec, FitOptions};
use mingraph_core::msolver::picard_run;
use serde::{Deserialize, Serialize};

use super::{grid, Check};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub curve: String,
    pub degree: usize,
    pub h: f64,
    pub epsilon: f64,
    pub fit: CauchyFitReport,
    pub lambda: f64,
    pub iterations: usize,
    pub tube_radius: f64,
    /// Hausdorff distance between the curve and the zero set restricted to the tube.
    pub distance: f64,
    /// `min |grad(lambda u)|` on the restricted zero set.
    pub transversality_margin: Option<f64>,
    pub zero_set_length: f64,
    pub restricted_length: f64,
    pub checks: Vec<Check>,
}

/// Curve → Cauchy fit → Picard → zero set, compared with the curve near the curve.
pub fn level(cfg: &ExperimentConfig) -> CliResult<LevelSummary> {
    cfg.validate()?;
    let mut curve = CurveSpec::load(&cfg.level.curve)?;
    if let Some(n) = cfg.level.collocation {
        curve.collocation = n;
    }
    curve.check_injective()?;
    let out = OutputDir::create(&cfg.output.dir, cfg)?;
    let h = cfg.grid.h;
    let g = grid(h)?;

    let (seed, fit) = fit_cauchy_data(&curve, cfg.level.degree, &FitOptions::default())?;
    out.write_json("seed.json", &seed)?;
    let v = sample(&seed, &g)?;
    let run = picard_run(&v, &cfg.picard)?;
    out.write_iterations(&run.report)?;
    if let Some(reason) = &run.report.failure {
        return Err(CliError::Numerical(reason.clone()));
    }

    let ls = extract_zero_set(&run.u)?;
    out.write_zero_set("zero_set.txt", &ls)?;
    let tube = cfg.tube_radius();
    let target = curve.polyline(0.5 * h);
    let near = restrict_to_tube(&ls, &target, tube);
    out.write_zero_set("zero_set_near_curve.txt", &near)?;
    let curve_set = LevelSet::from_polylines(vec![target], h);
    let distance = hausdorff_distance(&curve_set, &near);
    let margin = transversality_margin(&run.u, &near).map(|m| m * run.lambda);

    let checks = vec![
        Check::new("nonempty", !near.is_empty(), format!("{} chains near the curve", near.polylines.len())),
        Check::new("transversality", margin.is_some_and(|m| m > 0.0), format!("min |grad(lambda u)| near the curve {margin:?}")),
        Check::new("distance", distance <= tube, format!("Hausdorff distance {distance:.3e} vs tube radius {tube}")),
    ];
    let summary = LevelSummary {
        curve: cfg.level.curve.clone(),
        degree: cfg.level.degree,
        h,
        epsilon: cfg.picard.epsilon,
        fit,
        lambda: run.lambda,
        iterations: run.report.iterations(),
        tube_radius: tube,
        distance,
        transversality_margin: margin,
        zero_set_length: ls.total_length,
        restricted_length: near.total_length,
        checks,
    };
    out.write_json("summary.json", &summary)?;
    Ok(summary)
}
