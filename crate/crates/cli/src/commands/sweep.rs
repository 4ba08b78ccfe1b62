use mingraph_core::geometry::{extract_zero_set, hausdorff_distance};
use mingraph_core::harmonic::{sample, HarmonicSeed};
use mingraph_core::msolver::{picard_run, PicardConfig};
use serde::{Deserialize, Serialize};

use super::{grid, Check};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub rho_bar: Option<f64>,
    /// `‖λu − v‖_{C⁰}`.
    pub deviation: f64,
    /// Hausdorff distance between the zero sets of `v` and `u`.
    pub shift: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub rho_bar: Option<f64>,
    pub deviation: Option<f64>,
    pub shift: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub seed: HarmonicSeed,
    pub h: f64,
    pub rows: Vec<SweepRow>,
    /// Least-squares slopes of `log(value)` against `log(epsilon)`.
    pub exponents: Exponents,
    /// Failed runs as `(epsilon, reason)`.
    pub failures: Vec<(f64, String)>,
    pub checks: Vec<Check>,
}

/// Slope of the least-squares line through `(ln x, ln y)`; `None` with fewer than
/// two usable points.
pub fn fit_exponent(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let (mx, my) = (logs.iter().map(|p| p.0).sum::<f64>() / n, logs.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn describe(e: Option<f64>) -> String {
    e.map_or_else(|| "not-available".to_string(), |v| format!("{v:.4}"))
}

/// Runs the Picard iteration for each epsilon and fits power laws to the results.
pub fn sweep_epsilon(cfg: &ExperimentConfig) -> CliResult<SweepSummary> {
    cfg.validate()?;
    let out = OutputDir::create(&cfg.output.dir, cfg)?;
    let g = grid(cfg.grid.h)?;
    let v = sample(&cfg.seed, &g)?;
    let seed_zero = extract_zero_set(&v)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &epsilon in &cfg.sweep.epsilons {
        let picard = PicardConfig { epsilon, ..cfg.picard };
        let run = picard_run(&v, &picard)?;
        if let Some(reason) = run.report.failure {
            failures.push((epsilon, reason));
            continue;
        }
        let shift = hausdorff_distance(&seed_zero, &extract_zero_set(&run.u)?);
        rows.push(SweepRow {
            epsilon,
            rho_bar: run.report.rho_bar,
            deviation: run.report.deviation_c0,
            shift,
            iterations: run.report.iterations(),
        });
    }
    out.write_csv("sweep.csv", &rows)?;
    let exponents = Exponents {
        rho_bar: fit_exponent(rows.iter().filter_map(|r| r.rho_bar.map(|p| (r.epsilon, p)))),
        deviation: fit_exponent(rows.iter().map(|r| (r.epsilon, r.deviation))),
        shift: fit_exponent(rows.iter().map(|r| (r.epsilon, r.shift))),
    };
    let mut checks = Vec::new();
    if let Some(p) = exponents.deviation {
        checks.push(Check::new("deviation-exponent", (1.7..=2.3).contains(&p), format!("{p:.4}, expected within [1.7, 2.3]")));
    }
    if let Some(p) = exponents.rho_bar {
        // Halving epsilon should shrink rho_bar by a factor in [0.15, 0.4].
        let (lo, hi) = ((1.0 / 0.4f64).log2(), (1.0 / 0.15f64).log2());
        checks.push(Check::new("contraction-exponent", (lo..=hi).contains(&p), format!("{p:.4}, expected within [{lo:.3}, {hi:.3}]")));
    }
    let summary = SweepSummary { seed: cfg.seed.clone(), h: cfg.grid.h, rows, exponents, failures, checks };
    out.write_json("sweep_summary.json", &summary)?;
    if !summary.failures.is_empty() {
        let list: Vec<String> = summary.failures.iter().map(|(e, r)| format!("epsilon {e}: {r}")).collect();
        return Err(CliError::Numerical(list.join("; ")));
    }
    Ok(summary)
}

impl SweepSummary {
    pub fn exponent_lines(&self) -> Vec<String> {
        vec![
            format!("exponent rho_bar    {}", describe(self.exponents.rho_bar)),
            format!("exponent deviation  {}", describe(self.exponents.deviation)),
            format!("exponent shift      {}", describe(self.exponents.shift)),
        ]
    }
}
