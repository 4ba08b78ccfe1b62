//! Experiment configuration: a TOML file with flag overrides on top.

use std::path::{Path, PathBuf};

use mingraph_core::harmonic::HarmonicSeed;
use mingraph_core::msolver::PicardConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub seed: HarmonicSeed,
    pub picard: PicardConfig,
    pub demo: DemoConfig,
    pub level: LevelConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid: GridConfig::default(),
            seed: HarmonicSeed::StripeSinCosh { k: 10.0 },
            picard: PicardConfig::default(),
            demo: DemoConfig::default(),
            level: LevelConfig::default(),
            sweep: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub h: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { h: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DemoConfig {
    /// Required zero-set length.
    pub target_c: f64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig { target_c: 10.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LevelConfig {
    /// Built-in curve name or path to a curve file.
    pub curve: String,
    pub degree: usize,
    /// Overrides the curve's collocation count.
    pub collocation: Option<usize>,
    /// Radius of the neighbourhood of the curve in which the zero set is compared;
    /// defaults to `max(10 h, 0.05)`.
    pub tube_radius: Option<f64>,
}

impl Default for LevelConfig {
    fn default() -> Self {
        LevelConfig { curve: "segment".into(), degree: 8, collocation: None, tube_radius: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { epsilons: vec![0.1, 0.05, 0.025] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Turn failed demo checks into exit status 1.
    pub strict: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("mingraph-out"), strict: false }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub h: Option<f64>,
    pub epsilon: Option<String>,
    pub seed: Option<String>,
    pub curve: Option<String>,
    pub degree: Option<usize>,
    pub target_c: Option<f64>,
    pub out: Option<PathBuf>,
    pub strict: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always representable as TOML")
    }

    /// Applies flag overrides. A comma-separated `--epsilon` sets the sweep list; its
    /// first entry also becomes the single-run epsilon.
    pub fn apply(&mut self, o: &Overrides) -> CliResult<()> {
        if let Some(h) = o.h {
            self.grid.h = h;
        }
        if let Some(list) = &o.epsilon {
            let eps = parse_epsilons(list)?;
            self.picard.epsilon = eps[0];
            self.sweep.epsilons = eps;
        }
        if let Some(s) = &o.seed {
            self.seed = parse_seed(s)?;
        }
        if let Some(c) = &o.curve {
            self.level.curve = c.clone();
        }
        if let Some(m) = o.degree {
            self.level.degree = m;
        }
        if let Some(c) = o.target_c {
            self.demo.target_c = c;
        }
        if let Some(out) = &o.out {
            self.output.dir = out.clone();
        }
        self.output.strict |= o.strict;
        Ok(())
    }

    /// Checks every numeric field before any computation starts.
    pub fn validate(&self) -> CliResult<()> {
        let h = self.grid.h;
        if !(h.is_finite() && h > 0.0 && h <= 0.5) {
            return Err(CliError::Config(format!("grid.h must lie in (0, 0.5], got {h}")));
        }
        self.picard.validate()?;
        self.seed.validate()?;
        if !(self.demo.target_c.is_finite() && self.demo.target_c >= 0.0) {
            return Err(CliError::Config(format!("demo.target_c must be finite and >= 0, got {}", self.demo.target_c)));
        }
        if self.level.degree == 0 {
            return Err(CliError::Config("level.degree must be at least 1".into()));
        }
        if let Some(r) = self.level.tube_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(CliError::Config(format!("level.tube_radius must be positive, got {r}")));
            }
        }
        if self.sweep.epsilons.is_empty() {
            return Err(CliError::Config("sweep.epsilons is empty".into()));
        }
        if let Some(e) = self.sweep.epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(CliError::Config(format!("every sweep epsilon must be positive, got {e}")));
        }
        Ok(())
    }

    pub fn tube_radius(&self) -> f64 {
        self.level.tube_radius.unwrap_or((10.0 * self.grid.h).max(0.05))
    }
}

pub fn parse_epsilons(list: &str) -> CliResult<Vec<f64>> {
    let eps = list
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Config(format!("bad epsilon `{s}`: {e}"))))
        .collect::<CliResult<Vec<f64>>>()?;
    if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(CliError::Config(format!("epsilon must be positive, got {e}")));
    }
    Ok(eps)
}

/// `stripe:K` (alias `stripe-sin-cosh:K`) or `rezm:M` (alias `harmonic-polynomial-re-zm:M`).
pub fn parse_seed(spec: &str) -> CliResult<HarmonicSeed> {
    let bad = || CliError::Config(format!("bad seed `{spec}`; expected stripe:K or rezm:M"));
    let (family, param) = spec.split_once(':').ok_or_else(bad)?;
    let seed = match family.trim() {
        "stripe" | "stripe-sin-cosh" => HarmonicSeed::StripeSinCosh { k: param.trim().parse().map_err(|_| bad())? },
        "rezm" | "harmonic-polynomial-re-zm" => HarmonicSeed::HarmonicPolynomialReZm { m: param.trim().parse().map_err(|_| bad())? },
        _ => return Err(bad()),
    };
    seed.validate()?;
    Ok(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = ExperimentConfig::from_toml("[grid]\nh = 0.02\n[seed]\nfamily = \"harmonic-polynomial-re-zm\"\nm = 3\n").unwrap();
        assert_eq!(cfg.grid.h, 0.02);
        assert_eq!(cfg.seed, HarmonicSeed::HarmonicPolynomialReZm { m: 3 });
        assert_eq!(cfg.picard, PicardConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(ExperimentConfig::from_toml("[grid]\nspacing = 0.1\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn flags_win() {
        let mut cfg = ExperimentConfig::default();
        let o = Overrides {
            h: Some(0.02),
            epsilon: Some("0.1, 0.05".into()),
            seed: Some("stripe:6".into()),
            target_c: Some(3.0),
            strict: true,
            ..Default::default()
        };
        cfg.apply(&o).unwrap();
        assert_eq!(cfg.grid.h, 0.02);
        assert_eq!(cfg.picard.epsilon, 0.1);
        assert_eq!(cfg.sweep.epsilons, vec![0.1, 0.05]);
        assert_eq!(cfg.seed, HarmonicSeed::StripeSinCosh { k: 6.0 });
        assert!(cfg.output.strict);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_epsilons("0.1,0").is_err());
        assert!(parse_seed("stripe").is_err());
        assert!(parse_seed("stripe:-1").is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.grid.h = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.sweep.epsilons = vec![0.1, -0.05];
        assert!(cfg.validate().is_err());
    }
}
