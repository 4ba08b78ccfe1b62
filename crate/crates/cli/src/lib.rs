//! Command-line driver for the mingraph pipeline.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::Check;
use crate::config::{ExperimentConfig, Overrides};
use crate::error::{CliResult, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "mingraph", version, about = "Minimal graphs over the disk with long zero sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the manufactured-solution suite.
    Validate,
    /// Build a minimal graph whose zero set is longer than --target-c.
    DemoTheorem,
    /// Fit a curve, promote the fit and compare its zero set with the curve.
    Level,
    /// Sweep epsilon and fit power laws.
    SweepEpsilon,
    /// One Picard run from --seed, or from --curve if given.
    Solve,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Grid spacing.
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// Smallness parameter; a comma-separated list for sweep-epsilon.
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    /// Harmonic seed, `stripe:K` or `rezm:M`.
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Built-in curve name or curve file.
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Degree of the harmonic-polynomial fit.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Target zero-set length for demo-theorem.
    #[arg(long = "target-c", global = true)]
    pub target_c: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 when a check fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            h: self.h,
            epsilon: self.epsilon.clone(),
            seed: self.seed.clone(),
            curve: self.curve.clone(),
            degree: self.degree,
            target_c: self.target_c,
            out: self.out.clone(),
            strict: self.strict,
        }
    }

    /// File configuration with flags applied, validated.
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.apply(&self.overrides())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report_checks(checks: &[Check]) {
    for c in checks {
        println!("{:<4} {:<24} {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
}

/// Soft checks become an error only under `--strict`.
fn soft(checks: &[Check], strict: bool) -> CliResult<()> {
    if strict {
        commands::require(checks)
    } else {
        Ok(())
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let cfg = cli.flags.resolve()?;
    let strict = cfg.output.strict;
    match cli.command {
        Command::Validate => {
            let s = commands::validate(&cfg)?;
            for m in &s.measurements {
                println!("{:<18} errors {:?} orders {:?}", m.name, m.errors, m.orders);
            }
            report_checks(&s.checks);
            commands::require(&s.checks)
        }
        Command::DemoTheorem => {
            let s = commands::demo_theorem(&cfg)?;
            println!(
                "k = {} (predicted length {:.4}), {} iterations, zero-set length {:.4}, area {:.6}",
                s.k, s.predicted_length, s.iterations, s.length, s.area
            );
            report_checks(&s.checks);
            soft(&s.checks, strict)
        }
        Command::Level => {
            let s = commands::level(&cfg)?;
            println!(
                "curve {} degree {}: fit residuals {:.3e} / {:.3e}, distance {:.3e}, margin {:?}",
                s.curve, s.degree, s.fit.residual_value, s.fit.residual_normal, s.distance, s.transversality_margin
            );
            report_checks(&s.checks);
            soft(&s.checks, strict)
        }
        Command::SweepEpsilon => {
            let s = commands::sweep_epsilon(&cfg)?;
            println!("epsilon,rho_bar,deviation,shift,iterations");
            for r in &s.rows {
                let rho = r.rho_bar.map_or_else(String::new, |p| p.to_string());
                println!("{},{rho},{},{},{}", r.epsilon, r.deviation, r.shift, r.iterations);
            }
            for line in s.exponent_lines() {
                println!("{line}");
            }
            report_checks(&s.checks);
            soft(&s.checks, strict)
        }
        Command::Solve => {
            let s = commands::solve(&cfg, cli.flags.curve.as_deref())?;
            println!(
                "lambda {:.6e}, {} iterations, deviation {:.3e}, zero-set length {:.4}",
                s.lambda, s.iterations, s.deviation_c0, s.zero_set.total_length
            );
            Ok(())
        }
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("mingraph: {e}");
            e.exit_code()
        }
    }
}
