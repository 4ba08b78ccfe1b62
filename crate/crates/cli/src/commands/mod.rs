//! Subcommand implementations. Each writes its files into the configured output
//! directory and returns a summary that callers can inspect.

mod demo;
mod level;
mod solve;
mod sweep;
mod validate;

use std::sync::Arc;

use mingraph_core::grid::DiskGrid;
use serde::{Deserialize, Serialize};

pub use demo::{demo_theorem, select_frequency, DemoSummary};
pub use level::{level, LevelSummary};
pub use solve::{solve, SolveSummary};
pub use sweep::{fit_exponent, sweep_epsilon, SweepRow, SweepSummary};
pub use validate::{validate, ValidateSummary};

use crate::error::{CliError, CliResult};

/// A named pass/fail assertion with the measured value behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Fails with the names of every failed check.
pub fn require(checks: &[Check]) -> CliResult<()> {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(failed))
    }
}

pub(crate) fn grid(h: f64) -> CliResult<Arc<DiskGrid>> {
    Ok(Arc::new(DiskGrid::new(h)?))
}
