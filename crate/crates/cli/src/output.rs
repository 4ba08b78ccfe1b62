//! Output directory helpers.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use mingraph_core::geometry::{write_polylines, LevelSet};
use mingraph_core::grid::{write_table, ScalarField};
use mingraph_core::msolver::IterationReport;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub struct OutputDir {
    root: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

impl OutputDir {
    /// Creates the directory and echoes the effective configuration into it.
    pub fn create(root: &Path, cfg: &ExperimentConfig) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(io_err(root))?;
        let dir = OutputDir { root: root.to_path_buf() };
        dir.write_text("config.toml", &cfg.to_toml())?;
        Ok(dir)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn with_writer(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult<PathBuf> {
        let path = self.path(name);
        let file = File::create(&path).map_err(io_err(&path))?;
        let mut w = BufWriter::new(file);
        f(&mut w).and_then(|_| w.flush()).map_err(io_err(&path))?;
        Ok(path)
    }

    pub fn write_text(&self, name: &str, text: &str) -> CliResult<PathBuf> {
        self.with_writer(name, |w| w.write_all(text.as_bytes()))
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("summaries serialize");
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn write_iterations(&self, report: &IterationReport) -> CliResult<PathBuf> {
        self.with_writer("iterations.jsonl", |w| report.write_jsonl(w).map_err(std::io::Error::other))
    }

    pub fn write_zero_set(&self, name: &str, ls: &LevelSet) -> CliResult<PathBuf> {
        self.with_writer(name, |w| write_polylines(ls, w).map_err(std::io::Error::other))
    }

    pub fn write_field(&self, name: &str, u: &ScalarField) -> CliResult<PathBuf> {
        self.with_writer(name, |w| write_table(u, w).map_err(std::io::Error::other))
    }

    pub fn write_csv<T: Serialize>(&self, name: &str, rows: &[T]) -> CliResult<PathBuf> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e.into() })?;
        for row in rows {
            w.serialize(row).map_err(|e| CliError::Io { path: path.display().to_string(), source: e.into() })?;
        }
        w.flush().map_err(io_err(&path))?;
        Ok(path)
    }
}
