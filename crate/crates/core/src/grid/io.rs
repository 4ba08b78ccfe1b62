//! Text table format for [`ScalarField`]s.
//!
//! One line `x y value` per inside node, rows of the bounding lattice from
//! bottom to top and left to right within a row; exterior nodes are omitted.
//! Lines starting with `#` are comments. Values are written with Rust's
//! shortest round-trip float formatting, so a write/read cycle is lossless.

use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{DiskGrid, ScalarField};
use crate::error::{Error, Result};

pub fn write_table<W: Write>(field: &ScalarField, mut out: W) -> Result<()> {
    writeln!(out, "# x y value (h = {})", field.grid().h())?;
    for (node, v) in field.grid().nodes().iter().zip(field.values()) {
        writeln!(out, "{} {} {}", node.x, node.y, v)?;
    }
    Ok(())
}

/// Reads a table written by [`write_table`] for the same grid. The result has no trace.
pub fn read_table<R: BufRead>(grid: &Arc<DiskGrid>, input: R) -> Result<ScalarField> {
    let tol = 1e-9 * grid.h();
    let mut values = Vec::with_capacity(grid.len());
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse { line: line_no, reason };
        let cols = trimmed
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| parse_err(format!("`{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if cols.len() != 3 {
            return Err(parse_err(format!("expected 3 columns, found {}", cols.len())));
        }
        let node = grid
            .nodes()
            .get(values.len())
            .ok_or_else(|| parse_err("more rows than grid nodes".into()))?;
        if (node.x - cols[0]).abs() > tol || (node.y - cols[1]).abs() > tol {
            return Err(parse_err(format!("expected node ({}, {}), found ({}, {})", node.x, node.y, cols[0], cols[1])));
        }
        values.push(cols[2]);
    }
    if values.len() != grid.len() {
        return Err(Error::Parse { line: 0, reason: format!("expected {} rows, found {}", grid.len(), values.len()) });
    }
    ScalarField::new(grid.clone(), values, None)
}
