use std::sync::Arc;

use super::{DiskGrid, NodeKind};
use crate::error::{Error, Result};

/// A real value at every inside node of a [`DiskGrid`].
///
/// A field may also carry its *trace*: one value per cut point on the circle.
/// Stencils use the trace where an arm leaves the disk; without it they fall
/// back to one-sided differences.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Arc<DiskGrid>,
    values: Vec<f64>,
    trace: Option<Vec<f64>>,
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::NonFinite { node }),
        None => Ok(()),
    }
}

impl ScalarField {
    pub fn new(grid: Arc<DiskGrid>, values: Vec<f64>, trace: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid("values", format!("expected {} values, got {}", grid.len(), values.len())));
        }
        if let Some(t) = &trace {
            if t.len() != grid.cuts().len() {
                return Err(Error::invalid("trace", format!("expected {} cut values, got {}", grid.cuts().len(), t.len())));
            }
            check_finite(t)?;
        }
        check_finite(&values)?;
        Ok(ScalarField { grid, values, trace })
    }

    /// Samples `f` at every inside node and every cut point.
    pub fn from_fn(grid: &Arc<DiskGrid>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|n| f(n.x, n.y)).collect();
        let trace = grid.cuts().iter().map(|c| f(c.x, c.y)).collect();
        Self::new(grid.clone(), values, Some(trace))
    }

    pub fn zeros(grid: &Arc<DiskGrid>) -> Self {
        ScalarField { grid: grid.clone(), values: vec![0.0; grid.len()], trace: Some(vec![0.0; grid.cuts().len()]) }
    }

    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn trace(&self) -> Option<&[f64]> {
        self.trace.as_deref()
    }

    pub fn into_parts(self) -> (Vec<f64>, Option<Vec<f64>>) {
        (self.values, self.trace)
    }

    pub fn without_trace(mut self) -> Self {
        self.trace = None;
        self
    }

    pub fn same_grid(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            trace: self.trace.as_ref().map(|t| t.iter().map(|v| c * v).collect()),
        }
    }

    /// `self + a * other`. The trace survives only if both fields have one.
    pub fn axpy(&self, a: f64, other: &ScalarField) -> Result<ScalarField> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let comb = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p + a * q).collect::<Vec<_>>();
        let values = comb(&self.values, &other.values);
        let trace = match (&self.trace, &other.trace) {
            (Some(t), Some(s)) => Some(comb(t, s)),
            _ => None,
        };
        check_finite(&values)?;
        Ok(ScalarField { grid: self.grid.clone(), values, trace })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.axpy(-1.0, other)
    }

    /// Sup norm over all inside nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup norm over [`NodeKind::Interior`] nodes only.
    pub fn sup_norm_interior(&self) -> f64 {
        self.grid
            .nodes()
            .iter()
            .zip(&self.values)
            .filter(|(n, _)| n.kind == NodeKind::Interior)
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }
}

/// Gradient `(d/dx, d/dy)` at every inside node.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub(crate) grid: Arc<DiskGrid>,
    pub(crate) values: Vec<[f64; 2]>,
}

impl VectorField {
    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    pub fn component(&self, axis: usize) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v[axis]).collect(),
            trace: None,
        }
    }
}

/// Symmetric 2x2 matrix per node, stored as `[xx, xy, yy]`.
#[derive(Clone, Debug)]
pub struct MatrixField {
    pub(crate) grid: Arc<DiskGrid>,
    pub(crate) values: Vec<[f64; 3]>,
}

impl MatrixField {
    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[[f64; 3]] {
        &self.values
    }
}
