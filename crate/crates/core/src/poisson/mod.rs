//! Dirichlet problem `Δw = f` in the disk, `w = g` on the circle.
//!
//! The discrete operator is the five-point Laplacian with Shortley–Weller
//! unequal arms at boundary-cut nodes; it is an M-matrix but not symmetric, so
//! the system is solved with Jacobi-preconditioned BiCGSTAB.

mod krylov;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{second_derivative_weights, Arm, DiskGrid, Direction, ScalarField};
use krylov::{bicgstab, LinearOperator};

/// Sharp constant in `sup |w| <= C sup |f| + sup |g|` on the unit disk, from the
/// barrier `(1 - |x|^2) / 4`.
pub const DISK_MAX_PRINCIPLE_CONSTANT: f64 = 0.25;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
    pub size: usize,
}

/// Discrete Laplacian on the inside nodes of a grid, with the couplings to cut
/// points kept separately so boundary data can be folded into the right-hand side.
#[derive(Clone, Debug)]
pub struct LaplaceOperator {
    grid: Arc<DiskGrid>,
    diag: Vec<f64>,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    coeffs: Vec<f64>,
    cut_row_start: Vec<usize>,
    cut_cols: Vec<usize>,
    cut_coeffs: Vec<f64>,
}

impl LinearOperator for LaplaceOperator {
    fn size(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in out.iter_mut().enumerate() {
            let mut acc = self.diag[row] * x[row];
            for k in self.row_start[row]..self.row_start[row + 1] {
                acc += self.coeffs[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }

    fn diagonal(&self) -> &[f64] {
        &self.diag
    }
}

/// Assembles the Shortley–Weller Laplacian for `grid`.
pub fn assemble(grid: &Arc<DiskGrid>) -> LaplaceOperator {
    let n = grid.len();
    let mut op = LaplaceOperator {
        grid: grid.clone(),
        diag: vec![0.0; n],
        row_start: Vec::with_capacity(n + 1),
        cols: Vec::with_capacity(4 * n),
        coeffs: Vec::with_capacity(4 * n),
        cut_row_start: Vec::with_capacity(n + 1),
        cut_cols: Vec::new(),
        cut_coeffs: Vec::new(),
    };
    op.row_start.push(0);
    op.cut_row_start.push(0);
    for (row, node) in grid.nodes().iter().enumerate() {
        for axis in 0..2 {
            let (plus, minus) = Direction::along(axis);
            let (c, wm, wp) = second_derivative_weights(grid.arm_length(row, minus), grid.arm_length(row, plus));
            op.diag[row] += c;
            for (dir, w) in [(plus, wp), (minus, wm)] {
                match node.arms[dir.index()] {
                    Arm::Node(k) => {
                        op.cols.push(k);
                        op.coeffs.push(w);
                    }
                    Arm::Cut(cut) => {
                        op.cut_cols.push(cut);
                        op.cut_coeffs.push(w);
                    }
                }
            }
        }
        op.row_start.push(op.cols.len());
        op.cut_row_start.push(op.cut_cols.len());
    }
    op
}

impl LaplaceOperator {
    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Applies the operator to a field, taking cut-point values from its trace
    /// (zero if the field has none).
    pub fn apply_field(&self, u: &ScalarField) -> Result<ScalarField> {
        if **u.grid() != *self.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = vec![0.0; self.size()];
        LinearOperator::apply(self, u.values(), &mut out);
        if let Some(trace) = u.trace() {
            for (o, c) in out.iter_mut().zip(self.cut_terms(trace)) {
                *o += c;
            }
        }
        ScalarField::new(self.grid.clone(), out, None)
    }

    fn cut_terms(&self, boundary: &[f64]) -> Vec<f64> {
        (0..self.size())
            .map(|row| {
                (self.cut_row_start[row]..self.cut_row_start[row + 1])
                    .map(|k| self.cut_coeffs[k] * boundary[self.cut_cols[k]])
                    .sum()
            })
            .collect()
    }

    fn iteration_cap(&self) -> usize {
        (50.0 * (self.size() as f64).sqrt()).ceil() as usize
    }

    /// Solves `Δw = rhs` with `w = boundary` at the cut points (zero if `None`).
    /// The returned field carries the boundary values as its trace.
    pub fn solve(&self, rhs: &ScalarField, boundary: Option<&[f64]>, tol: f64) -> Result<(ScalarField, LinearSolveStats)> {
        self.solve_capped(rhs, boundary, tol, self.iteration_cap())
    }

    pub fn solve_capped(
        &self,
        rhs: &ScalarField,
        boundary: Option<&[f64]>,
        tol: f64,
        max_iters: usize,
    ) -> Result<(ScalarField, LinearSolveStats)> {
        if !(tol > 0.0 && tol <= 1e-2) {
            return Err(Error::invalid("tol", format!("relative tolerance must lie in (0, 1e-2], got {tol}")));
        }
        if **rhs.grid() != *self.grid {
            return Err(Error::GridMismatch);
        }
        let cuts = self.grid.cuts().len();
        let boundary = match boundary {
            Some(g) if g.len() != cuts => {
                return Err(Error::invalid("boundary", format!("expected {cuts} values, got {}", g.len())))
            }
            Some(g) => g.to_vec(),
            None => vec![0.0; cuts],
        };
        let mut b = rhs.values().to_vec();
        for (bi, c) in b.iter_mut().zip(self.cut_terms(&boundary)) {
            *bi -= c;
        }
        let mut x = vec![0.0; self.size()];
        let outcome = bicgstab(self, &b, &mut x, tol, max_iters);
        let stats =
            LinearSolveStats { iterations: outcome.iterations, relative_residual: outcome.relative_residual, size: self.size() };
        if !outcome.converged {
            return Err(Error::SolverStall { iterations: outcome.iterations, residual: outcome.relative_residual });
        }
        Ok((ScalarField::new(self.grid.clone(), x, Some(boundary))?, stats))
    }
}

/// `Δw = rhs` in the disk, `w = boundary` on the circle (one value per cut point).
#[derive(Clone, Debug)]
pub struct PoissonProblem {
    pub rhs: ScalarField,
    pub boundary: Vec<f64>,
}

impl PoissonProblem {
    /// Homogeneous boundary data.
    pub fn new(rhs: ScalarField) -> Self {
        let boundary = vec![0.0; rhs.grid().cuts().len()];
        PoissonProblem { rhs, boundary }
    }

    /// Boundary data sampled from `g` at the cut points.
    pub fn with_boundary_fn(rhs: ScalarField, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let boundary: Vec<f64> = rhs.grid().cuts().iter().map(|c| g(c.x, c.y)).collect();
        if let Some(node) = boundary.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node });
        }
        Ok(PoissonProblem { rhs, boundary })
    }

    pub fn grid(&self) -> &Arc<DiskGrid> {
        self.rhs.grid()
    }
}

pub fn solve_dirichlet(problem: &PoissonProblem, tol: f64) -> Result<(ScalarField, LinearSolveStats)> {
    assemble(problem.grid()).solve(&problem.rhs, Some(&problem.boundary), tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxPrincipleCheck {
    pub holds: bool,
    /// `bound - sup |w|`; negative when violated.
    pub margin: f64,
    pub bound: f64,
    pub sup_solution: f64,
}

/// Checks `sup |w| <= sup |f| / 4 + sup |g|`, allowing a relative slack of 1e-8
/// for the linear-solver tolerance.
pub fn maximum_principle_check(problem: &PoissonProblem, solution: &ScalarField) -> MaxPrincipleCheck {
    let sup_g = problem.boundary.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bound = DISK_MAX_PRINCIPLE_CONSTANT * problem.rhs.sup_norm() + sup_g;
    let sup_solution = solution.sup_norm();
    let margin = bound - sup_solution;
    MaxPrincipleCheck { holds: margin >= -(1e-8 * bound + 1e-300), margin, bound, sup_solution }
}
