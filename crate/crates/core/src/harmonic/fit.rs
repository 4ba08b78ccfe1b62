//! Harmonic-polynomial least squares on Cauchy data.
//!
//! Minimizes `sum_i p(c_i)^2 + (dp/dnu(c_i) - 1)^2` over harmonic polynomials of
//! degree at most `M` (basis `1, Re z^m, Im z^m`), with a small ridge term and
//! one step of iterative refinement to remove the ridge bias.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::curve::CurveSpec;
use super::seed::{HarmonicPolynomial, HarmonicSeed};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Ridge {
    /// `mu = factor * max diag(A^T A)`.
    Relative(f64),
    Absolute(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub ridge: Ridge,
    /// Fits whose design matrix has a larger condition estimate are rejected.
    pub max_condition: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { ridge: Ridge::Relative(1e-10), max_condition: 1e12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyFitReport {
    /// `max |p|` over collocation points.
    pub residual_value: f64,
    /// `max |dp/dnu - 1|` over collocation points.
    pub residual_normal: f64,
    /// Unregularized least-squares objective.
    pub objective: f64,
    pub degree: usize,
    pub collocation: usize,
    pub ridge: f64,
    /// `sigma_max / sigma_min` of the design matrix.
    pub condition: f64,
}

/// Column `col` of the basis: 0 is the constant, then `Re z^m`, `Im z^m` for m = 1..=M.
fn basis_row(degree: usize, p: [f64; 2], nu: [f64; 2], value_row: &mut [f64], normal_row: &mut [f64]) {
    let (x, y) = (p[0], p[1]);
    value_row[0] = 1.0;
    normal_row[0] = 0.0;
    let mut cur = (1.0, 0.0);
    for m in 1..=degree {
        let prev = cur;
        cur = (cur.0 * x - cur.1 * y, cur.0 * y + cur.1 * x);
        let mf = m as f64;
        value_row[2 * m - 1] = cur.0;
        value_row[2 * m] = cur.1;
        // grad Re z^m = m (Re z^(m-1), -Im z^(m-1)), grad Im z^m = m (Im z^(m-1), Re z^(m-1)).
        normal_row[2 * m - 1] = mf * (prev.0 * nu[0] - prev.1 * nu[1]);
        normal_row[2 * m] = mf * (prev.1 * nu[0] + prev.0 * nu[1]);
    }
}

pub fn fit_cauchy_data(curve: &CurveSpec, degree: usize, options: &FitOptions) -> Result<(HarmonicSeed, CauchyFitReport)> {
    if degree < 1 {
        return Err(Error::invalid("degree", "fit degree must be at least 1"));
    }
    let cols = 2 * degree + 1;
    if curve.collocation < 4 * cols {
        return Err(Error::invalid(
            "collocation",
            format!("degree {degree} needs at least {} collocation points, curve has {}", 4 * cols, curve.collocation),
        ));
    }
    let params = curve.parameters();
    let n = params.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, cols);
    let mut b = DVector::<f64>::zeros(2 * n);
    let (mut vrow, mut nrow) = (vec![0.0; cols], vec![0.0; cols]);
    for (i, &s) in params.iter().enumerate() {
        basis_row(degree, curve.point(s), curve.normal(s), &mut vrow, &mut nrow);
        for c in 0..cols {
            a[(2 * i, c)] = vrow[c];
            a[(2 * i + 1, c)] = nrow[c];
        }
        b[2 * i + 1] = 1.0;
    }

    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidCurve("non-finite collocation data".into()));
    }
    let Some(svd) = a.clone().try_svd(false, false, f64::EPSILON, 10_000) else {
        return Err(Error::IllConditionedFit { condition: f64::INFINITY });
    };
    let sv = svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= options.max_condition) {
        return Err(Error::IllConditionedFit { condition });
    }

    let mu = match options.ridge {
        Ridge::Relative(f) => f * a.column_iter().map(|c| c.norm_squared()).fold(0.0, f64::max),
        Ridge::Absolute(m) => m,
    };
    let mut augmented = DMatrix::<f64>::zeros(2 * n + cols, cols);
    augmented.rows_mut(0, 2 * n).copy_from(&a);
    for c in 0..cols {
        augmented[(2 * n + c, c)] = mu.sqrt();
    }
    let qr = augmented.qr();
    let (q, r) = (qr.q(), qr.r());
    let solve = |rhs: &DVector<f64>| -> DVector<f64> {
        let mut full = DVector::<f64>::zeros(2 * n + cols);
        full.rows_mut(0, 2 * n).copy_from(rhs);
        r.solve_upper_triangular(&(q.transpose() * full)).unwrap_or_else(|| DVector::zeros(cols))
    };
    let mut coeffs = solve(&b);
    let correction = solve(&(&b - &a * &coeffs));
    coeffs += correction;

    let residual = &a * &coeffs - &b;
    let mut residual_value = 0.0f64;
    let mut residual_normal = 0.0f64;
    for i in 0..n {
        residual_value = residual_value.max(residual[2 * i].abs());
        residual_normal = residual_normal.max(residual[2 * i + 1].abs());
    }
    let poly = HarmonicPolynomial {
        a0: coeffs[0],
        cos: (1..=degree).map(|m| coeffs[2 * m - 1]).collect(),
        sin: (1..=degree).map(|m| coeffs[2 * m]).collect(),
    };
    let report = CauchyFitReport {
        residual_value,
        residual_normal,
        objective: residual.norm_squared(),
        degree,
        collocation: n,
        ridge: mu,
        condition,
    };
    Ok((HarmonicSeed::PolynomialExpansion(poly), report))
}
