//! Harmonic seed functions with prescribed nodal geometry.
//!
//! Two sources of seeds: closed-form oscillatory families whose zero sets are
//! known exactly, and harmonic polynomials fitted by least squares to the
//! Cauchy data `v = 0`, `dv/dnu = 1` along a user curve.

mod curve;
mod fit;
mod seed;

pub use curve::{CurveShape, CurveSpec, BUILTIN_CURVES, DEFAULT_COLLOCATION};
pub use fit::{fit_cauchy_data, CauchyFitReport, FitOptions, Ridge};
pub use seed::{nodal_line_count, predicted_nodal_length, sample, verify_harmonicity, HarmonicPolynomial, HarmonicSeed};
