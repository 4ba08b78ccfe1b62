//! Almost-flat minimal graphs over the unit disk whose zero sets have
//! prescribed geometry and arbitrarily large length.
//!
//! The pipeline is: build a harmonic seed `v` ([`harmonic`]), sample it on a
//! cut-cell disk grid ([`grid`]), promote it to a discrete solution of the
//! minimal surface equation by Picard iteration ([`msolver`], using the
//! Dirichlet solver in [`poisson`]), then extract and measure the zero set of
//! the result ([`geometry`]).

pub mod error;
pub mod geometry;
pub mod grid;
pub mod harmonic;
pub mod msolver;
pub mod poisson;

pub use error::{Error, Result};
pub use grid::{DiskGrid, MatrixField, NodeKind, ScalarField, VectorField};
pub use geometry::{LevelSet, Polyline};
pub use harmonic::{CauchyFitReport, CurveSpec, HarmonicSeed};
pub use msolver::{IterationReport, PicardConfig};
pub use poisson::{LinearSolveStats, PoissonProblem};
