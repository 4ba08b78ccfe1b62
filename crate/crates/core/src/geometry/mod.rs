//! Zero sets, their length and stability, and the graph area.

mod area;
mod distance;
mod marching;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use area::{disk_rect_area, graph_area};
pub use distance::{densify, hausdorff_distance, point_segment_distance, restrict_to_tube, transversality_margin};
pub use marching::extract_zero_set;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// A closed polyline has an implicit segment from the last point back to the first.
    pub closed: bool,
}

impl Polyline {
    pub fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.points.len();
        let count = match (self.closed, n) {
            (_, 0 | 1) => 0,
            (true, 2) => 1,
            (true, _) => n,
            (false, _) => n - 1,
        };
        (0..count).map(move |k| (self.points[k], self.points[(k + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1])).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub polylines: Vec<Polyline>,
    pub total_length: f64,
    /// Smallest interpolated `|grad u|` along the polylines; `None` for an empty set.
    pub min_gradient: Option<f64>,
    /// Spacing of the grid the set was extracted on; sets the densification step.
    pub spacing: f64,
    /// Number of exactly-zero samples nudged to a tiny positive value before extraction.
    pub perturbed_zeros: usize,
}

impl LevelSet {
    pub fn from_polylines(polylines: Vec<Polyline>, spacing: f64) -> Self {
        let total_length = polylines.iter().map(Polyline::length).sum();
        LevelSet { polylines, total_length, min_gradient: None, spacing, perturbed_zeros: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn summary(&self) -> LevelSetSummary {
        LevelSetSummary {
            total_length: self.total_length,
            min_gradient: self.min_gradient,
            chains: self.polylines.len(),
            closed_chains: self.polylines.iter().filter(|p| p.closed).count(),
            perturbed_zeros: self.perturbed_zeros,
        }
    }
}

pub fn polyline_length(ls: &LevelSet) -> f64 {
    ls.polylines.iter().map(Polyline::length).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetSummary {
    pub total_length: f64,
    pub min_gradient: Option<f64>,
    pub chains: usize,
    pub closed_chains: usize,
    pub perturbed_zeros: usize,
}

/// Writes one `x y` pair per line with a blank line between chains. Closed
/// chains repeat their first point at the end.
pub fn write_polylines<W: Write>(ls: &LevelSet, mut out: W) -> Result<()> {
    for (k, line) in ls.polylines.iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        for p in &line.points {
            writeln!(out, "{} {}", p[0], p[1])?;
        }
        if line.closed {
            if let Some(p) = line.points.first() {
                writeln!(out, "{} {}", p[0], p[1])?;
            }
        }
    }
    Ok(())
}
