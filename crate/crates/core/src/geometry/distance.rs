//! Distances between zero sets and the gradient along them.

use super::{LevelSet, Polyline};
use crate::grid::{gradient, ScalarField, VectorField};

pub fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0) };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

/// Points along the polyline no farther apart than `step`, including every vertex.
pub fn densify(line: &Polyline, step: f64) -> Vec<[f64; 2]> {
    assert!(step > 0.0, "densification step must be positive");
    let mut out = Vec::new();
    if line.points.len() == 1 {
        out.push(line.points[0]);
    }
    for (a, b) in line.segments() {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let pieces = (len / step).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let t = k as f64 / pieces as f64;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    if !line.closed {
        if let Some(&last) = line.points.last() {
            if line.points.len() > 1 {
                out.push(last);
            }
        }
    }
    out
}

fn one_sided(from: &LevelSet, to: &LevelSet, step: f64) -> f64 {
    let segments: Vec<_> = to.polylines.iter().flat_map(Polyline::segments).collect();
    let single: Vec<_> = to.polylines.iter().filter(|p| p.points.len() == 1).map(|p| p.points[0]).collect();
    let mut worst: f64 = 0.0;
    for line in &from.polylines {
        for p in densify(line, step) {
            let near = segments
                .iter()
                .map(|&(a, b)| point_segment_distance(p, a, b))
                .chain(single.iter().map(|&q| (p[0] - q[0]).hypot(p[1] - q[1])))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(near);
        }
    }
    worst
}

/// Symmetric Hausdorff distance between two polyline sets.
///
/// Each set is densified at half the finer extraction spacing and every sample is
/// measured against the segments of the other set. Two empty sets are at distance
/// zero; an empty set is infinitely far from a non-empty one.
pub fn hausdorff_distance(a: &LevelSet, b: &LevelSet) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let step = 0.5 * a.spacing.min(b.spacing);
    one_sided(a, b, step).max(one_sided(b, a, step))
}

/// Bilinear interpolation of the grid gradient, renormalised over the inside corners.
fn interpolate(grad: &VectorField, p: [f64; 2]) -> Option<[f64; 2]> {
    let grid = grad.grid();
    let (i, j, fx, fy) = grid.cell_of(p[0], p[1])?;
    let corners = [(i, j, (1.0 - fx) * (1.0 - fy)), (i + 1, j, fx * (1.0 - fy)), (i, j + 1, (1.0 - fx) * fy), (i + 1, j + 1, fx * fy)];
    let mut acc = [0.0; 2];
    let mut weight = 0.0;
    let mut any = false;
    for (ci, cj, w) in corners {
        if let Some(n) = grid.node_at(ci, cj) {
            let g = grad.values()[n];
            acc[0] += w * g[0];
            acc[1] += w * g[1];
            weight += w;
            any = true;
        }
    }
    if !any {
        return None;
    }
    if weight <= 0.0 {
        // The point sits on a corner-free edge of the weights; fall back to a plain mean.
        let mut count = 0.0;
        acc = [0.0; 2];
        for (ci, cj, _) in corners {
            if let Some(n) = grid.node_at(ci, cj) {
                acc[0] += grad.values()[n][0];
                acc[1] += grad.values()[n][1];
                count += 1.0;
            }
        }
        return Some([acc[0] / count, acc[1] / count]);
    }
    Some([acc[0] / weight, acc[1] / weight])
}

/// Smallest `|grad u|` over the vertices of the zero set; `None` if it is empty.
pub fn transversality_margin(u: &ScalarField, ls: &LevelSet) -> Option<f64> {
    let grad = gradient(u);
    ls.polylines
        .iter()
        .flat_map(|p| p.points.iter())
        .filter_map(|&p| interpolate(&grad, p))
        .map(|g| g[0].hypot(g[1]))
        .reduce(f64::min)
}

/// Closest point on `curve` to `p`: distance and arclength position.
fn project(curve: &Polyline, p: [f64; 2]) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    let mut start = 0.0;
    for (a, b) in curve.segments() {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let t = if len == 0.0 { 0.0 } else { (((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len)).clamp(0.0, 1.0) };
        let d = (p[0] - a[0] - t * (b[0] - a[0])).hypot(p[1] - a[1] - t * (b[1] - a[1]));
        if d < best.0 {
            best = (d, start + t * len);
        }
        start += len;
    }
    best
}

/// The part of `ls` within `radius` of `curve` whose closest point on the curve
/// lies in the curve's relative interior.
///
/// Chains are split where they leave this tube; single stray vertices are dropped.
pub fn restrict_to_tube(ls: &LevelSet, curve: &Polyline, radius: f64) -> LevelSet {
    let total = curve.length();
    let slack = 1e-12 * total.max(1.0);
    let keep = |p: [f64; 2]| {
        let (d, s) = project(curve, p);
        d <= radius && (curve.closed || (s > slack && s < total - slack))
    };
    let mut out = Vec::new();
    for line in &ls.polylines {
        let flags: Vec<bool> = line.points.iter().map(|&p| keep(p)).collect();
        if flags.iter().all(|&f| f) {
            out.push(line.clone());
            continue;
        }
        let mut run: Vec<[f64; 2]> = Vec::new();
        for (&p, &f) in line.points.iter().zip(&flags) {
            if f {
                run.push(p);
            } else if !run.is_empty() {
                if run.len() >= 2 {
                    out.push(Polyline { points: std::mem::take(&mut run), closed: false });
                }
                run.clear();
            }
        }
        if run.len() >= 2 {
            out.push(Polyline { points: run, closed: false });
        }
    }
    LevelSet::from_polylines(out, ls.spacing)
}
