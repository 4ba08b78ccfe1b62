//! Marching squares over cells whose four corners are inside the disk.

use std::collections::HashMap;

use super::{transversality_margin, LevelSet, Polyline};
use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// Relative size of the nudge applied to exactly-zero samples.
const ZERO_NUDGE: f64 = 1e-14;

type EdgeId = usize;

/// Extracts `{u = 0}` as polylines, clipped to the disk of radius `1 - h`.
///
/// Cells are scanned row-major; saddles are resolved by the mean of the four
/// corners. Exactly-zero samples are first nudged to `1e-14 * sup |u|`.
pub fn extract_zero_set(u: &ScalarField) -> Result<LevelSet> {
    let grid = u.grid();
    let side = grid.side();
    let h = grid.h();
    let nudge = ZERO_NUDGE * u.sup_norm();
    let mut perturbed_zeros = 0;
    let values: Vec<f64> = u
        .values()
        .iter()
        .map(|&v| {
            if v == 0.0 {
                perturbed_zeros += 1;
                nudge
            } else {
                v
            }
        })
        .collect();

    let corner = |i: usize, j: usize| grid.node_at(i, j).map(|n| ([grid.lattice_coord(i), grid.lattice_coord(j)], n));
    let mut crossings: HashMap<EdgeId, [f64; 2]> = HashMap::new();
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();

    for j in 0..side - 1 {
        for i in 0..side - 1 {
            let (Some(c0), Some(c1), Some(c2), Some(c3)) = (corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1))
            else {
                continue;
            };
            let raw = [u.values()[c0.1], u.values()[c1.1], u.values()[c2.1], u.values()[c3.1]];
            if raw.iter().all(|&v| v == 0.0) {
                return Err(Error::DegenerateLevelSet { i, j });
            }
            let pos = [c0.0, c1.0, c2.0, c3.0];
            let val = [values[c0.1], values[c1.1], values[c2.1], values[c3.1]];
            // Edges: bottom (0-1), right (1-2), top (3-2), left (0-3).
            let edges: [(EdgeId, usize, usize); 4] = [
                (2 * (j * side + i), 0, 1),
                (2 * (j * side + i + 1) + 1, 1, 2),
                (2 * ((j + 1) * side + i), 3, 2),
                (2 * (j * side + i) + 1, 0, 3),
            ];
            let positive = val.map(|v| v > 0.0);
            let crossed: Vec<usize> = (0..4).filter(|&e| positive[edges[e].1] != positive[edges[e].2]).collect();
            if crossed.is_empty() {
                continue;
            }
            for &e in &crossed {
                let (id, a, b) = edges[e];
                crossings.entry(id).or_insert_with(|| {
                    let t = val[a] / (val[a] - val[b]);
                    [pos[a][0] + t * (pos[b][0] - pos[a][0]), pos[a][1] + t * (pos[b][1] - pos[a][1])]
                });
            }
            // Edges adjacent to each corner.
            const AROUND: [[usize; 2]; 4] = [[0, 3], [0, 1], [1, 2], [2, 3]];
            if crossed.len() == 2 {
                segments.push((edges[crossed[0]].0, edges[crossed[1]].0));
            } else {
                let centre_positive = val.iter().sum::<f64>() > 0.0;
                for k in 0..4 {
                    if positive[k] != centre_positive {
                        let [e1, e2] = AROUND[k];
                        segments.push((edges[e1].0, edges[e2].0));
                    }
                }
            }
        }
    }

    let chains = stitch(&segments, &crossings);
    let radius = 1.0 - h;
    let polylines: Vec<Polyline> = chains.into_iter().flat_map(|c| clip(c, radius)).collect();
    let mut ls = LevelSet::from_polylines(polylines, h);
    ls.perturbed_zeros = perturbed_zeros;
    ls.min_gradient = transversality_margin(u, &ls);
    Ok(ls)
}

/// Joins segments sharing edge crossings into chains, deterministically in
/// segment order: open chains first, then loops.
fn stitch(segments: &[(EdgeId, EdgeId)], crossings: &HashMap<EdgeId, [f64; 2]>) -> Vec<Polyline> {
    let mut at_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        at_edge.entry(a).or_default().push(s);
        at_edge.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();

    let walk = |start_seg: usize, start_edge: EdgeId, used: &mut Vec<bool>| {
        let mut points = vec![crossings[&start_edge]];
        let (mut seg, mut edge) = (start_seg, start_edge);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next_edge = if a == edge { b } else { a };
            if next_edge == start_edge {
                return Polyline { points, closed: true };
            }
            points.push(crossings[&next_edge]);
            match at_edge[&next_edge].iter().find(|&&s| !used[s]) {
                Some(&s) => {
                    seg = s;
                    edge = next_edge;
                }
                None => return Polyline { points, closed: false },
            }
        }
    };

    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        let (a, b) = segments[s];
        if at_edge[&a].len() == 1 {
            chains.push(walk(s, a, &mut used));
        } else if at_edge[&b].len() == 1 {
            chains.push(walk(s, b, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(s, segments[s].0, &mut used));
        }
    }
    chains
}

fn inside(p: [f64; 2], r: f64) -> bool {
    p[0].hypot(p[1]) < r
}

/// Parameters in `[0, 1]` where the segment `a -> b` meets the circle of radius `r`.
fn circle_hits(a: [f64; 2], b: [f64; 2], r: f64) -> Vec<f64> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let qa = d[0] * d[0] + d[1] * d[1];
    let qb = 2.0 * (a[0] * d[0] + a[1] * d[1]);
    let qc = a[0] * a[0] + a[1] * a[1] - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)].into_iter().filter(|t| (0.0..=1.0).contains(t)).collect()
}

fn at(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Cuts a chain where it leaves the disk of radius `r`, splitting it into pieces.
fn clip(chain: Polyline, r: f64) -> Vec<Polyline> {
    let n = chain.points.len();
    if chain.points.iter().all(|&p| inside(p, r)) {
        return vec![chain];
    }
    let mut pts = chain.points;
    if chain.closed {
        let first_out = pts.iter().position(|&p| !inside(p, r)).expect("some vertex is outside");
        pts.rotate_left(first_out);
        pts.push(pts[0]);
    }
    let mut pieces = Vec::new();
    let mut current: Vec<[f64; 2]> = Vec::new();
    let mut flush = |current: &mut Vec<[f64; 2]>| {
        if current.len() >= 2 {
            pieces.push(Polyline { points: std::mem::take(current), closed: false });
        }
        current.clear();
    };
    if n == 1 {
        return Vec::new();
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (inside(a, r), inside(b, r)) {
            (true, true) => {
                if current.is_empty() {
                    current.push(a);
                }
                current.push(b);
            }
            (true, false) => {
                if current.is_empty() {
                    current.push(a);
                }
                if let Some(&t) = circle_hits(a, b, r).last() {
                    current.push(at(a, b, t));
                }
                flush(&mut current);
            }
            (false, true) => {
                flush(&mut current);
                if let Some(&t) = circle_hits(a, b, r).first() {
                    current.push(at(a, b, t));
                }
                current.push(b);
            }
            (false, false) => {
                let hits = circle_hits(a, b, r);
                if hits.len() == 2 && hits[1] > hits[0] {
                    current.push(at(a, b, hits[0]));
                    current.push(at(a, b, hits[1]));
                    flush(&mut current);
                }
            }
        }
    }
    flush(&mut current);
    pieces
}
