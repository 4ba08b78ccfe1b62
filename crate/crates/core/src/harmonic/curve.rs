//! Curves carrying Cauchy data, and their text file format.
//!
//! A curve file holds optional `key = value` directives followed by samples
//! `t x y`, one per line, with `t` strictly increasing. `#` starts a comment.
//!
//! ```text
//! # quarter circle, normal pointing away from the origin
//! orientation = -1
//! closed = false
//! collocation = 240
//! 0.0  0.5 0.0
//! 0.5  0.3536 0.3536
//! 1.0  0.0 0.5
//! ```
//!
//! The unit normal is `orientation * (-c'_y, c'_x) / |c'|`, the tangent rotated
//! a quarter turn counter-clockwise.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_COLLOCATION: usize = 200;

/// The curve must stay this far inside the unit circle.
const DISK_MARGIN: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveShape {
    Segment { start: [f64; 2], end: [f64; 2] },
    Arc { center: [f64; 2], radius: f64, start_angle: f64, end_angle: f64 },
    /// Piecewise-linear interpolation of samples; `t` is rescaled to `[0, 1]`.
    Sampled { t: Vec<f64>, points: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub shape: CurveShape,
    /// `+1` or `-1`; selects which side the unit normal points to.
    pub orientation: f64,
    pub closed: bool,
    pub collocation: usize,
}

pub const BUILTIN_CURVES: [&str; 4] = ["segment", "arc", "circle-arc-with-gap", "circle"];

impl CurveSpec {
    /// Validates containment in the disk and the shape's own constraints.
    pub fn new(shape: CurveShape, orientation: f64, closed: bool, collocation: usize) -> Result<Self> {
        if orientation != 1.0 && orientation != -1.0 {
            return Err(Error::InvalidCurve(format!("orientation must be +1 or -1, got {orientation}")));
        }
        if collocation < 2 {
            return Err(Error::InvalidCurve("need at least two collocation points".into()));
        }
        match &shape {
            CurveShape::Arc { radius, start_angle, end_angle, .. } => {
                if !(*radius > 0.0) || !(end_angle > start_angle) {
                    return Err(Error::InvalidCurve("arc needs a positive radius and increasing angles".into()));
                }
            }
            CurveShape::Sampled { t, points } => {
                if t.len() < 2 || t.len() != points.len() {
                    return Err(Error::InvalidCurve("need at least two samples".into()));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidCurve("parameter t must be strictly increasing".into()));
                }
            }
            CurveShape::Segment { .. } => {}
        }
        let curve = CurveSpec { shape, orientation, closed, collocation };
        for t in curve.parameters() {
            let [x, y] = curve.point(t);
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidCurve("non-finite point".into()));
            }
            if (x * x + y * y).sqrt() > 1.0 - DISK_MARGIN {
                return Err(Error::InvalidCurve(format!("point ({x}, {y}) is not inside the disk of radius {}", 1.0 - DISK_MARGIN)));
            }
            let [tx, ty] = curve.tangent(t);
            if !(tx.hypot(ty) > 0.0 && tx.is_finite() && ty.is_finite()) {
                return Err(Error::InvalidCurve(format!("tangent vanishes at t = {t}; the normal is undefined")));
            }
        }
        Ok(curve)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let arc = |radius: f64, start_angle: f64, end_angle: f64| CurveShape::Arc {
            center: [0.0, 0.0],
            radius,
            start_angle,
            end_angle,
        };
        let (shape, orientation, closed) = match name {
            "segment" => (CurveShape::Segment { start: [-0.5, 0.0], end: [0.5, 0.0] }, 1.0, false),
            "arc" => (arc(0.6, PI / 6.0, 5.0 * PI / 6.0), -1.0, false),
            "circle-arc-with-gap" => (arc(0.5, PI / 4.0, 2.0 * PI - PI / 4.0), -1.0, false),
            "circle" => (arc(0.5, 0.0, 2.0 * PI), -1.0, true),
            _ => return None,
        };
        Some(CurveSpec::new(shape, orientation, closed, DEFAULT_COLLOCATION).expect("built-in curves are valid"))
    }

    /// A built-in name or a path to a curve file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match Self::builtin(name_or_path) {
            Some(c) => Ok(c),
            None => Self::from_file(name_or_path),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut orientation = 1.0;
        let mut closed = false;
        let mut collocation = DEFAULT_COLLOCATION;
        let (mut t, mut points) = (Vec::new(), Vec::new());
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |reason: String| Error::Parse { line: line_no, reason };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = line_no;
            if let Some((key, value)) = line.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "orientation" => {
                        orientation = value.parse().map_err(|e| err(format!("orientation: {e}")))?;
                    }
                    "closed" => closed = value.parse().map_err(|e| err(format!("closed: {e}")))?,
                    "collocation" => collocation = value.parse().map_err(|e| err(format!("collocation: {e}")))?,
                    other => return Err(err(format!("unknown directive `{other}`"))),
                }
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(err(format!("expected `t x y`, found {} columns", cols.len())));
            }
            let nums = cols
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| err(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if nums.iter().any(|v| !v.is_finite()) {
                return Err(err("non-finite number".into()));
            }
            if t.last().is_some_and(|&last| nums[0] <= last) {
                return Err(err("parameter t must be strictly increasing".into()));
            }
            t.push(nums[0]);
            points.push([nums[1], nums[2]]);
        }
        if t.len() < 2 {
            return Err(Error::Parse { line: last_line, reason: "need at least two samples".into() });
        }
        CurveSpec::new(CurveShape::Sampled { t, points }, orientation, closed, collocation)
    }

    /// Uniform collocation parameters in `[0, 1]` (`[0, 1)` for closed curves).
    pub fn parameters(&self) -> Vec<f64> {
        let n = self.collocation;
        if self.closed {
            (0..n).map(|i| i as f64 / n as f64).collect()
        } else {
            (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
        }
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        match &self.shape {
            CurveShape::Segment { start, end } => [start[0] + s * (end[0] - start[0]), start[1] + s * (end[1] - start[1])],
            CurveShape::Arc { center, radius, start_angle, end_angle } => {
                let a = start_angle + s * (end_angle - start_angle);
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
            CurveShape::Sampled { t, points } => {
                let (i, frac) = locate(t, s);
                lerp(points[i], points[i + 1], frac)
            }
        }
    }

    /// Derivative of [`Self::point`] with respect to the normalized parameter.
    pub fn tangent(&self, s: f64) -> [f64; 2] {
        match &self.shape {
            CurveShape::Segment { start, end } => [end[0] - start[0], end[1] - start[1]],
            CurveShape::Arc { radius, start_angle, end_angle, .. } => {
                let span = end_angle - start_angle;
                let a = start_angle + s * span;
                [-radius * span * a.sin(), radius * span * a.cos()]
            }
            CurveShape::Sampled { t, points } => {
                let (i, frac) = locate(t, s);
                lerp(self.vertex_tangent(t, points, i), self.vertex_tangent(t, points, i + 1), frac)
            }
        }
    }

    fn vertex_tangent(&self, t: &[f64], points: &[[f64; 2]], i: usize) -> [f64; 2] {
        let n = t.len();
        let scale = t[n - 1] - t[0];
        let diff = |a: usize, b: usize, dt: f64| [(points[b][0] - points[a][0]) * scale / dt, (points[b][1] - points[a][1]) * scale / dt];
        // A closed sample list repeats its first point at the end.
        let wrap = self.closed && n > 2;
        match i {
            0 if wrap => diff(n - 2, 1, (t[n - 1] - t[n - 2]) + (t[1] - t[0])),
            0 => diff(0, 1, t[1] - t[0]),
            i if i == n - 1 && wrap => diff(n - 2, 1, (t[n - 1] - t[n - 2]) + (t[1] - t[0])),
            i if i == n - 1 => diff(n - 2, n - 1, t[n - 1] - t[n - 2]),
            i => diff(i - 1, i + 1, t[i + 1] - t[i - 1]),
        }
    }

    pub fn normal(&self, s: f64) -> [f64; 2] {
        let [tx, ty] = self.tangent(s);
        let len = tx.hypot(ty);
        [self.orientation * -ty / len, self.orientation * tx / len]
    }

    pub fn collocation_points(&self) -> Vec<[f64; 2]> {
        self.parameters().into_iter().map(|s| self.point(s)).collect()
    }

    /// Smallest distance between collocation points that are not parameter neighbours.
    pub fn min_separation(&self) -> f64 {
        let pts = self.collocation_points();
        let n = pts.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 2..n {
                if self.closed && i == 0 && j == n - 1 {
                    continue;
                }
                best = best.min((pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]));
            }
        }
        best
    }

    /// Approximate injectivity check: no two non-adjacent collocation points may
    /// come closer than half the mean spacing between neighbours.
    pub fn check_injective(&self) -> Result<()> {
        let pts = self.collocation_points();
        let spacing: f64 = pts.windows(2).map(|w| (w[0][0] - w[1][0]).hypot(w[0][1] - w[1][1])).sum::<f64>()
            / (pts.len() - 1) as f64;
        let sep = self.min_separation();
        if !(spacing > 0.0) || sep < 0.5 * spacing {
            return Err(Error::InvalidCurve(format!(
                "curve is not injective: non-adjacent points {sep:.3e} apart (mean spacing {spacing:.3e})"
            )));
        }
        Ok(())
    }

    /// Dense polyline through the curve with at most `step` between vertices.
    pub fn polyline(&self, step: f64) -> crate::geometry::Polyline {
        let length: f64 = {
            let fine: Vec<[f64; 2]> = (0..=1000).map(|i| self.point(i as f64 / 1000.0)).collect();
            fine.windows(2).map(|w| (w[0][0] - w[1][0]).hypot(w[0][1] - w[1][1])).sum()
        };
        let n = ((length / step).ceil() as usize).max(2);
        let count = if self.closed { n } else { n + 1 };
        let points = (0..count).map(|i| self.point(i as f64 / n as f64)).collect();
        crate::geometry::Polyline { points, closed: self.closed }
    }
}

fn locate(t: &[f64], s: f64) -> (usize, f64) {
    let n = t.len();
    let target = t[0] + s.clamp(0.0, 1.0) * (t[n - 1] - t[0]);
    let i = match t.binary_search_by(|v| v.total_cmp(&target)) {
        Ok(i) => i.min(n - 2),
        Err(i) => i.saturating_sub(1).min(n - 2),
    };
    (i, (target - t[i]) / (t[i + 1] - t[i]))
}

fn lerp(a: [f64; 2], b: [f64; 2], f: f64) -> [f64; 2] {
    [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
}
