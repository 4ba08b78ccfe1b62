use super::{Arm, DiskGrid, Direction, MatrixField, ScalarField, VectorField};
use crate::error::{Error, Result};

/// Up to three samples `(offset, value)` along one axis, the first at offset 0.
struct AxisStencil {
    offsets: [f64; 3],
    values: [f64; 3],
    len: usize,
}

impl AxisStencil {
    fn d1(&self) -> f64 {
        let [_, t1, t2] = self.offsets;
        let [f0, f1, f2] = self.values;
        match self.len {
            3 => {
                f0 * (-(t1 + t2) / (t1 * t2)) + f1 * (-t2 / (t1 * (t1 - t2))) + f2 * (-t1 / (t2 * (t2 - t1)))
            }
            2 => (f1 - f0) / t1,
            _ => 0.0,
        }
    }

    fn d2(&self) -> f64 {
        match self.len {
            3 => {
                let [w0, w1, w2] = lagrange_d2(self.offsets[1], self.offsets[2]);
                w0 * self.values[0] + w1 * self.values[1] + w2 * self.values[2]
            }
            _ => 0.0,
        }
    }
}

/// Second-derivative weights at 0 for samples at `{0, t1, t2}`.
fn lagrange_d2(t1: f64, t2: f64) -> [f64; 3] {
    [2.0 / (t1 * t2), 2.0 / (t1 * (t1 - t2)), 2.0 / (t2 * (t2 - t1))]
}

/// Shortley–Weller weights `(centre, minus, plus)` for arms of length `minus`
/// and `plus` on either side of the centre.
pub fn second_derivative_weights(minus: f64, plus: f64) -> (f64, f64, f64) {
    let [c, m, p] = lagrange_d2(-minus, plus);
    (c, m, p)
}

fn arm_sample(field: &ScalarField, arm: Arm, dist: f64, sign: f64) -> Option<(f64, f64)> {
    match arm {
        Arm::Node(k) => Some((sign * dist, field.values()[k])),
        Arm::Cut(c) => field.trace().map(|t| (sign * dist, t[c])),
    }
}

fn axis_stencil(field: &ScalarField, node: usize, axis: usize) -> AxisStencil {
    let grid = field.grid();
    let (plus_dir, minus_dir) = Direction::along(axis);
    let centre = field.values()[node];
    let arms = &grid.nodes()[node].arms;
    let plus = arm_sample(field, arms[plus_dir.index()], grid.arm_length(node, plus_dir), 1.0);
    let minus = arm_sample(field, arms[minus_dir.index()], grid.arm_length(node, minus_dir), -1.0);

    let one_sided = |first: (f64, f64), dir: Direction| {
        let second = grid
            .second_arm(node, dir)
            .and_then(|(arm, dist)| arm_sample(field, arm, dist, dir.sign()));
        match second {
            Some(s) => AxisStencil { offsets: [0.0, first.0, s.0], values: [centre, first.1, s.1], len: 3 },
            None => AxisStencil { offsets: [0.0, first.0, 0.0], values: [centre, first.1, 0.0], len: 2 },
        }
    };

    match (minus, plus) {
        (Some(m), Some(p)) => AxisStencil { offsets: [0.0, m.0, p.0], values: [centre, m.1, p.1], len: 3 },
        (None, Some(p)) => one_sided(p, plus_dir),
        (Some(m), None) => one_sided(m, minus_dir),
        (None, None) => AxisStencil { offsets: [0.0; 3], values: [centre, 0.0, 0.0], len: 1 },
    }
}

/// Second-order gradient: central differences where both arms are available,
/// unequal-arm differences against the trace at cut points, one-sided
/// three-point differences when the field has no trace.
pub fn gradient(f: &ScalarField) -> VectorField {
    let values = (0..f.grid().len())
        .map(|n| [axis_stencil(f, n, 0).d1(), axis_stencil(f, n, 1).d1()])
        .collect();
    VectorField { grid: f.grid().clone(), values }
}

/// Mixed partial by the four-point cross stencil when all diagonal neighbours are
/// inside, by a seven-point stencil on one diagonal pair when only that pair is,
/// else by differencing the gradient.
fn mixed_partials(f: &ScalarField) -> Vec<f64> {
    let grid: &DiskGrid = f.grid();
    let h = grid.h();
    let mut fallback: Option<(ScalarField, ScalarField)> = None;
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(n, node)| {
            let diag = |di: isize, dj: isize| {
                grid.node_at((node.i as isize + di) as usize, (node.j as isize + dj) as usize)
            };
            let v = f.values();
            let (pp, pm, mp, mm) = (diag(1, 1), diag(1, -1), diag(-1, 1), diag(-1, -1));
            let axis_sum = match node.arms {
                [Arm::Node(e), Arm::Node(w), Arm::Node(nn), Arm::Node(s)] => Some(v[e] + v[w] + v[nn] + v[s]),
                _ => None,
            };
            if let (Some(pp), Some(pm), Some(mp), Some(mm)) = (pp, pm, mp, mm) {
                (v[pp] - v[pm] - v[mp] + v[mm]) / (4.0 * h * h)
            } else if let (Some(pp), Some(mm), Some(axes)) = (pp, mm, axis_sum) {
                (v[pp] + v[mm] - axes + 2.0 * v[n]) / (2.0 * h * h)
            } else if let (Some(pm), Some(mp), Some(axes)) = (pm, mp, axis_sum) {
                -(v[pm] + v[mp] - axes + 2.0 * v[n]) / (2.0 * h * h)
            } else {
                let (gx, gy) = fallback.get_or_insert_with(|| {
                    let g = gradient(f);
                    (g.component(0), g.component(1))
                });
                0.5 * (axis_stencil(gx, n, 1).d1() + axis_stencil(gy, n, 0).d1())
            }
        })
        .collect()
}

pub fn hessian(f: &ScalarField) -> MatrixField {
    let mixed = mixed_partials(f);
    let values = (0..f.grid().len())
        .map(|n| [axis_stencil(f, n, 0).d2(), mixed[n], axis_stencil(f, n, 1).d2()])
        .collect();
    MatrixField { grid: f.grid().clone(), values }
}

/// Five-point Laplacian, with Shortley–Weller unequal arms next to the circle
/// when the field carries a trace.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let values = (0..f.grid().len())
        .map(|n| axis_stencil(f, n, 0).d2() + axis_stencil(f, n, 1).d2())
        .collect();
    ScalarField::new(f.grid().clone(), values, None).expect("stencils of a finite field are finite")
}

/// Discrete `C^k` norm, `k <= 2`: the largest of `sup |f|`, the sup of each
/// gradient component and the sup of each Hessian entry, over all inside nodes.
pub fn ck_norm(f: &ScalarField, k: usize) -> Result<f64> {
    if k > 2 {
        return Err(Error::invalid("k", format!("derivative order must be 0, 1 or 2, got {k}")));
    }
    let mut norm = f.sup_norm();
    if k >= 1 {
        for g in gradient(f).values() {
            norm = norm.max(g[0].abs()).max(g[1].abs());
        }
    }
    if k == 2 {
        for m in hessian(f).values() {
            norm = norm.max(m[0].abs()).max(m[1].abs()).max(m[2].abs());
        }
    }
    Ok(norm)
}
