//! Area of the graph of `u` over the unit disk.

use crate::grid::{gradient, ScalarField};

/// Antiderivative of `sqrt(1 - x^2)`.
fn g(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    0.5 * (x * (1.0 - x * x).max(0.0).sqrt() + x.asin())
}

/// Area of `{x <= a, y <= b}` intersected with the unit disk.
fn quadrant_area(a: f64, b: f64) -> f64 {
    let a = a.clamp(-1.0, 1.0);
    if b >= 1.0 {
        return 2.0 * (g(a) - g(-1.0));
    }
    if b <= -1.0 {
        return 0.0;
    }
    let xs = (1.0 - b * b).sqrt();
    // Vertical chord length below y = b is 2s on |x| >= xs when b >= 0 (0 when b < 0)
    // and b + s on |x| <= xs.
    let outer = |lo: f64, hi: f64| if b >= 0.0 { 2.0 * (g(hi) - g(lo)) } else { 0.0 };
    let inner = |lo: f64, hi: f64| b * (hi - lo) + g(hi) - g(lo);
    let mut total = outer(-1.0, a.min(-xs));
    if a > -xs {
        total += inner(-xs, a.min(xs));
    }
    if a > xs {
        total += outer(xs, a);
    }
    total
}

/// Exact area of the rectangle `[x0, x1] x [y0, y1]` intersected with the unit disk.
pub fn disk_rect_area(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let a = quadrant_area(x1, y1) - quadrant_area(x0, y1) - quadrant_area(x1, y0) + quadrant_area(x0, y0);
    a.max(0.0)
}

/// Area of the graph `z = u(x, y)` over the disk.
///
/// Cells with four inside corners use the cell-centre gradient from the corner
/// values. Cells crossing the circle use their exact area inside the disk and the
/// mean grid gradient of the nearby inside nodes.
pub fn graph_area(u: &ScalarField) -> f64 {
    let grid = u.grid();
    let h = grid.h();
    let side = grid.side();
    let v = u.values();
    let grad = gradient(u);
    let integrand = |gx: f64, gy: f64| (1.0 + gx * gx + gy * gy).sqrt();
    let mut total = 0.0;
    for j in 0..side - 1 {
        for i in 0..side - 1 {
            let corners = [grid.node_at(i, j), grid.node_at(i + 1, j), grid.node_at(i + 1, j + 1), grid.node_at(i, j + 1)];
            if let [Some(a), Some(b), Some(c), Some(d)] = corners {
                let gx = (v[b] - v[a] + v[c] - v[d]) / (2.0 * h);
                let gy = (v[d] - v[a] + v[c] - v[b]) / (2.0 * h);
                total += h * h * integrand(gx, gy);
                continue;
            }
            let (x0, y0) = (grid.lattice_coord(i), grid.lattice_coord(j));
            let area = disk_rect_area(x0, x0 + h, y0, y0 + h);
            if area == 0.0 {
                continue;
            }
            let mut near: Vec<usize> = corners.iter().flatten().copied().collect();
            if near.is_empty() {
                // Sliver cell with every corner outside: borrow from the surrounding ring.
                for dj in -1isize..=2 {
                    for di in -1isize..=2 {
                        let (ni, nj) = (i as isize + di, j as isize + dj);
                        if ni >= 0 && nj >= 0 {
                            near.extend(grid.node_at(ni as usize, nj as usize));
                        }
                    }
                }
            }
            let (gx, gy) = if near.is_empty() {
                (0.0, 0.0)
            } else {
                let n = near.len() as f64;
                let s = near.iter().fold([0.0, 0.0], |acc, &k| [acc[0] + grad.values()[k][0], acc[1] + grad.values()[k][1]]);
                (s[0] / n, s[1] / n)
            };
            total += area * integrand(gx, gy);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::grid::DiskGrid;

    /// Midpoint-rule count of the disk inside a rectangle.
    fn brute_area(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> f64 {
        let (dx, dy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
        let mut hits = 0usize;
        for a in 0..n {
            for b in 0..n {
                let x = x0 + (a as f64 + 0.5) * dx;
                let y = y0 + (b as f64 + 0.5) * dy;
                hits += usize::from(x * x + y * y < 1.0);
            }
        }
        hits as f64 * dx * dy
    }

    #[test]
    fn whole_disk_and_quarters() {
        assert!((disk_rect_area(-2.0, 2.0, -2.0, 2.0) - PI).abs() < 1e-14);
        assert!((disk_rect_area(0.0, 1.0, 0.0, 1.0) - PI / 4.0).abs() < 1e-14);
        assert!((disk_rect_area(-1.0, 0.0, -3.0, 0.0) - PI / 4.0).abs() < 1e-14);
        assert!((disk_rect_area(-0.5, 0.5, -0.5, 0.5) - 1.0).abs() < 1e-14);
        assert_eq!(disk_rect_area(1.0, 2.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn matches_brute_force_on_boundary_cells() {
        let rects = [(0.6, 0.8, 0.6, 0.8), (-0.95, -0.85, 0.1, 0.4), (0.2, 0.5, -1.0, -0.85), (-0.1, 0.1, 0.95, 1.05)];
        for (x0, x1, y0, y1) in rects {
            let exact = disk_rect_area(x0, x1, y0, y1);
            let brute = brute_area(x0, x1, y0, y1, 2000);
            assert!((exact - brute).abs() < 2e-4 * (x1 - x0) * (y1 - y0) + 1e-7, "{exact} vs {brute}");
        }
    }

    #[test]
    fn flat_graph_is_the_disk() {
        let g = Arc::new(DiskGrid::new(0.03).unwrap());
        assert!((graph_area(&ScalarField::zeros(&g)) - PI).abs() < 1e-12);
    }

    #[test]
    fn tilted_plane() {
        let g = Arc::new(DiskGrid::new(0.03).unwrap());
        let u = ScalarField::from_fn(&g, |x, _| x).unwrap();
        assert!((graph_area(&u) - PI * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn paraboloid_converges() {
        // Oracle: area of z = (x^2 + y^2)/2 over the unit disk is 2 pi (2 sqrt 2 - 1)/3.
        let exact = 2.0 * PI * (2.0 * 2f64.sqrt() - 1.0) / 3.0;
        let err = |h: f64| {
            let g = Arc::new(DiskGrid::new(h).unwrap());
            (graph_area(&ScalarField::from_fn(&g, |x, y| 0.5 * (x * x + y * y)).unwrap()) - exact).abs()
        };
        let (a, b) = (err(0.04), err(0.02));
        assert!(b < 1e-2 && b < a, "{a} {b}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn additive_over_splits(x0 in -1.2f64..1.0, w in 0.01f64..0.5, y0 in -1.2f64..1.0, hgt in 0.01f64..0.5, t in 0.0f64..1.0) {
                let xm = x0 + t * w;
                let whole = disk_rect_area(x0, x0 + w, y0, y0 + hgt);
                let parts = disk_rect_area(x0, xm, y0, y0 + hgt) + disk_rect_area(xm, x0 + w, y0, y0 + hgt);
                prop_assert!((whole - parts).abs() < 1e-13);
                prop_assert!(whole <= w * hgt + 1e-13);
            }
        }
    }
}
