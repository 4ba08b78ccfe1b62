use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{laplacian, DiskGrid, ScalarField};

/// `a0 + sum_m (cos[m-1] r^m cos(m theta) + sin[m-1] r^m sin(m theta))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPolynomial {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl HarmonicPolynomial {
    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    /// Value, gradient and Hessian `[xx, xy, yy]` at `(x, y)`.
    pub fn jet(&self, x: f64, y: f64) -> (f64, [f64; 2], [f64; 3]) {
        let mut value = self.a0;
        let mut grad = [0.0; 2];
        let mut hess = [0.0; 3];
        // z^(m-2), z^(m-1), z^m as (re, im).
        let (mut zm1, mut zm) = ((0.0, 0.0), (1.0, 0.0));
        for m in 1..=self.degree() {
            let zm2 = zm1;
            zm1 = zm;
            zm = (zm.0 * x - zm.1 * y, zm.0 * y + zm.1 * x);
            let a = self.cos.get(m - 1).copied().unwrap_or(0.0);
            let b = self.sin.get(m - 1).copied().unwrap_or(0.0);
            let mf = m as f64;
            let mm = mf * (mf - 1.0);
            value += a * zm.0 + b * zm.1;
            grad[0] += mf * (a * zm1.0 + b * zm1.1);
            grad[1] += mf * (-a * zm1.1 + b * zm1.0);
            if m >= 2 {
                hess[0] += mm * (a * zm2.0 + b * zm2.1);
                hess[1] += mm * (-a * zm2.1 + b * zm2.0);
                hess[2] -= mm * (a * zm2.0 + b * zm2.1);
            }
        }
        (value, grad, hess)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum HarmonicSeed {
    /// `sin(k x) cosh(k y)`; zero set is the vertical lines `x = j pi / k`.
    StripeSinCosh { k: f64 },
    /// `Re((x + i y)^m)`.
    HarmonicPolynomialReZm { m: u32 },
    PolynomialExpansion(HarmonicPolynomial),
}

impl HarmonicSeed {
    pub fn validate(&self) -> Result<()> {
        match self {
            HarmonicSeed::StripeSinCosh { k } if !(k.is_finite() && *k > 0.0) => {
                Err(Error::invalid("k", format!("stripe frequency must be positive, got {k}")))
            }
            HarmonicSeed::PolynomialExpansion(p)
                if !(p.a0.is_finite() && p.cos.iter().chain(&p.sin).all(|c| c.is_finite())) =>
            {
                Err(Error::invalid("coefficients", "harmonic polynomial coefficients must be finite"))
            }
            _ => Ok(()),
        }
    }

    pub fn jet(&self, x: f64, y: f64) -> (f64, [f64; 2], [f64; 3]) {
        match self {
            HarmonicSeed::StripeSinCosh { k } => {
                let (s, c) = (k * x).sin_cos();
                let (ch, sh) = ((k * y).cosh(), (k * y).sinh());
                let k2 = k * k;
                (s * ch, [k * c * ch, k * s * sh], [-k2 * s * ch, k2 * c * sh, k2 * s * ch])
            }
            HarmonicSeed::HarmonicPolynomialReZm { m } => {
                let mut cos = vec![0.0; *m as usize];
                if *m == 0 {
                    return (1.0, [0.0; 2], [0.0; 3]);
                }
                cos[*m as usize - 1] = 1.0;
                HarmonicPolynomial { a0: 0.0, cos, sin: Vec::new() }.jet(x, y)
            }
            HarmonicSeed::PolynomialExpansion(p) => p.jet(x, y),
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        match self {
            HarmonicSeed::StripeSinCosh { k } => (k * x).sin() * (k * y).cosh(),
            _ => self.jet(x, y).0,
        }
    }

    /// Closed-form Laplacian; identically zero for every family.
    pub fn exact_laplacian(&self, x: f64, y: f64) -> f64 {
        let (_, _, h) = self.jet(x, y);
        h[0] + h[2]
    }

    pub fn nodal_line_count(&self) -> Option<usize> {
        match self {
            HarmonicSeed::StripeSinCosh { k } => Some(nodal_line_count(*k)),
            _ => None,
        }
    }

    pub fn predicted_nodal_length(&self) -> Option<f64> {
        match self {
            HarmonicSeed::StripeSinCosh { k } => Some(predicted_nodal_length(*k)),
            _ => None,
        }
    }
}

/// Offsets `j` with `|j| pi / k < 1`, i.e. nodal lines of the stripe seed inside the disk.
fn stripe_lines(k: f64) -> impl Iterator<Item = f64> {
    let max_j = (0i64..).take_while(|&j| j as f64 * PI / k < 1.0).last().unwrap_or(0);
    (-max_j..=max_j).map(move |j| j as f64 * PI / k)
}

pub fn nodal_line_count(k: f64) -> usize {
    stripe_lines(k).count()
}

/// Total chord length of the stripe seed's nodal lines inside the unit disk.
pub fn predicted_nodal_length(k: f64) -> f64 {
    stripe_lines(k).map(|x| 2.0 * (1.0 - x * x).sqrt()).sum()
}

pub fn sample(seed: &HarmonicSeed, grid: &Arc<DiskGrid>) -> Result<ScalarField> {
    seed.validate()?;
    ScalarField::from_fn(grid, |x, y| seed.value(x, y))
}

/// Sup of the discrete Laplacian of the sampled seed over interior nodes.
pub fn verify_harmonicity(seed: &HarmonicSeed, grid: &Arc<DiskGrid>) -> Result<f64> {
    Ok(laplacian(&sample(seed, grid)?).sup_norm_interior())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(h: f64) -> Arc<DiskGrid> {
        Arc::new(DiskGrid::new(h).unwrap())
    }

    #[test]
    fn sample_examples() {
        let g = grid(0.05);
        let x = sample(&HarmonicSeed::HarmonicPolynomialReZm { m: 1 }, &g).unwrap();
        for (n, v) in g.nodes().iter().zip(x.values()) {
            assert_eq!(*v, n.x);
        }
        let stripe = HarmonicSeed::StripeSinCosh { k: PI };
        assert!((stripe.value(0.5, 0.0) - 1.0).abs() < 1e-15);
        let poly = HarmonicSeed::PolynomialExpansion(HarmonicPolynomial { a0: 0.0, cos: vec![1.0], sin: vec![] });
        let p = sample(&poly, &g).unwrap();
        assert_eq!(p.values(), x.values());
        assert!(sample(&HarmonicSeed::StripeSinCosh { k: -1.0 }, &g).is_err());
    }

    #[test]
    fn line_counts() {
        assert_eq!(nodal_line_count(PI), 1);
        assert_eq!(nodal_line_count(10.0), 7);
        // Oracle: 2 floor(100 / pi) + 1.
        assert_eq!(nodal_line_count(100.0), 2 * (100.0 / PI).floor() as usize + 1);
        assert_eq!(nodal_line_count(100.0), 63);
    }

    #[test]
    fn predicted_lengths() {
        assert!((predicted_nodal_length(PI) - 2.0).abs() < 1e-15);
        let chord = |x: f64| 2.0 * (1.0 - x * x).sqrt();
        let by_hand = chord(0.0) + 2.0 * (chord(PI / 10.0) + chord(2.0 * PI / 10.0) + chord(3.0 * PI / 10.0));
        assert!((predicted_nodal_length(10.0) - by_hand).abs() < 1e-12);
        assert!((predicted_nodal_length(10.0) - 10.2464).abs() < 1e-4);
        // Riemann sum of the chord length: total ~ k.
        for k in [10.0, 50.0, 100.0] {
            let ratio = predicted_nodal_length(k) / k;
            assert!((ratio - 1.0).abs() < 0.1, "k = {k}: {ratio}");
        }
        let mut last = 0.0;
        for k in [4.0, 8.0, 16.0, 32.0, 64.0] {
            let l = predicted_nodal_length(k);
            assert!(l > last);
            last = l;
        }
    }

    #[test]
    fn closed_form_jets_are_harmonic_and_consistent() {
        let seeds = [
            HarmonicSeed::StripeSinCosh { k: 7.3 },
            HarmonicSeed::HarmonicPolynomialReZm { m: 5 },
            HarmonicSeed::PolynomialExpansion(HarmonicPolynomial {
                a0: 0.2,
                cos: vec![0.3, -1.0, 0.5],
                sin: vec![1.1, 0.0, -0.7, 0.25],
            }),
        ];
        let d = 1e-5;
        for seed in &seeds {
            for (x, y) in [(0.1, 0.2), (-0.4, 0.35), (0.6, -0.55)] {
                let scale = seed.jet(x, y).2.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                assert!(seed.exact_laplacian(x, y).abs() < 1e-12 * scale);
                // Finite-difference oracle for the jet.
                let (_, g, h) = seed.jet(x, y);
                let fx = (seed.value(x + d, y) - seed.value(x - d, y)) / (2.0 * d);
                let fy = (seed.value(x, y + d) - seed.value(x, y - d)) / (2.0 * d);
                assert!((fx - g[0]).abs() < 1e-6 * scale && (fy - g[1]).abs() < 1e-6 * scale);
                let gx = |x: f64, y: f64| seed.jet(x, y).1;
                let hxy = (gx(x, y + d)[0] - gx(x, y - d)[0]) / (2.0 * d);
                let hxx = (gx(x + d, y)[0] - gx(x - d, y)[0]) / (2.0 * d);
                assert!((hxy - h[1]).abs() < 1e-6 * scale && (hxx - h[0]).abs() < 1e-6 * scale);
            }
        }
    }

    #[test]
    fn discrete_harmonicity() {
        assert!(verify_harmonicity(&HarmonicSeed::HarmonicPolynomialReZm { m: 2 }, &grid(0.01)).unwrap() < 1e-9);
        let quad = HarmonicSeed::PolynomialExpansion(HarmonicPolynomial { a0: 1.0, cos: vec![0.5, 2.0], sin: vec![-1.0, 0.3] });
        assert!(verify_harmonicity(&quad, &grid(0.02)).unwrap() < 1e-9);
        let stripe = HarmonicSeed::StripeSinCosh { k: 10.0 };
        let ratio = verify_harmonicity(&stripe, &grid(0.02)).unwrap() / verify_harmonicity(&stripe, &grid(0.01)).unwrap();
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn zero_set_sign_pattern_invariant_under_positive_scaling() {
        let g = grid(0.05);
        let v = sample(&HarmonicSeed::StripeSinCosh { k: 10.0 }, &g).unwrap();
        for c in [1e-9, 0.37, 3.0, 1e6] {
            let s = v.scale(c);
            assert!(v.values().iter().zip(s.values()).all(|(a, b)| a.signum() == b.signum()));
        }
    }
}
