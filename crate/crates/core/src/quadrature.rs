//! Quadrature rules: Gauss-Legendre, product rules on balls and spheres, and
//! seeded Monte Carlo with counter-based substreams.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default seed for every randomized procedure.
pub const DEFAULT_SEED: u64 = 0xD1CE;

/// Samples per Monte Carlo substream.
const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum QuadratureSpec {
    /// Tensor Gauss-Legendre on the cube `[-R, R]^n`.
    TensorGaussLegendre {
        order: usize,
    },
    /// Radial (or polar) Gauss-Legendre times a rule on the sphere.
    SphericalProduct {
        polar_order: usize,
        azimuthal_order: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::SphericalProduct {
            polar_order: 64,
            azimuthal_order: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn monte_carlo(seed: u64) -> Self {
        QuadratureSpec::MonteCarlo {
            samples: 1_000_000,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        match *self {
            QuadratureSpec::TensorGaussLegendre { order } if order < 2 => {
                bad("Gauss-Legendre order must be at least 2")
            }
            QuadratureSpec::SphericalProduct {
                polar_order,
                azimuthal_order,
            } if polar_order < 2 || azimuthal_order < 2 => {
                bad("spherical product orders must be at least 2")
            }
            QuadratureSpec::MonteCarlo { samples, .. } if samples < 1000 => {
                bad("Monte Carlo needs at least 1000 samples")
            }
            _ => Ok(()),
        }
    }
}

/// A quadrature result. `std_error` is zero for deterministic rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub std_error: f64,
}

impl Integral {
    pub fn exact(value: f64) -> Self {
        Integral {
            value,
            std_error: 0.0,
        }
    }

    /// `|value - reference| <= k * std_error` (with an absolute floor for
    /// deterministic results).
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error + 1e-12
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| (mid + half * xi, half * wi))
        .collect()
}

/// A weighted point set.
pub type Rule = Vec<(Vec<f64>, f64)>;

/// Rule on the unit sphere `S^k` in R^{k+1}, restricted to the polar cap
/// `{angle to e_{k+1} <= cap}`. `cap = PI` is the whole sphere, `cap = PI/2`
/// the upper hemisphere.
pub fn sphere_rule(k: usize, polar_order: usize, azimuthal_order: usize, cap: f64) -> Rule {
    let full = cap >= PI;
    match k {
        0 => {
            let mut rule = vec![(vec![1.0], 1.0)];
            if full {
                rule.push((vec![-1.0], 1.0));
            }
            rule
        }
        1 if full => {
            // periodic trapezoid, exact for trigonometric polynomials
            let m = azimuthal_order;
            let w = 2.0 * PI / m as f64;
            (0..m)
                .map(|i| {
                    let t = -PI + w * i as f64;
                    (vec![t.sin(), t.cos()], w)
                })
                .collect()
        }
        1 => gauss_legendre_on(polar_order, -cap, cap)
            .into_iter()
            .map(|(t, w)| (vec![t.sin(), t.cos()], w))
            .collect(),
        _ => {
            let equator = sphere_rule(k - 1, polar_order, azimuthal_order, PI);
            let mut rule = Vec::with_capacity(polar_order * equator.len());
            for (phi, wphi) in gauss_legendre_on(polar_order, 0.0, cap.min(PI)) {
                let (s, c) = phi.sin_cos();
                let jac = s.powi(k as i32 - 1);
                for (omega, womega) in &equator {
                    let mut p: Vec<f64> = omega.iter().map(|v| s * v).collect();
                    p.push(c);
                    rule.push((p, wphi * jac * womega));
                }
            }
            rule
        }
    }
}

/// Rule on the ball of radius `radius` in R^n (radial Gauss-Legendre times a
/// full sphere rule).
pub fn ball_rule(n: usize, radius: f64, radial_order: usize, azimuthal_order: usize) -> Rule {
    let sphere = sphere_rule(n - 1, radial_order, azimuthal_order, PI);
    let mut rule = Vec::with_capacity(radial_order * sphere.len());
    for (r, wr) in gauss_legendre_on(radial_order, 0.0, radius) {
        let jac = r.powi(n as i32 - 1);
        for (omega, wo) in &sphere {
            rule.push((omega.iter().map(|v| r * v).collect(), wr * jac * wo));
        }
    }
    rule
}

/// Tensor Gauss-Legendre rule on `[-half_width, half_width]^n`.
pub fn cube_rule(n: usize, half_width: f64, order: usize) -> Rule {
    let line = gauss_legendre_on(order, -half_width, half_width);
    let mut rule: Rule = vec![(Vec::new(), 1.0)];
    for _ in 0..n {
        rule = rule
            .into_iter()
            .flat_map(|(p, w)| {
                line.iter().map(move |(x, wx)| {
                    let mut q = p.clone();
                    q.push(*x);
                    (q, w * wx)
                })
            })
            .collect();
    }
    rule
}

pub fn apply_rule<F>(rule: &Rule, f: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    rule.iter().map(|(p, w)| w * f(p)).sum()
}

/// Monte Carlo mean of `f(g)` for standard normal vectors `g` in R^dim.
///
/// Samples are drawn in fixed-size chunks; chunk `c` uses ChaCha8 stream `c`
/// of `seed`, and chunk sums are reduced in chunk order, so the result does
/// not depend on how the chunks are scheduled across threads.
pub fn monte_carlo_normal<F>(dim: usize, samples: usize, seed: u64, f: F) -> Integral
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut g = vec![0.0; dim];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for gi in g.iter_mut() {
                    *gi = StandardNormal.sample(&mut rng);
                }
                let v = f(&g);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2));
    let m = samples as f64;
    let mean = sum / m;
    let var = ((sum_sq / m - mean * mean) * m / (m - 1.0)).max(0.0);
    Integral {
        value: mean,
        std_error: (var / m).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for order in [2usize, 5, 16, 64] {
            let (x, w) = gauss_legendre(order);
            let deg = 2 * order - 1;
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(deg as i32 - 1))
                .sum();
            // int_{-1}^{1} x^{deg-1} = 2/deg for even deg-1
            assert!((s - 2.0 / deg as f64).abs() < 1e-13, "order {order}");
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn sphere_and_ball_volumes() {
        // |S^1| = 2 pi, |S^2| = 4 pi, |S^3| = 2 pi^2; ball volumes
        let area = |k| {
            sphere_rule(k, 32, 32, PI)
                .iter()
                .map(|(_, w)| w)
                .sum::<f64>()
        };
        assert!((area(0) - 2.0).abs() < 1e-14);
        assert!((area(1) - 2.0 * PI).abs() < 1e-13);
        assert!((area(2) - 4.0 * PI).abs() < 1e-13);
        // 32^3 weights summed, so rounding accumulates
        assert!((area(3) - 2.0 * PI * PI).abs() < 1e-10);
        let half: f64 = sphere_rule(2, 32, 32, PI / 2.0)
            .iter()
            .map(|(_, w)| w)
            .sum();
        assert!((half - 2.0 * PI).abs() < 1e-13);
        let vol: f64 = ball_rule(3, 2.0, 16, 16).iter().map(|(_, w)| w).sum();
        assert!((vol - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
        for (p, _) in sphere_rule(2, 8, 8, PI) {
            assert!((p.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cube_rule_volume() {
        let v: f64 = cube_rule(2, 1.5, 4).iter().map(|(_, w)| w).sum();
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn monte_carlo_is_bit_reproducible_and_unbiased() {
        let a = monte_carlo_normal(2, 20_000, 7, |g| g[0] * g[0]);
        let b = monte_carlo_normal(2, 20_000, 7, |g| g[0] * g[0]);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.agrees_with(1.0, 4.0));
        let c = monte_carlo_normal(2, 20_000, 8, |g| g[0] * g[0]);
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::TensorGaussLegendre { order: 1 }
            .validate()
            .is_err());
        assert!(QuadratureSpec::MonteCarlo {
            samples: 10,
            seed: 1
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec::default().validate().is_ok());
    }
}
