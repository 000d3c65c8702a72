//! Pointwise checks of the calibration argument for graphs.
//!
//! The form `ω(X_1, ..., X_n) = det(X_1, ..., X_n, N̄)` is built from the
//! upward normal of the graph translated vertically, `N̄(x, z) = N(x)`. Its
//! comass is at most one, and `d(e^{-F} ω) = div(e^{-F} N̄) dV` with
//! `div(e^{-F} N̄) = -e^{-F} H_F`, so the weighted form is closed exactly where
//! the graph is weighted minimal.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::density::Density;
use crate::error::{check_dim, Error, Result};
use crate::fd;
use crate::graph::{
    graph_mean_curvature, graph_weighted_mean_curvature, upward_normal, GraphFunction,
};
use crate::linalg::{det_columns, dot, orthonormalize};

/// Half-width of the box the random comass trials sample points from.
const TRIAL_BOX: f64 = 3.0;

/// Upward graph normal extended to R^{n+1} by vertical translation.
#[derive(Debug, Clone)]
pub struct ExtendedNormalField {
    graph: GraphFunction,
}

impl ExtendedNormalField {
    pub fn new(graph: GraphFunction) -> Self {
        ExtendedNormalField { graph }
    }

    pub fn graph(&self) -> &GraphFunction {
        &self.graph
    }

    pub fn ambient_dim(&self) -> usize {
        self.graph.dim() + 1
    }

    pub fn evaluate(&self, p: &[f64]) -> Vec<f64> {
        upward_normal(&self.graph, &p[..self.graph.dim()])
    }

    /// `ω(X_1, ..., X_n) = det(X_1, ..., X_n, N̄(p))`.
    pub fn form(&self, p: &[f64], frame: &[Vec<f64>]) -> f64 {
        let normal = self.evaluate(p);
        let mut cols: Vec<&[f64]> = frame.iter().map(Vec::as_slice).collect();
        cols.push(&normal);
        det_columns(&cols)
    }

    /// Orthonormal basis of the graph's tangent space above `x`.
    pub fn tangent_frame(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.graph.dim();
        let g = self.graph.gradient(x);
        let mut frame: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut t = vec![0.0; n + 1];
                t[i] = 1.0;
                t[n] = g[i];
                t
            })
            .collect();
        orthonormalize(&mut frame);
        frame
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComassReport {
    pub trials: usize,
    pub max_abs: f64,
}

/// Largest `|ω(X_1, ..., X_n)|` over `trials` random points in `[-3, 3]^{n+1}`
/// and random orthonormal n-frames. Trial `i` draws from ChaCha8 stream `i`.
pub fn comass_check(u: &GraphFunction, trials: usize, seed: u64) -> Result<ComassReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let field = ExtendedNormalField::new(u.clone());
    let dim = field.ambient_dim();
    let box_dist = Uniform::new(-TRIAL_BOX, TRIAL_BOX).expect("valid range");
    let max_abs = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let p: Vec<f64> = (0..dim).map(|_| box_dist.sample(&mut rng)).collect();
            let mut frame: Vec<Vec<f64>> = (0..dim - 1)
                .map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
                .collect();
            if !orthonormalize(&mut frame) {
                return 0.0;
            }
            field.form(&p, &frame).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(ComassReport { trials, max_abs })
}

/// Divergence check of `e^{-F} N̄` at one ambient point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosednessReport {
    pub point: Vec<f64>,
    /// `div(e^{-F} N̄)` by central differences (step 1e-4).
    pub divergence: f64,
    pub weight: f64,
    /// `H(x) + <∇F(p), N(x)>`, using the density gradient at `p` itself.
    pub weighted_mean_curvature: f64,
    /// `H_F` of the graph at `(x, u(x))`.
    pub graph_weighted_mean_curvature: f64,
    /// `divergence + weight * weighted_mean_curvature`; zero up to
    /// finite-difference error.
    pub residual: f64,
}

/// Central-difference divergence of a vector field on R^dim.
fn fd_divergence<F>(field: F, p: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let h = fd::SECOND_STEP;
    let mut q = p.to_vec();
    let mut div = 0.0;
    for i in 0..p.len() {
        q[i] = p[i] + h;
        let plus = field(&q)?[i];
        q[i] = p[i] - h;
        let minus = field(&q)?[i];
        q[i] = p[i];
        div += (plus - minus) / (2.0 * h);
    }
    Ok(div)
}

/// `div N̄` at `p`; equals `-H` of the graph at the point below.
pub fn normal_divergence(u: &GraphFunction, p: &[f64]) -> Result<f64> {
    check_dim(u.dim() + 1, p.len())?;
    let field = ExtendedNormalField::new(u.clone());
    fd_divergence(|q| Ok(field.evaluate(q)), p)
}

pub fn closedness_residual(
    u: &GraphFunction,
    density: &Density,
    p: &[f64],
) -> Result<ClosednessReport> {
    let n = u.dim();
    check_dim(n + 1, p.len())?;
    check_dim(n + 1, density.dimension())?;
    let field = ExtendedNormalField::new(u.clone());
    let divergence = fd_divergence(
        |q| {
            let w = density.weight(q)?;
            Ok(field.evaluate(q).into_iter().map(|v| w * v).collect())
        },
        p,
    )?;
    let x = &p[..n];
    let normal = field.evaluate(p);
    let weight = density.weight(p)?;
    let hf = graph_mean_curvature(u, x) + dot(&density.grad_potential(p)?, &normal);
    let graph_hf = graph_weighted_mean_curvature(u, density, x)?.weighted_mean_curvature;
    Ok(ClosednessReport {
        point: p.to_vec(),
        divergence,
        weight,
        weighted_mean_curvature: hf,
        graph_weighted_mean_curvature: graph_hf,
        residual: divergence + weight * hf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Profile;

    #[test]
    fn comass_on_tangent_and_degenerate_frames() {
        let field = ExtendedNormalField::new(GraphFunction::parabola(2));
        let x = [0.8, -0.3];
        let p = [0.8, -0.3, 5.0];
        let frame = field.tangent_frame(&x);
        assert!((field.form(&p, &frame).abs() - 1.0).abs() < 1e-12);
        let normal = field.evaluate(&p);
        let frame = vec![normal.clone(), frame[0].clone()];
        assert!(field.form(&p, &frame).abs() < 1e-15);
    }

    #[test]
    fn comass_bound_over_random_frames() {
        let r = comass_check(&GraphFunction::parabola(2), 10_000, 3).unwrap();
        assert!(r.max_abs <= 1.0 + 1e-12);
        assert!(r.max_abs > 0.9);
        assert_eq!(
            r,
            comass_check(&GraphFunction::parabola(2), 10_000, 3).unwrap()
        );
        assert!(comass_check(&GraphFunction::parabola(2), 0, 3).is_err());
    }

    #[test]
    fn flat_graph_is_closed() {
        let d = Density::gaussian_cylinder(2);
        let r =
            closedness_residual(&GraphFunction::constant(2, 0.3), &d, &[0.4, -1.1, 2.0]).unwrap();
        assert!(r.divergence.abs() < 1e-6);
    }

    #[test]
    fn tilted_line_divergence_matches_chain_rule() {
        let d = Density::gaussian_cylinder(2);
        let lin = GraphFunction::linear(vec![1.0, 0.0], 0.0);
        let r = closedness_residual(&lin, &d, &[1.0, 0.0, 0.0]).unwrap();
        // e^{-F} (div N̄ - <∇F, N̄>) with div N̄ = 0, <∇F, N̄> = -1/sqrt2
        let expected = d.weight(&[1.0, 0.0, 0.0]).unwrap() / 2f64.sqrt();
        assert!((r.divergence - expected).abs() < 1e-8);
        assert!((r.graph_weighted_mean_curvature + 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parabola_with_log_quadratic_profile_is_closed_on_the_graph() {
        let d = Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic);
        let par = GraphFunction::parabola(2);
        for &x in &[-2.0, -0.5, 0.0, 0.7, 1.9] {
            let p = [x, 0.2, x * x];
            let r = closedness_residual(&par, &d, &p).unwrap();
            assert!(r.divergence.abs() < 1e-4, "{r:?}");
        }
    }

    #[test]
    fn normal_divergence_is_minus_mean_curvature() {
        let u = GraphFunction::sinusoid(2, 0.5, 0.8);
        let x = [0.3, -0.9];
        let div = normal_divergence(&u, &[x[0], x[1], 1.0]).unwrap();
        assert!((div + graph_mean_curvature(&u, &x)).abs() < 1e-7);
    }
}
