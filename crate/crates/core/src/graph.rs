//! Graph hypersurfaces `x_{n+1} = u(x)` over R^n.
//!
//! All graph quantities use the upward unit normal `(-∇u, 1) / W` with
//! `W = sqrt(1 + |∇u|^2)`, and the divergence-form mean curvature
//! `H = div(∇u / W)`.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::{Density, Profile};
use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;
use crate::quadrature::{
    apply_rule, ball_rule, cube_rule, monte_carlo_normal, Integral, QuadratureSpec,
};
use crate::surface::{ChartBox, CurvatureReport, ParametricSurface};

/// Default truncation radius for functionals over entire graphs.
pub const DEFAULT_TRUNCATION: f64 = 8.0;

/// One Gaussian bump `amplitude * exp(-|x - center|^2 / (2 width^2))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bump {
    pub center: Vec<f64>,
    pub amplitude: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GraphKind {
    Constant(f64),
    /// `u = <slope, x> + offset`
    Linear {
        slope: Vec<f64>,
        offset: f64,
    },
    /// `u = x_1^2`
    Parabola,
    /// `u = constant + <linear, x> + x^T quadratic x / 2` (symmetric `quadratic`)
    Quadratic {
        constant: f64,
        linear: Vec<f64>,
        quadratic: Vec<Vec<f64>>,
    },
    /// `u = amplitude * sum_i sin(wavenumber * x_i)`
    Sinusoid {
        amplitude: f64,
        wavenumber: f64,
    },
    Bumps(Vec<Bump>),
}

/// A smooth function on R^n with analytic gradient and Hessian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphFunction {
    dim: usize,
    kind: GraphKind,
}

impl GraphFunction {
    pub fn new(dim: usize, kind: GraphKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        match &kind {
            GraphKind::Linear { slope, .. } => check_dim(dim, slope.len())?,
            GraphKind::Quadratic {
                linear, quadratic, ..
            } => {
                check_dim(dim, linear.len())?;
                check_dim(dim, quadratic.len())?;
                for row in quadratic {
                    check_dim(dim, row.len())?;
                }
            }
            GraphKind::Bumps(bumps) => {
                for b in bumps {
                    check_dim(dim, b.center.len())?;
                    if b.width <= 0.0 {
                        return Err(Error::InvalidArgument("bump width must be positive".into()));
                    }
                }
            }
            _ => {}
        }
        Ok(GraphFunction { dim, kind })
    }

    pub fn constant(dim: usize, a: f64) -> Self {
        GraphFunction::new(dim, GraphKind::Constant(a)).expect("valid")
    }

    pub fn linear(slope: Vec<f64>, offset: f64) -> Self {
        GraphFunction::new(slope.len(), GraphKind::Linear { slope, offset }).expect("valid")
    }

    pub fn parabola(dim: usize) -> Self {
        GraphFunction::new(dim, GraphKind::Parabola).expect("valid")
    }

    pub fn sinusoid(dim: usize, amplitude: f64, wavenumber: f64) -> Self {
        GraphFunction::new(
            dim,
            GraphKind::Sinusoid {
                amplitude,
                wavenumber,
            },
        )
        .expect("valid")
    }

    /// Three seeded bumps with centers in `[-2, 2]^n`, amplitudes in
    /// `[-amplitude, amplitude]` and widths in `[0.6, 1.2]`.
    pub fn random_bump(dim: usize, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps = (0..3)
            .map(|_| Bump {
                center: (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
                amplitude: rng.random_range(-amplitude..=amplitude),
                width: rng.random_range(0.6..1.2),
            })
            .collect();
        GraphFunction::new(dim, GraphKind::Bumps(bumps)).expect("valid")
    }

    /// Resolve `constant[:a]`, `linear[:slope]`, `parabola`, `sinusoid`,
    /// `random_bump[:amplitude]`.
    pub fn from_preset(name: &str, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let num = |default: f64| -> Result<f64> {
            arg.map_or(Ok(default), |a| {
                a.parse::<f64>()
                    .map_err(|_| Error::UnknownPreset(name.to_string()))
            })
        };
        match head {
            "constant" => Ok(GraphFunction::constant(dim, num(0.0)?)),
            "linear" => {
                let mut slope = vec![0.0; dim];
                slope[0] = num(1.0)?;
                Ok(GraphFunction::linear(slope, 0.0))
            }
            "parabola" if arg.is_none() => Ok(GraphFunction::parabola(dim)),
            "sinusoid" => Ok(GraphFunction::sinusoid(dim, num(0.5)?, PI / 4.0)),
            "random_bump" => Ok(GraphFunction::random_bump(dim, num(0.3)?, seed)),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn is_constant(&self) -> bool {
        match &self.kind {
            GraphKind::Constant(_) => true,
            GraphKind::Linear { slope, .. } => slope.iter().all(|s| *s == 0.0),
            GraphKind::Quadratic {
                linear, quadratic, ..
            } => linear
                .iter()
                .chain(quadratic.iter().flatten())
                .all(|v| *v == 0.0),
            GraphKind::Sinusoid {
                amplitude,
                wavenumber,
            } => *amplitude == 0.0 || *wavenumber == 0.0,
            GraphKind::Bumps(b) => b.iter().all(|b| b.amplitude == 0.0),
            GraphKind::Parabola => false,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.kind {
            GraphKind::Constant(a) => *a,
            GraphKind::Linear { slope, offset } => dot(slope, x) + offset,
            GraphKind::Parabola => x[0] * x[0],
            GraphKind::Quadratic {
                constant,
                linear,
                quadratic,
            } => {
                let q: f64 = (0..self.dim).map(|i| x[i] * dot(&quadratic[i], x)).sum();
                constant + dot(linear, x) + 0.5 * q
            }
            GraphKind::Sinusoid {
                amplitude,
                wavenumber,
            } => amplitude * x.iter().map(|v| (wavenumber * v).sin()).sum::<f64>(),
            GraphKind::Bumps(bumps) => bumps.iter().map(|b| bump_value(b, x)).sum(),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        match &self.kind {
            GraphKind::Constant(_) => vec![0.0; n],
            GraphKind::Linear { slope, .. } => slope.clone(),
            GraphKind::Parabola => {
                let mut g = vec![0.0; n];
                g[0] = 2.0 * x[0];
                g
            }
            GraphKind::Quadratic {
                linear, quadratic, ..
            } => (0..n).map(|i| linear[i] + dot(&quadratic[i], x)).collect(),
            GraphKind::Sinusoid {
                amplitude,
                wavenumber,
            } => x
                .iter()
                .map(|v| amplitude * wavenumber * (wavenumber * v).cos())
                .collect(),
            GraphKind::Bumps(bumps) => {
                let mut g = vec![0.0; n];
                for b in bumps {
                    let v = bump_value(b, x);
                    let s2 = b.width * b.width;
                    for i in 0..n {
                        g[i] -= v * (x[i] - b.center[i]) / s2;
                    }
                }
                g
            }
        }
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim;
        let mut h = vec![vec![0.0; n]; n];
        match &self.kind {
            GraphKind::Constant(_) | GraphKind::Linear { .. } => {}
            GraphKind::Parabola => h[0][0] = 2.0,
            GraphKind::Quadratic { quadratic, .. } => h = quadratic.clone(),
            GraphKind::Sinusoid {
                amplitude,
                wavenumber,
            } => {
                for i in 0..n {
                    h[i][i] = -amplitude * wavenumber * wavenumber * (wavenumber * x[i]).sin();
                }
            }
            GraphKind::Bumps(bumps) => {
                for b in bumps {
                    let v = bump_value(b, x);
                    let s2 = b.width * b.width;
                    for i in 0..n {
                        for j in 0..n {
                            let di = x[i] - b.center[i];
                            let dj = x[j] - b.center[j];
                            let delta = if i == j { 1.0 } else { 0.0 };
                            h[i][j] += v * (di * dj / (s2 * s2) - delta / s2);
                        }
                    }
                }
            }
        }
        h
    }

    /// The graph as a parametric surface over `[-half_width, half_width]^n`,
    /// with partials `(e_i, ∂_i u)`; second partials are left to finite
    /// differences.
    pub fn as_parametric(&self, half_width: f64) -> ParametricSurface {
        let value_fn = self.clone();
        let grad_fn = self.clone();
        let n = self.dim;
        ParametricSurface::new(
            format!("graph:{}", self.name()),
            ChartBox::cube(n, half_width),
            move |x| {
                let mut p = x.to_vec();
                p.push(value_fn.value(x));
                p
            },
        )
        .with_first_derivatives(move |x| {
            let g = grad_fn.gradient(x);
            (0..n)
                .map(|i| {
                    let mut t = vec![0.0; n + 1];
                    t[i] = 1.0;
                    t[n] = g[i];
                    t
                })
                .collect()
        })
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GraphKind::Constant(a) => format!("constant:{a}"),
            GraphKind::Linear { .. } => "linear".into(),
            GraphKind::Parabola => "parabola".into(),
            GraphKind::Quadratic { .. } => "quadratic".into(),
            GraphKind::Sinusoid { .. } => "sinusoid".into(),
            GraphKind::Bumps(_) => "random_bump".into(),
        }
    }
}

fn bump_value(b: &Bump, x: &[f64]) -> f64 {
    let r2: f64 = x
        .iter()
        .zip(&b.center)
        .map(|(a, c)| (a - c) * (a - c))
        .sum();
    b.amplitude * (-0.5 * r2 / (b.width * b.width)).exp()
}

/// Area element `W = sqrt(1 + |∇u|^2)`.
pub fn graph_slope(u: &GraphFunction, x: &[f64]) -> f64 {
    let g = u.gradient(x);
    (1.0 + dot(&g, &g)).sqrt()
}

/// `div(∇u / W) = (W^2 tr(D^2u) - ∇u^T D^2u ∇u) / W^3`.
pub fn graph_mean_curvature(u: &GraphFunction, x: &[f64]) -> f64 {
    let g = u.gradient(x);
    let h = u.hessian(x);
    let w2 = 1.0 + dot(&g, &g);
    let trace: f64 = (0..u.dim).map(|i| h[i][i]).sum();
    let quad: f64 = (0..u.dim).map(|i| g[i] * dot(&h[i], &g)).sum();
    (w2 * trace - quad) / (w2 * w2.sqrt())
}

/// Upward unit normal `(-∇u, 1) / W`.
pub fn upward_normal(u: &GraphFunction, x: &[f64]) -> Vec<f64> {
    let g = u.gradient(x);
    let w = (1.0 + dot(&g, &g)).sqrt();
    let mut n: Vec<f64> = g.iter().map(|v| -v / w).collect();
    n.push(1.0 / w);
    n
}

pub fn graph_weighted_mean_curvature(
    u: &GraphFunction,
    density: &Density,
    x: &[f64],
) -> Result<CurvatureReport> {
    check_dim(u.dim, x.len())?;
    check_dim(u.dim + 1, density.dimension())?;
    let mut ambient = x.to_vec();
    ambient.push(u.value(x));
    let normal = upward_normal(u, x);
    let term = dot(&density.grad_potential(&ambient)?, &normal);
    Ok(CurvatureReport::new(
        x.to_vec(),
        ambient,
        normal,
        graph_mean_curvature(u, x),
        term,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneClass {
    MinimalHorizontal,
    MinimalTilted,
    NotMinimal,
}

const PROFILE_TOL: f64 = 1e-10;

/// Classify the hyperplane `<a, x> + x_{n+1} + c = 0` in Gauss space times
/// `(R, e^{-h})`: it is weighted minimal exactly when
/// `<a, x> + h'(x_{n+1})` vanishes on the plane.
pub fn hyperplane_minimality(a: &[f64], c: f64, h: &Profile) -> PlaneClass {
    let horizontal = a.iter().all(|v| *v == 0.0);
    if horizontal {
        return match h.derivative(-c) {
            Ok(d) if d.abs() <= PROFILE_TOL => PlaneClass::MinimalHorizontal,
            _ => PlaneClass::NotMinimal,
        };
    }
    // A tilted plane meets every height z, where <a, x> = -c - z; the
    // condition becomes h'(z) = z + c for all z in the profile's domain.
    if h.lower_bound().is_some() {
        // the plane reaches heights outside the profile's domain
        return PlaneClass::NotMinimal;
    }
    let (lo, hi) = (-c - 10.0, -c + 10.0);
    let ok = (0..=64).all(|i| {
        let z = lo + (hi - lo) * i as f64 / 64.0;
        match h.derivative(z) {
            Ok(d) => (d - (z + c)).abs() <= PROFILE_TOL * (1.0 + z.abs()),
            Err(_) => false,
        }
    });
    if ok {
        PlaneClass::MinimalTilted
    } else {
        PlaneClass::NotMinimal
    }
}

/// Classify `<coeffs[..n], x> + coeffs[n] x_{n+1} + offset = 0` after
/// normalizing the last coefficient to one.
pub fn classify_plane(coeffs: &[f64], offset: f64, h: &Profile) -> Result<PlaneClass> {
    let (last, head) = coeffs
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("empty plane equation".into()))?;
    if *last == 0.0 {
        return Err(Error::InvalidArgument(
            "vertical hyperplane has no non-vertical normal form".into(),
        ));
    }
    let a: Vec<f64> = head.iter().map(|v| v / last).collect();
    Ok(hyperplane_minimality(&a, offset / last, h))
}

/// Roots of `h'` on an interval: horizontal planes `z = root` are weighted
/// minimal.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootSet {
    Roots(Vec<f64>),
    /// `h'` vanishes on the whole interval.
    IdenticallyZero,
}

const SCAN_INTERVALS: usize = 10_000;
const BISECTION_TOL: f64 = 1e-12;

pub fn horizontal_plane_roots(h: &Profile, lo: f64, hi: f64) -> Result<RootSet> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "empty interval [{lo}, {hi}]"
        )));
    }
    h.derivative(lo)?;
    h.derivative(hi)?;
    if h.is_constant() {
        return Ok(RootSet::IdenticallyZero);
    }
    let dh = |z: f64| h.derivative(z).expect("inside checked interval");
    let step = (hi - lo) / SCAN_INTERVALS as f64;
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|last| (r - last).abs() > 1e-9) {
            roots.push(r);
        }
    };
    let mut z0 = lo;
    let mut d0 = dh(z0);
    for i in 1..=SCAN_INTERVALS {
        let z1 = if i == SCAN_INTERVALS {
            hi
        } else {
            lo + step * i as f64
        };
        let d1 = dh(z1);
        if d0 == 0.0 {
            push(z0, &mut roots);
        } else if d0.signum() != d1.signum() && d1 != 0.0 {
            let (mut a, mut b, mut fa) = (z0, z1, d0);
            while b - a > BISECTION_TOL {
                let m = 0.5 * (a + b);
                let fm = dh(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            push(0.5 * (a + b), &mut roots);
        }
        z0 = z1;
        d0 = d1;
    }
    if d0 == 0.0 {
        push(z0, &mut roots);
    }
    Ok(RootSet::Roots(roots))
}

/// Weighted area `∫_{B(0,R)} (2π)^{-n/2} e^{-|x|^2/2} W dx` of the graph over
/// the horizontal ball of radius `radius`.
///
/// The tensor rule integrates over the cube `[-R, R]^n` instead of the ball;
/// for `R >= 8` the two differ by less than the Gaussian tail mass (< 1e-14).
pub fn bernstein_functional(
    u: &GraphFunction,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<Integral> {
    quad.validate()?;
    if !(radius >= 0.0) {
        return Err(Error::InvalidArgument("radius must be non-negative".into()));
    }
    let n = u.dim;
    let gauss = Density::gaussian(n);
    let integrand = |x: &[f64]| gauss.weight(x).expect("dimension checked") * graph_slope(u, x);
    let result = match *quad {
        QuadratureSpec::SphericalProduct {
            polar_order,
            azimuthal_order,
        } => Integral::exact(apply_rule(
            &ball_rule(n, radius, polar_order, azimuthal_order),
            integrand,
        )),
        QuadratureSpec::TensorGaussLegendre { order } => {
            Integral::exact(apply_rule(&cube_rule(n, radius, order), integrand))
        }
        QuadratureSpec::MonteCarlo { samples, seed } => {
            let r2 = radius * radius;
            monte_carlo_normal(n, samples, seed, |g| {
                if dot(g, g) <= r2 {
                    graph_slope(u, g)
                } else {
                    0.0
                }
            })
        }
    };
    if !result.value.is_finite() {
        return Err(Error::Quadrature("non-finite weighted area".into()));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;

    #[test]
    fn slope_examples() {
        assert_eq!(
            graph_slope(&GraphFunction::constant(2, 3.0), &[1.0, 2.0]),
            1.0
        );
        let lin = GraphFunction::linear(vec![1.0, 0.0], 0.0);
        assert!((graph_slope(&lin, &[0.3, 0.1]) - 2f64.sqrt()).abs() < 1e-15);
        let par = GraphFunction::parabola(2);
        assert!((graph_slope(&par, &[1.0, 0.0]) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parabola_mean_curvature() {
        let par = GraphFunction::parabola(2);
        assert!((graph_mean_curvature(&par, &[0.0, 0.4]) - 2.0).abs() < 1e-14);
        let expected = 2.0 / 5f64.powf(1.5);
        assert!((graph_mean_curvature(&par, &[1.0, -0.7]) - expected).abs() < 1e-14);
        assert!((expected - 0.178_885).abs() < 1e-6);
        let lin = GraphFunction::linear(vec![0.3, -2.0], 1.0);
        assert_eq!(graph_mean_curvature(&lin, &[0.5, 0.5]), 0.0);
    }

    #[test]
    fn tilted_line_over_gauss_cylinder() {
        let lin = GraphFunction::linear(vec![1.0, 0.0], 0.0);
        let r = graph_weighted_mean_curvature(&lin, &Density::gaussian_cylinder(2), &[1.0, 0.0])
            .unwrap();
        assert_eq!(r.mean_curvature, 0.0);
        assert!((r.density_term + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((r.weighted_mean_curvature + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn parabola_with_log_quadratic_profile_is_weighted_minimal() {
        let d = Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic);
        let par = GraphFunction::parabola(2);
        for i in 0..50 {
            let x = [-3.0 + 6.0 * i as f64 / 49.0, 0.5 - 0.02 * i as f64];
            let r = graph_weighted_mean_curvature(&par, &d, &x).unwrap();
            assert!(r.weighted_mean_curvature.abs() < 1e-12, "{x:?}: {r:?}");
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let presets = [
            GraphFunction::parabola(2),
            GraphFunction::sinusoid(2, 0.5, PI / 4.0),
            GraphFunction::random_bump(2, 0.3, 11),
            GraphFunction::linear(vec![0.2, -0.4], 1.0),
        ];
        let x = [0.37, -0.81];
        for u in &presets {
            let g = u.gradient(&x);
            let fg = fd::gradient(|p| u.value(p), &x, fd::FIRST_STEP);
            let h = u.hessian(&x);
            let fh = fd::hessian(|p| u.value(p), &x, fd::SECOND_STEP);
            for i in 0..2 {
                assert!((g[i] - fg[i]).abs() < 1e-6, "{}", u.name());
                for j in 0..2 {
                    assert!((h[i][j] - fh[i][j]).abs() < 1e-4, "{}", u.name());
                }
            }
        }
    }

    #[test]
    fn plane_classification() {
        let c_root = -(-1.0 + 17f64.sqrt()) / 8.0;
        assert_eq!(
            hyperplane_minimality(&[0.0, 0.0], c_root, &Profile::LogCorrectedQuadratic),
            PlaneClass::MinimalHorizontal
        );
        let monotone = Profile::Linear {
            slope: 1.0,
            offset: 0.0,
        };
        assert_eq!(
            hyperplane_minimality(&[0.0, 0.0], 0.3, &monotone),
            PlaneClass::NotMinimal
        );
        assert_eq!(
            hyperplane_minimality(&[1.0, 0.0], 0.3, &monotone),
            PlaneClass::NotMinimal
        );
        let quad = Profile::Quadratic {
            linear: 0.7,
            offset: 2.0,
        };
        assert_eq!(
            hyperplane_minimality(&[1.0, 0.0], 0.7, &quad),
            PlaneClass::MinimalTilted
        );
        assert_eq!(
            hyperplane_minimality(&[1.0, 0.0], 0.1, &quad),
            PlaneClass::NotMinimal
        );
        // horizontal plane at the vertex of the quadratic profile
        assert_eq!(
            hyperplane_minimality(&[0.0, 0.0], 0.7, &quad),
            PlaneClass::MinimalHorizontal
        );
        assert_eq!(
            hyperplane_minimality(&[1.0, 0.0], 0.0, &Profile::LogCorrectedQuadratic),
            PlaneClass::NotMinimal
        );
        assert!(classify_plane(&[1.0, 0.0, 0.0], 0.0, &quad).is_err());
    }

    #[test]
    fn roots_of_profiles() {
        let RootSet::Roots(r) =
            horizontal_plane_roots(&Profile::LogCorrectedQuadratic, 0.0, 2.0).unwrap()
        else {
            panic!("expected isolated roots");
        };
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.390_388_2).abs() < 1e-7);
        let quad = Profile::Quadratic {
            linear: 0.0,
            offset: 0.0,
        };
        let RootSet::Roots(r) = horizontal_plane_roots(&quad, -1.0, 1.0).unwrap() else {
            panic!()
        };
        assert_eq!(r.len(), 1);
        assert!(r[0].abs() < 1e-12);
        assert_eq!(
            horizontal_plane_roots(&Profile::Constant(1.0), 0.0, 1.0).unwrap(),
            RootSet::IdenticallyZero
        );
        assert!(horizontal_plane_roots(&Profile::LogCorrectedQuadratic, -1.0, 1.0).is_err());
        assert!(horizontal_plane_roots(&quad, 1.0, 1.0).is_err());
    }

    #[test]
    fn presets_by_name() {
        assert!(GraphFunction::from_preset("constant:0.7", 1, 0)
            .unwrap()
            .is_constant());
        assert!(!GraphFunction::from_preset("random_bump", 2, 42)
            .unwrap()
            .is_constant());
        assert!(GraphFunction::from_preset("wave", 2, 0).is_err());
        assert_eq!(
            GraphFunction::from_preset("random_bump", 2, 42).unwrap(),
            GraphFunction::from_preset("random_bump", 2, 42).unwrap()
        );
    }

    #[test]
    fn bernstein_functional_of_flat_and_tilted_graphs() {
        let q = QuadratureSpec::default();
        let flat = bernstein_functional(&GraphFunction::constant(2, 0.4), 8.0, &q).unwrap();
        assert!((flat.value - 1.0).abs() < 1e-9);
        let lin = GraphFunction::linear(vec![0.1, 0.0], 0.0);
        let v = bernstein_functional(&lin, 8.0, &q).unwrap();
        assert!((v.value - 1.01f64.sqrt()).abs() < 1e-6);
        let tensor = QuadratureSpec::TensorGaussLegendre { order: 64 };
        let v = bernstein_functional(&lin, 8.0, &tensor).unwrap();
        assert!((v.value - 1.01f64.sqrt()).abs() < 1e-6);
    }
}
