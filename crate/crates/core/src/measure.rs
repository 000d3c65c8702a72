//! Weighted volumes in Gauss space and Gauss space times the line: Gaussian
//! ball masses, weighted spheres and hemispheres, graph caps, and the
//! volume-growth estimate for weighted minimal graphs.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::graph::{graph_slope, GraphFunction};
use crate::linalg::dot;
use crate::quadrature::{
    apply_rule, ball_rule, cube_rule, monte_carlo_normal, sphere_rule, Integral, QuadratureSpec,
};
use crate::special::regularized_lower_gamma;

/// Slack used by every inequality in the volume-growth chain.
pub const CHAIN_SLACK: f64 = 1e-9;

/// `C_n = |B^n(0, 1)| = π^{n/2} / Γ(n/2 + 1)`, via `C_n = (2π/n) C_{n-2}`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// `|S^{n-1}| = n C_n`, the area of the unit sphere in R^n.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Standard Gaussian mass of the centered ball, `P(n/2, R^2/2)`.
pub fn gaussian_ball_volume(n: usize, radius: f64) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    if radius <= 0.0 {
        return 0.0;
    }
    regularized_lower_gamma(0.5 * n as f64, 0.5 * radius * radius)
}

/// Monte Carlo estimate of [`gaussian_ball_volume`].
pub fn gaussian_ball_volume_mc(n: usize, radius: f64, samples: usize, seed: u64) -> Integral {
    let r2 = radius * radius;
    monte_carlo_normal(
        n,
        samples,
        seed,
        |g| if dot(g, g) <= r2 { 1.0 } else { 0.0 },
    )
}

/// Tail term `n e^{-R^2} C_n R^{n-1}` in the published form of the estimate.
pub fn paper_tail(n: usize, radius: f64) -> f64 {
    n as f64 * (-radius * radius).exp() * unit_ball_volume(n) * radius.powi(n as i32 - 1)
}

/// Lateral cylinder term `(2π)^{-n/2} e^{-R^2/2} n C_n R^n`: wall weight times
/// the Euclidean volume of `S^{n-1}(0, R) x [0, R]`.
pub fn exact_tail(n: usize, radius: f64) -> f64 {
    (2.0 * PI).powf(-0.5 * n as f64)
        * (-0.5 * radius * radius).exp()
        * unit_sphere_area(n)
        * radius.powi(n as i32)
}

fn horizontal_dim(density: &Density) -> Result<usize> {
    if !density.is_vertically_invariant() {
        return Err(Error::InvalidArgument(
            "weighted sphere areas need a density independent of the last coordinate".into(),
        ));
    }
    Ok(density.dimension() - 1)
}

/// Weighted n-area of the sphere `S^n(O, R)` in R^{n+1} (or of its upper half
/// `x_{n+1} >= 0`) under a vertically invariant density.
///
/// The tensor rule is read as a polar/azimuthal product of the same order.
pub fn weighted_sphere_area(
    density: &Density,
    radius: f64,
    upper_half: bool,
    quad: &QuadratureSpec,
) -> Result<Integral> {
    quad.validate()?;
    let n = horizontal_dim(density)?;
    if radius <= 0.0 {
        return Ok(Integral::exact(0.0));
    }
    let weight = |p: &[f64]| density.weight(p).expect("dimension checked");
    let scale = radius.powi(n as i32);
    let product = |polar: usize, azimuthal: usize| {
        let cap = if upper_half { PI / 2.0 } else { PI };
        let rule = sphere_rule(n, polar, azimuthal, cap);
        let s = apply_rule(&rule, |omega| {
            let p: Vec<f64> = omega.iter().map(|v| radius * v).collect();
            weight(&p)
        });
        Integral::exact(scale * s)
    };
    let result = match *quad {
        QuadratureSpec::SphericalProduct {
            polar_order,
            azimuthal_order,
        } => product(polar_order, azimuthal_order),
        QuadratureSpec::TensorGaussLegendre { order } => product(order, order),
        QuadratureSpec::MonteCarlo { samples, seed } => {
            let area = unit_sphere_area(n + 1) * scale * if upper_half { 0.5 } else { 1.0 };
            let est = monte_carlo_normal(n + 1, samples, seed, |g| {
                let len = dot(g, g).sqrt();
                let mut p: Vec<f64> = g.iter().map(|v| radius * v / len).collect();
                if upper_half {
                    p[n] = p[n].abs();
                }
                weight(&p)
            });
            Integral {
                value: area * est.value,
                std_error: area * est.std_error,
            }
        }
    };
    Ok(result)
}

/// Weighted area of the part of the graph inside the ambient ball of radius
/// `radius` about `p = (0, u(0))`: the integral of `(2π)^{-n/2} e^{-|x|^2/2} W`
/// over `{x : |x|^2 + (u(x) - u(0))^2 <= R^2}`, indicator applied at nodes.
pub fn graph_cap_weighted_area(
    u: &GraphFunction,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<Integral> {
    quad.validate()?;
    let n = u.dim();
    let gauss = Density::gaussian(n);
    let origin_height = u.value(&vec![0.0; n]);
    let r2 = radius * radius;
    let inside = |x: &[f64]| {
        let dz = u.value(x) - origin_height;
        dot(x, x) + dz * dz <= r2
    };
    let integrand = |x: &[f64]| {
        if inside(x) {
            gauss.weight(x).expect("dimension checked") * graph_slope(u, x)
        } else {
            0.0
        }
    };
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
        QuadratureSpec::MonteCarlo { samples, seed } => monte_carlo_normal(n, samples, seed, |g| {
            if inside(g) {
                graph_slope(u, g)
            } else {
                0.0
            }
        }),
    };
    if !result.value.is_finite() {
        return Err(Error::Quadrature("non-finite cap area".into()));
    }
    Ok(result)
}

/// Both sides of the volume-growth estimate at one radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeBoundReport {
    pub n: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    /// Weighted area of the graph cap.
    pub lhs: f64,
    pub lhs_std_error: f64,
    pub ball_term: f64,
    pub paper_tail: f64,
    pub exact_tail: f64,
    /// Weighted area of the upper hemisphere `S^n_+(O, R)`.
    pub hemisphere: f64,
    /// `lhs <= ball_term + exact_tail` (within slack and 3 standard errors).
    pub chain_ok: bool,
    /// `lhs <= hemisphere`: the cap is no larger than half the sphere.
    pub cap_below_hemisphere: bool,
    /// `hemisphere <= ball_term + exact_tail`: the intermediate step.
    pub hemisphere_below_bound: bool,
}

impl VolumeBoundReport {
    pub const CSV_HEADER: &'static str = "n,R,lhs,ball_term,paper_tail,exact_tail,chain_ok";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.radius,
            self.lhs,
            self.ball_term,
            self.paper_tail,
            self.exact_tail,
            self.chain_ok
        )
    }
}

/// Evaluate the volume-growth estimate for the graph `u` at radius `radius`.
/// The caller asserts that `u` is weighted minimal (constants).
pub fn volume_bound_report(
    u: &GraphFunction,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<VolumeBoundReport> {
    let n = u.dim();
    if !(radius >= 0.0) {
        return Err(Error::InvalidArgument("radius must be non-negative".into()));
    }
    let cap = graph_cap_weighted_area(u, radius, quad)?;
    let ball_term = gaussian_ball_volume(n, radius);
    let exact = exact_tail(n, radius);
    let hemisphere = weighted_sphere_area(
        &Density::gaussian_cylinder(n),
        radius,
        true,
        &QuadratureSpec::default(),
    )?
    .value;
    let noise = 3.0 * cap.std_error;
    Ok(VolumeBoundReport {
        n,
        radius,
        lhs: cap.value,
        lhs_std_error: cap.std_error,
        ball_term,
        paper_tail: paper_tail(n, radius),
        exact_tail: exact,
        hemisphere,
        chain_ok: cap.value <= ball_term + exact + CHAIN_SLACK + noise,
        cap_below_hemisphere: cap.value <= hemisphere + CHAIN_SLACK + noise,
        hemisphere_below_bound: hemisphere <= ball_term + exact + CHAIN_SLACK,
    })
}

/// Radii `rmin + (rmax - rmin) i / (steps - 1)`; a single step uses `rmin`.
pub fn sweep_radii(rmin: f64, rmax: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(rmin >= 0.0) || !(rmax >= rmin) {
        return Err(Error::InvalidArgument(format!(
            "bad radius range [{rmin}, {rmax}] with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![rmin]);
    }
    Ok((0..steps)
        .map(|i| rmin + (rmax - rmin) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Volume-growth reports for the flat graph `u = 0` over a radius sweep.
pub fn volume_bound_sweep(
    n: usize,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<VolumeBoundReport>> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let flat = GraphFunction::constant(n, 0.0);
    radii
        .iter()
        .map(|&r| volume_bound_report(&flat, r, quad))
        .collect()
}
