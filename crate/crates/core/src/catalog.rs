//! The example surfaces in Gauss space times the line, each bundled with the
//! property it is claimed to have, and a sampler that checks the claims.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::{Density, Profile};
use crate::error::{Error, Result};
use crate::graph::{graph_weighted_mean_curvature, horizontal_plane_roots, GraphFunction, RootSet};
use crate::surface::{ChartBox, CurvatureReport, ParametricSurface};

/// Chart truncation `|v| <= 2` for the associate family.
pub const X_THETA_V_MAX: f64 = 2.0;
/// Grid nodes per chart axis when checking a claim (20 x 20 = 400 samples).
pub const SAMPLES_PER_AXIS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Claim {
    WeightedMinimal,
    /// `H_F` equals the value everywhere.
    #[serde(rename = "constant_H_F")]
    ConstantWeightedCurvature(f64),
    /// `<∇F, N>` equals the value everywhere and `H = 0`.
    ConstantDensityTerm(f64),
}

#[derive(Debug, Clone)]
pub enum Shape {
    Parametric(ParametricSurface),
    Graph {
        function: GraphFunction,
        half_width: f64,
    },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub shape: Shape,
    pub density: Density,
    pub claim: Claim,
    pub source: String,
    pub annotation: Option<String>,
}

impl CatalogEntry {
    /// Curvature reports on the regular `per_axis^n` chart grid.
    pub fn sample(&self, per_axis: usize) -> Result<Vec<CurvatureReport>> {
        match &self.shape {
            Shape::Parametric(s) => s
                .chart()
                .grid(per_axis)
                .iter()
                .map(|p| s.weighted_mean_curvature(&self.density, p))
                .collect(),
            Shape::Graph {
                function,
                half_width,
            } => ChartBox::cube(function.dim(), *half_width)
                .grid(per_axis)
                .iter()
                .map(|x| graph_weighted_mean_curvature(function, &self.density, x))
                .collect(),
        }
    }

    /// Worst deviation from the claim over the sample grid.
    pub fn residual(&self, per_axis: usize) -> Result<f64> {
        let reports = self.sample(per_axis)?;
        let worst = |f: &dyn Fn(&CurvatureReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
        Ok(match self.claim {
            Claim::WeightedMinimal => worst(&|r| r.weighted_mean_curvature.abs()),
            Claim::ConstantWeightedCurvature(v) => {
                worst(&|r| (r.weighted_mean_curvature - v).abs())
            }
            Claim::ConstantDensityTerm(v) => {
                worst(&|r| (r.density_term - v).abs().max(r.mean_curvature.abs()))
            }
        })
    }
}

/// The associate family `X_θ` between the helicoid (θ = 0) and the catenoid
/// (θ = π/2), with analytic first and second derivatives.
pub fn make_x_theta(theta: f64) -> Result<ParametricSurface> {
    if !(theta > -PI && theta <= PI) {
        return Err(Error::InvalidArgument(format!(
            "theta = {theta} outside (-pi, pi]"
        )));
    }
    let (st, ct) = theta.sin_cos();
    let xy = move |u: f64, v: f64| {
        let (su, cu) = u.sin_cos();
        let (sh, ch) = (v.sinh(), v.cosh());
        (ct * sh * su + st * ch * cu, -ct * sh * cu + st * ch * su)
    };
    let mixed = move |u: f64, v: f64| {
        let (su, cu) = u.sin_cos();
        let (sh, ch) = (v.sinh(), v.cosh());
        (ct * ch * cu - st * sh * su, ct * ch * su + st * sh * cu)
    };
    Ok(ParametricSurface::new(
        format!("x_theta({theta})"),
        ChartBox::new(vec![-PI, -X_THETA_V_MAX], vec![PI, X_THETA_V_MAX]),
        move |p| {
            let (x, y) = xy(p[0], p[1]);
            vec![x, y, p[0] * ct + p[1] * st]
        },
    )
    .with_first_derivatives(move |p| {
        let (u, v) = (p[0], p[1]);
        let (su, cu) = u.sin_cos();
        let (sh, ch) = (v.sinh(), v.cosh());
        let xu = ct * sh * cu - st * ch * su;
        let yu = ct * sh * su + st * ch * cu;
        let xv = ct * ch * su + st * sh * cu;
        let yv = -ct * ch * cu + st * sh * su;
        vec![vec![xu, yu, ct], vec![xv, yv, st]]
    })
    .with_second_derivatives(move |p| {
        // X_uu = -(x, y, 0), X_vv = (x, y, 0)
        let (x, y) = xy(p[0], p[1]);
        let (xuv, yuv) = mixed(p[0], p[1]);
        vec![
            vec![vec![-x, -y, 0.0], vec![xuv, yuv, 0.0]],
            vec![vec![xuv, yuv, 0.0], vec![x, y, 0.0]],
        ]
    }))
}

/// Right circular cylinder of radius `r` about the vertical axis, chart
/// `(angle, height) ∈ [-π, π] x [-3, 3]`, outward normal.
pub fn make_cylinder_surface(r: f64) -> Result<ParametricSurface> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cylinder radius {r} must be positive"
        )));
    }
    Ok(ParametricSurface::new(
        format!("cylinder({r})"),
        ChartBox::new(vec![-PI, -3.0], vec![PI, 3.0]),
        move |p| vec![r * p[0].cos(), r * p[0].sin(), p[1]],
    )
    .with_first_derivatives(move |p| {
        let (s, c) = p[0].sin_cos();
        vec![vec![-r * s, r * c, 0.0], vec![0.0, 0.0, 1.0]]
    })
    .with_second_derivatives(move |p| {
        let (s, c) = p[0].sin_cos();
        let zero = vec![0.0; 3];
        vec![
            vec![vec![-r * c, -r * s, 0.0], zero.clone()],
            vec![zero.clone(), zero],
        ]
    }))
}

/// The plane `<normal, p> = offset` in R^3, charted over `[-3, 3]^2` with an
/// orthonormal basis oriented so that the chart normal is `normal / |normal|`.
pub fn make_plane_surface(normal: [f64; 3], offset: f64) -> Result<ParametricSurface> {
    let len = (normal.iter().map(|v| v * v).sum::<f64>()).sqrt();
    if !(len > 0.0) {
        return Err(Error::InvalidArgument(
            "plane normal must be non-zero".into(),
        ));
    }
    let nrm = normal.map(|v| v / len);
    // a unit vector not parallel to the normal
    let helper = if nrm[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let e1 = {
        let c = cross(helper, nrm);
        let l = (c.iter().map(|v| v * v).sum::<f64>()).sqrt();
        c.map(|v| v / l)
    };
    let e2 = cross(nrm, e1);
    let base = nrm.map(|v| v * offset / len);
    Ok(ParametricSurface::new(
        format!("plane({normal:?}, {offset})"),
        ChartBox::cube(2, 3.0),
        move |p| {
            (0..3)
                .map(|i| base[i] + p[0] * e1[i] + p[1] * e2[i])
                .collect()
        },
    )
    .with_first_derivatives(move |_| vec![e1.to_vec(), e2.to_vec()])
    .with_second_derivatives(|_| vec![vec![vec![0.0; 3]; 2]; 2]))
}

pub fn make_cylinder(r: f64) -> Result<CatalogEntry> {
    let surface = make_cylinder_surface(r)?;
    let value = r - 1.0 / r;
    let claim = if value == 0.0 {
        Claim::WeightedMinimal
    } else {
        Claim::ConstantWeightedCurvature(value)
    };
    Ok(CatalogEntry {
        name: format!("cylinder_r{r}"),
        shape: Shape::Parametric(surface),
        density: Density::gaussian_cylinder(2),
        claim,
        source: "right circular cylinders about the vertical axis: H_F = r - 1/r".into(),
        annotation: None,
    })
}

pub fn make_plane(normal: [f64; 3], offset: f64) -> Result<CatalogEntry> {
    let surface = make_plane_surface(normal, offset)?;
    let len = (normal.iter().map(|v| v * v).sum::<f64>()).sqrt();
    if normal[2] != 0.0 {
        return Err(Error::InvalidArgument(
            "catalog planes must be parallel to the vertical axis".into(),
        ));
    }
    let value = offset / len;
    let (name, claim) = if value == 0.0 {
        (
            "plane_through_vertical_axis".to_string(),
            Claim::WeightedMinimal,
        )
    } else {
        (
            format!("vertical_plane_offset{value}"),
            Claim::ConstantWeightedCurvature(value),
        )
    };
    Ok(CatalogEntry {
        name,
        shape: Shape::Parametric(surface),
        density: Density::gaussian_cylinder(2),
        claim,
        source: "planes parallel to (or containing) the vertical axis".into(),
        annotation: None,
    })
}

pub fn make_horizontal_plane(a: f64) -> CatalogEntry {
    CatalogEntry {
        name: format!("horizontal_plane_z{a}"),
        shape: Shape::Graph {
            function: GraphFunction::constant(2, a),
            half_width: 3.0,
        },
        density: Density::gaussian_cylinder(2),
        claim: Claim::WeightedMinimal,
        source: "horizontal planes z = a".into(),
        annotation: None,
    }
}

/// The horizontal plane at the critical height of `h(z) = z^2 - ln sqrt(1+4z)`.
pub fn make_critical_horizontal_plane() -> Result<CatalogEntry> {
    let root = log_quadratic_root()?;
    Ok(CatalogEntry {
        name: "horizontal_plane_at_profile_critical_point".into(),
        shape: Shape::Graph {
            function: GraphFunction::constant(2, root),
            half_width: 3.0,
        },
        density: Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic),
        claim: Claim::WeightedMinimal,
        source: "horizontal planes z = c with h'(c) = 0 for h = z^2 - ln sqrt(1+4z)".into(),
        annotation: Some(format!(
            "computed root {root}; printed value (1+sqrt17)/8 = {}",
            printed_log_quadratic_root()
        )),
    })
}

pub fn make_parabola_with_profile() -> CatalogEntry {
    CatalogEntry {
        name: "parabola_x1_squared".into(),
        shape: Shape::Graph {
            function: GraphFunction::parabola(2),
            half_width: 3.0,
        },
        density: Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic),
        claim: Claim::WeightedMinimal,
        source: "graph z = x^2 with h = z^2 - ln sqrt(1+4z)".into(),
        annotation: None,
    }
}

/// The tilted plane `x_1 + z + c = 0` under `h = z^2/2 + c z`.
pub fn make_tilted_plane_with_quadratic_profile(c: f64) -> CatalogEntry {
    CatalogEntry {
        name: format!("tilted_plane_quadratic_profile_c{c}"),
        shape: Shape::Graph {
            function: GraphFunction::linear(vec![-1.0, 0.0], -c),
            half_width: 3.0,
        },
        density: Density::product(
            Density::gaussian(2),
            Profile::Quadratic {
                linear: c,
                offset: 0.0,
            },
        ),
        claim: Claim::WeightedMinimal,
        source: "non-horizontal minimal hyperplanes need h = z^2/2 + c z + b".into(),
        annotation: None,
    }
}

pub fn make_x_theta_entry(theta: f64) -> Result<CatalogEntry> {
    let surface = make_x_theta(theta)?;
    let (name, claim) = if theta == 0.0 {
        ("helicoid".to_string(), Claim::WeightedMinimal)
    } else if theta == PI / 2.0 {
        (
            "catenoid".to_string(),
            Claim::ConstantWeightedCurvature(1.0),
        )
    } else {
        (
            format!("x_theta_{theta}"),
            Claim::ConstantDensityTerm(theta.sin()),
        )
    };
    Ok(CatalogEntry {
        name,
        shape: Shape::Parametric(surface),
        density: Density::gaussian_cylinder(2),
        claim,
        source: "associate family X_theta: minimal with <∇f, N> = sin(theta)".into(),
        annotation: Some(
            "printed normal has third component -sinh(u)/cosh(v); \
             the cross product of the chart partials gives -sinh(v)/cosh(v)"
                .into(),
        ),
    })
}

/// Every example surface, each once.
pub fn full_catalog() -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        make_plane([1.0, 0.0, 0.0], 1.5)?,
        make_plane([1.0, -1.0, 0.0], 0.0)?,
        make_horizontal_plane(0.0),
        make_cylinder(1.0)?,
        make_cylinder(2.0)?,
        make_x_theta_entry(0.0)?,
        make_x_theta_entry(PI / 4.0)?,
        make_x_theta_entry(PI / 2.0)?,
        make_parabola_with_profile(),
        make_critical_horizontal_plane()?,
        make_tilted_plane_with_quadratic_profile(0.5),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub claim: Claim,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryResult>,
    pub pass: bool,
}

/// Check every claim on a 20 x 20 chart grid. Failures are reported, not
/// raised; an evaluation error counts as an infinite residual.
pub fn verify_catalog(entries: &[CatalogEntry], tolerance: f64) -> CatalogReport {
    let results: Vec<EntryResult> = entries
        .iter()
        .map(|e| {
            let residual = e.residual(SAMPLES_PER_AXIS).unwrap_or(f64::INFINITY);
            EntryResult {
                name: e.name.clone(),
                claim: e.claim,
                residual,
                tolerance,
                pass: residual <= tolerance,
                source: e.source.clone(),
            }
        })
        .collect();
    let pass = results.iter().all(|r| r.pass);
    CatalogReport {
        entries: results,
        pass,
    }
}

/// `(−1 + √17)/8`, the critical point of `h(z) = z^2 - ln sqrt(1+4z)`.
pub fn log_quadratic_root_closed_form() -> f64 {
    (17f64.sqrt() - 1.0) / 8.0
}

/// `(1 + √17)/8`, the value printed for the minimal horizontal plane.
pub fn printed_log_quadratic_root() -> f64 {
    (1.0 + 17f64.sqrt()) / 8.0
}

fn log_quadratic_root() -> Result<f64> {
    match horizontal_plane_roots(&Profile::LogCorrectedQuadratic, 0.0, 2.0)? {
        RootSet::Roots(r) if r.len() == 1 => Ok(r[0]),
        other => Err(Error::InvalidArgument(format!(
            "expected a single critical point, found {other:?}"
        ))),
    }
}

/// A printed value that disagrees with the computed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub topic: String,
    pub printed: f64,
    pub computed: f64,
    pub detail: String,
}

pub fn discrepancies() -> Result<Vec<Discrepancy>> {
    let root = log_quadratic_root()?;
    let printed = printed_log_quadratic_root();
    let h = Profile::LogCorrectedQuadratic;

    let (u, v) = (0.3, 0.5);
    let normal = make_x_theta(PI / 2.0)?.unit_normal(&[u, v])?;

    let radius = 2.0;
    Ok(vec![
        Discrepancy {
            topic: "critical height of h(z) = z^2 - ln sqrt(1+4z)".into(),
            printed,
            computed: root,
            detail: format!(
                "h'(printed) = {}, h'(computed) = {}",
                h.derivative(printed)?,
                h.derivative(root)?
            ),
        },
        Discrepancy {
            topic: "third component of the X_theta normal at (u, v) = (0.3, 0.5)".into(),
            printed: -u.sinh() / v.cosh(),
            computed: normal[2],
            detail: format!("-sinh(v)/cosh(v) = {}", -v.tanh()),
        },
        Discrepancy {
            topic: "lateral tail of the volume-growth estimate at n = 2, R = 2".into(),
            printed: crate::measure::paper_tail(2, radius),
            computed: crate::measure::exact_tail(2, radius),
            detail:
                "printed n e^{-R^2} C_n R^{n-1}; lateral term (2pi)^{-n/2} e^{-R^2/2} n C_n R^n"
                    .into(),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_theta_derivatives_match_finite_differences() {
        for theta in [0.0, 0.7, PI / 2.0, -2.0] {
            let s = make_x_theta(theta).unwrap();
            let p = [0.4, -0.8];
            let a = s.partials(&p).unwrap();
            let f = s.fd_partials(&p);
            for (ai, fi) in a.iter().zip(&f) {
                for (x, y) in ai.iter().zip(fi) {
                    assert!((x - y).abs() < 1e-6);
                }
            }
            let second = s.second_partials(&p).unwrap();
            let fd2 = make_x_theta_fd_second(theta, &p);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..3 {
                        assert!(
                            (second[i][j][k] - fd2[i][j][k]).abs() < 1e-5,
                            "{theta} {i}{j}{k}"
                        );
                    }
                }
            }
        }
    }

    fn make_x_theta_fd_second(theta: f64, p: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let s = make_x_theta(theta).unwrap();
        let h = 1e-4;
        (0..2)
            .map(|i| {
                let mut a = p.to_vec();
                let mut b = p.to_vec();
                a[i] += h;
                b[i] -= h;
                let pa = s.partials(&a).unwrap();
                let pb = s.partials(&b).unwrap();
                (0..2)
                    .map(|j| (0..3).map(|k| (pa[j][k] - pb[j][k]) / (2.0 * h)).collect())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn helicoid_normal_at_origin() {
        let n = make_x_theta(0.0).unwrap().unit_normal(&[0.0, 0.0]).unwrap();
        assert!((n[0] - 1.0).abs() < 1e-15 && n[1].abs() < 1e-15 && n[2].abs() < 1e-15);
    }

    #[test]
    fn theta_outside_range_is_rejected() {
        assert!(make_x_theta(-PI).is_err());
        assert!(make_x_theta(PI).is_ok());
        assert!(make_cylinder(0.0).is_err());
        assert!(make_plane([0.0, 0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn full_catalog_passes_at_default_tolerance() {
        let report = verify_catalog(&full_catalog().unwrap(), 1e-5);
        for e in &report.entries {
            assert!(e.pass, "{e:?}");
        }
        assert!(report.pass);
    }

    #[test]
    fn empty_catalog_is_vacuous() {
        let r = verify_catalog(&[], 1e-5);
        assert!(r.pass && r.entries.is_empty());
    }

    #[test]
    fn critical_plane_matches_closed_form() {
        let root = log_quadratic_root().unwrap();
        assert!((root - log_quadratic_root_closed_form()).abs() < 1e-10);
        let d = discrepancies().unwrap();
        assert!(d[0].detail.contains("h'(printed)"));
        assert!((d[0].printed - d[0].computed).abs() > 0.2);
    }
}
