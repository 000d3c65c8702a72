//! Parametric hypersurfaces `X: U ⊂ R^n -> R^{n+1}` and their (weighted)
//! mean curvature.
//!
//! Conventions, used everywhere in the crate:
//!
//! * the unit normal is the normalized generalized cross product of the chart
//!   partials, `<N, Y> = det(X_1, ..., X_n, Y)` (optionally reversed);
//! * `H` is the trace of the shape operator `-dN`, i.e. the *sum* of the
//!   principal curvatures. A cylinder of radius `r` with outward normal has
//!   `H = -1/r`; a graph with upward normal has `H = div(∇u / W)`;
//! * the weighted mean curvature is `H_F = H + <∇F, N>`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::density::Density;
use crate::error::{check_dim, Error, Result};
use crate::fd;
use crate::linalg::{distance_to_span, dot, generalized_cross, gram, norm, scale, sub};

pub type ChartMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type PartialsMap = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
/// `second(p)[i][j]` is `∂_i ∂_j X(p)`.
pub type SecondPartialsMap = Arc<dyn Fn(&[f64]) -> Vec<Vec<Vec<f64>>> + Send + Sync>;

/// Minimum Gram determinant for the chart to count as an immersion.
pub const MIN_GRAM_DET: f64 = 1e-12;

/// Closed coordinate box in R^n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ChartBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        ChartBox { lower, upper }
    }

    pub fn cube(n: usize, half_width: f64) -> Self {
        ChartBox::new(vec![-half_width; n], vec![half_width; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    /// Map a point of the unit cube `[0,1]^n` into the box.
    pub fn lerp(&self, t: &[f64]) -> Vec<f64> {
        t.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(s, (lo, hi))| lo + s * (hi - lo))
            .collect()
    }

    /// Regular grid with `per_axis` nodes per axis (endpoints included).
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let denom = (per_axis.max(2) - 1) as f64;
        let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in 0..self.dim() {
            let (lo, hi) = (self.lower[axis], self.upper[axis]);
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (0..per_axis).map(move |i| {
                        let mut q = p.clone();
                        q.push(lo + (hi - lo) * i as f64 / denom);
                        q
                    })
                })
                .collect();
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Normal along the generalized cross product of the chart partials.
    CrossProduct,
    Reversed,
}

/// Curvature data at one point of a hypersurface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub chart_point: Vec<f64>,
    pub ambient_point: Vec<f64>,
    pub unit_normal: Vec<f64>,
    pub mean_curvature: f64,
    pub density_term: f64,
    pub weighted_mean_curvature: f64,
}

impl CurvatureReport {
    pub fn new(
        chart_point: Vec<f64>,
        ambient_point: Vec<f64>,
        unit_normal: Vec<f64>,
        mean_curvature: f64,
        density_term: f64,
    ) -> Self {
        CurvatureReport {
            chart_point,
            ambient_point,
            unit_normal,
            mean_curvature,
            density_term,
            weighted_mean_curvature: mean_curvature + density_term,
        }
    }
}

/// Position, partials and unit normal at a chart point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub point: Vec<f64>,
    pub partials: Vec<Vec<f64>>,
    pub normal: Vec<f64>,
}

/// An immersed n-dimensional chart in R^{n+1}.
#[derive(Clone)]
pub struct ParametricSurface {
    name: String,
    chart: ChartBox,
    immersion: ChartMap,
    first: Option<PartialsMap>,
    second: Option<SecondPartialsMap>,
    orientation: Orientation,
}

impl std::fmt::Debug for ParametricSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametricSurface")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("analytic_first", &self.first.is_some())
            .field("analytic_second", &self.second.is_some())
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl ParametricSurface {
    pub fn new<F>(name: impl Into<String>, chart: ChartBox, immersion: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        ParametricSurface {
            name: name.into(),
            chart,
            immersion: Arc::new(immersion),
            first: None,
            second: None,
            orientation: Orientation::CrossProduct,
        }
    }

    pub fn with_first_derivatives<F>(mut self, partials: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    {
        self.first = Some(Arc::new(partials));
        self
    }

    pub fn with_second_derivatives<F>(mut self, second: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<Vec<Vec<f64>>> + Send + Sync + 'static,
    {
        self.second = Some(Arc::new(second));
        self
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = match self.orientation {
            Orientation::CrossProduct => Orientation::Reversed,
            Orientation::Reversed => Orientation::CrossProduct,
        };
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &ChartBox {
        &self.chart
    }

    pub fn chart_dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.chart.dim() + 1
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn has_analytic_first(&self) -> bool {
        self.first.is_some()
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        check_dim(self.chart_dim(), p.len())?;
        if self.chart.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideChart(p.to_vec()))
        }
    }

    pub fn point(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_point(p)?;
        let x = (self.immersion)(p);
        check_dim(self.ambient_dim(), x.len())?;
        Ok(x)
    }

    /// Analytic partials if provided, central differences (step 1e-5) otherwise.
    pub fn partials(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(p)?;
        Ok(self.partials_unchecked(p))
    }

    /// Finite-difference partials regardless of analytic providers.
    pub fn fd_partials(&self, p: &[f64]) -> Vec<Vec<f64>> {
        fd::jacobian_columns(|q| (self.immersion)(q), p, fd::FIRST_STEP)
    }

    fn partials_unchecked(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match &self.first {
            Some(first) => first(p),
            None => self.fd_partials(p),
        }
    }

    /// Second partials: analytic if provided, otherwise central differences of
    /// the partials with step 1e-4.
    pub fn second_partials(&self, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        self.check_point(p)?;
        if let Some(second) = &self.second {
            return Ok(second(p));
        }
        let n = self.chart_dim();
        let h = fd::SECOND_STEP;
        let mut q = p.to_vec();
        let mut out = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            q[i] = p[i] + h;
            let plus = self.partials_unchecked(&q);
            q[i] = p[i] - h;
            let minus = self.partials_unchecked(&q);
            q[i] = p[i];
            for j in 0..n {
                out[i][j] = plus[j]
                    .iter()
                    .zip(&minus[j])
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect();
            }
        }
        // symmetrize
        for (i, j) in (0..n).flat_map(|i| (0..i).map(move |j| (i, j))) {
            let avg: Vec<f64> = out[i][j]
                .iter()
                .zip(&out[j][i])
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            out[i][j] = avg.clone();
            out[j][i] = avg;
        }
        Ok(out)
    }

    pub fn frame(&self, p: &[f64]) -> Result<Frame> {
        let point = self.point(p)?;
        let partials = self.partials_unchecked(p);
        let g = gram(&partials).determinant();
        if g.is_nan() || g <= MIN_GRAM_DET {
            return Err(Error::RankDeficient { gram: g });
        }
        let cross = generalized_cross(&partials);
        let len = norm(&cross);
        let sign = match self.orientation {
            Orientation::CrossProduct => 1.0,
            Orientation::Reversed => -1.0,
        };
        Ok(Frame {
            point,
            partials,
            normal: scale(&cross, sign / len),
        })
    }

    pub fn unit_normal(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(self.frame(p)?.normal)
    }

    fn mean_curvature_in(&self, frame: &Frame, p: &[f64]) -> Result<f64> {
        let n = self.chart_dim();
        let second = self.second_partials(p)?;
        let g = gram(&frame.partials);
        let b = DMatrix::from_fn(n, n, |i, j| dot(&second[i][j], &frame.normal));
        let g_inv = g.try_inverse().ok_or(Error::RankDeficient { gram: 0.0 })?;
        Ok((g_inv * b).trace())
    }

    /// `H = tr(-dN)`, the sum of principal curvatures.
    pub fn mean_curvature(&self, p: &[f64]) -> Result<f64> {
        let frame = self.frame(p)?;
        self.mean_curvature_in(&frame, p)
    }

    /// `<∇F, N>` at the image of `p`.
    pub fn density_normal_pairing(&self, density: &Density, p: &[f64]) -> Result<f64> {
        check_dim(self.ambient_dim(), density.dimension())?;
        let frame = self.frame(p)?;
        Ok(dot(&density.grad_potential(&frame.point)?, &frame.normal))
    }

    pub fn weighted_mean_curvature(&self, density: &Density, p: &[f64]) -> Result<CurvatureReport> {
        check_dim(self.ambient_dim(), density.dimension())?;
        let frame = self.frame(p)?;
        let h = self.mean_curvature_in(&frame, p)?;
        let term = dot(&density.grad_potential(&frame.point)?, &frame.normal);
        Ok(CurvatureReport::new(
            p.to_vec(),
            frame.point,
            frame.normal,
            h,
            term,
        ))
    }

    /// Distance from the axis projection `ρ(M) = (0, ..., 0, M_{n+1})` to the
    /// affine tangent hyperplane at `M`, paired with `|<∇f, N>|` for the
    /// horizontal Gaussian (`∇f = (x_1, ..., x_n, 0)`).
    ///
    /// The distance is computed from the chart partials alone (residual of the
    /// projection onto their span), independently of the normal.
    pub fn tangent_plane_distance(&self, p: &[f64]) -> Result<(f64, f64)> {
        let frame = self.frame(p)?;
        let m = &frame.point;
        let dim = m.len();
        let mut rho = vec![0.0; dim];
        rho[dim - 1] = m[dim - 1];
        let lhs = distance_to_span(&frame.partials, &sub(&rho, m))
            .ok_or(Error::RankDeficient { gram: 0.0 })?;
        let mut grad_f = m.clone();
        grad_f[dim - 1] = 0.0;
        let rhs = dot(&grad_f, &frame.normal).abs();
        Ok((lhs, rhs))
    }
}
