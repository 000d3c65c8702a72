//! Weighted mean-curvature descent `u_t = H_F(u)` for graphs over a box
//! `[-L, L]^n` (n = 1, 2) with homogeneous Neumann conditions.
//!
//! The scheme is variational. The weighted area is discretized as
//!
//! * n = 1: one linear element per cell, `E = Σ dx ρ̄ sqrt(1 + s^2)`;
//! * n = 2: two linear triangles per square (split along the anti-diagonal),
//!   `E = Σ (dx^2/2) ρ̄ sqrt(1 + |g|^2)`;
//!
//! with `ρ̄` the mean horizontal weight over the element's vertices, and the
//! velocity is `-∇E` divided by the lumped weighted mass `ρ_i dx^n` (halved
//! per boundary axis). This is a second-order flux-form approximation of
//! `H_F = div(∇u/W) - <∇f, ∇u>/W`, and Neumann conditions are natural (no
//! flux leaves the box). Explicit Euler with `dt = 0.4 dx^2 / (2n)` descends
//! `E` monotonically.

use serde::Serialize;

use crate::density::Density;
use crate::error::{check_dim, Error, Result};
use crate::graph::GraphFunction;

/// CFL safety factor in `dt = safety * dx^2 / (2n)`.
pub const CFL_SAFETY: f64 = 0.4;
/// Largest tolerated per-step increase of the weighted area.
pub const AREA_INCREASE_TOL: f64 = 1e-12;
pub const MAX_REJECTIONS: usize = 10;

/// Samples of a graph on the regular grid over `[-L, L]^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField {
    dim: usize,
    half_width: f64,
    resolution: usize,
    /// Row-major: index `i + m * j` for node `(x_i, y_j)`.
    values: Vec<f64>,
}

impl GridField {
    pub fn new(dim: usize, half_width: f64, resolution: usize, values: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if resolution < 3 {
            return Err(Error::InvalidArgument(
                "grid needs at least 3 nodes per axis".into(),
            ));
        }
        if !(half_width > 0.0) {
            return Err(Error::InvalidArgument(
                "box half-width must be positive".into(),
            ));
        }
        check_dim(resolution.pow(dim as u32), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid values must be finite".into()));
        }
        Ok(GridField {
            dim,
            half_width,
            resolution,
            values,
        })
    }

    /// Sample `u` at the grid nodes.
    pub fn sample(u: &GraphFunction, half_width: f64, resolution: usize) -> Result<Self> {
        let dim = u.dim();
        let probe = GridField::new(
            dim,
            half_width,
            resolution,
            vec![0.0; resolution.pow(dim as u32)],
        )?;
        let values = (0..probe.len()).map(|k| u.value(&probe.node(k))).collect();
        GridField::new(dim, half_width, resolution, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.resolution - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coordinate of grid line `i`; mirror-symmetric in floating point.
    pub fn coordinate(&self, i: usize) -> f64 {
        let m1 = (self.resolution - 1) as f64;
        self.half_width * (2.0 * i as f64 - m1) / m1
    }

    pub fn node(&self, k: usize) -> Vec<f64> {
        let m = self.resolution;
        match self.dim {
            1 => vec![self.coordinate(k)],
            _ => vec![self.coordinate(k % m), self.coordinate(k / m)],
        }
    }

    pub fn oscillation(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(*v), hi.max(*v))
            });
        hi - lo
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest one-sided difference quotient along any axis.
    pub fn max_abs_gradient(&self) -> f64 {
        let m = self.resolution;
        let dx = self.spacing();
        let mut g: f64 = 0.0;
        for k in 0..self.len() {
            let (i, j) = (k % m, k / m);
            if i + 1 < m {
                g = g.max((self.values[k + 1] - self.values[k]).abs() / dx);
            }
            if self.dim == 2 && j + 1 < m {
                g = g.max((self.values[k + m] - self.values[k]).abs() / dx);
            }
        }
        g
    }

    /// Long-format CSV: `x,u` (n = 1) or `x,y,u` (n = 2).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(if self.dim == 1 { "x,u\n" } else { "x,y,u\n" });
        for (k, v) in self.values.iter().enumerate() {
            let node = self.node(k);
            for c in &node {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistoryEntry {
    #[serde(rename = "t")]
    pub time: f64,
    pub weighted_area: f64,
    pub oscillation: f64,
    pub max_abs_hf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowState {
    pub field: GridField,
    pub time: f64,
    /// Nominal step; a rejected step is retried with halves of it.
    pub dt: f64,
    pub history: Vec<HistoryEntry>,
}

impl FlowState {
    /// Start at `t = 0` with the largest stable step.
    pub fn new(field: GridField) -> Self {
        let dx = field.spacing();
        let dt = CFL_SAFETY * dx * dx / (2.0 * field.dim() as f64);
        FlowState {
            field,
            time: 0.0,
            dt,
            history: Vec::new(),
        }
    }

    pub fn max_stable_dt(&self) -> f64 {
        let dx = self.field.spacing();
        CFL_SAFETY * dx * dx / (2.0 * self.field.dim() as f64)
    }

    pub fn history_csv(&self) -> String {
        let mut out = String::from("t,weighted_area,oscillation,max_abs_hf\n");
        for h in &self.history {
            out.push_str(&format!(
                "{},{},{},{}\n",
                h.time, h.weighted_area, h.oscillation, h.max_abs_hf
            ));
        }
        out
    }
}

/// Discrete weighted area and its mass-scaled gradient on a fixed grid.
#[derive(Debug, Clone)]
pub struct FlowOperator {
    dim: usize,
    m: usize,
    dx: f64,
    /// Lumped weighted mass per node.
    mass: Vec<f64>,
    /// Mean vertex weight per element: cells (n = 1) or triangles (n = 2,
    /// lower-left then upper-right per square).
    element_weight: Vec<f64>,
}

impl FlowOperator {
    /// The density must live on R^{n+1} and not depend on the height.
    pub fn new(field: &GridField, density: &Density) -> Result<Self> {
        let n = field.dim();
        check_dim(n + 1, density.dimension())?;
        if !density.is_vertically_invariant() {
            return Err(Error::InvalidArgument(
                "the flow needs a density independent of the height".into(),
            ));
        }
        let m = field.resolution();
        let dx = field.spacing();
        let rho: Vec<f64> = (0..field.len())
            .map(|k| {
                let mut p = field.node(k);
                p.push(0.0);
                density.weight(&p)
            })
            .collect::<Result<_>>()?;
        let edge = |i: usize| if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
        let (mass, element_weight) = match n {
            1 => {
                let mass = (0..m).map(|i| rho[i] * dx * edge(i)).collect();
                let cells = (0..m - 1).map(|i| 0.5 * (rho[i] + rho[i + 1])).collect();
                (mass, cells)
            }
            _ => {
                let mass = (0..m * m)
                    .map(|k| rho[k] * dx * dx * edge(k % m) * edge(k / m))
                    .collect();
                let mut tris = Vec::with_capacity(2 * (m - 1) * (m - 1));
                for j in 0..m - 1 {
                    for i in 0..m - 1 {
                        let k = i + m * j;
                        let (a, b, c, d) = (rho[k], rho[k + 1], rho[k + m], rho[k + m + 1]);
                        tris.push((a + b + c) / 3.0);
                        tris.push((d + c + b) / 3.0);
                    }
                }
                (mass, tris)
            }
        };
        Ok(FlowOperator {
            dim: n,
            m,
            dx,
            mass,
            element_weight,
        })
    }

    pub fn weighted_area(&self, u: &[f64]) -> f64 {
        let (m, dx) = (self.m, self.dx);
        match self.dim {
            1 => (0..m - 1)
                .map(|i| {
                    let s = (u[i + 1] - u[i]) / dx;
                    dx * self.element_weight[i] * (1.0 + s * s).sqrt()
                })
                .sum(),
            _ => {
                let area = 0.5 * dx * dx;
                let mut e = 0.0;
                for j in 0..m - 1 {
                    for i in 0..m - 1 {
                        let k = i + m * j;
                        let t = 2 * (i + (m - 1) * j);
                        let (gx, gy) = ((u[k + 1] - u[k]) / dx, (u[k + m] - u[k]) / dx);
                        e += area * self.element_weight[t] * (1.0 + gx * gx + gy * gy).sqrt();
                        let (gx, gy) = (
                            (u[k + m + 1] - u[k + m]) / dx,
                            (u[k + m + 1] - u[k + 1]) / dx,
                        );
                        e += area * self.element_weight[t + 1] * (1.0 + gx * gx + gy * gy).sqrt();
                    }
                }
                e
            }
        }
    }

    /// Discrete `H_F` at every node: `-(∂E/∂u_k) / mass_k`.
    pub fn velocity(&self, u: &[f64]) -> Vec<f64> {
        let (m, dx) = (self.m, self.dx);
        let mut force = vec![0.0; u.len()];
        match self.dim {
            1 => {
                for i in 0..m - 1 {
                    let s = (u[i + 1] - u[i]) / dx;
                    let flux = self.element_weight[i] * s / (1.0 + s * s).sqrt();
                    force[i] += flux;
                    force[i + 1] -= flux;
                }
            }
            _ => {
                let c = 0.5 * dx;
                for j in 0..m - 1 {
                    for i in 0..m - 1 {
                        let k = i + m * j;
                        let t = 2 * (i + (m - 1) * j);
                        // lower-left triangle (k, k+1, k+m)
                        let (gx, gy) = ((u[k + 1] - u[k]) / dx, (u[k + m] - u[k]) / dx);
                        let w = c * self.element_weight[t] / (1.0 + gx * gx + gy * gy).sqrt();
                        force[k] += w * (gx + gy);
                        force[k + 1] -= w * gx;
                        force[k + m] -= w * gy;
                        // upper-right triangle (k+m+1, k+m, k+1)
                        let (gx, gy) = (
                            (u[k + m + 1] - u[k + m]) / dx,
                            (u[k + m + 1] - u[k + 1]) / dx,
                        );
                        let w = c * self.element_weight[t + 1] / (1.0 + gx * gx + gy * gy).sqrt();
                        force[k + m + 1] -= w * (gx + gy);
                        force[k + m] += w * gx;
                        force[k + 1] += w * gy;
                    }
                }
            }
        }
        force
            .iter()
            .zip(&self.mass)
            .map(|(f, mass)| f / mass)
            .collect()
    }

    fn record(&self, state: &mut FlowState) {
        let v = self.velocity(state.field.values());
        state.history.push(HistoryEntry {
            time: state.time,
            weighted_area: self.weighted_area(state.field.values()),
            oscillation: state.field.oscillation(),
            max_abs_hf: v.iter().fold(0.0, |a, b| a.max(b.abs())),
        });
    }

    /// Advance by `min(state.dt, max_dt)`, halving on rejection.
    pub fn step(&self, mut state: FlowState, max_dt: f64) -> Result<FlowState> {
        self.advance(&mut state, max_dt)?;
        Ok(state)
    }

    /// In-place form of [`FlowOperator::step`]; on failure `state` is left
    /// as it was.
    pub fn advance(&self, state: &mut FlowState, max_dt: f64) -> Result<()> {
        if state.history.is_empty() {
            self.record(state);
        }
        let area = self.weighted_area(state.field.values());
        let v = self.velocity(state.field.values());
        let mut dt = state.dt.min(max_dt);
        for _ in 0..=MAX_REJECTIONS {
            let next: Vec<f64> = state
                .field
                .values()
                .iter()
                .zip(&v)
                .map(|(u, vel)| u + dt * vel)
                .collect();
            let finite = next.iter().all(|x| x.is_finite());
            if finite && self.weighted_area(&next) <= area + AREA_INCREASE_TOL {
                state.field.values = next;
                state.time += dt;
                self.record(state);
                return Ok(());
            }
            dt *= 0.5;
        }
        Err(Error::StepFailure {
            time: state.time,
            reason: format!("weighted area increased after {MAX_REJECTIONS} halvings"),
        })
    }
}

/// One explicit step of the weighted mean-curvature descent.
pub fn flow_step(state: FlowState, density: &Density) -> Result<FlowState> {
    if state.dt > state.max_stable_dt() * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "dt = {} exceeds the stability bound {}",
            state.dt,
            state.max_stable_dt()
        )));
    }
    FlowOperator::new(&state.field, density)?.step(state, f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StopCriteria {
    pub osc_tol: f64,
    pub hf_tol: f64,
}

impl Default for StopCriteria {
    fn default() -> Self {
        StopCriteria {
            osc_tol: 0.005,
            hf_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    ConvergedToConstant { limit: f64 },
    MaxTimeReached,
    StepFailure { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowOutcome {
    pub state: FlowState,
    pub verdict: Verdict,
}

/// Step until `t_max`, or until the graph is flat to `osc_tol` with
/// `max |H_F| <= hf_tol`. With `stop = None` the run always reaches `t_max`
/// (the last step is shortened to land on it).
pub fn flow_run(
    state: FlowState,
    density: &Density,
    t_max: f64,
    stop: Option<StopCriteria>,
) -> Result<FlowOutcome> {
    let op = FlowOperator::new(&state.field, density)?;
    let mut state = state;
    if state.history.is_empty() {
        op.record(&mut state);
    }
    let converged = |s: &FlowState| {
        let last = s.history.last().expect("recorded");
        stop.is_some_and(|c| last.oscillation <= c.osc_tol && last.max_abs_hf <= c.hf_tol)
    };
    loop {
        if converged(&state) {
            let limit = state.field.mean();
            return Ok(FlowOutcome {
                state,
                verdict: Verdict::ConvergedToConstant { limit },
            });
        }
        let remaining = t_max - state.time;
        if remaining <= 1e-12 * t_max.max(1.0) {
            return Ok(FlowOutcome {
                state,
                verdict: Verdict::MaxTimeReached,
            });
        }
        match op.advance(&mut state, remaining) {
            Ok(()) => {}
            Err(Error::StepFailure { reason, .. }) => {
                return Ok(FlowOutcome {
                    state,
                    verdict: Verdict::StepFailure { reason },
                })
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sinusoid_state(m: usize) -> FlowState {
        let u = GraphFunction::sinusoid(1, 0.5, PI / 4.0);
        FlowState::new(GridField::sample(&u, 4.0, m).unwrap())
    }

    #[test]
    fn grid_validation() {
        assert!(GridField::new(1, 1.0, 2, vec![0.0; 2]).is_err());
        assert!(GridField::new(3, 1.0, 3, vec![0.0; 27]).is_err());
        assert!(GridField::new(1, 0.0, 3, vec![0.0; 3]).is_err());
        assert!(GridField::new(1, 1.0, 3, vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(GridField::new(2, 1.0, 3, vec![0.0; 8]).is_err());
        let g = GridField::new(1, 4.0, 257, vec![0.0; 257]).unwrap();
        assert_eq!(g.spacing(), 1.0 / 32.0);
        assert_eq!(g.coordinate(0), -4.0);
        assert_eq!(g.coordinate(128), 0.0);
        assert_eq!(g.coordinate(3), -g.coordinate(253));
    }

    #[test]
    fn step_respects_stability_bound() {
        let s = sinusoid_state(33);
        let dx = s.field.spacing();
        assert!((s.dt - 0.4 * dx * dx / 2.0).abs() < 1e-15);
        let mut bad = s.clone();
        bad.dt *= 2.0;
        assert!(flow_step(bad, &Density::gaussian_cylinder(1)).is_err());
    }

    #[test]
    fn constant_is_a_fixed_point() {
        for n in 1..=2 {
            let u = GraphFunction::constant(n, 0.7);
            let s = FlowState::new(GridField::sample(&u, 4.0, 17).unwrap());
            let d = Density::gaussian_cylinder(n);
            let s = flow_step(s, &d).unwrap();
            assert!(s.field.values().iter().all(|v| *v == 0.7));
        }
    }

    #[test]
    fn discrete_velocity_approximates_weighted_mean_curvature() {
        use crate::graph::graph_weighted_mean_curvature;
        let u = GraphFunction::sinusoid(1, 0.5, PI / 4.0);
        let d = Density::gaussian_cylinder(1);
        let field = GridField::sample(&u, 4.0, 513).unwrap();
        let op = FlowOperator::new(&field, &d).unwrap();
        let v = op.velocity(field.values());
        for k in (8..505).step_by(16) {
            let x = field.node(k);
            let hf = graph_weighted_mean_curvature(&u, &d, &x)
                .unwrap()
                .weighted_mean_curvature;
            assert!((v[k] - hf).abs() < 1e-3, "x = {x:?}: {} vs {hf}", v[k]);
        }
        let u2 = GraphFunction::random_bump(2, 0.3, 5);
        let d2 = Density::gaussian_cylinder(2);
        let field = GridField::sample(&u2, 3.0, 121).unwrap();
        let op = FlowOperator::new(&field, &d2).unwrap();
        let v = op.velocity(field.values());
        for k in [121 * 60 + 60, 121 * 40 + 70, 121 * 80 + 30] {
            let x = field.node(k);
            let hf = graph_weighted_mean_curvature(&u2, &d2, &x)
                .unwrap()
                .weighted_mean_curvature;
            assert!((v[k] - hf).abs() < 5e-3, "x = {x:?}: {} vs {hf}", v[k]);
        }
    }

    #[test]
    fn weighted_area_decreases_on_the_first_step() {
        let d = Density::gaussian_cylinder(1);
        let s = flow_step(sinusoid_state(257), &d).unwrap();
        assert_eq!(s.history.len(), 2);
        assert!(s.history[1].weighted_area < s.history[0].weighted_area);
    }

    #[test]
    fn height_dependent_density_is_rejected() {
        let d = Density::product(
            Density::gaussian(1),
            crate::density::Profile::Quadratic {
                linear: 0.0,
                offset: 0.0,
            },
        );
        assert!(FlowOperator::new(&sinusoid_state(17).field, &d).is_err());
    }

    #[test]
    fn linear_data_flattens() {
        let u = GraphFunction::linear(vec![0.2], 0.0);
        let s = FlowState::new(GridField::sample(&u, 4.0, 65).unwrap());
        let d = Density::gaussian_cylinder(1);
        let out = flow_run(s, &d, 3.0, None).unwrap();
        let h = &out.state.history;
        assert!(h.last().unwrap().oscillation < 0.5 * h[0].oscillation);
        assert_eq!(out.verdict, Verdict::MaxTimeReached);
        assert!((out.state.time - 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_run_converges_immediately() {
        let u = GraphFunction::constant(1, 0.7);
        let s = FlowState::new(GridField::sample(&u, 4.0, 65).unwrap());
        let out = flow_run(
            s,
            &Density::gaussian_cylinder(1),
            50.0,
            Some(StopCriteria::default()),
        )
        .unwrap();
        match out.verdict {
            Verdict::ConvergedToConstant { limit } => assert!((limit - 0.7).abs() < 1e-14),
            v => panic!("{v:?}"),
        }
        assert_eq!(out.state.time, 0.0);
    }

    #[test]
    fn csv_shapes() {
        let s = sinusoid_state(5);
        let csv = s.field.to_csv();
        assert!(csv.starts_with("x,u\n"));
        assert_eq!(csv.lines().count(), 6);
        let out = flow_run(s, &Density::gaussian_cylinder(1), 0.1, None).unwrap();
        let ts = out.state.history_csv();
        assert!(ts.starts_with("t,weighted_area,oscillation,max_abs_hf\n"));
        assert_eq!(ts.lines().count(), out.state.history.len() + 1);
    }
}
