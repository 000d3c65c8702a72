//! Weighted minimal graphs in Gauss space times the line.
//!
//! Densities `e^{-F}` on R^{n+1}, weighted mean curvature of parametric
//! hypersurfaces and graphs, the calibration form for graphs, Gaussian
//! volume growth of graph caps, and an explicit weighted mean-curvature flow.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod catalog;
pub mod cli;

pub mod density;
pub mod error;
pub mod fd;
pub mod flow;
pub mod graph;
pub mod linalg;
pub mod measure;
pub mod quadrature;
pub mod special;
pub mod surface;

pub use error::{Error, Result};
