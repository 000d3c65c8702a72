//! Log-densities `e^{-F}` on R^n and on products R^n x R.
//!
//! Every density stores its normalized log-weight: the Gaussian carries the
//! `(n/2) ln(2 pi)` term so that its total mass is exactly one. The
//! normalization is exposed separately through [`Density::log_normalization`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::linalg::norm;
use crate::measure::unit_ball_volume;
use crate::special::ln_gamma;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Vertical profile `h(z)` of a product density.
#[derive(Clone)]
pub enum Profile {
    /// `h(z) = value`.
    Constant(f64),
    /// `h(z) = z^2/2 + linear*z + offset`.
    Quadratic { linear: f64, offset: f64 },
    /// `h(z) = slope*z + offset`; monotone whenever `slope != 0`.
    Linear { slope: f64, offset: f64 },
    /// `h(z) = z^2 - ln sqrt(1 + 4z)`, defined for `z > -1/4`.
    LogCorrectedQuadratic,
    /// User-supplied pair `(h, h')` with an optional open lower bound on `z`.
    Custom {
        name: String,
        value: ScalarFn,
        derivative: ScalarFn,
        lower_bound: Option<f64>,
    },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Quadratic { linear, offset } => {
                write!(f, "Quadratic {{ linear: {linear}, offset: {offset} }}")
            }
            Profile::Linear { slope, offset } => {
                write!(f, "Linear {{ slope: {slope}, offset: {offset} }}")
            }
            Profile::LogCorrectedQuadratic => write!(f, "LogCorrectedQuadratic"),
            Profile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

const LOG_QUADRATIC_LOWER: f64 = -0.25;

impl Profile {
    /// Resolve a preset name: `constant`, `constant:<v>`, `quadratic`,
    /// `quadratic:<c>`, `linear`, `linear:<slope>`, `paper_example`.
    pub fn from_preset(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let num = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| Error::UnknownPreset(name.to_string())),
            }
        };
        match head {
            "constant" => Ok(Profile::Constant(num(0.0)?)),
            "quadratic" => Ok(Profile::Quadratic {
                linear: num(0.0)?,
                offset: 0.0,
            }),
            "linear" | "monotone" => Ok(Profile::Linear {
                slope: num(1.0)?,
                offset: 0.0,
            }),
            "paper_example" | "log_quadratic" => Ok(Profile::LogCorrectedQuadratic),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Constant(c) => format!("constant:{c}"),
            Profile::Quadratic { linear, .. } => format!("quadratic:{linear}"),
            Profile::Linear { slope, .. } => format!("linear:{slope}"),
            Profile::LogCorrectedQuadratic => "paper_example".to_string(),
            Profile::Custom { name, .. } => name.clone(),
        }
    }

    /// Open lower bound of the domain, if any.
    pub fn lower_bound(&self) -> Option<f64> {
        match self {
            Profile::LogCorrectedQuadratic => Some(LOG_QUADRATIC_LOWER),
            Profile::Custom { lower_bound, .. } => *lower_bound,
            _ => None,
        }
    }

    pub fn contains(&self, z: f64) -> bool {
        z.is_finite() && self.lower_bound().is_none_or(|lo| z > lo)
    }

    fn check_domain(&self, z: f64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "vertical profile",
                at: z,
                domain: match self {
                    Profile::LogCorrectedQuadratic => "z > -1/4",
                    _ => "z above the profile's lower bound",
                },
            })
        }
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        self.check_domain(z)?;
        Ok(match self {
            Profile::Constant(c) => *c,
            Profile::Quadratic { linear, offset } => 0.5 * z * z + linear * z + offset,
            Profile::Linear { slope, offset } => slope * z + offset,
            Profile::LogCorrectedQuadratic => z * z - 0.5 * (1.0 + 4.0 * z).ln(),
            Profile::Custom { value, .. } => value(z),
        })
    }

    pub fn derivative(&self, z: f64) -> Result<f64> {
        self.check_domain(z)?;
        Ok(match self {
            Profile::Constant(_) => 0.0,
            Profile::Quadratic { linear, .. } => z + linear,
            Profile::Linear { slope, .. } => *slope,
            Profile::LogCorrectedQuadratic => 2.0 * z - 2.0 / (1.0 + 4.0 * z),
            Profile::Custom { derivative, .. } => derivative(z),
        })
    }

    /// True when `h'` vanishes identically.
    pub fn is_constant(&self) -> bool {
        matches!(self, Profile::Constant(_))
    }
}

/// Radial log-weight `phi(|x|)` presets; both have finite total mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialProfile {
    /// `phi(r) = r^2/2`
    Gaussian,
    /// `phi(r) = r^4/4`
    Quartic,
}

impl RadialProfile {
    fn phi(self, r: f64) -> f64 {
        match self {
            RadialProfile::Gaussian => 0.5 * r * r,
            RadialProfile::Quartic => 0.25 * r.powi(4),
        }
    }

    /// `phi'(r) / r`, finite at the origin for both presets.
    fn phi_prime_over_r(self, r: f64) -> f64 {
        match self {
            RadialProfile::Gaussian => 1.0,
            RadialProfile::Quartic => r * r,
        }
    }

    /// `ln` of the total mass of `e^{-phi(|x|)}` over R^n.
    fn log_mass(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            RadialProfile::Gaussian => 0.5 * nf * (2.0 * PI).ln(),
            RadialProfile::Quartic => {
                (nf * unit_ball_volume(n)).ln() + (nf / 4.0 - 1.0) * 4f64.ln() + ln_gamma(nf / 4.0)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum DensityKind {
    /// Normalized standard Gaussian on R^n.
    Gaussian,
    /// Normalized radial density on R^n.
    Radial(RadialProfile),
    /// `F(x, z) = f(x) + h(z)` on R^n x R.
    Product {
        horizontal: Box<Density>,
        vertical: Profile,
    },
}

/// A log-density `F` on R^dimension; the weight is `e^{-F}`.
#[derive(Debug, Clone)]
pub struct Density {
    dimension: usize,
    kind: DensityKind,
}

impl Density {
    pub fn gaussian(n: usize) -> Self {
        assert!(n >= 1);
        Density {
            dimension: n,
            kind: DensityKind::Gaussian,
        }
    }

    pub fn radial(n: usize, profile: RadialProfile) -> Self {
        assert!(n >= 1);
        Density {
            dimension: n,
            kind: DensityKind::Radial(profile),
        }
    }

    pub fn product(horizontal: Density, vertical: Profile) -> Self {
        Density {
            dimension: horizontal.dimension + 1,
            kind: DensityKind::Product {
                horizontal: Box::new(horizontal),
                vertical,
            },
        }
    }

    /// Gauss space times the line with the trivial vertical profile `h = 0`.
    pub fn gaussian_cylinder(n: usize) -> Self {
        Density::product(Density::gaussian(n), Profile::Constant(0.0))
    }

    /// Resolve `gaussian`, `radial:<gaussian|quartic>` or
    /// `product:<horizontal>+<profile>`; `n` is the dimension of the
    /// (horizontal) base.
    pub fn from_preset(name: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if name == "gaussian" {
            return Ok(Density::gaussian(n));
        }
        if let Some(rest) = name.strip_prefix("radial:") {
            let profile = match rest {
                "gaussian" => RadialProfile::Gaussian,
                "quartic" => RadialProfile::Quartic,
                _ => return Err(Error::UnknownPreset(name.to_string())),
            };
            return Ok(Density::radial(n, profile));
        }
        if let Some(rest) = name.strip_prefix("product:") {
            let (base, profile) = rest
                .split_once('+')
                .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            let horizontal = Density::from_preset(base, n)?;
            if matches!(horizontal.kind, DensityKind::Product { .. }) {
                return Err(Error::UnknownPreset(name.to_string()));
            }
            return Ok(Density::product(horizontal, Profile::from_preset(profile)?));
        }
        Err(Error::UnknownPreset(name.to_string()))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    /// Vertical profile of a product density.
    pub fn vertical_profile(&self) -> Option<&Profile> {
        match &self.kind {
            DensityKind::Product { vertical, .. } => Some(vertical),
            _ => None,
        }
    }

    /// True when `F` does not depend on the last coordinate.
    pub fn is_vertically_invariant(&self) -> bool {
        matches!(&self.kind, DensityKind::Product { vertical, .. } if vertical.is_constant())
    }

    /// `ln` of the normalization constant folded into `F` (horizontal part only
    /// for products).
    pub fn log_normalization(&self) -> f64 {
        match &self.kind {
            DensityKind::Gaussian => RadialProfile::Gaussian.log_mass(self.dimension),
            DensityKind::Radial(p) => p.log_mass(self.dimension),
            DensityKind::Product { horizontal, .. } => horizontal.log_normalization(),
        }
    }

    /// The potential `F`, so that the weight is `e^{-F}`.
    pub fn potential(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension, x.len())?;
        Ok(match &self.kind {
            DensityKind::Gaussian => {
                0.5 * x.iter().map(|v| v * v).sum::<f64>() + self.log_normalization()
            }
            DensityKind::Radial(p) => p.phi(norm(x)) + self.log_normalization(),
            DensityKind::Product {
                horizontal,
                vertical,
            } => {
                let (base, z) = x.split_at(self.dimension - 1);
                horizontal.potential(base)? + vertical.value(z[0])?
            }
        })
    }

    /// The weight `e^{-F(x)}`.
    pub fn weight(&self, x: &[f64]) -> Result<f64> {
        Ok((-self.potential(x)?).exp())
    }

    pub fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension, x.len())?;
        Ok(match &self.kind {
            DensityKind::Gaussian => x.to_vec(),
            DensityKind::Radial(p) => {
                let s = p.phi_prime_over_r(norm(x));
                x.iter().map(|v| s * v).collect()
            }
            DensityKind::Product {
                horizontal,
                vertical,
            } => {
                let (base, z) = x.split_at(self.dimension - 1);
                let mut g = horizontal.grad_potential(base)?;
                g.push(vertical.derivative(z[0])?);
                g
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;

    #[test]
    fn gaussian_log_weight_at_origin() {
        let d = Density::gaussian(2);
        let f = d.potential(&[0.0, 0.0]).unwrap();
        assert!((f - (2.0 * PI).ln()).abs() < 1e-15);
        assert!((d.weight(&[0.0, 0.0]).unwrap() - 0.159_154_943_091_895_35).abs() < 1e-15);
        let d1 = Density::gaussian(1);
        assert!((d1.potential(&[0.0]).unwrap() - 0.5 * (2.0 * PI).ln()).abs() < 1e-15);
    }

    #[test]
    fn product_with_log_quadratic_profile() {
        let d = Density::product(Density::gaussian(2), Profile::LogCorrectedQuadratic);
        let f = d.potential(&[0.0, 0.0, 1.0]).unwrap();
        // summands evaluated separately: ln(2 pi) and 1 - ln sqrt 5
        let expected = (2.0 * PI).ln() + (1.0 - 5f64.sqrt().ln());
        assert!((f - expected).abs() < 1e-14);
    }

    #[test]
    fn gradients_of_presets() {
        let cyl = Density::gaussian_cylinder(2);
        assert_eq!(
            cyl.grad_potential(&[1.0, 2.0, 5.0]).unwrap(),
            vec![1.0, 2.0, 0.0]
        );
        assert_eq!(
            Density::gaussian(3).grad_potential(&[0.0; 3]).unwrap(),
            vec![0.0; 3]
        );
        let prod = Density::product(Density::gaussian(1), Profile::LogCorrectedQuadratic);
        let g = prod.grad_potential(&[0.0, 0.0]).unwrap();
        assert_eq!(g[0], 0.0);
        assert!((g[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_quadratic_profile_domain_is_enforced() {
        let h = Profile::LogCorrectedQuadratic;
        assert!(matches!(h.value(-0.25), Err(Error::Domain { .. })));
        assert!(matches!(h.derivative(-1.0), Err(Error::Domain { .. })));
        assert!(h.value(-0.2499).is_ok());
        let d = Density::product(Density::gaussian(2), h);
        assert!(d.potential(&[0.0, 0.0, -0.3]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = Density::gaussian(2).potential(&[1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn presets_resolve() {
        let d = Density::from_preset("product:gaussian+paper_example", 2).unwrap();
        assert_eq!(d.dimension(), 3);
        assert!(!d.is_vertically_invariant());
        let d = Density::from_preset("product:gaussian+constant", 2).unwrap();
        assert!(d.is_vertically_invariant());
        assert!(Density::from_preset("radial:quartic", 3).is_ok());
        assert!(Density::from_preset("radial:cubic", 3).is_err());
        assert!(Density::from_preset("nope", 2).is_err());
        assert!(Profile::from_preset("linear:2.5").is_ok());
        assert!(Profile::from_preset("linear:x").is_err());
    }

    #[test]
    fn radial_gradient_is_parallel_to_position() {
        let d = Density::radial(3, RadialProfile::Quartic);
        let x = [0.3, -1.2, 0.7];
        let g = d.grad_potential(&x).unwrap();
        let ratio = g[0] / x[0];
        for (gi, xi) in g.iter().zip(&x) {
            assert!((gi - ratio * xi).abs() < 1e-14);
        }
        let fdg = fd::gradient(|p| d.potential(p).unwrap(), &x, fd::FIRST_STEP);
        for (a, b) in g.iter().zip(&fdg) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn quartic_normalization_in_one_dimension() {
        // int e^{-x^4/4} dx = 2 * 4^{-3/4} Gamma(1/4)
        let d = Density::radial(1, RadialProfile::Quartic);
        let expected = (2.0 * 4f64.powf(-0.75)).ln() + ln_gamma(0.25);
        assert!((d.log_normalization() - expected).abs() < 1e-13);
    }
}
