//! Central finite differences.

/// Step for first-derivative checks.
pub const FIRST_STEP: f64 = 1e-5;
/// Step for Hessians and divergence checks.
pub const SECOND_STEP: f64 = 1e-4;

/// Central-difference gradient of a scalar function.
pub fn gradient<F>(f: F, x: &[f64], step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + step;
            let fp = f(&probe);
            probe[i] = x[i] - step;
            let fm = f(&probe);
            probe[i] = x[i];
            (fp - fm) / (2.0 * step)
        })
        .collect()
}

/// Central-difference partial derivatives of a vector-valued map; entry `i`
/// is the derivative along coordinate `i`.
pub fn jacobian_columns<F>(f: F, x: &[f64], step: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + step;
            let fp = f(&probe);
            probe[i] = x[i] - step;
            let fm = f(&probe);
            probe[i] = x[i];
            fp.iter()
                .zip(&fm)
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect()
        })
        .collect()
}

/// Central-difference Hessian of a scalar function.
pub fn hessian<F>(f: F, x: &[f64], step: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let f0 = f(x);
    let mut h = vec![vec![0.0; n]; n];
    let mut p = x.to_vec();
    for i in 0..n {
        p[i] = x[i] + step;
        let fp = f(&p);
        p[i] = x[i] - step;
        let fm = f(&p);
        p[i] = x[i];
        h[i][i] = (fp - 2.0 * f0 + fm) / (step * step);
        for j in 0..i {
            let mut eval = |si: f64, sj: f64| {
                p[i] = x[i] + si * step;
                p[j] = x[j] + sj * step;
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                / (4.0 * step * step);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_differentiated_exactly_enough() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1] - x[1];
        let g = gradient(f, &[1.0, 2.0], FIRST_STEP);
        assert!((g[0] - 8.0).abs() < 1e-8 && (g[1] - 2.0).abs() < 1e-8);
        let h = hessian(f, &[1.0, 2.0], SECOND_STEP);
        assert!((h[0][0] - 2.0).abs() < 1e-5);
        assert!((h[0][1] - 3.0).abs() < 1e-5);
        assert!(h[1][1].abs() < 1e-5);
    }
}
