//! Small dense helpers on `&[f64]` vectors. Dimensions here are at most four.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant of the square matrix whose columns are `cols`.
pub fn det_columns(cols: &[&[f64]]) -> f64 {
    let k = cols.len();
    let m = DMatrix::from_fn(k, k, |i, j| cols[j][i]);
    m.determinant()
}

/// Gram matrix `G_ij = <v_i, v_j>`.
pub fn gram(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    let k = vectors.len();
    DMatrix::from_fn(k, k, |i, j| dot(&vectors[i], &vectors[j]))
}

/// Generalized cross product of `n` vectors in R^{n+1}: the vector `N` with
/// `<N, X> = det(v_1, ..., v_n, X)` for every `X`.
pub fn generalized_cross(vectors: &[Vec<f64>]) -> Vec<f64> {
    let dim = vectors.len() + 1;
    (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            let mut cols: Vec<&[f64]> = vectors.iter().map(Vec::as_slice).collect();
            cols.push(&e);
            det_columns(&cols)
        })
        .collect()
}

/// Distance from `v` to the linear span of `basis`, via the normal equations.
/// Returns `None` when the basis is numerically dependent.
pub fn distance_to_span(basis: &[Vec<f64>], v: &[f64]) -> Option<f64> {
    let g = gram(basis);
    let rhs = DVector::from_iterator(basis.len(), basis.iter().map(|b| dot(b, v)));
    let coeffs = g.lu().solve(&rhs)?;
    let mut residual = v.to_vec();
    for (b, c) in basis.iter().zip(coeffs.iter()) {
        for (r, bi) in residual.iter_mut().zip(b) {
            *r -= c * bi;
        }
    }
    Some(norm(&residual))
}

/// Orthonormalize the columns in place (modified Gram-Schmidt).
/// Returns `false` if a column collapses.
pub fn orthonormalize(vectors: &mut [Vec<f64>]) -> bool {
    for i in 0..vectors.len() {
        for j in 0..i {
            let (head, tail) = vectors.split_at_mut(i);
            let proj = dot(&tail[0], &head[j]);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * y;
            }
        }
        let len = norm(&vectors[i]);
        if len < 1e-12 {
            return false;
        }
        for x in vectors[i].iter_mut() {
            *x /= len;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_in_three_dimensions() {
        let n = generalized_cross(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!((n[0]).abs() < 1e-15 && (n[1]).abs() < 1e-15 && (n[2] - 1.0).abs() < 1e-15);
        let n = generalized_cross(&[vec![0.0, 0.0, 1.0], vec![0.0, -1.0, 0.0]]);
        assert!((n[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_cross_is_orthogonal_in_four_dimensions() {
        let vs = vec![
            vec![1.0, 0.2, -0.3, 0.5],
            vec![0.1, 1.0, 0.7, -0.2],
            vec![-0.4, 0.3, 1.0, 0.9],
        ];
        let n = generalized_cross(&vs);
        for v in &vs {
            assert!(dot(&n, v).abs() < 1e-12);
        }
    }

    #[test]
    fn span_distance() {
        let d = distance_to_span(
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
            &[3.0, -2.0, 4.0],
        );
        assert!((d.unwrap() - 4.0).abs() < 1e-14);
        assert!(distance_to_span(&[vec![1.0, 0.0], vec![2.0, 0.0]], &[0.0, 1.0]).is_none());
    }
}
