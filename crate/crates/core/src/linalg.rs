//! Small dense-linear-algebra helpers on complex Hermitian matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending and
/// eigenvectors as matching columns.
pub fn eigh(matrix: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::Eigen("matrix must be square and non-empty".into()));
    }
    if n == 1 {
        return Ok((
            DVector::from_element(1, matrix[(0, 0)].re),
            DMatrix::identity(1, 1),
        ));
    }
    let se = nalgebra::SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen(format!("no convergence on {n}x{n} Hermitian matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// exp(i * scale * h) for Hermitian `h`, via spectral decomposition.
pub fn exp_i_hermitian(h: &DMatrix<C64>, scale: f64) -> Result<DMatrix<C64>> {
    let (vals, vecs) = eigh(h)?;
    let phases = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::from_polar(1.0, scale * v)),
    );
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(&scaled * vecs.adjoint())
}

/// Largest absolute deviation from Hermiticity.
pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest absolute deviation from unitarity, max |U U† - 1|.
pub fn unitarity_error(u: &DMatrix<C64>) -> f64 {
    let mut p = u * u.adjoint();
    for i in 0..p.nrows() {
        p[(i, i)] -= C64::new(1.0, 0.0);
    }
    p.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of the off-diagonal part.
pub fn offdiagonal_norm(m: &DMatrix<C64>) -> f64 {
    let mut s = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Pairwise summation in fixed ascending-index order. Used for reductions
/// whose result must not depend on scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Complex variant of [`pairwise_sum`].
pub fn pairwise_sum_c(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigh_sorts_and_diagonalizes() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.0, -1.0),
                c(0.5, 0.0),
                c(0.0, 1.0),
                c(-1.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(0.3, 0.0),
            ],
        );
        let (vals, vecs) = eigh(&m).unwrap();
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
        assert!(unitarity_error(&vecs) < 1e-12);
        let recon = &vecs * DMatrix::from_diagonal(&vals.map(|v| c(v, 0.0))) * vecs.adjoint();
        assert!(frobenius_norm(&(&recon - &m)) < 1e-12);
    }

    #[test]
    fn exponential_is_unitary_and_matches_scalar() {
        let h =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let u = exp_i_hermitian(&h, 0.7).unwrap();
        assert!(unitarity_error(&u) < 1e-14);
        // exp(i t sigma_x) = cos t + i sin t sigma_x
        assert!((u[(0, 0)] - c(0.7f64.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - c(0.0, 0.7f64.sin())).norm() < 1e-14);
    }

    #[test]
    fn pairwise_sum_matches_sequential() {
        let xs: Vec<f64> = (1..=1000).map(|i| 1.0 / i as f64).collect();
        let seq: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - seq).abs() < 1e-12);
    }
}
