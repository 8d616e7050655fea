//! Dense Hermitian helpers on top of nalgebra.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Largest `|A_ij - conj(A_ji)|`. Zero for matrices Hermitian as stored.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Errors unless `m` is square and exactly Hermitian.
pub fn require_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > 0.0 {
        return Err(Error::NotHermitian {
            max_asymmetry: defect,
        });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// ascending; column `k` of the returned matrix belongs to eigenvalue `k`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

/// Relative PSD threshold `tol · max(1, trace/N)`.
pub fn psd_threshold(m: &CMatrix, tol: f64) -> f64 {
    let n = m.nrows().max(1) as f64;
    tol * (trace_re(m) / n).max(1.0)
}

/// `x* A y`.
pub fn quadratic_form(a: &CMatrix, x: &[C64], y: &[C64]) -> C64 {
    let xv = CVector::from_column_slice(x);
    let yv = CVector::from_column_slice(y);
    xv.dotc(&(a * yv))
}

/// `Σ conj(xᵢ) yᵢ`.
pub fn dotc(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian matrix built from the upper triangle of `f`, mirrored with
/// conjugates; diagonal entries keep only their real part.
pub fn hermitian_from_fn<F>(n: usize, mut f: F) -> Result<CMatrix>
where
    F: FnMut(usize, usize) -> Result<C64>,
{
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = f(i, j)?;
            if i == j {
                m[(i, i)] = C64::new(v.re, 0.0);
            } else {
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
    }
    Ok(m)
}
