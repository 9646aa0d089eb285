//! Small dense linear-algebra helpers shared by the rest of the crate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex matrix from row-major `(re, im)` pairs.
pub fn cmatrix(rows: usize, cols: usize, data: &[(f64, f64)]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&(re, im)| C64::new(re, im)))
}

/// Builds a real matrix from row-major data.
pub fn rmatrix(rows: usize, cols: usize, data: &[f64]) -> RMatrix {
    RMatrix::from_row_slice(rows, cols, data)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// `max |U^dag U - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// `max |A - A^dag|`.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(a - a.adjoint()))
}

/// `max |O O^T - I|` for a square real matrix.
pub fn orthogonality_deviation(o: &RMatrix) -> f64 {
    if !o.is_square() {
        return f64::INFINITY;
    }
    let n = o.nrows();
    let id = RMatrix::identity(n, n);
    max_abs_real(&(o * o.transpose() - &id)).max(max_abs_real(&(o.transpose() * o - id)))
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_hermitian_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(0.0)
}

pub fn max_hermitian_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).last().copied().unwrap_or(0.0)
}

/// Matrix exponential (Pade scaling and squaring from nalgebra).
pub fn expm(a: &CMatrix) -> CMatrix {
    a.clone().exp()
}

pub fn expm_real(a: &RMatrix) -> RMatrix {
    a.clone().exp()
}

/// Extends the orthonormal columns of `q` (`d x k`, `k <= d`) to a full
/// `d x d` orthogonal matrix. Missing directions are taken from the standard
/// basis in index order, so the completion is deterministic.
pub fn complete_orthonormal(q: &RMatrix) -> RMatrix {
    let d = q.nrows();
    let mut cols: Vec<RVector> = q.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while cols.len() < d && e < d {
        let mut v = RVector::zeros(d);
        v[e] = 1.0;
        for _ in 0..2 {
            for u in &cols {
                let p = u.dot(&v);
                v.axpy(-p, u, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / norm);
        }
        e += 1;
    }
    RMatrix::from_columns(&cols)
}

/// Real power of four, `4^n`.
pub fn pow4(n: usize) -> usize {
    1usize << (2 * n)
}

/// Real power of two, `2^n`.
pub fn pow2(n: usize) -> usize {
    1usize << n
}

/// Returns `Some(n)` when `d == 2^n`.
pub fn log2_exact(d: usize) -> Option<usize> {
    (d.is_power_of_two()).then(|| d.trailing_zeros() as usize)
}

/// Returns `Some(n)` when `d == 4^n`.
pub fn log4_exact(d: usize) -> Option<usize> {
    log2_exact(d).filter(|k| k % 2 == 0).map(|k| k / 2)
}
