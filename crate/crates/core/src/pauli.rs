//! The Pauli tensor basis `sigma_mu = sigma_{mu_1} x ... x sigma_{mu_n}`.
//!
//! Indices are big-endian base-4 numbers: `mu = mu_1 4^{n-1} + ... + mu_n`,
//! and qubit 1 is the most significant bit of a computational index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pow2, pow4, CMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliIndex {
    digits: Vec<u8>,
}

impl PauliIndex {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > 3) {
            return Err(Error::InvalidIndex(format!("digit {d} is not in 0..=3")));
        }
        Ok(PauliIndex { digits })
    }

    pub fn from_scalar(n: usize, mu: usize) -> Result<Self> {
        if mu >= pow4(n) {
            return Err(Error::InvalidIndex(format!(
                "{mu} out of range for {n} ququat(s)"
            )));
        }
        let digits = (0..n)
            .map(|i| ((mu >> (2 * (n - 1 - i))) & 3) as u8)
            .collect();
        Ok(PauliIndex { digits })
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn scalar(&self) -> usize {
        self.digits.iter().fold(0, |acc, &d| 4 * acc + d as usize)
    }
}

/// Sparse description of `sigma_mu`: row `j` holds `phase(j)` at column `j ^ xmask`.
#[derive(Debug, Clone, Copy)]
struct PauliSparse {
    n: usize,
    xmask: usize,
    digits_mu: usize,
}

impl PauliSparse {
    fn new(n: usize, mu: usize) -> Self {
        let mut xmask = 0;
        for q in 0..n {
            let d = (mu >> (2 * (n - 1 - q))) & 3;
            if d == 1 || d == 2 {
                xmask |= 1 << (n - 1 - q);
            }
        }
        PauliSparse {
            n,
            xmask,
            digits_mu: mu,
        }
    }

    fn phase(&self, row: usize) -> C64 {
        let mut z = ONE;
        for q in 0..self.n {
            let d = (self.digits_mu >> (2 * (self.n - 1 - q))) & 3;
            let bit = (row >> (self.n - 1 - q)) & 1;
            match (d, bit) {
                (2, 0) => z *= -I,
                (2, _) => z *= I,
                (3, 1) => z = -z,
                _ => {}
            }
        }
        z
    }
}

/// Single-qubit Pauli matrix `sigma_k`, `k` in 0..=3.
pub fn sigma(k: u8) -> CMatrix {
    pauli_matrix(1, k as usize)
}

/// `sigma_mu` for a validated index.
pub fn pauli_tensor(idx: &PauliIndex) -> CMatrix {
    pauli_matrix(idx.n(), idx.scalar())
}

/// `sigma_mu` from the scalar index. Panics if `mu >= 4^n`.
pub fn pauli_matrix(n: usize, mu: usize) -> CMatrix {
    assert!(mu < pow4(n), "Pauli index {mu} out of range for n = {n}");
    let d = pow2(n);
    let s = PauliSparse::new(n, mu);
    let mut m = CMatrix::from_element(d, d, ZERO);
    for j in 0..d {
        m[(j, j ^ s.xmask)] = s.phase(j);
    }
    m
}

/// All `4^n` basis matrices in index order.
pub fn pauli_basis(n: usize) -> Vec<CMatrix> {
    (0..pow4(n)).map(|mu| pauli_matrix(n, mu)).collect()
}

/// Hilbert-Schmidt inner product `(A|B) = Tr(A^dag B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// `Tr(sigma_mu X)` for a square `2^n x 2^n` matrix `X`, using the sparsity of `sigma_mu`.
pub fn pauli_trace(n: usize, mu: usize, x: &CMatrix) -> C64 {
    let s = PauliSparse::new(n, mu);
    (0..pow2(n)).map(|j| s.phase(j) * x[(j ^ s.xmask, j)]).sum()
}

/// Unnormalized coefficients `c_mu = Tr(sigma_mu X)`, so that `X = 2^-n sum_mu c_mu sigma_mu`.
pub fn pauli_coefficients(x: &CMatrix) -> Result<Vec<C64>> {
    let d = x.nrows();
    let n = crate::linalg::log2_exact(d)
        .filter(|_| x.is_square())
        .ok_or_else(|| Error::DimensionMismatch(format!("{:?} is not 2^n x 2^n", x.shape())))?;
    Ok((0..pow4(n)).map(|mu| pauli_trace(n, mu, x)).collect())
}

/// Inverse of [`pauli_coefficients`].
pub fn from_pauli_coefficients(n: usize, coeffs: &[C64]) -> CMatrix {
    assert_eq!(coeffs.len(), pow4(n));
    let d = pow2(n);
    let mut m = CMatrix::from_element(d, d, ZERO);
    let scale = 1.0 / d as f64;
    for (mu, &cmu) in coeffs.iter().enumerate() {
        if cmu == ZERO {
            continue;
        }
        let s = PauliSparse::new(n, mu);
        for j in 0..d {
            m[(j, j ^ s.xmask)] += cmu * s.phase(j) * scale;
        }
    }
    m
}

/// Digit-wise relabeling `mu_i = 2 k_i + l_i` of an operator-basis label `|k,l)`.
///
/// `k` and `l` are computational indices of `n` qubits. This is a relabeling of
/// index sets, not a change of basis: `|k,l)` is orthonormal while `|sigma_mu)`
/// is merely orthogonal.
pub fn kl_to_mu(n: usize, k: usize, l: usize) -> usize {
    (0..n).fold(0, |acc, i| {
        let shift = n - 1 - i;
        let ki = (k >> shift) & 1;
        let li = (l >> shift) & 1;
        4 * acc + 2 * ki + li
    })
}

/// Inverse of [`kl_to_mu`].
pub fn mu_to_kl(n: usize, mu: usize) -> (usize, usize) {
    let (mut k, mut l) = (0, 0);
    for i in 0..n {
        let d = (mu >> (2 * (n - 1 - i))) & 3;
        k = 2 * k + (d >> 1);
        l = 2 * l + (d & 1);
    }
    (k, l)
}
