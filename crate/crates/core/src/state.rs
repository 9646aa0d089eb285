//! Density matrices, Pauli vectors and conversions between them.

use serde::{Deserialize, Serialize};

use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, log2_exact, pow2, pow4, CMatrix, C64};
use crate::pauli::{self, PauliIndex};

/// A `2^n x 2^n` complex matrix meant to be a quantum state.
///
/// Only the shape is enforced on construction; use [`validate_density`] for
/// the physical conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = log2_exact(entries.nrows())
            .filter(|&n| entries.is_square() && n >= 1)
            .ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "density matrix must be 2^n x 2^n, got {:?}",
                    entries.shape()
                ))
            })?;
        Ok(DensityMatrix { n, entries })
    }

    /// Pure state `|psi><psi|` from a (not necessarily normalized) ket.
    pub fn from_ket(psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm2 = v.norm_squared();
        if norm2 == 0.0 {
            return Err(Error::InvalidValue("zero ket".into()));
        }
        Self::new(&v * v.adjoint() / C64::new(norm2, 0.0))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = pow2(n);
        DensityMatrix {
            n,
            entries: CMatrix::identity(d, d) / C64::new(d as f64, 0.0),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }
}

/// Real coefficient vector `P_mu = Tr(sigma_mu rho)` of length `4^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliVector {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<f64>,
}

impl PauliVector {
    pub fn new(n: usize, p: Vec<f64>) -> Result<Self> {
        if n == 0 || p.len() != pow4(n) {
            return Err(Error::DimensionMismatch(format!(
                "Pauli vector for {n} ququat(s) needs {} entries, got {}",
                pow4(n),
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("non-finite Pauli coefficient".into()));
        }
        Ok(PauliVector { n, p })
    }

    /// Builds a vector and requires `P_0 = 1`.
    pub fn normalized(n: usize, p: Vec<f64>) -> Result<Self> {
        let v = Self::new(n, p)?;
        v.check_normalized()?;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, mu: usize) -> f64 {
        self.p[mu]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    /// `sum_mu P_mu^2 = 2^n Tr(rho^2)`.
    pub fn norm_squared(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    /// Round-bracket coefficients `rho_mu = P_mu / sqrt(2^n)`.
    pub fn round_bracket(&self) -> Vec<f64> {
        let s = (pow2(self.n) as f64).sqrt();
        self.p.iter().map(|x| x / s).collect()
    }

    pub fn from_round_bracket(n: usize, rho: &[f64]) -> Result<Self> {
        let s = (pow2(n) as f64).sqrt();
        Self::new(n, rho.iter().map(|x| x * s).collect())
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        if (self.p[0] - 1.0).abs() > tolerances().algebraic {
            return Err(Error::Normalization { p0: self.p[0] });
        }
        Ok(())
    }

    /// Tensor product of two states, respecting big-endian order.
    pub fn tensor(&self, other: &PauliVector) -> PauliVector {
        let mut p = Vec::with_capacity(self.p.len() * other.p.len());
        for a in &self.p {
            for b in &other.p {
                p.push(a * b);
            }
        }
        PauliVector {
            n: self.n + other.n,
            p,
        }
    }

    pub fn max_abs_diff(&self, other: &PauliVector) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Operator written in the orthonormal basis `|k,l) = |k><l|`, stored at index `k 2^n + l`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVector {
    n: usize,
    entries: Vec<C64>,
}

impl LiouvilleVector {
    pub fn from_operator(a: &CMatrix) -> Result<Self> {
        let n = log2_exact(a.nrows())
            .filter(|_| a.is_square())
            .ok_or_else(|| Error::DimensionMismatch(format!("{:?}", a.shape())))?;
        let d = a.nrows();
        let entries = (0..d * d).map(|i| a[(i / d, i % d)]).collect();
        Ok(LiouvilleVector { n, entries })
    }

    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != pow4(n) {
            return Err(Error::DimensionMismatch(format!(
                "Liouville vector needs {} entries, got {}",
                pow4(n),
                entries.len()
            )));
        }
        Ok(LiouvilleVector { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Component `(k,l|A) = A_kl`.
    pub fn component(&self, k: usize, l: usize) -> C64 {
        self.entries[k * pow2(self.n) + l]
    }

    pub fn to_operator(&self) -> CMatrix {
        let d = pow2(self.n);
        CMatrix::from_fn(d, d, |k, l| self.entries[k * d + l])
    }
}

/// Physical checks on a density matrix. Never fails; flags are computed at the
/// configured tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermitian: bool,
    pub unit_trace: bool,
    pub psd: bool,
    pub purity_in_bounds: bool,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
    pub hermiticity_residual: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.unit_trace && self.psd && self.purity_in_bounds
    }
}

pub fn validate_density(rho: &DensityMatrix) -> ValidationReport {
    let tol = tolerances();
    let m = rho.matrix();
    let d = m.nrows() as f64;
    let herm = linalg::hermiticity_deviation(m);
    let tr = linalg::trace(m);
    let min_ev = linalg::min_hermitian_eigenvalue(m);
    let purity = (m * m).trace().re;
    ValidationReport {
        hermitian: herm <= tol.algebraic,
        unit_trace: (tr.re - 1.0).abs() <= tol.algebraic && tr.im.abs() <= tol.algebraic,
        psd: min_ev >= -tol.psd,
        purity_in_bounds: purity >= 1.0 / d - tol.psd && purity <= 1.0 + tol.psd,
        trace: tr.re,
        min_eigenvalue: min_ev,
        purity,
        hermiticity_residual: herm,
    }
}

/// Validates the state a Pauli vector describes.
pub fn validate_pvec(p: &PauliVector) -> ValidationReport {
    let rho = DensityMatrix {
        n: p.n,
        entries: pvec_matrix(p),
    };
    validate_density(&rho)
}

pub fn density_to_pvec(rho: &DensityMatrix) -> Result<PauliVector> {
    let tol = tolerances();
    let coeffs = pauli::pauli_coefficients(rho.matrix())?;
    let residue = coeffs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > tol.algebraic {
        return Err(Error::NotHermitian { residue });
    }
    let mut p: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
    if (p[0] - 1.0).abs() > tol.algebraic {
        return Err(Error::Normalization { p0: p[0] });
    }
    p[0] = 1.0;
    PauliVector::new(rho.n, p)
}

fn pvec_matrix(p: &PauliVector) -> CMatrix {
    let coeffs: Vec<C64> = p.p.iter().map(|&x| C64::new(x, 0.0)).collect();
    pauli::from_pauli_coefficients(p.n, &coeffs)
}

/// `rho = 2^-n sum_mu P_mu sigma_mu`, together with a validation report.
/// A non-PSD result is reported, not rejected.
pub fn pvec_to_density(p: &PauliVector) -> Result<(DensityMatrix, ValidationReport)> {
    p.check_normalized()?;
    let rho = DensityMatrix {
        n: p.n,
        entries: pvec_matrix(p),
    };
    let report = validate_density(&rho);
    Ok((rho, report))
}

/// Generalized computational state `|mu]`: `P_0 = 1`, `P_mu = 1`, other entries zero.
pub fn computational_state(idx: &PauliIndex) -> PauliVector {
    let n = idx.n();
    let mut p = vec![0.0; pow4(n)];
    p[0] = 1.0;
    p[idx.scalar()] = 1.0;
    PauliVector { n, p }
}

/// `|mu]` from a scalar index.
pub fn computational_state_scalar(n: usize, mu: usize) -> Result<PauliVector> {
    Ok(computational_state(&PauliIndex::from_scalar(n, mu)?))
}

/// Pure computational-basis projector `|k><k|` of `n` qubits as a Pauli vector.
pub fn basis_projector_state(n: usize, k: usize) -> Result<PauliVector> {
    if k >= pow2(n) {
        return Err(Error::InvalidIndex(format!(
            "basis state {k} for {n} qubit(s)"
        )));
    }
    let d = pow2(n);
    let mut m = CMatrix::zeros(d, d);
    m[(k, k)] = C64::new(1.0, 0.0);
    density_to_pvec(&DensityMatrix::new(m)?)
}
