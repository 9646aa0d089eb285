use serde::{Deserialize, Serialize};

use super::{row0_deviation, GateMatrix};
use crate::config::tolerances;
use crate::linalg::{self, pow2, pow4, CMatrix, C64};
use crate::pauli;

/// Structural properties of a gate matrix at the configured tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub real: bool,
    pub trace_preserving: bool,
    /// The sufficient bound `sum_mu E_{0 mu}^2 <= 1`.
    pub trace_decreasing: bool,
    pub unital: bool,
    pub orthogonal: bool,
    pub completely_positive: bool,
    pub row0_deviation: f64,
    pub min_choi_eigenvalue: f64,
    #[serde(rename = "T_norm")]
    pub t_norm: f64,
    pub trace_decreasing_bound: f64,
    pub orthogonality_deviation: Option<f64>,
}

/// Choi matrix `J = sum_ij |i><j| x Phi(|i><j|)`, of size `2^(n_in + n_out)`.
///
/// The map is reconstructed from the gate as
/// `Phi(X) = 2^-n_in sum_{mu nu} E_{mu nu} Tr(sigma_nu X) sigma_mu`.
/// `J` is positive semidefinite exactly when the map is completely positive.
pub fn choi_matrix(g: &GateMatrix) -> CMatrix {
    let (n_in, n_out) = (g.n_in(), g.n_out());
    let (d_in, d_out) = (pow2(n_in), pow2(n_out));
    let e = g.entries();
    let basis_in = pauli::pauli_basis(n_in);
    // from_pauli_coefficients divides by 2^n_out; the map carries 2^-n_in.
    let rescale = d_out as f64 / d_in as f64;
    let mut j_mat = CMatrix::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let c_nu: Vec<C64> = basis_in.iter().map(|s| s[(j, i)]).collect();
            let a: Vec<C64> = (0..pow4(n_out))
                .map(|mu| {
                    c_nu.iter()
                        .enumerate()
                        .filter(|(_, z)| z.norm_sqr() > 0.0)
                        .map(|(nu, z)| z * e[(mu, nu)] * rescale)
                        .sum()
                })
                .collect();
            let phi = pauli::from_pauli_coefficients(n_out, &a);
            for r in 0..d_out {
                for s in 0..d_out {
                    j_mat[(i * d_out + r, j * d_out + s)] = phi[(r, s)];
                }
            }
        }
    }
    j_mat
}

pub fn analyze_gate(g: &GateMatrix) -> GateReport {
    let tol = tolerances();
    let e = g.entries();
    let row0 = row0_deviation(e);
    let t_norm = (1..e.nrows())
        .map(|mu| e[(mu, 0)].powi(2))
        .sum::<f64>()
        .sqrt();
    let unital = (e[(0, 0)] - 1.0).abs() <= tol.algebraic
        && (1..e.nrows()).all(|mu| e[(mu, 0)].abs() <= tol.algebraic);
    let orth = g.is_square().then(|| linalg::orthogonality_deviation(e));
    let bound: f64 = (0..e.ncols()).map(|nu| e[(0, nu)].powi(2)).sum();
    let min_choi = linalg::min_hermitian_eigenvalue(&choi_matrix(g));
    GateReport {
        real: e.iter().all(|x| x.is_finite()),
        trace_preserving: row0 <= tol.algebraic,
        trace_decreasing: bound <= 1.0 + tol.algebraic,
        unital,
        orthogonal: orth.is_some_and(|d| d <= tol.algebraic),
        completely_positive: min_choi >= -tol.psd,
        row0_deviation: row0,
        min_choi_eigenvalue: min_choi,
        t_norm,
        trace_decreasing_bound: bound,
        orthogonality_deviation: orth,
    }
}
