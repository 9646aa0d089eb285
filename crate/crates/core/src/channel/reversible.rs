use serde::{Deserialize, Serialize};

use super::{adjoint_gate, GateMatrix, KrausSet};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

/// Outcome of the Kraus-level reversibility test on a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReversibilityCertificate {
    pub reversible: bool,
    /// `M_{jk}` with `P A_k^dag A_j P = M_{jk} P`.
    #[serde(with = "crate::io::cmatrix_serde")]
    pub m: CMatrix,
    /// `Tr M`, the constant value of `Tr Phi(rho)` on the subspace.
    pub mu_sq: f64,
    pub residual: f64,
}

/// Tests whether `P A_k^dag A_j P = M_{jk} P` for a positive matrix `M`.
///
/// `M_{jk}` is taken as `Tr(P A_k^dag A_j P) / Tr P` and the identity is then
/// checked entrywise (Frobenius norm per pair). A channel that annihilates the
/// subspace (`Tr M = 0`) is not counted as reversible.
pub fn check_reversible(k: &KrausSet, p_m: &CMatrix) -> Result<ReversibilityCertificate> {
    let tol = tolerances();
    if p_m.shape() != (k.ops()[0].ncols(), k.ops()[0].ncols()) {
        return Err(Error::DimensionMismatch(format!(
            "projector {:?} does not match Kraus input dimension {}",
            p_m.shape(),
            k.ops()[0].ncols()
        )));
    }
    if linalg::max_abs(p_m) <= tol.algebraic {
        return Err(Error::ZeroProjector);
    }
    super::validate_projector(p_m)?;
    let tr_p = linalg::trace(p_m).re;
    let ops = k.ops();
    let m_count = ops.len();
    let mut m = CMatrix::zeros(m_count, m_count);
    let mut residual: f64 = 0.0;
    for j in 0..m_count {
        for kk in 0..m_count {
            let block = p_m * ops[kk].adjoint() * &ops[j] * p_m;
            let mjk = linalg::trace(&block) / C64::new(tr_p, 0.0);
            m[(j, kk)] = mjk;
            residual = residual.max((block - p_m * mjk).norm());
        }
    }
    let mu_sq = linalg::trace(&m).re;
    let herm = linalg::hermiticity_deviation(&m);
    let psd = linalg::min_hermitian_eigenvalue(&m) >= -tol.psd;
    let reversible =
        residual <= tol.algebraic && herm <= tol.algebraic && psd && mu_sq > tol.algebraic;
    Ok(ReversibilityCertificate {
        reversible,
        m,
        mu_sq,
        residual,
    })
}

/// Superoperator form: `E_M E^dag E E_M = gamma E_M`.
///
/// `g_m` is the gate of `rho -> P rho P`. Returns the best-fit `gamma` (ratio of
/// Frobenius inner products) and whether the identity holds at tolerance.
pub fn check_reversible_superop(g: &GateMatrix, g_m: &GateMatrix) -> Result<(bool, f64)> {
    let tol = tolerances().algebraic;
    if !g_m.is_square() || g_m.n_in() != g.n_in() {
        return Err(Error::DimensionMismatch(
            "projection superoperator must be square on the gate's input".into(),
        ));
    }
    let pm = g_m.entries();
    let idem = linalg::max_abs_real(&(pm * pm - pm));
    if idem > tol {
        return Err(Error::NotIdempotent { deviation: idem });
    }
    let gtg = if g.is_square() {
        adjoint_gate(g)?.entries() * g.entries()
    } else {
        g.entries().transpose() * g.entries()
    };
    let x = pm * gtg * pm;
    let denom = pm.dot(pm);
    if denom == 0.0 {
        return Err(Error::ZeroProjector);
    }
    let gamma = x.dot(pm) / denom;
    let residual = linalg::max_abs_real(&(x - pm * gamma));
    Ok((residual <= tol && gamma > tol, gamma))
}
