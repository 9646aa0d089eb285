use super::{GateKind, GateMatrix, KrausSet};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, log2_exact, pow2, pow4, CMatrix, RMatrix};
use crate::pauli;

/// Gate of a unitary `U`: `E_{mu nu} = 2^-n Tr(sigma_mu U sigma_nu U^dag)`.
pub fn gate_from_unitary(u: &CMatrix) -> Result<GateMatrix> {
    if !u.is_square() || log2_exact(u.nrows()).is_none() {
        return Err(Error::DimensionMismatch(format!(
            "unitary must be 2^n x 2^n, got {:?}",
            u.shape()
        )));
    }
    let deviation = linalg::unitarity_deviation(u);
    if deviation > tolerances().algebraic {
        return Err(Error::NotUnitary { deviation });
    }
    let kraus = KrausSet::new(vec![u.clone()])?;
    let entries = kraus_entries(&kraus)?;
    let n = kraus.n_in();
    Ok(GateMatrix::from_parts(
        n,
        n,
        GateKind::TracePreserving,
        entries,
        true,
    ))
}

/// Gate of a completely positive map given by Kraus operators.
pub fn gate_from_kraus(k: &KrausSet) -> Result<GateMatrix> {
    let tol = tolerances();
    let comp = k.completeness();
    let max_ev = linalg::max_hermitian_eigenvalue(&comp);
    if max_ev > 1.0 + tol.algebraic {
        return Err(Error::TraceIncreasing {
            max_eigenvalue: max_ev,
        });
    }
    let d_in = comp.nrows();
    let tp = linalg::max_abs(&(comp - CMatrix::identity(d_in, d_in))) <= tol.algebraic;
    let entries = kraus_entries(k)?;
    let kind = if tp {
        GateKind::TracePreserving
    } else {
        GateKind::TraceDecreasing
    };
    Ok(GateMatrix::from_parts(
        k.n_in(),
        k.n_out(),
        kind,
        entries,
        true,
    ))
}

fn kraus_entries(k: &KrausSet) -> Result<RMatrix> {
    let (n_in, n_out) = (k.n_in(), k.n_out());
    let scale = 1.0 / pow2(n_in) as f64;
    let mut e = RMatrix::zeros(pow4(n_out), pow4(n_in));
    let mut residue: f64 = 0.0;
    for nu in 0..pow4(n_in) {
        let image = k.apply(&pauli::pauli_matrix(n_in, nu));
        for mu in 0..pow4(n_out) {
            let z = pauli::pauli_trace(n_out, mu, &image) * scale;
            residue = residue.max(z.im.abs());
            e[(mu, nu)] = z.re;
        }
    }
    if residue > tolerances().algebraic {
        return Err(Error::Contract(format!(
            "gate matrix has imaginary residue {residue:.3e}"
        )));
    }
    Ok(e)
}

/// Checks `P^2 = P = P^dag` and `P != 0`.
pub fn validate_projector(p: &CMatrix) -> Result<()> {
    let tol = tolerances().algebraic;
    if !p.is_square() || log2_exact(p.nrows()).is_none() {
        return Err(Error::DimensionMismatch(format!(
            "projector must be 2^n x 2^n, got {:?}",
            p.shape()
        )));
    }
    let herm = linalg::hermiticity_deviation(p);
    if herm > tol {
        return Err(Error::InvalidProjector(format!(
            "not Hermitian (deviation {herm:.3e})"
        )));
    }
    let idem = linalg::max_abs(&(p * p - p));
    if idem > tol {
        return Err(Error::InvalidProjector(format!(
            "not idempotent (deviation {idem:.3e})"
        )));
    }
    if linalg::max_abs(p) <= tol {
        return Err(Error::ZeroProjector);
    }
    Ok(())
}

/// One trace-decreasing gate `E^(k)_{mu nu} = 2^-n Tr(sigma_mu P_k sigma_nu P_k)` per projector.
pub fn measurement_gates(projectors: &[CMatrix]) -> Result<Vec<GateMatrix>> {
    if projectors.is_empty() {
        return Err(Error::InvalidValue("no projectors given".into()));
    }
    let tol = tolerances().algebraic;
    for p in projectors {
        validate_projector(p)?;
        if p.shape() != projectors[0].shape() {
            return Err(Error::DimensionMismatch("projectors differ in size".into()));
        }
    }
    for (i, a) in projectors.iter().enumerate() {
        for (j, b) in projectors.iter().enumerate().skip(i + 1) {
            let overlap = linalg::max_abs(&(a * b));
            if overlap > tol {
                return Err(Error::InvalidProjector(format!(
                    "projectors {i} and {j} are not orthogonal (overlap {overlap:.3e})"
                )));
            }
        }
    }
    projectors
        .iter()
        .map(|p| gate_from_kraus(&KrausSet::new(vec![p.clone()])?))
        .collect()
}
