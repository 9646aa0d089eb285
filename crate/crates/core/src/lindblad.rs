//! Markovian generators and their propagators.
//!
//! Single qubit: the GKS form with Hamiltonian coefficients `H_k` and a
//! Hermitian coefficient matrix `C_kl` gives a real generator
//! `dP/dt = L P` with `L = [[0, 0], [B, A]]`. General `n`: a Lindblad
//! superoperator assembled in the `|k,l)` basis and moved to the Pauli basis.

use serde::{Deserialize, Serialize};

use crate::channel::{GateKind, GateMatrix};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, log2_exact, pow2, pow4, CMatrix, RMatrix, RVector, C64};
use crate::pauli;
use crate::state::PauliVector;
use crate::universality::{left_mult_liouville, right_mult_liouville};

/// Levi-Civita symbol on `{0, 1, 2}`.
fn epsilon(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Single-qubit GKS model: `H = sum_k H_k sigma_k` and coefficient matrix `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct GksModel {
    pub h: [f64; 3],
    pub c: CMatrix,
}

impl GksModel {
    pub fn new(h: [f64; 3], c: CMatrix) -> Self {
        GksModel { h, c }
    }

    /// Smallest eigenvalue of the Hermitian part of `C`.
    pub fn min_c_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.c)
    }
}

/// Real 4x4 generator with row 0 identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    l: RMatrix,
    /// `C` is positive semidefinite, so the flow is completely positive.
    pub c_positive: bool,
    pub min_c_eigenvalue: f64,
}

impl GeneratorMatrix {
    /// Wraps a raw generator; row 0 must vanish.
    pub fn from_matrix(l: RMatrix) -> Result<Self> {
        if l.shape() != (4, 4) {
            return Err(Error::DimensionMismatch(format!(
                "generator must be 4x4, got {:?}",
                l.shape()
            )));
        }
        let row0 = (0..4).map(|j| l[(0, j)].abs()).fold(0.0, f64::max);
        if row0 > tolerances().algebraic {
            return Err(Error::NotTracePreserving { deviation: row0 });
        }
        Ok(GeneratorMatrix {
            l,
            c_positive: false,
            min_c_eigenvalue: f64::NAN,
        })
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.l
    }

    pub fn a(&self) -> RMatrix {
        self.l.view((1, 1), (3, 3)).into_owned()
    }

    pub fn b(&self) -> RVector {
        self.l.view((1, 0), (3, 1)).column(0).into_owned()
    }
}

/// `A_kl = 2 H_m eps_kml + (C_kl + C_lk)/8 - (Tr C) delta_kl / 4`,
/// `B_k = -1/4 eps_ijk Im C_ij`.
///
/// A non-Hermitian `C` is an error; an indefinite one only clears `c_positive`.
pub fn gks_matrix(model: &GksModel) -> Result<GeneratorMatrix> {
    let tol = tolerances();
    let c = &model.c;
    if c.shape() != (3, 3) {
        return Err(Error::DimensionMismatch(format!(
            "C must be 3x3, got {:?}",
            c.shape()
        )));
    }
    let residue = linalg::hermiticity_deviation(c);
    if residue > tol.algebraic {
        return Err(Error::NotHermitian { residue });
    }
    let tr_c = linalg::trace(c).re;
    let mut l = RMatrix::zeros(4, 4);
    for k in 0..3 {
        for ll in 0..3 {
            let ham: f64 = (0..3).map(|m| 2.0 * model.h[m] * epsilon(k, m, ll)).sum();
            let mut a = ham + (c[(k, ll)].re + c[(ll, k)].re) / 8.0;
            if k == ll {
                a -= tr_c / 4.0;
            }
            l[(k + 1, ll + 1)] = a;
        }
        let mut b = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let e = epsilon(i, j, k);
                if e != 0.0 {
                    b += e * c[(i, j)].im;
                }
            }
        }
        l[(k + 1, 0)] = -0.25 * b;
    }
    let min_ev = model.min_c_eigenvalue();
    Ok(GeneratorMatrix {
        l,
        c_positive: min_ev >= -tol.psd,
        min_c_eigenvalue: min_ev,
    })
}

/// `E(T, R)` with `R = exp(tau A)` and `T = (int_0^tau exp(s A) ds) B`.
///
/// `T` comes from the exponential of the augmented matrix `[[A, B], [0, 0]]`,
/// so a singular `A` needs no special case. When `B` is exactly zero, `T` is
/// exactly zero.
pub fn gks_propagator(gen: &GeneratorMatrix, tau: f64) -> Result<GateMatrix> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidValue(format!(
            "tau must be finite and >= 0, got {tau}"
        )));
    }
    let a = gen.a();
    let b = gen.b();
    let mut aug = RMatrix::zeros(4, 4);
    aug.view_mut((0, 0), (3, 3)).copy_from(&(a * tau));
    aug.view_mut((0, 3), (3, 1)).copy_from(&(&b * tau));
    let ex = linalg::expm_real(&aug);
    let mut e = RMatrix::zeros(4, 4);
    e[(0, 0)] = 1.0;
    e.view_mut((1, 1), (3, 3))
        .copy_from(&ex.view((0, 0), (3, 3)));
    if b.iter().any(|&x| x != 0.0) {
        e.view_mut((1, 0), (3, 1))
            .copy_from(&ex.view((0, 3), (3, 1)));
    }
    Ok(GateMatrix::from_parts(
        1,
        1,
        GateKind::TracePreserving,
        e,
        gen.c_positive,
    ))
}

/// Which anticommutator the dissipator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DissipatorOrdering {
    /// `V rho V^dag - {V^dag V, rho}/2`; trace preserving for every `V`.
    #[default]
    Standard,
    /// `V rho V^dag - {V V^dag, rho}/2`; trace preserving only for normal `V`.
    OuterAnticommutator,
}

/// Lindblad superoperator in the `|k,l)` basis (index `k 2^n + l`).
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianSuperop {
    n: usize,
    matrix: CMatrix,
    pub h: CMatrix,
    pub v: Vec<CMatrix>,
    pub ordering: DissipatorOrdering,
}

impl LiouvillianSuperop {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `-i(L_H - R_H) + sum_j (L_V R_{V^dag} - (L_{V^dag V} + R_{V^dag V})/2)`.
pub fn liouvillian_superop(h: &CMatrix, v: &[CMatrix]) -> Result<LiouvillianSuperop> {
    liouvillian_superop_with(h, v, DissipatorOrdering::Standard)
}

pub fn liouvillian_superop_with(
    h: &CMatrix,
    v: &[CMatrix],
    ordering: DissipatorOrdering,
) -> Result<LiouvillianSuperop> {
    let d = h.nrows();
    let n = match log2_exact(d) {
        Some(n) if n >= 1 && h.is_square() => n,
        _ => {
            return Err(Error::DimensionMismatch(format!(
                "H must be 2^n x 2^n, got {:?}",
                h.shape()
            )))
        }
    };
    let residue = linalg::hermiticity_deviation(h);
    if residue > tolerances().algebraic {
        return Err(Error::NotHermitian { residue });
    }
    for (j, vj) in v.iter().enumerate() {
        if vj.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "V[{j}] is {:?}, expected {d}x{d}",
                vj.shape()
            )));
        }
    }
    let minus_i = C64::new(0.0, -1.0);
    let mut m = (left_mult_liouville(h) - right_mult_liouville(h)) * minus_i;
    for vj in v {
        let vd = vj.adjoint();
        let anti = match ordering {
            DissipatorOrdering::Standard => &vd * vj,
            DissipatorOrdering::OuterAnticommutator => vj * &vd,
        };
        m += left_mult_liouville(vj) * right_mult_liouville(&vd);
        m -= (left_mult_liouville(&anti) + right_mult_liouville(&anti)) * C64::new(0.5, 0.0);
    }
    Ok(LiouvillianSuperop {
        n,
        matrix: m,
        h: h.clone(),
        v: v.to_vec(),
        ordering,
    })
}

/// `G_{mu nu} = 2^-n Tr(sigma_mu Lambda(sigma_nu))`, the generator of `dP/dt = G P`.
pub fn pauli_generator(l: &LiouvillianSuperop) -> RMatrix {
    let n = l.n;
    let d = pow2(n);
    let basis = pauli::pauli_basis(n);
    let mut s = CMatrix::zeros(d * d, pow4(n));
    for (nu, sig) in basis.iter().enumerate() {
        for k in 0..d {
            for ll in 0..d {
                s[(k * d + ll, nu)] = sig[(k, ll)];
            }
        }
    }
    let g = s.adjoint() * &l.matrix * &s;
    g.map(|z| z.re / d as f64)
}

/// Propagator gate `exp(t G)`.
pub fn propagator(l: &LiouvillianSuperop, t: f64) -> Result<GateMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidValue(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    let g = pauli_generator(l) * t;
    let mut e = linalg::expm_real(&g);
    // Row 0 of G is zero up to rounding; pin it so the result is exactly trace preserving.
    if l.ordering == DissipatorOrdering::Standard {
        e.row_mut(0).fill(0.0);
        e[(0, 0)] = 1.0;
    }
    GateMatrix::new(l.n, l.n, e)
}

pub fn propagate(l: &LiouvillianSuperop, t: f64, p: &PauliVector) -> Result<PauliVector> {
    if p.n() != l.n {
        return Err(Error::DimensionMismatch(format!(
            "generator acts on {} qubit(s), state has {}",
            l.n,
            p.n()
        )));
    }
    let e = propagator(l, t)?;
    let out = e.entries() * RVector::from_column_slice(p.coefficients());
    PauliVector::new(l.n, out.iter().copied().collect())
}
