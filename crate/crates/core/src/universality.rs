//! Pseudo-gates, Weyl generators and Lie closure.
//!
//! The left and right multiplication superoperators `L_A X = A X` and
//! `R_A X = X A` are written in two bases: the Pauli basis (pseudo-gates,
//! acting on Pauli coefficient vectors) and the `|k,l)` basis used for
//! Liouvillians (`vec` is row-major, so `L_A = A (x) I`, `R_A = I (x) A^T`).

use serde::{Deserialize, Serialize};

use crate::channel::{GateKind, GateMatrix, KrausSet};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, log2_exact, log4_exact, pow2, pow4, CMatrix, RMatrix, C64};
use crate::pauli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoGateKind {
    Left,
    Right,
    /// A product of left and right factors (e.g. the swap).
    Product,
}

/// Complex `4^n x 4^n` matrix of a multiplication superoperator in the Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoGate {
    n: usize,
    kind: PseudoGateKind,
    matrix: CMatrix,
}

impl PseudoGate {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> PseudoGateKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `self . other` as superoperators.
    pub fn then_after(&self, other: &PseudoGate) -> Result<PseudoGate> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "pseudo-gates on {} and {} ququat(s)",
                self.n, other.n
            )));
        }
        Ok(PseudoGate {
            n: self.n,
            kind: PseudoGateKind::Product,
            matrix: &self.matrix * &other.matrix,
        })
    }
}

fn qubits_of(a: &CMatrix) -> Result<usize> {
    match log2_exact(a.nrows()) {
        Some(n) if n >= 1 && a.is_square() => Ok(n),
        _ => Err(Error::DimensionMismatch(format!(
            "operator must be 2^n x 2^n, got {:?}",
            a.shape()
        ))),
    }
}

fn pseudo(a: &CMatrix, kind: PseudoGateKind) -> Result<PseudoGate> {
    let n = qubits_of(a)?;
    let basis = pauli::pauli_basis(n);
    let scale = 1.0 / pow2(n) as f64;
    let dim = pow4(n);
    let mut m = CMatrix::zeros(dim, dim);
    for nu in 0..dim {
        let image = match kind {
            PseudoGateKind::Left => a * &basis[nu],
            _ => &basis[nu] * a,
        };
        for mu in 0..dim {
            m[(mu, nu)] = pauli::pauli_trace(n, mu, &image) * scale;
        }
    }
    Ok(PseudoGate { n, kind, matrix: m })
}

/// `L_A` in the Pauli basis: entries `2^-n Tr(sigma_mu A sigma_alpha)`.
pub fn left_mult_superop(a: &CMatrix) -> Result<PseudoGate> {
    pseudo(a, PseudoGateKind::Left)
}

/// `R_A` in the Pauli basis: entries `2^-n Tr(sigma_mu sigma_nu A)`.
pub fn right_mult_superop(a: &CMatrix) -> Result<PseudoGate> {
    pseudo(a, PseudoGateKind::Right)
}

/// `L_A = A (x) I` in the `|k,l)` basis.
pub fn left_mult_liouville(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    a.kronecker(&CMatrix::identity(d, d))
}

/// `R_A = I (x) A^T` in the `|k,l)` basis.
pub fn right_mult_liouville(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    CMatrix::identity(d, d).kronecker(&a.transpose())
}

/// Gate of a Kraus set assembled as `sum_j L_{A_j} R_{A_j^dag}`.
///
/// This is a second route to the gate matrix, independent of the trace
/// formula used by [`crate::channel::gate_from_kraus`].
pub fn gate_from_pseudo_gates(k: &KrausSet) -> Result<GateMatrix> {
    if k.n_in() != k.n_out() {
        return Err(Error::NotSquare {
            n_in: k.n_in(),
            n_out: k.n_out(),
        });
    }
    let n = k.n_in();
    let dim = pow4(n);
    let mut sum = CMatrix::zeros(dim, dim);
    for a in k.ops() {
        sum += left_mult_superop(a)?.matrix * right_mult_superop(&a.adjoint())?.matrix;
    }
    let imag = sum.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > tolerances().algebraic {
        return Err(Error::Contract(format!(
            "pseudo-gate sum has imaginary part {imag:.3e}"
        )));
    }
    let real: RMatrix = sum.map(|z| z.re);
    GateMatrix::new(n, n, real)
}

/// Weyl basis of the superoperator algebra on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylGenerators {
    pub dim: usize,
    /// Matrix units `E_{mu nu}`, row-major in `(mu, nu)`.
    pub units: Vec<CMatrix>,
    /// `E_aa`, then `E_ab + E_ba` and `-i E_ab + i E_ba` for `a < b`.
    pub hermitian: Vec<CMatrix>,
}

pub fn matrix_unit(dim: usize, mu: usize, nu: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(mu, nu)] = linalg::ONE;
    m
}

pub fn weyl_generators(dim: usize) -> Result<WeylGenerators> {
    if dim == 0 || log4_exact(dim).is_none() {
        return Err(Error::InvalidValue(format!(
            "dimension {dim} is not a power of 4"
        )));
    }
    let units = (0..dim * dim)
        .map(|i| matrix_unit(dim, i / dim, i % dim))
        .collect();
    let mut hermitian: Vec<CMatrix> = (0..dim).map(|a| matrix_unit(dim, a, a)).collect();
    for a in 0..dim {
        for b in a + 1..dim {
            hermitian.push(matrix_unit(dim, a, b) + matrix_unit(dim, b, a));
        }
    }
    for a in 0..dim {
        for b in a + 1..dim {
            hermitian.push((matrix_unit(dim, b, a) - matrix_unit(dim, a, b)) * linalg::I);
        }
    }
    Ok(WeylGenerators {
        dim,
        units,
        hermitian,
    })
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Result of a Lie closure computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieClosure {
    /// Real dimension; twice the complex dimension of the span.
    pub dim: usize,
    /// False when the bracket budget ran out first; `dim` is then a lower bound.
    pub complete: bool,
    pub brackets: usize,
}

const RANK_THRESHOLD: f64 = 1e-9;

/// Orthonormal basis of a growing complex span of matrices.
struct Span {
    basis: Vec<Vec<C64>>,
}

impl Span {
    /// Adds `m` if it is independent; returns the normalized new direction.
    fn insert(&mut self, m: &CMatrix) -> Option<CMatrix> {
        let norm0 = m.norm();
        if norm0 <= RANK_THRESHOLD {
            return None;
        }
        let mut v: Vec<C64> = m.iter().map(|z| z / norm0).collect();
        for _ in 0..2 {
            for b in &self.basis {
                let p: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= p * bi;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= RANK_THRESHOLD {
            return None;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        let out = CMatrix::from_iterator(m.nrows(), m.ncols(), v.iter().copied());
        self.basis.push(v);
        Some(out)
    }
}

/// Real dimension of the smallest matrix Lie algebra containing `gens`.
///
/// The algebra is taken over the complex span (each `X` brings `iX`), so
/// `gl(N, C)` has dimension `2 N^2`. New elements are left-normed brackets
/// `[g, x]` with a generator `g` and an element `x` already in the basis;
/// `max_iter` bounds the number of brackets evaluated.
pub fn lie_closure_dim(gens: &[CMatrix], max_iter: usize) -> Result<LieClosure> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidValue("empty generator set".into()));
    };
    let d = first.nrows();
    if gens.iter().any(|g| g.shape() != (d, d)) {
        return Err(Error::DimensionMismatch(
            "generators must share one square shape".into(),
        ));
    }
    let full = d * d;
    let mut span = Span { basis: Vec::new() };
    let mut elements: Vec<CMatrix> = Vec::new();
    for g in gens {
        if let Some(e) = span.insert(g) {
            elements.push(e);
        }
    }
    let mut brackets = 0;
    let mut i = 0;
    while i < elements.len() && elements.len() < full {
        for g in gens {
            if elements.len() == full {
                break;
            }
            if brackets == max_iter {
                return Ok(LieClosure {
                    dim: 2 * elements.len(),
                    complete: false,
                    brackets,
                });
            }
            brackets += 1;
            let c = commutator(g, &elements[i]);
            if let Some(e) = span.insert(&c) {
                elements.push(e);
            }
        }
        i += 1;
    }
    Ok(LieClosure {
        dim: 2 * elements.len(),
        complete: true,
        brackets,
    })
}

/// Two-ququat swap `|mu nu) -> |nu mu)`.
pub fn swap_pseudo_gate() -> PseudoGate {
    let mut m = CMatrix::zeros(16, 16);
    for mu in 0..4 {
        for nu in 0..4 {
            m[(4 * nu + mu, 4 * mu + nu)] = linalg::ONE;
        }
    }
    PseudoGate {
        n: 2,
        kind: PseudoGateKind::Product,
        matrix: m,
    }
}

/// The swap as a real gate.
pub fn swap_gate() -> GateMatrix {
    let m = swap_pseudo_gate().matrix.map(|z| z.re);
    GateMatrix::from_parts(2, 2, GateKind::TracePreserving, m, true)
}

/// `sum_mu E_{0 mu}^2` and whether it is at most one.
///
/// The bound is sufficient for the gate to be trace decreasing, not necessary.
pub fn trace_decreasing_bound(g: &GateMatrix) -> (bool, f64) {
    let e = g.entries();
    let v: f64 = (0..e.ncols()).map(|nu| e[(0, nu)].powi(2)).sum();
    (v <= 1.0 + tolerances().algebraic, v)
}

/// `(e^{-itH1} e^{itH2} e^{itH1} e^{-itH2})^n` with `t = 1/sqrt(n)`.
///
/// Converges to `exp([H1, H2])` as `n` grows.
pub fn group_commutator_product(h1: &CMatrix, h2: &CMatrix, n: u32) -> Result<CMatrix> {
    if h1.shape() != h2.shape() || !h1.is_square() {
        return Err(Error::DimensionMismatch(
            "generators must share one square shape".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidValue("n must be positive".into()));
    }
    let t = 1.0 / (n as f64).sqrt();
    let e = |h: &CMatrix, s: f64| linalg::expm(&(h * C64::new(0.0, s)));
    let step = e(h1, -t) * e(h2, t) * e(h1, t) * e(h2, -t);
    Ok(step.pow(n))
}
