//! Quantum operations as real gate matrices.
//!
//! A gate of order `(n_in, n_out)` is the real `4^n_out x 4^n_in` matrix
//! `E_{mu nu} = 2^{-n_in} Tr(sigma_mu Phi(sigma_nu))`, so that states transform
//! by the left action `P' = E P`.
//!
//! For a unitary this is `2^{-n} Tr(sigma_mu U sigma_nu U^dag)`, the transpose
//! of the index order written in some presentations of the same formula.

mod analysis;
mod build;
mod ops;
mod reversible;

pub use analysis::{analyze_gate, choi_matrix, GateReport};
pub use build::{gate_from_kraus, gate_from_unitary, measurement_gates, validate_projector};
pub use ops::{adjoint_gate, apply_linear, apply_nonlinear, compose, embed_gate, tensor_gates};
pub use reversible::{check_reversible, check_reversible_superop, ReversibilityCertificate};

use serde::{Deserialize, Serialize};

use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{log2_exact, pow4, CMatrix, RMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    TracePreserving,
    TraceDecreasing,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::TracePreserving => "trace_preserving",
            GateKind::TraceDecreasing => "trace_decreasing",
        }
    }
}

/// Real gate matrix of order `(n_in, n_out)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    n_in: usize,
    n_out: usize,
    kind: GateKind,
    entries: RMatrix,
    cp_verified: bool,
}

impl GateMatrix {
    /// Wraps a user-supplied matrix. The kind is read off row 0 and complete
    /// positivity is marked unverified.
    pub fn new(n_in: usize, n_out: usize, entries: RMatrix) -> Result<Self> {
        check_shape(n_in, n_out, &entries)?;
        let kind = if row0_deviation(&entries) <= tolerances().algebraic {
            GateKind::TracePreserving
        } else {
            GateKind::TraceDecreasing
        };
        Ok(GateMatrix {
            n_in,
            n_out,
            kind,
            entries,
            cp_verified: false,
        })
    }

    /// Like [`GateMatrix::new`] but with a declared kind, which must agree with row 0.
    pub fn with_kind(n_in: usize, n_out: usize, kind: GateKind, entries: RMatrix) -> Result<Self> {
        let g = Self::new(n_in, n_out, entries)?;
        if kind == GateKind::TracePreserving && g.kind != GateKind::TracePreserving {
            return Err(Error::NotTracePreserving {
                deviation: row0_deviation(&g.entries),
            });
        }
        Ok(GateMatrix { kind, ..g })
    }

    /// Square gate on `n` ququats.
    pub fn square(entries: RMatrix) -> Result<Self> {
        let n = crate::linalg::log4_exact(entries.nrows()).ok_or_else(|| {
            Error::DimensionMismatch(format!("{} is not a power of 4", entries.nrows()))
        })?;
        Self::new(n, n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let d = pow4(n);
        GateMatrix {
            n_in: n,
            n_out: n,
            kind: GateKind::TracePreserving,
            entries: RMatrix::identity(d, d),
            cp_verified: true,
        }
    }

    pub(crate) fn from_parts(
        n_in: usize,
        n_out: usize,
        kind: GateKind,
        entries: RMatrix,
        cp_verified: bool,
    ) -> Self {
        debug_assert_eq!(entries.shape(), (pow4(n_out), pow4(n_in)));
        GateMatrix {
            n_in,
            n_out,
            kind,
            entries,
            cp_verified,
        }
    }

    /// Recomputes the kind from row 0 after an algebraic operation.
    pub(crate) fn derived(n_in: usize, n_out: usize, entries: RMatrix, cp_verified: bool) -> Self {
        let kind = if row0_deviation(&entries) <= tolerances().algebraic {
            GateKind::TracePreserving
        } else {
            GateKind::TraceDecreasing
        };
        GateMatrix {
            n_in,
            n_out,
            kind,
            entries,
            cp_verified,
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn entries(&self) -> &RMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> RMatrix {
        self.entries
    }

    pub fn is_square(&self) -> bool {
        self.n_in == self.n_out
    }

    /// True when the gate came from a Kraus representation (or was checked by
    /// [`analyze_gate`] via [`GateMatrix::mark_cp_verified`]).
    pub fn cp_verified(&self) -> bool {
        self.cp_verified
    }

    /// Runs the Choi test and records the result.
    pub fn mark_cp_verified(mut self) -> Self {
        self.cp_verified = analyze_gate(&self).completely_positive;
        self
    }

    pub fn scaled(&self, s: f64) -> GateMatrix {
        GateMatrix::derived(self.n_in, self.n_out, &self.entries * s, false)
    }

    /// Entrywise sum of gates of the same order.
    pub fn sum(gates: &[GateMatrix]) -> Result<GateMatrix> {
        let first = gates
            .first()
            .ok_or_else(|| Error::InvalidValue("empty gate list".into()))?;
        let mut acc = first.entries.clone();
        for g in &gates[1..] {
            if g.n_in != first.n_in || g.n_out != first.n_out {
                return Err(Error::DimensionMismatch("gate orders differ".into()));
            }
            acc += &g.entries;
        }
        let cp = gates.iter().all(|g| g.cp_verified);
        Ok(GateMatrix::derived(first.n_in, first.n_out, acc, cp))
    }

    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.entries.shape() != other.entries.shape() {
            return f64::INFINITY;
        }
        crate::linalg::max_abs_real(&(&self.entries - &other.entries))
    }
}

fn check_shape(n_in: usize, n_out: usize, entries: &RMatrix) -> Result<()> {
    if n_in == 0 || n_out == 0 || entries.shape() != (pow4(n_out), pow4(n_in)) {
        return Err(Error::DimensionMismatch(format!(
            "gate of order ({n_in},{n_out}) must be {}x{}, got {:?}",
            pow4(n_out),
            pow4(n_in),
            entries.shape()
        )));
    }
    if entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidValue("non-finite gate entry".into()));
    }
    Ok(())
}

/// `max_nu |E_{0 nu} - delta_{0 nu}|`.
pub fn row0_deviation(e: &RMatrix) -> f64 {
    (0..e.ncols())
        .map(|nu| (e[(0, nu)] - if nu == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

/// Kraus representation `Phi(rho) = sum_j A_j rho A_j^dag` with `2^n_out x 2^n_in` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMatrix>,
    n_in: usize,
    n_out: usize,
}

impl KrausSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidValue("Kraus set is empty".into()))?;
        let shape = first.shape();
        let (n_out, n_in) = match (log2_exact(shape.0), log2_exact(shape.1)) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
            _ => {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator must be 2^m x 2^n, got {shape:?}"
                )))
            }
        };
        if let Some(bad) = ops.iter().find(|a| a.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators differ in shape: {shape:?} vs {:?}",
                bad.shape()
            )));
        }
        Ok(KrausSet { ops, n_in, n_out })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// `sum_j A_j^dag A_j`.
    pub fn completeness(&self) -> CMatrix {
        self.ops.iter().map(|a| a.adjoint() * a).fold(
            CMatrix::zeros(self.ops[0].ncols(), self.ops[0].ncols()),
            |acc, x| acc + x,
        )
    }

    /// Applies the map to a matrix.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.ops.iter().map(|a| a * x * a.adjoint()).fold(
            CMatrix::zeros(self.ops[0].nrows(), self.ops[0].nrows()),
            |acc, y| acc + y,
        )
    }
}
