use super::{GateKind, GateMatrix};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{pow4, RMatrix, RVector};
use crate::state::PauliVector;

fn product(g: &GateMatrix, p: &PauliVector) -> Result<RVector> {
    if g.n_in() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {} ququat(s), state has {}",
            g.n_in(),
            p.n()
        )));
    }
    Ok(g.entries() * RVector::from_column_slice(p.coefficients()))
}

/// `P' = E P` for a trace-preserving gate.
pub fn apply_linear(g: &GateMatrix, p: &PauliVector) -> Result<PauliVector> {
    if g.kind() != GateKind::TracePreserving {
        return Err(Error::TraceDecreasingGate);
    }
    let out = product(g, p)?;
    PauliVector::new(g.n_out(), out.iter().copied().collect())
}

/// Applies a (trace-decreasing) gate and renormalizes.
///
/// Returns the normalized state and the outcome probability `p = (E P)_0`.
pub fn apply_nonlinear(g: &GateMatrix, p: &PauliVector) -> Result<(PauliVector, f64)> {
    let out = product(g, p)?;
    let prob = out[0];
    if prob < tolerances().algebraic {
        return Err(Error::ZeroProbability { probability: prob });
    }
    let v: Vec<f64> = out.iter().map(|x| x / prob).collect();
    Ok((PauliVector::new(g.n_out(), v)?, prob))
}

/// `g2 . g1` (apply `g1` first).
pub fn compose(g2: &GateMatrix, g1: &GateMatrix) -> Result<GateMatrix> {
    if g1.n_out() != g2.n_in() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose: first gate outputs {} ququat(s), second takes {}",
            g1.n_out(),
            g2.n_in()
        )));
    }
    Ok(GateMatrix::derived(
        g1.n_in(),
        g2.n_out(),
        g2.entries() * g1.entries(),
        g1.cp_verified() && g2.cp_verified(),
    ))
}

/// Kronecker product: `a` on the leading ququats, `b` on the trailing ones.
pub fn tensor_gates(a: &GateMatrix, b: &GateMatrix) -> GateMatrix {
    GateMatrix::derived(
        a.n_in() + b.n_in(),
        a.n_out() + b.n_out(),
        a.entries().kronecker(b.entries()),
        a.cp_verified() && b.cp_verified(),
    )
}

/// Adjoint superoperator; its matrix is the transpose.
pub fn adjoint_gate(g: &GateMatrix) -> Result<GateMatrix> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_in: g.n_in(),
            n_out: g.n_out(),
        });
    }
    Ok(GateMatrix::derived(
        g.n_in(),
        g.n_out(),
        g.entries().transpose(),
        g.cp_verified(),
    ))
}

/// Extends a square gate on `targets.len()` ququats to `n` ququats, acting
/// as the identity elsewhere. The gate's `j`-th ququat is wired to `targets[j]`.
pub fn embed_gate(g: &GateMatrix, targets: &[usize], n: usize) -> Result<GateMatrix> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_in: g.n_in(),
            n_out: g.n_out(),
        });
    }
    let k = g.n_in();
    if targets.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {k} ququat(s) but {} target(s) given",
            targets.len()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::InvalidIndex(format!(
                "target {t} out of range for {n} ququat(s)"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidIndex(format!("target {t} repeated")));
        }
    }
    if k == n && targets.iter().enumerate().all(|(i, &t)| i == t) {
        return Ok(g.clone());
    }
    let digit = |x: usize, q: usize| (x >> (2 * (n - 1 - q))) & 3;
    let set_digit = |x: usize, q: usize, d: usize| {
        let shift = 2 * (n - 1 - q);
        (x & !(3 << shift)) | (d << shift)
    };
    let e = g.entries();
    let mut full = RMatrix::zeros(pow4(n), pow4(n));
    for nu in 0..pow4(n) {
        let nu_t = targets.iter().fold(0, |acc, &q| 4 * acc + digit(nu, q));
        for mu_t in 0..pow4(k) {
            let val = e[(mu_t, nu_t)];
            if val == 0.0 {
                continue;
            }
            let mut mu = nu;
            for (j, &q) in targets.iter().enumerate() {
                mu = set_digit(mu, q, (mu_t >> (2 * (k - 1 - j))) & 3);
            }
            full[(mu, nu)] = val;
        }
    }
    Ok(GateMatrix::from_parts(
        n,
        n,
        g.kind(),
        full,
        g.cp_verified(),
    ))
}
