//! Structural decompositions of trace-preserving gates.
//!
//! A trace-preserving gate has the block form `E(T, R) = [[1, 0], [T, R]]`
//! and these multiply as `E(T,R) E(T',R') = E(T + R T', R R')`. Every
//! factorization here acts on the block `R` and carries `T` separately.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{gate_from_unitary, GateKind, GateMatrix};
use crate::config::tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, pow4, CMatrix, RMatrix, RVector};
use crate::pauli::sigma;

/// Block form `[[1, 0], [T, R]]` of a trace-preserving gate.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationSplit {
    pub t: RVector,
    pub r: RMatrix,
}

impl TranslationSplit {
    /// Reassembles `[[1, 0], [T, R]]`.
    pub fn to_matrix(&self) -> RMatrix {
        assemble(&self.t, &self.r)
    }

    /// `E(T, R) E(T', R') = E(T + R T', R R')`.
    pub fn compose(&self, other: &TranslationSplit) -> TranslationSplit {
        TranslationSplit {
            t: &self.t + &self.r * &other.t,
            r: &self.r * &other.r,
        }
    }

    /// The pure translation `E(T, I)` (output-side square gate).
    pub fn translation_gate(&self, n_out: usize) -> GateMatrix {
        let d = self.t.len();
        GateMatrix::from_parts(
            n_out,
            n_out,
            GateKind::TracePreserving,
            assemble(&self.t, &RMatrix::identity(d, d)),
            false,
        )
    }
}

fn assemble(t: &RVector, r: &RMatrix) -> RMatrix {
    let mut m = RMatrix::zeros(r.nrows() + 1, r.ncols() + 1);
    m[(0, 0)] = 1.0;
    m.view_mut((1, 0), (t.len(), 1)).copy_from(t);
    m.view_mut((1, 1), r.shape()).copy_from(r);
    m
}

fn require_tp(g: &GateMatrix) -> Result<()> {
    if g.kind() != GateKind::TracePreserving {
        return Err(Error::NotTracePreserving {
            deviation: crate::channel::row0_deviation(g.entries()),
        });
    }
    Ok(())
}

/// Splits a trace-preserving gate into translation `T` and block `R`.
pub fn split_translation(g: &GateMatrix) -> Result<TranslationSplit> {
    require_tp(g)?;
    let e = g.entries();
    let (rows, cols) = (e.nrows() - 1, e.ncols() - 1);
    Ok(TranslationSplit {
        t: e.view((1, 0), (rows, 1)).column(0).into_owned(),
        r: e.view((1, 1), (rows, cols)).into_owned(),
    })
}

/// `E = T_gate . U1 . D . U2` with orthogonal `U1`, `U2` and nonnegative diagonal `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSvd {
    pub translation: GateMatrix,
    pub u1: GateMatrix,
    pub d: GateMatrix,
    pub u2: GateMatrix,
    /// Nonincreasing, nonnegative; `min(4^n_in, 4^n_out) - 1` values.
    pub singular_values: Vec<f64>,
}

impl GateSvd {
    pub fn reconstruct(&self) -> RMatrix {
        self.translation.entries() * self.u1.entries() * self.d.entries() * self.u2.entries()
    }

    pub fn factors(&self) -> Vec<(&'static str, &GateMatrix)> {
        vec![
            ("translation", &self.translation),
            ("U1", &self.u1),
            ("D", &self.d),
            ("U2", &self.u2),
        ]
    }
}

/// Thin SVD `R = U diag(s) V^T` with values sorted descending and a
/// deterministic sign per singular pair (largest entry of each `U` column positive).
fn sorted_svd(r: &RMatrix) -> (RMatrix, Vec<f64>, RMatrix) {
    let svd = r.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let mut uc = Vec::with_capacity(order.len());
    let mut vc = Vec::with_capacity(order.len());
    let mut vals = Vec::with_capacity(order.len());
    for &i in &order {
        let mut ucol = u.column(i).into_owned();
        let mut vcol = vt.row(i).transpose();
        let lead = ucol.iter().copied().fold(0.0f64, |best, x| {
            if x.abs() > best.abs() + 1e-12 {
                x
            } else {
                best
            }
        });
        if lead < 0.0 {
            ucol = -ucol;
            vcol = -vcol;
        }
        uc.push(ucol);
        vc.push(vcol);
        vals.push(s[i].max(0.0));
    }
    let (uq, vq) = if uc.is_empty() {
        (RMatrix::zeros(r.nrows(), 0), RMatrix::zeros(r.ncols(), 0))
    } else {
        (RMatrix::from_columns(&uc), RMatrix::from_columns(&vc))
    };
    (uq, vals, vq)
}

/// Embeds an orthogonal block as the unital gate `[[1, 0], [0, O]]`.
fn unital_gate(n_in: usize, n_out: usize, block: &RMatrix) -> GateMatrix {
    GateMatrix::from_parts(
        n_in,
        n_out,
        GateKind::TracePreserving,
        assemble(&RVector::zeros(block.nrows()), block),
        false,
    )
}

/// SVD of a square trace-preserving gate.
pub fn svd_gate(g: &GateMatrix) -> Result<GateSvd> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_in: g.n_in(),
            n_out: g.n_out(),
        });
    }
    svd_rect_gate(g)
}

/// SVD of a trace-preserving gate of any order `(n_in, n_out)`.
///
/// The translation factor acts on the output side: `E = T^(out) U^(out) D U^(in)`.
pub fn svd_rect_gate(g: &GateMatrix) -> Result<GateSvd> {
    let split = split_translation(g)?;
    let (n_in, n_out) = (g.n_in(), g.n_out());
    let (uq, vals, vq) = sorted_svd(&split.r);
    let u_full = linalg::complete_orthonormal(&uq);
    let v_full = linalg::complete_orthonormal(&vq);
    let mut dblock = RMatrix::zeros(split.r.nrows(), split.r.ncols());
    for (i, &s) in vals.iter().enumerate() {
        dblock[(i, i)] = s;
    }
    Ok(GateSvd {
        translation: split.translation_gate(n_out),
        u1: unital_gate(n_out, n_out, &u_full),
        d: unital_gate(n_in, n_out, &dblock),
        u2: unital_gate(n_in, n_in, &v_full.transpose()),
        singular_values: vals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarSide {
    /// `R = U S`.
    Right,
    /// `R = S' U`.
    Left,
}

/// Polar factors of the block `R`, with the translation carried separately:
/// `E = T_gate . U . S` (right) or `E = T_gate . S' . U` (left).
#[derive(Debug, Clone, PartialEq)]
pub struct GatePolar {
    pub side: PolarSide,
    pub translation: GateMatrix,
    pub orthogonal: GateMatrix,
    pub symmetric: GateMatrix,
}

impl GatePolar {
    pub fn reconstruct(&self) -> RMatrix {
        match self.side {
            PolarSide::Right => {
                self.translation.entries() * self.orthogonal.entries() * self.symmetric.entries()
            }
            PolarSide::Left => {
                self.translation.entries() * self.symmetric.entries() * self.orthogonal.entries()
            }
        }
    }

    pub fn factors(&self) -> Vec<(&'static str, &GateMatrix)> {
        match self.side {
            PolarSide::Right => vec![
                ("translation", &self.translation),
                ("orthogonal", &self.orthogonal),
                ("symmetric", &self.symmetric),
            ],
            PolarSide::Left => vec![
                ("translation", &self.translation),
                ("symmetric", &self.symmetric),
                ("orthogonal", &self.orthogonal),
            ],
        }
    }
}

/// Polar decomposition of a square trace-preserving gate, from the SVD
/// `R = W S V^T`: `U = W V^T`, `S = V S V^T`, `S' = W S W^T`.
pub fn polar_gate(g: &GateMatrix, side: PolarSide) -> Result<GatePolar> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_in: g.n_in(),
            n_out: g.n_out(),
        });
    }
    let split = split_translation(g)?;
    let n = g.n_in();
    let (uq, vals, vq) = sorted_svd(&split.r);
    let sigma = RMatrix::from_diagonal(&RVector::from_vec(vals));
    let orth = &uq * vq.transpose();
    let sym = match side {
        PolarSide::Right => &vq * &sigma * vq.transpose(),
        PolarSide::Left => &uq * &sigma * uq.transpose(),
    };
    let sym = (&sym + sym.transpose()) * 0.5;
    Ok(GatePolar {
        side,
        translation: split.translation_gate(n),
        orthogonal: unital_gate(n, n, &orth),
        symmetric: unital_gate(n, n, &sym),
    })
}

/// Euler angles of a single-ququat rotation gate: `E = U1(alpha) U2(theta) U1(beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub theta: f64,
    pub beta: f64,
}

impl EulerAngles {
    pub fn to_gate(&self) -> GateMatrix {
        let m = rot1(self.alpha) * rot2(self.theta) * rot1(self.beta);
        GateMatrix::from_parts(1, 1, GateKind::TracePreserving, m, true)
    }
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Rotation about the third axis, `U1(alpha)`.
pub fn rot1(alpha: f64) -> RMatrix {
    let (s, c) = alpha.sin_cos();
    linalg::rmatrix(
        4,
        4,
        &[1., 0., 0., 0., 0., c, -s, 0., 0., s, c, 0., 0., 0., 0., 1.],
    )
}

/// Rotation about the second axis, `U2(theta)`.
pub fn rot2(theta: f64) -> RMatrix {
    let (s, c) = theta.sin_cos();
    linalg::rmatrix(
        4,
        4,
        &[1., 0., 0., 0., 0., c, 0., s, 0., 0., 1., 0., 0., -s, 0., c],
    )
}

/// Recovers `(alpha, theta, beta)` with `0 <= alpha, beta < 2 pi`, `0 <= theta <= pi`.
///
/// At `theta = 0` or `theta = pi` only one combination of `alpha` and `beta` is
/// determined; it is folded into `alpha` and `beta = 0` is reported.
pub fn euler_angles(g: &GateMatrix) -> Result<EulerAngles> {
    let tol = tolerances().algebraic;
    if g.n_in() != 1 || g.n_out() != 1 {
        return Err(Error::NotRotation("gate is not single-ququat".into()));
    }
    let e = g.entries();
    let dev = linalg::orthogonality_deviation(e);
    if dev > tol {
        return Err(Error::NotOrthogonal { deviation: dev });
    }
    let unital = (e[(0, 0)] - 1.0).abs() <= tol
        && (1..4).all(|i| e[(i, 0)].abs() <= tol && e[(0, i)].abs() <= tol);
    if !unital {
        return Err(Error::NotRotation("gate is not unital".into()));
    }
    let r = e.view((1, 1), (3, 3)).into_owned();
    if r.determinant() < 0.0 {
        return Err(Error::NotRotation(
            "determinant is -1 (a reflection, not a unitary gate)".into(),
        ));
    }
    let r_ = |i: usize, j: usize| r[(i - 1, j - 1)];
    let s = r_(1, 3).hypot(r_(2, 3));
    let theta = s.atan2(r_(3, 3));
    let (alpha, beta) = if s < 1e-12 {
        if r_(3, 3) > 0.0 {
            (r_(2, 1).atan2(r_(1, 1)), 0.0)
        } else {
            ((-r_(1, 2)).atan2(r_(2, 2)), 0.0)
        }
    } else {
        (r_(2, 3).atan2(r_(1, 3)), r_(3, 2).atan2(-r_(3, 1)))
    };
    Ok(EulerAngles {
        alpha: wrap_angle(alpha),
        theta,
        beta: wrap_angle(beta),
    })
}

fn diag4(d: [f64; 4]) -> RMatrix {
    RMatrix::from_diagonal(&RVector::from_row_slice(&d))
}

/// Names accepted by [`named_gate`].
pub const NAMED_GATES: &[&str] = &[
    "identity",
    "rot1",
    "rot2",
    "reflect1",
    "reflect2",
    "reflect3",
    "inversion",
    "pauli0",
    "pauli1",
    "pauli2",
    "pauli3",
    "pauli_k",
    "hadamard",
    "not",
];

/// Elementary single-ququat gates. `rot1` and `rot2` take one angle, `pauli_k` takes `k`.
pub fn named_gate(name: &str, params: &[f64]) -> Result<GateMatrix> {
    let angle = |what: &str| -> Result<f64> {
        match params {
            [a] => Ok(*a),
            _ => Err(Error::InvalidValue(format!(
                "{what} takes exactly one angle"
            ))),
        }
    };
    let pauli = |k: u8| gate_from_unitary(&sigma(k));
    let m = match name {
        "identity" => RMatrix::identity(4, 4),
        "rot1" => rot1(angle("rot1")?),
        "rot2" => rot2(angle("rot2")?),
        "reflect1" => diag4([1., -1., 1., 1.]),
        "reflect2" => diag4([1., 1., -1., 1.]),
        "reflect3" => diag4([1., 1., 1., -1.]),
        "inversion" => diag4([1., -1., -1., -1.]),
        "pauli0" | "pauli1" | "pauli2" | "pauli3" => {
            return pauli(name.as_bytes()[5] - b'0');
        }
        "pauli_k" => {
            let k = angle("pauli_k")?;
            if ![0.0, 1.0, 2.0, 3.0].contains(&k) {
                return Err(Error::InvalidValue(format!(
                    "pauli_k needs k in 0..=3, got {k}"
                )));
            }
            return pauli(k as u8);
        }
        "hadamard" => {
            let h: CMatrix = (sigma(1) + sigma(3)).scale(0.5f64.sqrt());
            return gate_from_unitary(&h);
        }
        "not" => return pauli(1),
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    let cp = matches!(name, "identity" | "rot1" | "rot2");
    debug_assert_eq!(m.nrows(), pow4(1));
    Ok(GateMatrix::from_parts(
        1,
        1,
        GateKind::TracePreserving,
        m,
        cp,
    ))
}
