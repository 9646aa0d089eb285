use serde::{Deserialize, Serialize};

use super::TruthTable;
use crate::channel::{GateKind, GateMatrix};
use crate::error::{Error, Result};
use crate::linalg::{pow4, RMatrix, RVector};
use crate::state::computational_state_scalar;

/// Combined output index `o(nu)` of a list of tables sharing one arity.
fn output_index(tables: &[TruthTable], nu: usize) -> usize {
    tables
        .iter()
        .fold(0, |acc, t| 4 * acc + t.eval_index(nu) as usize)
}

fn check_same_arity(tables: &[TruthTable]) -> Result<usize> {
    let Some(first) = tables.first() else {
        return Err(Error::InvalidValue("at least one table is required".into()));
    };
    let n = first.arity();
    if n == 0 {
        return Err(Error::InvalidValue(
            "tables must have arity at least 1".into(),
        ));
    }
    if let Some(t) = tables.iter().find(|t| t.arity() != n) {
        return Err(Error::ArityMismatch {
            expected: n,
            found: t.arity(),
        });
    }
    Ok(n)
}

/// Gate of order `(n, m)` sending `|nu]` to `|t_1(nu) ... t_m(nu)]` for `m` tables of arity `n`.
///
/// With `o = o(0)`: column 0 is `|o]` and column `nu > 0` is `e_{o(nu)} - e_o`,
/// where `e_0` is dropped from both terms. The result is trace preserving.
pub fn synthesize_multi(tables: &[TruthTable]) -> Result<GateMatrix> {
    let n = check_same_arity(tables)?;
    let m = tables.len();
    let mut e = RMatrix::zeros(pow4(m), pow4(n));
    let o0 = output_index(tables, 0);
    e[(0, 0)] = 1.0;
    if o0 != 0 {
        e[(o0, 0)] += 1.0;
    }
    for nu in 1..pow4(n) {
        let o = output_index(tables, nu);
        if o != 0 {
            e[(o, nu)] += 1.0;
        }
        if o0 != 0 {
            e[(o0, nu)] -= 1.0;
        }
    }
    Ok(GateMatrix::from_parts(
        n,
        m,
        GateKind::TracePreserving,
        e,
        false,
    ))
}

/// Gate of order `(n, 1)` realizing one table.
pub fn synthesize_quantum(t: &TruthTable) -> Result<GateMatrix> {
    synthesize_multi(std::slice::from_ref(t))
}

/// Whether a unital gate on the same ququats can realize `t`: exactly when `g(0,...,0) = 0`.
///
/// A unital gate fixes `|0...0]`, and `|0...0]` must go to `|g(0,...,0)]`.
pub fn unital_realizable(t: &TruthTable) -> bool {
    t.eval_index(0) == 0
}

/// Where the ancilla ququat of an extended realization sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AncillaPosition {
    Leading,
    #[default]
    Trailing,
}

/// Output tables of the ancilla extension of an `n`-ary table.
///
/// Outputs are `g, ~g, ..., ~g` (`n` of them) followed by the ancilla
/// (or preceded by it, for [`AncillaPosition::Leading`]). When the ancilla is 0
/// every output is 0.
pub fn extended_tables(t: &TruthTable, position: AncillaPosition) -> Result<Vec<TruthTable>> {
    let n = t.arity();
    if n == 0 {
        return Err(Error::InvalidValue(
            "table must have arity at least 1".into(),
        ));
    }
    let split = |x: &[u8]| -> (u8, usize) {
        match position {
            AncillaPosition::Trailing => (x[n], super::index(&x[..n])),
            AncillaPosition::Leading => (x[0], super::index(&x[1..])),
        }
    };
    let value = |slot: usize, x: &[u8]| -> u8 {
        let (a, i) = split(x);
        if a == 0 {
            return 0;
        }
        let g = t.eval_index(i);
        match slot {
            0 => g,
            _ => 3 - g,
        }
    };
    let mut tables = Vec::with_capacity(n + 1);
    if position == AncillaPosition::Leading {
        tables.push(TruthTable::from_fn(n + 1, |x| x[0])?);
    }
    for slot in 0..n {
        tables.push(TruthTable::from_fn(n + 1, |x| value(slot, x))?);
    }
    if position == AncillaPosition::Trailing {
        tables.push(TruthTable::from_fn(n + 1, |x| x[n])?);
    }
    Ok(tables)
}

/// Unital gate on `n + 1` ququats realizing `t` with a trailing ancilla.
pub fn synthesize_unital_extended(t: &TruthTable) -> Result<GateMatrix> {
    synthesize_unital_extended_at(t, AncillaPosition::Trailing)
}

pub fn synthesize_unital_extended_at(
    t: &TruthTable,
    position: AncillaPosition,
) -> Result<GateMatrix> {
    if unital_realizable(t) {
        return Err(Error::AlreadyUnitalRealizable);
    }
    synthesize_multi(&extended_tables(t, position)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "ancilla")]
pub enum VerifyMode {
    /// One output ququat per table.
    #[default]
    Plain,
    /// A single table realized with an ancilla, as built by [`extended_tables`].
    Extended(AncillaPosition),
}

/// Applies `g` to every generalized computational state and compares with the tables.
pub fn verify_realization(g: &GateMatrix, tables: &[TruthTable], mode: VerifyMode) -> Result<bool> {
    let tables = match mode {
        VerifyMode::Plain => tables.to_vec(),
        VerifyMode::Extended(pos) => match tables {
            [t] => extended_tables(t, pos)?,
            _ => {
                return Err(Error::InvalidValue(
                    "extended verification takes exactly one table".into(),
                ))
            }
        },
    };
    let n = check_same_arity(&tables)?;
    if g.n_in() != n || g.n_out() != tables.len() {
        return Err(Error::DimensionMismatch(format!(
            "gate has order ({}, {}), tables need ({n}, {})",
            g.n_in(),
            g.n_out(),
            tables.len()
        )));
    }
    for nu in 0..pow4(n) {
        let input = computational_state_scalar(n, nu)?;
        let out = g.entries() * RVector::from_column_slice(input.coefficients());
        let expected = computational_state_scalar(tables.len(), output_index(&tables, nu))?;
        if out.iter().zip(expected.coefficients()).any(|(a, b)| a != b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two-ququat gate written as the identity plus corrections on the
/// inputs `(k, 0)`, `(k, 1)` with `k > 1`, and `(3, 2)`.
///
/// It sends `|x_1, x_2]` to `|min, max]`.
pub fn cd_gate_expanded() -> GateMatrix {
    let idx = |a: usize, b: usize| 4 * a + b;
    let mut e = RMatrix::identity(16, 16);
    let mut add = |to_plus: usize, to_minus: usize, from: usize| {
        e[(to_plus, from)] += 1.0;
        e[(to_minus, from)] -= 1.0;
    };
    for k in 1..4 {
        add(idx(0, k), idx(k, 0), idx(k, 0));
    }
    for k in 2..4 {
        add(idx(1, k), idx(k, 1), idx(k, 1));
    }
    add(idx(2, 3), idx(3, 2), idx(3, 2));
    GateMatrix::from_parts(2, 2, GateKind::TracePreserving, e, false)
}
