//! Classical four-valued logic and its realization by quantum gates.
//!
//! Values are `0..=3`. An `n`-ary function is stored as its table of `4^n`
//! outputs indexed by the base-4 number `x_1 x_2 ... x_n` (`x_1` most significant).

mod closure;
mod synth;

pub use closure::{closure, ArityClosure, ClosureResult, Provenance};
pub use synth::{
    cd_gate_expanded, extended_tables, synthesize_multi, synthesize_quantum,
    synthesize_unital_extended, synthesize_unital_extended_at, unital_realizable,
    verify_realization, AncillaPosition, VerifyMode,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::pow4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct TruthTable {
    arity: usize,
    outputs: Vec<u8>,
}

#[derive(Deserialize)]
struct RawTable {
    arity: usize,
    outputs: Vec<u8>,
}

impl TryFrom<RawTable> for TruthTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        TruthTable::new(raw.arity, raw.outputs)
    }
}

impl TruthTable {
    pub fn new(arity: usize, outputs: Vec<u8>) -> Result<Self> {
        if arity > 8 {
            return Err(Error::InvalidValue(format!("arity {arity} is too large")));
        }
        if outputs.len() != pow4(arity) {
            return Err(Error::DimensionMismatch(format!(
                "arity {arity} needs {} outputs, got {}",
                pow4(arity),
                outputs.len()
            )));
        }
        if let Some(bad) = outputs.iter().find(|&&v| v > 3) {
            return Err(Error::InvalidValue(format!("output {bad} is not in 0..=3")));
        }
        Ok(TruthTable { arity, outputs })
    }

    /// Builds a table by evaluating `f` on every input tuple.
    pub fn from_fn(arity: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let outputs = (0..pow4(arity)).map(|i| f(&digits(i, arity))).collect();
        TruthTable::new(arity, outputs)
    }

    /// Parses a base-4 output string such as `"3210"`.
    pub fn from_base4(arity: usize, s: &str) -> Result<Self> {
        let outputs = s
            .trim()
            .chars()
            .map(|ch| match ch.to_digit(4) {
                Some(d) => Ok(d as u8),
                None => Err(Error::InvalidValue(format!("'{ch}' is not a base-4 digit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        TruthTable::new(arity, outputs)
    }

    pub fn to_base4(&self) -> String {
        self.outputs.iter().map(|d| char::from(b'0' + d)).collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }

    pub fn eval(&self, inputs: &[u8]) -> Result<u8> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: inputs.len(),
            });
        }
        if let Some(bad) = inputs.iter().find(|&&v| v > 3) {
            return Err(Error::InvalidValue(format!("input {bad} is not in 0..=3")));
        }
        Ok(self.outputs[index(inputs)])
    }

    /// Output at the base-4 input index.
    pub fn eval_index(&self, i: usize) -> u8 {
        self.outputs[i]
    }

    pub fn is_constant(&self) -> bool {
        self.outputs.windows(2).all(|w| w[0] == w[1])
    }
}

/// Base-4 digits of `i`, most significant first.
pub fn digits(i: usize, n: usize) -> Vec<u8> {
    (0..n)
        .map(|q| ((i >> (2 * (n - 1 - q))) & 3) as u8)
        .collect()
}

pub fn index(digits: &[u8]) -> usize {
    digits.iter().fold(0, |acc, &d| 4 * acc + d as usize)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "luk_neg",
    "cyclic_shift",
    "bar_neg",
    "box",
    "diamond",
    "I0",
    "I1",
    "I2",
    "I3",
    "const0",
    "const1",
    "const2",
    "const3",
    "min",
    "max",
    "v4",
    "g1",
    "g2",
    "g3",
];

pub fn builtin(name: &str) -> Result<TruthTable> {
    let unary = |o: [u8; 4]| TruthTable::new(1, o.to_vec());
    match name {
        "luk_neg" => unary([3, 2, 1, 0]),
        "cyclic_shift" | "bar_neg" => unary([1, 2, 3, 0]),
        "box" => unary([0, 0, 0, 3]),
        "diamond" => unary([0, 3, 3, 3]),
        "I0" => unary([3, 0, 0, 0]),
        "I1" => unary([0, 3, 0, 0]),
        "I2" => unary([0, 0, 3, 0]),
        "I3" => unary([0, 0, 0, 3]),
        "const0" => unary([0; 4]),
        "const1" => unary([1; 4]),
        "const2" => unary([2; 4]),
        "const3" => unary([3; 4]),
        "g1" => unary([3, 0, 1, 2]),
        "g2" => unary([0, 1, 3, 2]),
        "g3" => unary([1, 1, 2, 3]),
        "min" => TruthTable::from_fn(2, |x| x[0].min(x[1])),
        "max" => TruthTable::from_fn(2, |x| x[0].max(x[1])),
        "v4" => TruthTable::from_fn(2, |x| (x[0].max(x[1]) + 1) % 4),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Substitutes `inners` (all of one arity `m`) into `outer`; the result has arity `m`.
pub fn compose_classical(outer: &TruthTable, inners: &[TruthTable]) -> Result<TruthTable> {
    if inners.len() != outer.arity {
        return Err(Error::ArityMismatch {
            expected: outer.arity,
            found: inners.len(),
        });
    }
    let m = match inners.first() {
        Some(t) => t.arity,
        None => {
            return Err(Error::InvalidValue(
                "composition needs at least one inner function".into(),
            ))
        }
    };
    if let Some(t) = inners.iter().find(|t| t.arity != m) {
        return Err(Error::ArityMismatch {
            expected: m,
            found: t.arity,
        });
    }
    let outputs = (0..pow4(m))
        .map(|i| {
            let j = inners
                .iter()
                .fold(0, |acc, t| 4 * acc + t.outputs[i] as usize);
            outer.outputs[j]
        })
        .collect();
    TruthTable::new(m, outputs)
}

/// Expression tree over the elementary connectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ClassicalExpression {
    Const {
        value: u8,
    },
    /// Zero-based variable index.
    Var {
        index: usize,
    },
    /// `I_k(x)`: 3 when `x = k`, else 0.
    Indicator {
        k: u8,
        arg: Box<ClassicalExpression>,
    },
    /// `min` over the arguments; empty is 3.
    And {
        args: Vec<ClassicalExpression>,
    },
    /// `max` over the arguments; empty is 0.
    Or {
        args: Vec<ClassicalExpression>,
    },
    /// `3 - x`.
    Neg {
        arg: Box<ClassicalExpression>,
    },
    /// `x + 1 mod 4`.
    Shift {
        arg: Box<ClassicalExpression>,
    },
    /// `max(x, y) + 1 mod 4`.
    V4 {
        left: Box<ClassicalExpression>,
        right: Box<ClassicalExpression>,
    },
    Apply {
        table: TruthTable,
        args: Vec<ClassicalExpression>,
    },
}

impl ClassicalExpression {
    pub fn eval(&self, inputs: &[u8]) -> Result<u8> {
        use ClassicalExpression::*;
        Ok(match self {
            Const { value } if *value <= 3 => *value,
            Const { value } => {
                return Err(Error::InvalidValue(format!(
                    "constant {value} is not in 0..=3"
                )))
            }
            Var { index } => *inputs.get(*index).ok_or_else(|| {
                Error::InvalidIndex(format!("variable {index} with {} input(s)", inputs.len()))
            })?,
            Indicator { k, arg } => {
                if arg.eval(inputs)? == *k {
                    3
                } else {
                    0
                }
            }
            And { args } => {
                let mut v = 3;
                for a in args {
                    v = v.min(a.eval(inputs)?);
                }
                v
            }
            Or { args } => {
                let mut v = 0;
                for a in args {
                    v = v.max(a.eval(inputs)?);
                }
                v
            }
            Neg { arg } => 3 - arg.eval(inputs)?,
            Shift { arg } => (arg.eval(inputs)? + 1) % 4,
            V4 { left, right } => (left.eval(inputs)?.max(right.eval(inputs)?) + 1) % 4,
            Apply { table, args } => {
                let vals = args
                    .iter()
                    .map(|a| a.eval(inputs))
                    .collect::<Result<Vec<u8>>>()?;
                table.eval(&vals)?
            }
        })
    }

    /// Evaluates on every input of the given arity.
    pub fn to_table(&self, arity: usize) -> Result<TruthTable> {
        let outputs = (0..pow4(arity))
            .map(|i| self.eval(&digits(i, arity)))
            .collect::<Result<Vec<u8>>>()?;
        TruthTable::new(arity, outputs)
    }
}

fn dnf_terms(t: &TruthTable, keep_zero: bool) -> ClassicalExpression {
    let terms = (0..pow4(t.arity))
        .filter(|&i| keep_zero || t.outputs[i] != 0)
        .map(|i| {
            let mut args: Vec<ClassicalExpression> = digits(i, t.arity)
                .into_iter()
                .enumerate()
                .map(|(v, k)| ClassicalExpression::Indicator {
                    k,
                    arg: Box::new(ClassicalExpression::Var { index: v }),
                })
                .collect();
            args.push(ClassicalExpression::Const {
                value: t.outputs[i],
            });
            ClassicalExpression::And { args }
        })
        .collect();
    ClassicalExpression::Or { args: terms }
}

/// `OR over k of I_{k_1}(x_1) AND ... AND I_{k_n}(x_n) AND g(k)`, one term per input.
pub fn dnf(t: &TruthTable) -> ClassicalExpression {
    dnf_terms(t, true)
}

/// As [`dnf`] without the terms where `g(k) = 0`; a zero table gives the empty disjunction.
pub fn dnf_pruned(t: &TruthTable) -> ClassicalExpression {
    dnf_terms(t, false)
}
