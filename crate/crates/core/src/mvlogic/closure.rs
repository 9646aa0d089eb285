use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ClassicalExpression, TruthTable};
use crate::error::{Error, Result};
use crate::linalg::pow4;

/// How an element of the closure was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// The variable `x_{index}`.
    Projection { index: usize },
    /// `generators[generator](functions[args[0]], ...)`.
    Composition { generator: usize, args: Vec<usize> },
}

/// All functions of one arity reached by the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArityClosure {
    pub arity: usize,
    pub functions: Vec<TruthTable>,
    pub provenance: Vec<Provenance>,
    pub complete: bool,
}

impl ArityClosure {
    pub fn contains(&self, t: &TruthTable) -> bool {
        self.position(t).is_some()
    }

    pub fn position(&self, t: &TruthTable) -> Option<usize> {
        self.functions.iter().position(|f| f == t)
    }

    /// Expression tree of element `i` with generators as `Apply` nodes.
    pub fn expression(&self, generators: &[TruthTable], i: usize) -> ClassicalExpression {
        match &self.provenance[i] {
            Provenance::Projection { index } => ClassicalExpression::Var { index: *index },
            Provenance::Composition { generator, args } => ClassicalExpression::Apply {
                table: generators[*generator].clone(),
                args: args
                    .iter()
                    .map(|&a| self.expression(generators, a))
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub arities: Vec<ArityClosure>,
    /// Compositions evaluated across all arities.
    pub compositions: usize,
    pub complete: bool,
}

impl ClosureResult {
    pub fn arity(&self, n: usize) -> Option<&ArityClosure> {
        self.arities.iter().find(|a| a.arity == n)
    }

    pub fn contains(&self, t: &TruthTable) -> bool {
        self.arity(t.arity()).is_some_and(|a| a.contains(t))
    }
}

/// Advances `tuple` (digits in `0..base`) like an odometer; false on wrap-around.
fn next_tuple(tuple: &mut [usize], base: usize) -> bool {
    for d in tuple.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Functions of arity `1..=max_arity` generated from `generators` by composition.
///
/// For each arity the search starts from the projections and repeatedly applies
/// every generator to tuples of known functions, in generator order and then
/// lexicographic tuple order. Each round only tries tuples that use at least one
/// function found in the previous round. `budget` caps the number of
/// compositions over the whole search; when it runs out the result is marked
/// incomplete.
pub fn closure(
    generators: &[TruthTable],
    max_arity: usize,
    budget: usize,
) -> Result<ClosureResult> {
    if generators.is_empty() {
        return Err(Error::InvalidValue("empty generator set".into()));
    }
    if generators.iter().any(|g| g.arity() == 0) {
        return Err(Error::InvalidValue(
            "generators must have arity at least 1".into(),
        ));
    }
    if max_arity == 0 || max_arity > 2 {
        return Err(Error::InvalidValue(format!(
            "max_arity must be 1 or 2, got {max_arity}"
        )));
    }
    let mut remaining = budget;
    let mut arities = Vec::new();
    for arity in 1..=max_arity {
        let (ac, used) = closure_at(generators, arity, remaining);
        remaining -= used;
        arities.push(ac);
    }
    let complete = arities.iter().all(|a| a.complete);
    Ok(ClosureResult {
        arities,
        compositions: budget - remaining,
        complete,
    })
}

fn closure_at(generators: &[TruthTable], arity: usize, budget: usize) -> (ArityClosure, usize) {
    let len = pow4(arity);
    let space: Option<usize> = 1usize.checked_shl((2 * len) as u32);
    let mut functions: Vec<Vec<u8>> = Vec::new();
    let mut provenance = Vec::new();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    for v in 0..arity {
        let out: Vec<u8> = (0..len)
            .map(|i| ((i >> (2 * (arity - 1 - v))) & 3) as u8)
            .collect();
        if !seen.contains_key(&out) {
            seen.insert(out.clone(), functions.len());
            functions.push(out);
            provenance.push(Provenance::Projection { index: v });
        }
    }
    let mut used = 0;
    let mut frontier = 0;
    let mut complete = true;
    'rounds: while frontier < functions.len() {
        let known = functions.len();
        if space == Some(known) {
            break;
        }
        for (gi, g) in generators.iter().enumerate() {
            let k = g.arity();
            let mut tuple = vec![0usize; k];
            loop {
                if tuple.iter().any(|&t| t >= frontier) {
                    if used == budget {
                        complete = false;
                        break 'rounds;
                    }
                    used += 1;
                    let out: Vec<u8> = (0..len)
                        .map(|i| {
                            let j = tuple
                                .iter()
                                .fold(0, |acc, &t| 4 * acc + functions[t][i] as usize);
                            g.eval_index(j)
                        })
                        .collect();
                    if !seen.contains_key(&out) {
                        seen.insert(out.clone(), functions.len());
                        functions.push(out);
                        provenance.push(Provenance::Composition {
                            generator: gi,
                            args: tuple.clone(),
                        });
                        if space == Some(functions.len()) {
                            break 'rounds;
                        }
                    }
                }
                if !next_tuple(&mut tuple, known) {
                    break;
                }
            }
        }
        frontier = known;
    }
    let functions = functions
        .into_iter()
        .map(|o| TruthTable::new(arity, o).expect("closure outputs are valid"))
        .collect();
    (
        ArityClosure {
            arity,
            functions,
            provenance,
            complete,
        },
        used,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvlogic::builtin;

    #[test]
    fn piccard_generators_give_all_unary() {
        let gens: Vec<TruthTable> = ["g1", "g2", "g3"]
            .iter()
            .map(|n| builtin(n).unwrap())
            .collect();
        let r = closure(&gens, 1, 100_000).unwrap();
        let a1 = r.arity(1).unwrap();
        assert_eq!(a1.functions.len(), 256);
        assert!(r.complete);
        for (i, f) in a1.functions.iter().enumerate() {
            assert_eq!(&a1.expression(&gens, i).to_table(1).unwrap(), f);
        }
    }

    #[test]
    fn two_generators_without_constants_stay_small() {
        let gens = vec![builtin("g2").unwrap()];
        let r = closure(&gens, 1, 1000).unwrap();
        assert_eq!(r.arity(1).unwrap().functions.len(), 2);
        assert!(r.complete);
    }

    #[test]
    fn budget_marks_incomplete() {
        let gens = vec![builtin("v4").unwrap()];
        let r = closure(&gens, 2, 10).unwrap();
        assert!(!r.complete);
        assert_eq!(r.compositions, 10);
    }

    #[test]
    fn v4_reaches_shift_and_negation() {
        let gens = vec![builtin("v4").unwrap()];
        let r = closure(&gens, 2, 200_000).unwrap();
        assert!(r.contains(&builtin("cyclic_shift").unwrap()));
        assert!(r.contains(&builtin("luk_neg").unwrap()));
        assert!(r.contains(&builtin("v4").unwrap()));
    }

    #[test]
    fn deterministic() {
        let gens = vec![builtin("cyclic_shift").unwrap(), builtin("max").unwrap()];
        let a = closure(&gens, 1, 50_000).unwrap();
        let b = closure(&gens, 1, 50_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(closure(&[], 1, 10).is_err());
        assert!(closure(&[builtin("max").unwrap()], 3, 10).is_err());
    }
}
