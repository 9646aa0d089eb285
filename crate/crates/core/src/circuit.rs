//! JSON circuits and their simulation.
//!
//! ```json
//! {"n": 1,
//!  "initial": {"P": [1, 0, 0, 1]},
//!  "require_cp": true,
//!  "steps": [
//!    {"unitary": [[[0.7071, 0], [0.7071, 0]], [[0.7071, 0], [-0.7071, 0]]]},
//!    {"measure": [P0, P1], "select": 0}
//!  ]}
//! ```
//!
//! Step forms: `named` (+ `params`), `unitary`, `kraus`, `gate`, `gks` + `tau`,
//! `liouvillian` + `t`, `synth` (builtin name, table, or a list of either with
//! as many entries as the arity) and `measure` (+ optional `select`). Every
//! step takes optional `targets`; the default is the leading ququats. Gates are
//! built and analysed while parsing.

use serde::Serialize;
use serde_json::Value;

use crate::channel::{
    analyze_gate, apply_linear, apply_nonlinear, embed_gate, gate_from_kraus, gate_from_unitary,
    measurement_gates, GateKind, GateMatrix,
};
use crate::decompose::named_gate;
use crate::error::{Error, Result};
use crate::io::{self, field, join, object};
use crate::linalg::RVector;
use crate::lindblad::{gks_matrix, gks_propagator, liouvillian_superop, propagator};
use crate::mvlogic::{builtin, synthesize_multi, TruthTable};
use crate::state::{basis_projector_state, density_to_pvec, validate_pvec, PauliVector};

#[derive(Debug, Clone, PartialEq)]
pub enum StepKind {
    Linear(GateMatrix),
    Measurement {
        branches: Vec<GateMatrix>,
        select: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub label: String,
    pub targets: Vec<usize>,
    pub kind: StepKind,
    pub completely_positive: bool,
    pub trace_preserving: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub initial: Option<PauliVector>,
    pub require_cp: bool,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub label: String,
    pub state: PauliVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub steps: Vec<StepRecord>,
    pub cumulative_probability: f64,
    pub final_state: PauliVector,
}

const STEP_KEYS: &[&str] = &[
    "named",
    "unitary",
    "kraus",
    "gate",
    "gks",
    "liouvillian",
    "synth",
    "measure",
];

fn parse_targets(
    o: &serde_json::Map<String, Value>,
    k: usize,
    n: usize,
    path: &str,
) -> Result<Vec<usize>> {
    match o.get("targets") {
        None if k <= n => Ok((0..k).collect()),
        None => Err(Error::schema(
            path,
            format!("step acts on {k} ququat(s), circuit has {n}"),
        )),
        Some(v) => {
            let p = join(path, "targets");
            let arr = v
                .as_array()
                .ok_or_else(|| Error::schema(&p, "expected an array of ququat indices"))?;
            arr.iter()
                .enumerate()
                .map(|(i, x)| io::parse_usize(x, &io::index(&p, i)))
                .collect()
        }
    }
}

fn table_ref(v: &Value, path: &str) -> Result<TruthTable> {
    match v {
        Value::String(s) => builtin(s),
        _ => io::parse_truth_table(v, path),
    }
}

fn time(o: &serde_json::Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let t = io::parse_f64(field(o, key, path)?, &join(path, key))?;
    if t < 0.0 {
        return Err(Error::schema(join(path, key), "must be non-negative"));
    }
    Ok(t)
}

fn build_square(o: &serde_json::Map<String, Value>, key: &str, path: &str) -> Result<GateMatrix> {
    let p = join(path, key);
    let v = &o[key];
    let g = match key {
        "named" => {
            let name = v
                .as_str()
                .ok_or_else(|| Error::schema(&p, "expected a gate name"))?;
            let params = match o.get("params") {
                Some(x) => io::parse_f64_list(x, &join(path, "params"))?,
                None => Vec::new(),
            };
            named_gate(name, &params)?
        }
        "unitary" => gate_from_unitary(&io::parse_cmatrix(v, &p)?)?,
        "kraus" => {
            let ops = io::parse_cmatrix_list(v, &p)?;
            gate_from_kraus(&crate::channel::KrausSet::new(ops)?)?
        }
        "gate" => io::parse_gate(v, &p)?,
        "gks" => {
            let model = io::parse_gks(v, &p)?;
            gks_propagator(&gks_matrix(&model)?, time(o, "tau", path)?)?
        }
        "liouvillian" => {
            let (h, vs) = io::parse_liouvillian(v, &p)?;
            propagator(&liouvillian_superop(&h, &vs)?, time(o, "t", path)?)?
        }
        "synth" => {
            let tables = match v {
                Value::Array(items) => items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| table_ref(x, &io::index(&p, i)))
                    .collect::<Result<Vec<_>>>()?,
                _ => vec![table_ref(v, &p)?],
            };
            synthesize_multi(&tables)?
        }
        _ => unreachable!("caller checks the key"),
    };
    if !g.is_square() {
        return Err(Error::schema(
            &p,
            format!(
                "gate of order ({}, {}) cannot be placed in a circuit",
                g.n_in(),
                g.n_out()
            ),
        ));
    }
    Ok(g)
}

fn parse_step(v: &Value, n: usize, require_cp: bool, path: &str) -> Result<Step> {
    let o = object(v, path)?;
    let present: Vec<&str> = STEP_KEYS
        .iter()
        .copied()
        .filter(|k| o.contains_key(*k))
        .collect();
    let key = match present.as_slice() {
        [k] => *k,
        [] => {
            return Err(Error::schema(
                path,
                format!("step needs one of {STEP_KEYS:?}"),
            ))
        }
        _ => {
            return Err(Error::schema(
                path,
                format!("step has several gate fields: {present:?}"),
            ))
        }
    };
    let step = if key == "measure" {
        let p = join(path, "measure");
        let projectors = io::parse_cmatrix_list(&o["measure"], &p)?;
        let gates = measurement_gates(&projectors)?;
        let k = gates[0].n_in();
        let targets = parse_targets(o, k, n, path)?;
        let select = match o.get("select") {
            Some(x) => {
                let s = io::parse_usize(x, &join(path, "select"))?;
                if s >= gates.len() {
                    return Err(Error::schema(
                        join(path, "select"),
                        format!("outcome {s} of {} projector(s)", gates.len()),
                    ));
                }
                Some(s)
            }
            None => None,
        };
        let branches = gates
            .iter()
            .map(|g| embed_gate(g, &targets, n))
            .collect::<Result<Vec<_>>>()?;
        let total = GateMatrix::sum(&branches)?;
        Step {
            label: "measure".into(),
            targets,
            trace_preserving: total.kind() == GateKind::TracePreserving,
            completely_positive: true,
            kind: StepKind::Measurement { branches, select },
        }
    } else {
        let g = build_square(o, key, path)?;
        let targets = parse_targets(o, g.n_in(), n, path)?;
        let full = embed_gate(&g, &targets, n)?;
        let cp = g.cp_verified() || analyze_gate(&g).completely_positive;
        let label = match (key, o.get("named").and_then(Value::as_str)) {
            ("named", Some(name)) => name.to_string(),
            _ => key.to_string(),
        };
        Step {
            label,
            targets,
            trace_preserving: full.kind() == GateKind::TracePreserving,
            completely_positive: cp,
            kind: StepKind::Linear(full),
        }
    };
    if require_cp && !step.completely_positive {
        return Err(Error::Contract(format!(
            "{path}: gate is not completely positive"
        )));
    }
    Ok(step)
}

pub fn parse_circuit(v: &Value) -> Result<Circuit> {
    let o = object(v, "")?;
    let n = io::parse_usize(field(o, "n", "")?, "n")?;
    if n == 0 {
        return Err(Error::schema("n", "circuit needs at least one ququat"));
    }
    let require_cp = match o.get("require_cp") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(Error::schema("require_cp", "expected a boolean")),
    };
    let initial = match o.get("initial") {
        None => None,
        Some(x) => {
            let io_ = object(x, "initial")?;
            let p = if io_.contains_key("rho") {
                density_to_pvec(&io::parse_density(x, "initial")?)?
            } else {
                io::parse_pvec(x, "initial")?
            };
            if p.n() != n {
                return Err(Error::schema(
                    "initial",
                    format!("state has {} ququat(s), circuit has {n}", p.n()),
                ));
            }
            Some(p)
        }
    };
    let steps_v = field(o, "steps", "")?
        .as_array()
        .ok_or_else(|| Error::schema("steps", "expected an array"))?;
    let steps = steps_v
        .iter()
        .enumerate()
        .map(|(i, s)| parse_step(s, n, require_cp, &io::index("steps", i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Circuit {
        n,
        initial,
        require_cp,
        steps,
    })
}

/// Runs from `initial`, or the circuit's own initial state, or pure `|0...0><0...0|`.
pub fn run_circuit(c: &Circuit, initial: Option<&PauliVector>) -> Result<RunRecord> {
    let mut state = match initial.or(c.initial.as_ref()) {
        Some(p) => p.clone(),
        None => basis_projector_state(c.n, 0)?,
    };
    if state.n() != c.n {
        return Err(Error::DimensionMismatch(format!(
            "state has {} ququat(s), circuit has {}",
            state.n(),
            c.n
        )));
    }
    let report = validate_pvec(&state);
    if !report.is_valid() {
        return Err(Error::InvalidValue(format!(
            "initial state is not a density matrix (min eigenvalue {:.3e}, trace {:.6})",
            report.min_eigenvalue, report.trace
        )));
    }
    let mut cumulative = 1.0;
    let mut records = Vec::with_capacity(c.steps.len());
    for step in &c.steps {
        let rec = match &step.kind {
            StepKind::Linear(g) => {
                state = apply_linear(g, &state)?;
                StepRecord {
                    label: step.label.clone(),
                    state: state.clone(),
                    probabilities: None,
                    selected: None,
                }
            }
            StepKind::Measurement { branches, select } => {
                let p = RVector::from_column_slice(state.coefficients());
                let probs: Vec<f64> = branches
                    .iter()
                    .map(|g| g.entries().row(0).dot(&p.transpose()))
                    .collect();
                match select {
                    Some(k) => {
                        let (next, prob) = apply_nonlinear(&branches[*k], &state)?;
                        cumulative *= prob;
                        state = next;
                    }
                    None => {
                        let total = GateMatrix::sum(branches)?;
                        let out = total.entries() * p;
                        state = PauliVector::new(c.n, out.iter().copied().collect())?;
                    }
                }
                StepRecord {
                    label: step.label.clone(),
                    state: state.clone(),
                    probabilities: Some(probs),
                    selected: *select,
                }
            }
        };
        records.push(rec);
    }
    Ok(RunRecord {
        steps: records,
        cumulative_probability: cumulative,
        final_state: state,
    })
}
