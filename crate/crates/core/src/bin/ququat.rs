use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ququat::channel::{
    adjoint_gate, analyze_gate, apply_linear, apply_nonlinear, check_reversible,
    check_reversible_superop, compose, gate_from_kraus, gate_from_unitary, measurement_gates,
    tensor_gates, GateMatrix, KrausSet,
};
use ququat::circuit::{parse_circuit, run_circuit};
use ququat::config::{set_tolerances, Tolerances};
use ququat::decompose::{
    euler_angles, named_gate, polar_gate, split_translation, svd_rect_gate, PolarSide,
};
use ququat::io::{self, gate_json, pvec_json};
use ququat::linalg::{log4_exact, CMatrix};
use ququat::lindblad::{gks_matrix, gks_propagator, liouvillian_superop, propagator};
use ququat::mvlogic::{
    builtin, closure, dnf, dnf_pruned, synthesize_multi, synthesize_unital_extended_at,
    verify_realization, AncillaPosition, TruthTable, VerifyMode,
};
use ququat::state::{density_to_pvec, pvec_to_density, validate_density};
use ququat::universality::{
    left_mult_superop, lie_closure_dim, matrix_unit, right_mult_superop, swap_pseudo_gate,
    trace_decreasing_bound, weyl_generators,
};
use ququat::{random, Error, Result};

#[derive(Parser)]
#[command(
    name = "ququat",
    version,
    about = "Pauli-vector states, gate matrices and four-valued logic"
)]
struct Cli {
    /// Tolerance for algebraic identities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Digits after the decimal point in text output.
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,
    /// Seed for the `random` subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between density matrices and Pauli vectors, or validate a state.
    #[command(subcommand)]
    State(StateCmd),
    /// Build, analyse, decompose and combine gate matrices.
    #[command(subcommand)]
    Gate(GateCmd),
    /// Measurement gates for a projector family, with probabilities for an optional state.
    Measure(Input),
    /// Reversibility of a Kraus channel on a projected subspace.
    Reversible(Input),
    /// Four-valued truth tables, normal forms, closure and synthesis.
    #[command(subcommand)]
    Mvlogic(MvCmd),
    /// Pseudo-gates, Lie closure and the swap.
    #[command(subcommand)]
    Universality(UniCmd),
    /// Run a circuit document.
    Simulate {
        /// Circuit JSON (stdin when omitted).
        input: Option<PathBuf>,
        /// Initial state document overriding the circuit's own.
        #[arg(long)]
        initial: Option<PathBuf>,
    },
    /// Seeded random objects.
    #[command(subcommand)]
    Random(RandomCmd),
    Version,
}

#[derive(Args)]
struct Input {
    /// JSON document (stdin when omitted or `-`).
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StateCmd {
    /// `{"rho": ...}` to `{"n", "P"}` and back.
    Convert {
        input: Option<PathBuf>,
        /// Also print the round-bracket coefficients `P_mu / sqrt(2^n)`.
        #[arg(long)]
        round: bool,
    },
    Validate(Input),
}

#[derive(Subcommand)]
enum GateCmd {
    /// From `{"U": matrix}` or a bare matrix.
    FromUnitary(Input),
    /// From `{"ops": [matrices]}`.
    FromKraus(Input),
    /// From a GKS model `{"H": [3], "C": 3x3}` or Liouvillian ingredients `{"H": matrix, "V": [...]}`.
    FromLindblad {
        input: Option<PathBuf>,
        #[arg(long)]
        tau: f64,
    },
    /// Elementary single-ququat gate by name.
    Named {
        name: String,
        params: Vec<f64>,
    },
    Analyze(Input),
    Decompose {
        input: Option<PathBuf>,
        #[command(flatten)]
        which: DecomposeKind,
        /// Left polar form `S' U` instead of `U S`.
        #[arg(long)]
        left: bool,
    },
    Adjoint(Input),
    /// `second . first`.
    Compose {
        second: PathBuf,
        first: PathBuf,
    },
    Tensor {
        a: PathBuf,
        b: PathBuf,
    },
    /// Apply a gate to a state; trace-decreasing gates renormalize.
    Apply {
        gate: PathBuf,
        state: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DecomposeKind {
    #[arg(long)]
    svd: bool,
    #[arg(long)]
    polar: bool,
    #[arg(long)]
    euler: bool,
    #[arg(long)]
    translation: bool,
}

#[derive(Subcommand)]
enum MvCmd {
    /// Print a table. TABLE is a builtin name, an inline base-4 string or a file.
    Table { table: String },
    Dnf {
        table: String,
        /// Drop the terms whose value is 0.
        #[arg(long)]
        pruned: bool,
    },
    Closure {
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 1)]
        max_arity: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Gate realizing one or more tables of a common arity.
    Synth {
        #[arg(required = true)]
        tables: Vec<String>,
        /// Unital realization with one ancilla ququat.
        #[arg(long)]
        extended: bool,
        /// Put the ancilla first.
        #[arg(long, requires = "extended")]
        leading: bool,
    },
    Verify {
        #[arg(long)]
        gate: PathBuf,
        #[arg(required = true)]
        tables: Vec<String>,
        #[arg(long)]
        extended: bool,
        #[arg(long, requires = "extended")]
        leading: bool,
    },
}

#[derive(Subcommand)]
enum UniCmd {
    /// Pseudo-gate of `{"A": matrix}` (left multiplication unless `--right`).
    Pseudo {
        input: Option<PathBuf>,
        #[arg(long)]
        right: bool,
    },
    /// Real dimension of the Lie closure of `{"generators": [matrices]}` or a preset.
    ClosureDim {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    Swap,
    /// `sum_mu E_{0 mu}^2` for a gate.
    Bound(Input),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// All 16 matrix units on one ququat.
    Weyl4,
    /// Matrix units on each of two ququats plus `E33 (x) E33`.
    Entangling,
}

#[derive(Subcommand)]
enum RandomCmd {
    State {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    Unitary {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    Gate {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        kraus: usize,
    },
}

fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::schema(p.display().to_string(), e.to_string())),
    }
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::schema("<stdin>", e.to_string()))?;
    Ok(s)
}

fn read_json(path: Option<&Path>) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        let name = path.map_or("<stdin>".to_string(), |p| p.display().to_string());
        Error::schema(name, format!("invalid JSON: {e}"))
    })
}

fn read_gate(path: &Path) -> Result<GateMatrix> {
    io::parse_gate(&read_json(Some(path))?, "")
}

fn read_state(v: &Value) -> Result<ququat::PauliVector> {
    let o = io::object(v, "")?;
    if o.contains_key("rho") {
        density_to_pvec(&io::parse_density(v, "")?)
    } else {
        io::parse_pvec(v, "")
    }
}

/// Builtin name, inline base-4 string, or a file holding JSON tables or base-4 lines.
fn resolve_tables(arg: &str) -> Result<Vec<TruthTable>> {
    if let Ok(t) = builtin(arg) {
        return Ok(vec![t]);
    }
    let path = Path::new(arg);
    if path.exists() {
        let text = read_text(Some(path))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::schema(arg, format!("invalid JSON: {e}")))?;
            return match &v {
                Value::Array(items) => items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| io::parse_truth_table(x, &io::index("", i)))
                    .collect(),
                _ => Ok(vec![io::parse_truth_table(&v, "")?]),
            };
        }
        return text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(base4_table)
            .collect();
    }
    if arg.chars().all(|c| c.is_ascii_digit()) {
        return Ok(vec![base4_table(arg)?]);
    }
    Err(Error::UnknownName(arg.to_string()))
}

fn base4_table(line: &str) -> Result<TruthTable> {
    let s = line.trim();
    let arity =
        log4_exact(s.len()).ok_or_else(|| Error::schema(s, "table length is not a power of 4"))?;
    TruthTable::from_base4(arity, s)
}

fn table_list(specs: &[String]) -> Result<Vec<TruthTable>> {
    let mut out = Vec::new();
    for s in specs {
        out.extend(resolve_tables(s)?);
    }
    Ok(out)
}

fn gate_with_report(g: &GateMatrix) -> Value {
    let mut v = gate_json(g);
    v["report"] = serde_json::to_value(analyze_gate(g)).expect("report serializes");
    v
}

fn factors_json(f: Vec<(&'static str, &GateMatrix)>) -> Value {
    Value::Array(
        f.into_iter()
            .map(|(name, g)| json!({"name": name, "gate": gate_json(g)}))
            .collect(),
    )
}

fn run(cli: &Cli) -> Result<Value> {
    Ok(match &cli.command {
        Command::State(StateCmd::Convert { input, round }) => {
            let v = read_json(input.as_deref())?;
            let o = io::object(&v, "")?;
            if o.contains_key("rho") {
                let p = density_to_pvec(&io::parse_density(&v, "")?)?;
                let mut out = pvec_json(&p);
                if *round {
                    out["round"] = json!(p.round_bracket());
                }
                out
            } else {
                let p = io::parse_pvec(&v, "")?;
                let (rho, report) = pvec_to_density(&p)?;
                json!({"rho": io::cmatrix_json(rho.matrix()), "report": report})
            }
        }
        Command::State(StateCmd::Validate(i)) => {
            let v = read_json(i.input.as_deref())?;
            let o = io::object(&v, "")?;
            let report = if o.contains_key("rho") {
                validate_density(&io::parse_density(&v, "")?)
            } else {
                pvec_to_density(&io::parse_pvec(&v, "")?)?.1
            };
            json!({"valid": report.is_valid(), "report": report})
        }
        Command::Gate(cmd) => gate_cmd(cmd)?,
        Command::Measure(i) => {
            let v = read_json(i.input.as_deref())?;
            let o = io::object(&v, "")?;
            let projectors = io::parse_cmatrix_list(io::field(o, "projectors", "")?, "projectors")?;
            let gates = measurement_gates(&projectors)?;
            let mut out = json!({"gates": gates.iter().map(gate_json).collect::<Vec<_>>()});
            if let Some(sv) = o.get("state") {
                let p = read_state(sv).map_err(|e| match e {
                    Error::Schema { path, message } => {
                        Error::schema(io::join("state", &path), message)
                    }
                    other => other,
                })?;
                let mut branches = Vec::new();
                for g in &gates {
                    let prob = (g.entries().row(0)
                        * nalgebra::DVector::from_column_slice(p.coefficients()))[0];
                    let post = match apply_nonlinear(g, &p) {
                        Ok((s, _)) => pvec_json(&s),
                        Err(Error::ZeroProbability { .. }) => Value::Null,
                        Err(e) => return Err(e),
                    };
                    branches.push(json!({"probability": prob, "state": post}));
                }
                out["branches"] = Value::Array(branches);
            }
            out
        }
        Command::Reversible(i) => {
            let v = read_json(i.input.as_deref())?;
            let o = io::object(&v, "")?;
            let k = KrausSet::new(io::parse_cmatrix_list(io::field(o, "ops", "")?, "ops")?)?;
            let p = io::parse_cmatrix(io::field(o, "projector", "")?, "projector")?;
            let cert = check_reversible(&k, &p)?;
            let g = gate_from_kraus(&k)?;
            let gm = gate_from_kraus(&KrausSet::new(vec![p])?)?;
            let (ok, gamma) = check_reversible_superop(&g, &gm)?;
            json!({"kraus": cert, "superoperator": {"reversible": ok, "gamma": gamma}})
        }
        Command::Mvlogic(cmd) => mv_cmd(cmd)?,
        Command::Universality(cmd) => uni_cmd(cmd)?,
        Command::Simulate { input, initial } => {
            let c = parse_circuit(&read_json(input.as_deref())?)?;
            let init = match initial {
                Some(p) => Some(read_state(&read_json(Some(p))?)?),
                None => None,
            };
            serde_json::to_value(run_circuit(&c, init.as_ref())?).expect("record serializes")
        }
        Command::Random(cmd) => {
            let mut rng = random::rng(cli.seed);
            match cmd {
                RandomCmd::State { n } => pvec_json(&random::random_pvec(&mut rng, *n)),
                RandomCmd::Unitary { n } => {
                    json!({"U": io::cmatrix_json(&random::haar_unitary(&mut rng, 1 << n))})
                }
                RandomCmd::Gate { n, kraus } => {
                    let k = random::random_kraus(&mut rng, *n, *n, *kraus)?;
                    json!({"kraus": io::kraus_json(&k), "gate": gate_json(&gate_from_kraus(&k)?)})
                }
            }
        }
        Command::Version => json!({"name": "ququat", "version": env!("CARGO_PKG_VERSION")}),
    })
}

fn gate_cmd(cmd: &GateCmd) -> Result<Value> {
    Ok(match cmd {
        GateCmd::FromUnitary(i) => {
            let v = read_json(i.input.as_deref())?;
            let u = match &v {
                Value::Object(o) => io::parse_cmatrix(io::field(o, "U", "")?, "U")?,
                _ => io::parse_cmatrix(&v, "")?,
            };
            gate_with_report(&gate_from_unitary(&u)?)
        }
        GateCmd::FromKraus(i) => {
            let k = io::parse_kraus(&read_json(i.input.as_deref())?, "")?;
            gate_with_report(&gate_from_kraus(&k)?)
        }
        GateCmd::FromLindblad { input, tau } => {
            let v = read_json(input.as_deref())?;
            let o = io::object(&v, "")?;
            if o.contains_key("C") {
                let gen = gks_matrix(&io::parse_gks(&v, "")?)?;
                let mut out = gate_with_report(&gks_propagator(&gen, *tau)?);
                out["generator"] = io::rmatrix_json(gen.matrix());
                out["c_positive"] = json!(gen.c_positive);
                out
            } else {
                let (h, vs) = io::parse_liouvillian(&v, "")?;
                gate_with_report(&propagator(&liouvillian_superop(&h, &vs)?, *tau)?)
            }
        }
        GateCmd::Named { name, params } => gate_with_report(&named_gate(name, params)?),
        GateCmd::Analyze(i) => {
            let g = io::parse_gate(&read_json(i.input.as_deref())?, "")?;
            serde_json::to_value(analyze_gate(&g)).expect("report serializes")
        }
        GateCmd::Decompose { input, which, left } => {
            let g = io::parse_gate(&read_json(input.as_deref())?, "")?;
            if which.svd {
                let s = svd_rect_gate(&g)?;
                json!({"singular_values": s.singular_values, "factors": factors_json(s.factors())})
            } else if which.polar {
                let side = if *left {
                    PolarSide::Left
                } else {
                    PolarSide::Right
                };
                let p = polar_gate(&g, side)?;
                json!({"side": side, "factors": factors_json(p.factors())})
            } else if which.euler {
                serde_json::to_value(euler_angles(&g)?).expect("angles serialize")
            } else {
                let s = split_translation(&g)?;
                json!({"T": s.t.as_slice(), "R": io::rmatrix_json(&s.r)})
            }
        }
        GateCmd::Adjoint(i) => gate_json(&adjoint_gate(&io::parse_gate(
            &read_json(i.input.as_deref())?,
            "",
        )?)?),
        GateCmd::Compose { second, first } => {
            gate_json(&compose(&read_gate(second)?, &read_gate(first)?)?)
        }
        GateCmd::Tensor { a, b } => gate_json(&tensor_gates(&read_gate(a)?, &read_gate(b)?)),
        GateCmd::Apply { gate, state } => {
            let g = read_gate(gate)?;
            let p = read_state(&read_json(Some(state))?)?;
            match apply_linear(&g, &p) {
                Ok(out) => json!({"state": pvec_json(&out), "probability": 1.0}),
                Err(Error::TraceDecreasingGate) => {
                    let (out, prob) = apply_nonlinear(&g, &p)?;
                    json!({"state": pvec_json(&out), "probability": prob})
                }
                Err(e) => return Err(e),
            }
        }
    })
}

fn mv_cmd(cmd: &MvCmd) -> Result<Value> {
    Ok(match cmd {
        MvCmd::Table { table } => {
            let ts = resolve_tables(table)?;
            Value::Array(
                ts.iter()
                    .map(|t| json!({"arity": t.arity(), "outputs": t.outputs(), "base4": t.to_base4()}))
                    .collect(),
            )
        }
        MvCmd::Dnf { table, pruned } => {
            let ts = resolve_tables(table)?;
            let t = single(&ts)?;
            let e = if *pruned { dnf_pruned(t) } else { dnf(t) };
            let check = e.to_table(t.arity())? == *t;
            json!({"expression": e, "reevaluates": check})
        }
        MvCmd::Closure {
            gens,
            max_arity,
            budget,
        } => {
            let tables = table_list(gens)?;
            let r = closure(&tables, *max_arity, *budget)?;
            json!({
                "complete": r.complete,
                "compositions": r.compositions,
                "arities": r.arities.iter().map(|a| json!({
                    "arity": a.arity,
                    "count": a.functions.len(),
                    "complete": a.complete,
                    "functions": a.functions.iter().map(|f| f.to_base4()).collect::<Vec<_>>(),
                    "provenance": a.provenance,
                })).collect::<Vec<_>>(),
            })
        }
        MvCmd::Synth {
            tables,
            extended,
            leading,
        } => {
            let ts = table_list(tables)?;
            let g = if *extended {
                synthesize_unital_extended_at(single(&ts)?, position(*leading))?
            } else {
                synthesize_multi(&ts)?
            };
            gate_with_report(&g)
        }
        MvCmd::Verify {
            gate,
            tables,
            extended,
            leading,
        } => {
            let g = read_gate(gate)?;
            let ts = table_list(tables)?;
            let mode = if *extended {
                VerifyMode::Extended(position(*leading))
            } else {
                VerifyMode::Plain
            };
            json!({"realizes": verify_realization(&g, &ts, mode)?})
        }
    })
}

fn single(ts: &[TruthTable]) -> Result<&TruthTable> {
    match ts {
        [t] => Ok(t),
        _ => Err(Error::InvalidValue(format!(
            "expected one table, got {}",
            ts.len()
        ))),
    }
}

fn position(leading: bool) -> AncillaPosition {
    if leading {
        AncillaPosition::Leading
    } else {
        AncillaPosition::Trailing
    }
}

fn entangling_preset() -> Vec<CMatrix> {
    let id = CMatrix::identity(4, 4);
    let mut gens = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            gens.push(matrix_unit(4, a, b).kronecker(&id));
            gens.push(id.kronecker(&matrix_unit(4, a, b)));
        }
    }
    gens.push(matrix_unit(4, 3, 3).kronecker(&matrix_unit(4, 3, 3)));
    gens
}

fn uni_cmd(cmd: &UniCmd) -> Result<Value> {
    Ok(match cmd {
        UniCmd::Pseudo { input, right } => {
            let v = read_json(input.as_deref())?;
            let a = match &v {
                Value::Object(o) => io::parse_cmatrix(io::field(o, "A", "")?, "A")?,
                _ => io::parse_cmatrix(&v, "")?,
            };
            let p = if *right {
                right_mult_superop(&a)?
            } else {
                left_mult_superop(&a)?
            };
            json!({"n": p.n(), "kind": p.kind(), "matrix": io::cmatrix_json(p.matrix())})
        }
        UniCmd::ClosureDim {
            input,
            preset,
            max_iter,
        } => {
            let gens = match preset {
                Some(Preset::Weyl4) => weyl_generators(4)?.units,
                Some(Preset::Entangling) => entangling_preset(),
                None => {
                    let v = read_json(input.as_deref())?;
                    match &v {
                        Value::Object(o) => {
                            io::parse_cmatrix_list(io::field(o, "generators", "")?, "generators")?
                        }
                        _ => io::parse_cmatrix_list(&v, "")?,
                    }
                }
            };
            serde_json::to_value(lie_closure_dim(&gens, *max_iter)?).expect("closure serializes")
        }
        UniCmd::Swap => {
            let s = swap_pseudo_gate();
            json!({"n": 2, "matrix": io::rmatrix_json(&s.matrix().map(|z| z.re))})
        }
        UniCmd::Bound(i) => {
            let g = io::parse_gate(&read_json(i.input.as_deref())?, "")?;
            let (ok, value) = trace_decreasing_bound(&g);
            json!({"bounded": ok, "value": value})
        }
    })
}

fn is_real_matrix(rows: &[Value]) -> bool {
    !rows.is_empty()
        && rows.iter().all(|r| {
            r.as_array()
                .is_some_and(|c| !c.is_empty() && c.iter().all(Value::is_number))
        })
}

fn is_complex_matrix(rows: &[Value]) -> bool {
    !rows.is_empty()
        && rows.iter().all(|r| {
            r.as_array().is_some_and(|c| {
                !c.is_empty()
                    && c.iter().all(|z| {
                        z.as_array()
                            .is_some_and(|p| p.len() == 2 && p.iter().all(Value::is_number))
                    })
            })
        })
}

fn num(v: &Value, prec: usize) -> String {
    match v.as_f64() {
        Some(x) if v.is_f64() => format!("{x:.prec$}"),
        _ => v.to_string(),
    }
}

fn aligned(cells: Vec<Vec<String>>, pad: &str) -> String {
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .map(|row| {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            format!("{pad}{}", line.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Human-readable rendering of a JSON result; never parsed back.
fn render_text(v: &Value, prec: usize, pad: &str) -> String {
    match v {
        Value::Array(rows) if is_real_matrix(rows) => aligned(
            rows.iter()
                .map(|r| r.as_array().unwrap().iter().map(|x| num(x, prec)).collect())
                .collect(),
            pad,
        ),
        Value::Array(rows) if is_complex_matrix(rows) => aligned(
            rows.iter()
                .map(|r| {
                    r.as_array()
                        .unwrap()
                        .iter()
                        .map(|z| {
                            let re = z[0].as_f64().unwrap_or(0.0);
                            let im = z[1].as_f64().unwrap_or(0.0);
                            format!("{re:.prec$}{im:+.prec$}i")
                        })
                        .collect()
                })
                .collect(),
            pad,
        ),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => format!(
            "{pad}{}",
            items
                .iter()
                .map(|x| scalar(x, prec))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        Value::Array(items) => items
            .iter()
            .map(|x| render_text(x, prec, pad))
            .collect::<Vec<_>>()
            .join(&format!("\n{pad}--\n")),
        Value::Object(o) => o
            .iter()
            .map(|(k, x)| {
                if x.is_array() || x.is_object() {
                    format!("{pad}{k}:\n{}", render_text(x, prec, &format!("{pad}  ")))
                } else {
                    format!("{pad}{k}: {}", scalar(x, prec))
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => format!("{pad}{}", scalar(v, prec)),
    }
}

fn scalar(v: &Value, prec: usize) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(_) => num(v, prec),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        eprintln!("error: --tol must be a positive number");
        return ExitCode::from(2);
    }
    let defaults = Tolerances::default();
    set_tolerances(Tolerances {
        algebraic: cli.tol,
        psd: defaults.psd.max(cli.tol),
        round_trip: defaults.round_trip,
    });
    match run(&cli) {
        Ok(v) => {
            let out = match (cli.format, &cli.command) {
                (Format::Text, Command::Mvlogic(MvCmd::Table { .. })) => v
                    .as_array()
                    .map(|ts| {
                        ts.iter()
                            .map(|t| t["base4"].as_str().unwrap_or_default().to_string())
                            .collect::<Vec<_>>()
                            .join("\n")
                    })
                    .unwrap_or_default(),
                (Format::Text, _) => render_text(&v, cli.precision, ""),
                (Format::Json, _) => serde_json::to_string_pretty(&v).expect("values serialize"),
            };
            // A closed pipe (`ququat ... | head`) is not an error.
            match writeln!(std::io::stdout().lock(), "{out}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
