//! JSON documents.
//!
//! Complex scalars are `[re, im]`, matrices are row-major nested arrays.
//! Parsers walk a [`serde_json::Value`] so that schema errors name the
//! offending path (for example `steps[2].unitary[0][1]`).

use serde_json::{json, Map, Value};

use crate::channel::{GateKind, GateMatrix, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix, C64};
use crate::lindblad::GksModel;
use crate::mvlogic::TruthTable;
use crate::state::{DensityMatrix, PauliVector};

fn expect_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, format!("expected an array, found {}", kind_name(v))))
}

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(path, format!("expected an object, found {}", kind_name(v))))
}

pub fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field `{key}`")))
}

pub fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

pub fn parse_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::schema(path, format!("expected a number, found {}", kind_name(v))))
}

pub fn parse_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::schema(path, "expected a non-negative integer"))
}

pub fn parse_complex(v: &Value, path: &str) -> Result<C64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(C64::new(
            parse_f64(&a[0], &index(path, 0))?,
            parse_f64(&a[1], &index(path, 1))?,
        )),
        Value::Array(a) => Err(Error::schema(
            path,
            format!(
                "complex number must be [re, im], found {} element(s)",
                a.len()
            ),
        )),
        _ => Err(Error::schema(
            path,
            format!("complex number must be [re, im], found {}", kind_name(v)),
        )),
    }
}

fn parse_rows<T>(
    v: &Value,
    path: &str,
    mut entry: impl FnMut(&Value, &str) -> Result<T>,
) -> Result<(usize, usize, Vec<T>)> {
    let rows = expect_array(v, path)?;
    if rows.is_empty() {
        return Err(Error::schema(path, "matrix has no rows"));
    }
    let mut cols = None;
    let mut data = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rp = index(path, i);
        let r = expect_array(row, &rp)?;
        match cols {
            None => cols = Some(r.len()),
            Some(c) if c != r.len() => {
                return Err(Error::schema(
                    &rp,
                    format!("row has {} entries, expected {c}", r.len()),
                ))
            }
            _ => {}
        }
        for (j, x) in r.iter().enumerate() {
            data.push(entry(x, &index(&rp, j))?);
        }
    }
    Ok((rows.len(), cols.unwrap_or(0), data))
}

pub fn parse_cmatrix(v: &Value, path: &str) -> Result<CMatrix> {
    let (r, c, data) = parse_rows(v, path, parse_complex)?;
    Ok(CMatrix::from_row_iterator(r, c, data))
}

pub fn parse_rmatrix(v: &Value, path: &str) -> Result<RMatrix> {
    let (r, c, data) = parse_rows(v, path, parse_f64)?;
    Ok(RMatrix::from_row_iterator(r, c, data))
}

pub fn parse_cmatrix_list(v: &Value, path: &str) -> Result<Vec<CMatrix>> {
    expect_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_cmatrix(m, &index(path, i)))
        .collect()
}

pub fn parse_f64_list(v: &Value, path: &str) -> Result<Vec<f64>> {
    expect_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_f64(x, &index(path, i)))
        .collect()
}

// Shape problems become schema errors at `path`; numeric ones pass through.
fn at<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::DimensionMismatch(_) | Error::InvalidValue(_) | Error::InvalidIndex(_) => {
            Error::schema(path, e.to_string())
        }
        other => other,
    })
}

/// `{"n": n, "P": [...]}`.
pub fn parse_pvec(v: &Value, path: &str) -> Result<PauliVector> {
    let o = object(v, path)?;
    let p = parse_f64_list(field(o, "P", path)?, &join(path, "P"))?;
    let n = match o.get("n") {
        Some(x) => parse_usize(x, &join(path, "n"))?,
        None => crate::linalg::log4_exact(p.len())
            .ok_or_else(|| Error::schema(join(path, "P"), "length is not a power of 4"))?,
    };
    at(PauliVector::new(n, p), path)
}

/// `{"rho": matrix}`.
pub fn parse_density(v: &Value, path: &str) -> Result<DensityMatrix> {
    let o = object(v, path)?;
    let m = parse_cmatrix(field(o, "rho", path)?, &join(path, "rho"))?;
    at(DensityMatrix::new(m), &join(path, "rho"))
}

/// `{"n_in", "n_out", "kind", "entries"}`; `kind` is optional and, when
/// given as `trace_preserving`, must agree with row 0.
pub fn parse_gate(v: &Value, path: &str) -> Result<GateMatrix> {
    let o = object(v, path)?;
    let entries = parse_rmatrix(field(o, "entries", path)?, &join(path, "entries"))?;
    let n_out = match o.get("n_out") {
        Some(x) => parse_usize(x, &join(path, "n_out"))?,
        None => crate::linalg::log4_exact(entries.nrows())
            .ok_or_else(|| Error::schema(join(path, "entries"), "row count is not a power of 4"))?,
    };
    let n_in = match o.get("n_in") {
        Some(x) => parse_usize(x, &join(path, "n_in"))?,
        None => crate::linalg::log4_exact(entries.ncols()).ok_or_else(|| {
            Error::schema(join(path, "entries"), "column count is not a power of 4")
        })?,
    };
    let kind = match o.get("kind") {
        None => None,
        Some(Value::String(s)) if s == "trace_preserving" => Some(GateKind::TracePreserving),
        Some(Value::String(s)) if s == "trace_decreasing" => Some(GateKind::TraceDecreasing),
        Some(_) => {
            return Err(Error::schema(
                join(path, "kind"),
                "expected \"trace_preserving\" or \"trace_decreasing\"",
            ))
        }
    };
    let g = match kind {
        Some(k) => GateMatrix::with_kind(n_in, n_out, k, entries),
        None => GateMatrix::new(n_in, n_out, entries),
    };
    match g {
        Err(Error::DimensionMismatch(m)) => Err(Error::schema(join(path, "entries"), m)),
        other => other,
    }
}

/// `{"ops": [matrices]}`.
pub fn parse_kraus(v: &Value, path: &str) -> Result<KrausSet> {
    let o = object(v, path)?;
    let ops = parse_cmatrix_list(field(o, "ops", path)?, &join(path, "ops"))?;
    at(KrausSet::new(ops), &join(path, "ops"))
}

/// `{"H": [h1, h2, h3], "C": 3x3 complex matrix}`.
pub fn parse_gks(v: &Value, path: &str) -> Result<GksModel> {
    let o = object(v, path)?;
    let h = parse_f64_list(field(o, "H", path)?, &join(path, "H"))?;
    if h.len() != 3 {
        return Err(Error::schema(
            join(path, "H"),
            "expected three coefficients",
        ));
    }
    let c = parse_cmatrix(field(o, "C", path)?, &join(path, "C"))?;
    if c.shape() != (3, 3) {
        return Err(Error::schema(join(path, "C"), "expected a 3x3 matrix"));
    }
    Ok(GksModel::new([h[0], h[1], h[2]], c))
}

/// `{"H": matrix, "V": [matrices]}`.
pub fn parse_liouvillian(v: &Value, path: &str) -> Result<(CMatrix, Vec<CMatrix>)> {
    let o = object(v, path)?;
    let h = parse_cmatrix(field(o, "H", path)?, &join(path, "H"))?;
    let vs = match o.get("V") {
        Some(x) => parse_cmatrix_list(x, &join(path, "V"))?,
        None => Vec::new(),
    };
    Ok((h, vs))
}

/// `{"arity": n, "outputs": [...]}`.
pub fn parse_truth_table(v: &Value, path: &str) -> Result<TruthTable> {
    let o = object(v, path)?;
    let arity = parse_usize(field(o, "arity", path)?, &join(path, "arity"))?;
    let outs = expect_array(field(o, "outputs", path)?, &join(path, "outputs"))?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = index(&join(path, "outputs"), i);
            parse_usize(x, &p).and_then(|k| {
                u8::try_from(k)
                    .ok()
                    .filter(|&k| k <= 3)
                    .ok_or_else(|| Error::schema(&p, "value must be in 0..=3"))
            })
        })
        .collect::<Result<Vec<u8>>>()?;
    at(TruthTable::new(arity, outs), path)
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn cmatrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn rmatrix_json(m: &RMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn pvec_json(p: &PauliVector) -> Value {
    json!({"n": p.n(), "P": p.coefficients()})
}

pub fn gate_json(g: &GateMatrix) -> Value {
    json!({
        "n_in": g.n_in(),
        "n_out": g.n_out(),
        "kind": g.kind().as_str(),
        "cp_verified": g.cp_verified(),
        "entries": rmatrix_json(g.entries()),
    })
}

pub fn kraus_json(k: &KrausSet) -> Value {
    json!({"ops": k.ops().iter().map(cmatrix_json).collect::<Vec<_>>()})
}

pub fn truth_table_json(t: &TruthTable) -> Value {
    json!({"arity": t.arity(), "outputs": t.outputs()})
}

/// Serde adapter for complex matrices in the `[re, im]` nested-array format.
pub mod cmatrix_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        cmatrix_json(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let v = Value::deserialize(d)?;
        parse_cmatrix(&v, "").map_err(serde::de::Error::custom)
    }
}
