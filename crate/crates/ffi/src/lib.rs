//! C ABI over the `ququat` crate.
//!
//! Gates and Pauli vectors are exposed as opaque handles owned by the caller
//! and released with [`qq_gate_free`] / [`qq_state_free`]. Every fallible call
//! returns a [`QqStatus`]; on failure the message is available from
//! [`qq_last_error`] until the next failing call on the same thread. Strings
//! returned through `char **` out-parameters are released with
//! [`qq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;

use ququat::channel::{
    analyze_gate, apply_linear, apply_nonlinear, compose, gate_from_kraus, gate_from_unitary,
    tensor_gates,
};
use ququat::decompose::named_gate;
use ququat::io::{gate_json, parse_cmatrix, parse_gate, parse_kraus, parse_pvec, pvec_json};
use ququat::linalg::log4_exact;
use ququat::mvlogic::{builtin, synthesize_multi, verify_realization, TruthTable, VerifyMode};
use ququat::{Error, GateMatrix, PauliVector};

/// Opaque gate matrix.
pub struct QqGate(GateMatrix);

/// Opaque Pauli vector.
pub struct QqState(PauliVector);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, unknown name or mismatched dimensions.
    Schema = 3,
    /// Input violates a physical or numerical precondition.
    Contract = 4,
    ZeroProbability = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => QqStatus::Schema,
            4 => QqStatus::ZeroProbability,
            _ => QqStatus::Contract,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> QqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QqStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(QqStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn json(p: *const c_char, what: &str) -> Result<Value, Failure> {
    let s = text(p, what)?;
    serde_json::from_str(s)
        .map_err(|e| Failure(QqStatus::Schema, format!("{what}: invalid JSON: {e}")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    let c = CString::new(s).map_err(|e| Failure(QqStatus::Contract, e.to_string()))?;
    put(out, c.into_raw(), "out")
}

unsafe fn put_gate(out: *mut *mut QqGate, g: GateMatrix) -> Outcome {
    put(out, Box::into_raw(Box::new(QqGate(g))), "out")
}

unsafe fn put_state(out: *mut *mut QqState, p: PauliVector) -> Outcome {
    put(out, Box::into_raw(Box::new(QqState(p))), "out")
}

/// Message of the last failing call on this thread, or null. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn qq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_free(g: *mut QqGate) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qq_state_free(s: *mut QqState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Gate from its JSON document `{"n_in", "n_out", "kind"?, "entries"}`.
///
/// # Safety
/// `doc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_from_json(doc: *const c_char, out: *mut *mut QqGate) -> QqStatus {
    guard(|| {
        let v = json(doc, "doc")?;
        put_gate(out, parse_gate(&v, "")?)
    })
}

/// Gate of a unitary given as a JSON complex matrix (`{"U": m}` or bare `m`).
///
/// # Safety
/// `doc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_from_unitary_json(
    doc: *const c_char,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let v = json(doc, "doc")?;
        let (m, path) = match v.get("U") {
            Some(u) => (u, "/U"),
            None => (&v, ""),
        };
        let u = parse_cmatrix(m, path)?;
        put_gate(out, gate_from_unitary(&u)?)
    })
}

/// Gate of a Kraus set `{"ops": [matrices]}`.
///
/// # Safety
/// `doc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_from_kraus_json(
    doc: *const c_char,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let v = json(doc, "doc")?;
        let k = parse_kraus(&v, "")?;
        put_gate(out, gate_from_kraus(&k)?)
    })
}

/// Elementary single-ququat gate by name (`not`, `hadamard`, `rot1`, ...).
///
/// # Safety
/// `name` must be a NUL-terminated string; `params` must point to `n_params`
/// doubles (or be null when `n_params` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_named(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let name = text(name, "name")?;
        let params = if n_params == 0 {
            &[][..]
        } else if params.is_null() {
            return Err(null("params"));
        } else {
            std::slice::from_raw_parts(params, n_params)
        };
        put_gate(out, named_gate(name, params)?)
    })
}

/// Gate realizing one or more four-valued truth tables of a common arity.
/// `tables` is a comma-separated list of builtin names or base-4 strings.
///
/// # Safety
/// `tables` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_synthesize(
    tables: *const c_char,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let tables = parse_tables(text(tables, "tables")?)?;
        put_gate(out, synthesize_multi(&tables)?)
    })
}

/// Whether `g` realizes the tables exactly on computational inputs.
///
/// # Safety
/// `g` must be a live handle; `tables` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_verify(
    g: *const QqGate,
    tables: *const c_char,
    out: *mut bool,
) -> QqStatus {
    guard(|| {
        let g = borrow(g, "gate")?;
        let tables = parse_tables(text(tables, "tables")?)?;
        let ok = verify_realization(&g.0, &tables, VerifyMode::Plain)?;
        put(out, ok, "out")
    })
}

fn parse_tables(list: &str) -> Result<Vec<TruthTable>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            if let Ok(t) = builtin(s) {
                return Ok(t);
            }
            let arity = log4_exact(s.len())
                .ok_or_else(|| Error::schema(s, "table length is not a power of 4"))?;
            Ok(TruthTable::from_base4(arity, s)?)
        })
        .collect()
}

/// JSON document of a gate.
///
/// # Safety
/// `g` must be a live handle; `out` writable. Free the result with
/// [`qq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qq_gate_to_json(g: *const QqGate, out: *mut *mut c_char) -> QqStatus {
    guard(|| {
        let g = borrow(g, "gate")?;
        put_string(out, gate_json(&g.0).to_string())
    })
}

/// Property report of a gate as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_analyze(g: *const QqGate, out: *mut *mut c_char) -> QqStatus {
    guard(|| {
        let g = borrow(g, "gate")?;
        let report = serde_json::to_string(&analyze_gate(&g.0))
            .map_err(|e| Failure(QqStatus::Contract, e.to_string()))?;
        put_string(out, report)
    })
}

/// Number of input and output ququats.
///
/// # Safety
/// `g` must be a live handle; `n_in` and `n_out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_dims(
    g: *const QqGate,
    n_in: *mut usize,
    n_out: *mut usize,
) -> QqStatus {
    guard(|| {
        let g = borrow(g, "gate")?;
        put(n_in, g.0.n_in(), "n_in")?;
        put(n_out, g.0.n_out(), "n_out")
    })
}

/// Copy the `4^n_out x 4^n_in` entries in row-major order into `buf`.
///
/// # Safety
/// `g` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_entries(g: *const QqGate, buf: *mut f64, len: usize) -> QqStatus {
    guard(|| {
        let e = borrow(g, "gate")?.0.entries();
        let need = e.nrows() * e.ncols();
        if len < need {
            return Err(Failure(
                QqStatus::BufferTooSmall,
                format!("need {need} doubles, got {len}"),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (k, x) in dst.iter_mut().enumerate() {
            *x = e[(k / e.ncols(), k % e.ncols())];
        }
        Ok(())
    })
}

/// `second . first`.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_compose(
    second: *const QqGate,
    first: *const QqGate,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let g = compose(&borrow(second, "second")?.0, &borrow(first, "first")?.0)?;
        put_gate(out, g)
    })
}

/// `a (x) b`.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_tensor(
    a: *const QqGate,
    b: *const QqGate,
    out: *mut *mut QqGate,
) -> QqStatus {
    guard(|| {
        let g = tensor_gates(&borrow(a, "a")?.0, &borrow(b, "b")?.0);
        put_gate(out, g)
    })
}

/// Pauli vector from `len = 4^n` coefficients with `P_0 = 1`.
///
/// # Safety
/// `p` must point to `len` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_state_new(
    p: *const f64,
    len: usize,
    out: *mut *mut QqState,
) -> QqStatus {
    guard(|| {
        if p.is_null() {
            return Err(null("p"));
        }
        let n = log4_exact(len).ok_or_else(|| Error::schema("P", "length is not a power of 4"))?;
        let v = std::slice::from_raw_parts(p, len).to_vec();
        put_state(out, PauliVector::new(n, v)?)
    })
}

/// Pauli vector from `{"n"?, "P": [...]}`.
///
/// # Safety
/// `doc` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_state_from_json(
    doc: *const c_char,
    out: *mut *mut QqState,
) -> QqStatus {
    guard(|| {
        let v = json(doc, "doc")?;
        put_state(out, parse_pvec(&v, "")?)
    })
}

/// JSON document of a Pauli vector.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_state_to_json(s: *const QqState, out: *mut *mut c_char) -> QqStatus {
    guard(|| {
        let s = borrow(s, "state")?;
        put_string(out, pvec_json(&s.0).to_string())
    })
}

/// Number of coefficients, `4^n`.
///
/// # Safety
/// `s` must be a live handle; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_state_len(s: *const QqState, len: *mut usize) -> QqStatus {
    guard(|| put(len, borrow(s, "state")?.0.coefficients().len(), "len"))
}

/// Copy the coefficients into `buf`.
///
/// # Safety
/// `s` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qq_state_coefficients(
    s: *const QqState,
    buf: *mut f64,
    len: usize,
) -> QqStatus {
    guard(|| {
        let c = borrow(s, "state")?.0.coefficients();
        if len < c.len() {
            return Err(Failure(
                QqStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", c.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, c.len()).copy_from_slice(c);
        Ok(())
    })
}

/// Apply a gate. Trace-decreasing gates renormalize the output and report the
/// success probability through `probability` (1 for trace-preserving gates).
/// `probability` may be null.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qq_gate_apply(
    g: *const QqGate,
    s: *const QqState,
    out: *mut *mut QqState,
    probability: *mut f64,
) -> QqStatus {
    guard(|| {
        let g = &borrow(g, "gate")?.0;
        let s = &borrow(s, "state")?.0;
        let (p, prob) = match g.kind() {
            ququat::GateKind::TracePreserving => (apply_linear(g, s)?, 1.0),
            ququat::GateKind::TraceDecreasing => apply_nonlinear(g, s)?,
        };
        if !probability.is_null() {
            probability.write(prob);
        }
        put_state(out, p)
    })
}
