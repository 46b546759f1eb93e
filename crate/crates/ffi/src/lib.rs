//! C interface to the `dulac` toolkit.
//!
//! Objects cross the boundary as opaque handles created by `*_new` /
//! `*_from_json` functions and released with the matching `*_free`.
//! Every fallible call returns a [`DulacStatus`]; on failure the message is
//! available from [`dulac_last_error`] until the next failing call on the
//! same thread. Strings returned through `char **` out-parameters are owned
//! by the caller and released with [`dulac_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};

use dulac::cli::{
    cmd_resonances, parse_point, CliError, ResonancesArgs, SpecError, VectorFieldSpec,
};
use dulac::dulac::{dulac_series, eval_dulac, DulacError, DulacSeriesJson, NFCoeffs};
use dulac::normalform::{normalize, NormalFormError, PolyVectorField};
use dulac::real::Real;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DulacStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, rational or term.
    Parse = 3,
    /// The field or eigenvalues are not admissible.
    InvalidField = 4,
    /// The Dulac series needs a field in normal form.
    NotNormalForm = 5,
    /// Evaluation failed (a pole at the point, or `x0` outside `(0, 1]`).
    Evaluation = 6,
    /// Internal error; the library caught a panic.
    Internal = 7,
}

/// A polynomial vector field in pre-normal form.
pub struct DulacField {
    inner: PolyVectorField,
}

/// A truncated Dulac series.
pub struct DulacSeries {
    inner: dulac::dulac::DulacSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

struct Failure(DulacStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(DulacStatus::NullArgument, format!("{what} is null"))
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        let status = match e {
            SpecError::Field(_) => DulacStatus::InvalidField,
            _ => DulacStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<NormalFormError> for Failure {
    fn from(e: NormalFormError) -> Self {
        Failure(DulacStatus::InvalidField, e.to_string())
    }
}

impl From<DulacError> for Failure {
    fn from(e: DulacError) -> Self {
        let status = match e {
            DulacError::NotInNormalForm(_) => DulacStatus::NotNormalForm,
            DulacError::PoleAtPoint => DulacStatus::Evaluation,
            DulacError::Unsupported(_) => DulacStatus::InvalidField,
            _ => DulacStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Parse(_) | CliError::Spec(_) | CliError::Json(_) => DulacStatus::Parse,
            CliError::Resonance(_) => DulacStatus::InvalidField,
            _ => DulacStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DulacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DulacStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            DulacStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DulacStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(DulacStatus::Internal, "string has a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::null(what))
    } else {
        Ok(())
    }
}

/// Message of the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dulac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dulac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a vector-field description (JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_field_from_json(
    json: *const c_char,
    out: *mut *mut DulacField,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = str_arg(json, "json")?;
        let inner = VectorFieldSpec::from_json(s)?.to_field()?;
        *out = Box::into_raw(Box::new(DulacField { inner }));
        Ok(())
    })
}

/// Serialize a field back to JSON.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_field_to_json(
    field: *const DulacField,
    out: *mut *mut c_char,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let f = field.as_ref().ok_or_else(|| Failure::null("field"))?;
        put_string(out, VectorFieldSpec::from_field(&f.inner).to_json())
    })
}

/// Release a field. Null is ignored.
///
/// # Safety
/// `field` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dulac_field_free(field: *mut DulacField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Normal form through `degree`; `degree = 0` uses the field's own degree.
/// Only the normalized field is returned.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_normalize(
    field: *const DulacField,
    degree: u32,
    out: *mut *mut DulacField,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let f = field.as_ref().ok_or_else(|| Failure::null("field"))?;
        let d = if degree == 0 {
            f.inner.degree()
        } else {
            degree
        };
        let nf = normalize(&f.inner, d)?;
        *out = Box::into_raw(Box::new(DulacField { inner: nf.field }));
        Ok(())
    })
}

/// Resonant monomials up to `max_degree` for eigenvalues given as rational
/// strings (`"2/3"`), as a JSON report.
///
/// # Safety
/// `alpha`, `beta` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_resonances_json(
    alpha: *const c_char,
    beta: *const c_char,
    max_degree: u32,
    out: *mut *mut c_char,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let args = ResonancesArgs {
            alpha: str_arg(alpha, "alpha")?.to_string(),
            beta: str_arg(beta, "beta")?.to_string(),
            max_degree,
            json: None,
        };
        let report = cmd_resonances(&args, &mut io::sink())?;
        let s = serde_json::to_string(&report)
            .map_err(|e| Failure(DulacStatus::Internal, e.to_string()))?;
        put_string(out, s)
    })
}

/// Dulac series of a normal form through index order `order`, frozen at the
/// centre point `u0` (comma-separated rationals; null or empty for the origin).
///
/// # Safety
/// `field` must be a live handle; `u0` null or a NUL-terminated string; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_series_new(
    field: *const DulacField,
    order: u32,
    u0: *const c_char,
    out: *mut *mut DulacSeries,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let f = field.as_ref().ok_or_else(|| Failure::null("field"))?;
        let point = if u0.is_null() { "" } else { str_arg(u0, "u0")? };
        let u = parse_point(point, f.inner.centre_dim())?;
        let nf = NFCoeffs::from_field(&f.inner, &u)?;
        let inner = dulac_series(&nf, order)?;
        *out = Box::into_raw(Box::new(DulacSeries { inner }));
        Ok(())
    })
}

/// Rate offsets `a = α(u0) - α0`, `b = β(u0) - β0` of the base orbit.
///
/// # Safety
/// `series` must be a live handle; `a`, `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_series_rate_offsets(
    series: *const DulacSeries,
    a: *mut f64,
    b: *mut f64,
) -> DulacStatus {
    guard(|| {
        check_out(a, "a")?;
        check_out(b, "b")?;
        let s = series.as_ref().ok_or_else(|| Failure::null("series"))?;
        *a = f64::from_rational(&s.inner.a0);
        *b = f64::from_rational(&s.inner.b0);
        Ok(())
    })
}

/// Number of centre variables, the length expected by `dulac_series_eval`.
///
/// # Safety
/// `series` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dulac_series_centre_dim(series: *const DulacSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.centre_dim)
}

/// Evaluate the truncated series at `x0 ∈ (0, 1]` with rate offsets `a`, `b`.
/// `u1` may be null; otherwise it receives `u_len` centre values and
/// `u_len` must equal `dulac_series_centre_dim`.
///
/// # Safety
/// `series` must be a live handle; `y1`, `z1` writable; `u1` null or valid
/// for `u_len` writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn dulac_series_eval(
    series: *const DulacSeries,
    x0: f64,
    y0: f64,
    z0: f64,
    a: f64,
    b: f64,
    y1: *mut f64,
    z1: *mut f64,
    u1: *mut f64,
    u_len: usize,
) -> DulacStatus {
    guard(|| {
        check_out(y1, "y1")?;
        check_out(z1, "z1")?;
        let s = series.as_ref().ok_or_else(|| Failure::null("series"))?;
        if !u1.is_null() && u_len != s.inner.centre_dim {
            return Err(Failure(
                DulacStatus::InvalidField,
                format!(
                    "u1 has room for {u_len} values, series has {}",
                    s.inner.centre_dim
                ),
            ));
        }
        let v = eval_dulac(&s.inner, x0, y0, z0, a, b)?;
        *y1 = v.y;
        *z1 = v.z;
        if !u1.is_null() {
            std::slice::from_raw_parts_mut(u1, u_len).copy_from_slice(&v.u);
        }
        Ok(())
    })
}

/// Series as JSON, in the same format the command-line tool writes.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dulac_series_to_json(
    series: *const DulacSeries,
    out: *mut *mut c_char,
) -> DulacStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = series.as_ref().ok_or_else(|| Failure::null("series"))?;
        let j = DulacSeriesJson::from(&s.inner);
        let text = serde_json::to_string_pretty(&j)
            .map_err(|e| Failure(DulacStatus::Internal, e.to_string()))?;
        put_string(out, text)
    })
}

/// Release a series. Null is ignored.
///
/// # Safety
/// `series` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dulac_series_free(series: *mut DulacSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}
