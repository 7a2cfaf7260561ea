//! C ABI over the `bohr` library.
//!
//! Series and symbols cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible
//! call returns a [`BohrStatus`]; on failure a message is kept per thread and
//! can be read with [`bohr_last_error_message`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bohr::error::BohrError;
use bohr::operators::{compose, CompositionSymbol};
use bohr::series::{ComplexPoint, DirichletPolynomial};
use bohr::spaces::norm_dalpha;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BohrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Coverage = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque truncated Dirichlet series.
pub struct BohrSeries(DirichletPolynomial);

/// Opaque composition symbol `c0 s + phi(s)`.
pub struct BohrSymbol(CompositionSymbol);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BohrStatus, msg: impl Into<String>) -> BohrStatus {
    set_error(msg.into());
    status
}

fn from_error(e: BohrError) -> BohrStatus {
    let status = match e {
        BohrError::Domain(_) => BohrStatus::Domain,
        BohrError::Coverage { .. } => BohrStatus::Coverage,
        BohrError::Parse { .. } => BohrStatus::Parse,
        BohrError::Io(_) => BohrStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard<F: FnOnce() -> BohrStatus>(f: F) -> BohrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BohrStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, BohrStatus> {
    if p.is_null() {
        return Err(fail(BohrStatus::NullPointer, "text pointer is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(BohrStatus::InvalidUtf8, "text is not valid UTF-8"))
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(BohrStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bohr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses the `n re im` line format into a new series with the given horizon.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_parse(
    text_ptr: *const c_char,
    horizon: u64,
    out: *mut *mut BohrSeries,
) -> BohrStatus {
    guard(|| {
        non_null!(out);
        let s = match text(text_ptr) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match DirichletPolynomial::parse(s, horizon) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(BohrSeries(f)));
                BohrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a series; null is ignored.
///
/// # Safety
/// `series` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_free(series: *mut BohrSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Writes the series in the line format; release with [`bohr_string_free`].
///
/// # Safety
/// `series` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_to_string(series: *const BohrSeries, out: *mut *mut c_char) -> BohrStatus {
    guard(|| {
        non_null!(series, out);
        match CString::new((*series).0.write()) {
            Ok(c) => {
                *out = c.into_raw();
                BohrStatus::Ok
            }
            Err(_) => fail(BohrStatus::Domain, "output contains NUL"),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `series` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_horizon(series: *const BohrSeries, out: *mut u64) -> BohrStatus {
    guard(|| {
        non_null!(series, out);
        *out = (*series).0.horizon();
        BohrStatus::Ok
    })
}

/// `f(sigma + i t)`.
///
/// # Safety
/// `series` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_evaluate(
    series: *const BohrSeries,
    sigma: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> BohrStatus {
    guard(|| {
        non_null!(series, re, im);
        let v = (*series).0.evaluate(ComplexPoint::new(sigma, t));
        *re = v.re;
        *im = v.im;
        BohrStatus::Ok
    })
}

/// `(sum |a_n|^2 / d(n)^alpha)^{1/2}`.
///
/// # Safety
/// `series` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_norm_dalpha(series: *const BohrSeries, alpha: f64, out: *mut f64) -> BohrStatus {
    guard(|| {
        non_null!(series, out);
        if !(alpha >= 0.0) {
            return fail(BohrStatus::Domain, format!("alpha must be nonnegative, got {alpha}"));
        }
        *out = norm_dalpha(&(*series).0, alpha);
        BohrStatus::Ok
    })
}

/// Dirichlet convolution truncated at `horizon`, as a new series.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_series_convolve(
    a: *const BohrSeries,
    b: *const BohrSeries,
    horizon: u64,
    out: *mut *mut BohrSeries,
) -> BohrStatus {
    guard(|| {
        non_null!(a, b, out);
        if horizon == 0 {
            return fail(BohrStatus::Domain, "horizon must be at least 1");
        }
        *out = Box::into_raw(Box::new(BohrSeries((*a).0.convolve(&(*b).0, horizon))));
        BohrStatus::Ok
    })
}

/// Parses a symbol: a `c0 <integer>` line followed by the series of `phi`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_symbol_parse(
    text_ptr: *const c_char,
    horizon: u64,
    out: *mut *mut BohrSymbol,
) -> BohrStatus {
    guard(|| {
        non_null!(out);
        let s = match text(text_ptr) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match CompositionSymbol::parse(s, horizon) {
            Ok(sym) => {
                *out = Box::into_raw(Box::new(BohrSymbol(sym)));
                BohrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a symbol; null is ignored.
///
/// # Safety
/// `symbol` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bohr_symbol_free(symbol: *mut BohrSymbol) {
    if !symbol.is_null() {
        drop(Box::from_raw(symbol));
    }
}

/// `f o Phi` truncated at `horizon`, as a new series.
///
/// # Safety
/// `f`, `symbol` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_compose(
    f: *const BohrSeries,
    symbol: *const BohrSymbol,
    horizon: u64,
    out: *mut *mut BohrSeries,
) -> BohrStatus {
    guard(|| {
        non_null!(f, symbol, out);
        if horizon == 0 {
            return fail(BohrStatus::Domain, "horizon must be at least 1");
        }
        *out = Box::into_raw(Box::new(BohrSeries(compose(&(*f).0, &(*symbol).0, horizon))));
        BohrStatus::Ok
    })
}

/// Number of divisors of `n >= 1`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bohr_divisor_count(n: u64, out: *mut u64) -> BohrStatus {
    guard(|| {
        non_null!(out);
        match bohr::arith::divisor_count(n) {
            Ok(d) => {
                *out = d;
                BohrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
