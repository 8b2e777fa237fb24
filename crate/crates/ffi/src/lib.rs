//! C ABI over the engine: opaque handles, status codes and caller-owned buffers.
//!
//! Every function returns a [`PmcStatus`]. On failure a message is kept per
//! thread and can be fetched with [`pmc_last_error`]. Strings are returned by
//! copying into a caller buffer; `needed` receives the size including the NUL.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pmc_verify::catalog::{self, Catalog};
use pmc_verify::domain::Symbolic;
use pmc_verify::kernel::{DiffVar, TrigRational};
use pmc_verify::lang::{parse_expr, render};
use pmc_verify::numeric::{eval_complex, AtSpec, NumConfig};
use pmc_verify::verify::{exit_code, run_suite, Mode, Report, Suite, VerifyConfig};
use pmc_verify::EngineError;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PmcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    UnknownId = 4,
    Pole = 5,
    Overflow = 6,
    Domain = 7,
    Config = 8,
    BufferTooSmall = 9,
    Panic = 10,
    Internal = 11,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PmcDiffVar {
    Alpha = 0,
    A = 1,
    Abar = 2,
}

/// The 34 catalog entries, built once.
pub struct PmcCatalog(Catalog<Symbolic>);

/// An element of the quotient ring's fraction field.
pub struct PmcExpr(TrigRational);

/// The outcome of a suite run.
pub struct PmcReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(PmcStatus, String);

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let st = match &e {
            EngineError::Syntax { .. } => PmcStatus::Syntax,
            EngineError::UnknownId(_) => PmcStatus::UnknownId,
            e if e.is_pole() => PmcStatus::Pole,
            e if e.is_overflow() => PmcStatus::Overflow,
            EngineError::Config(_) => PmcStatus::Config,
            EngineError::Io(_) => PmcStatus::Internal,
            _ => PmcStatus::Domain,
        };
        Failure(st, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PmcStatus::NullArgument, format!("{what} is null"))
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PmcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PmcStatus::Ok,
        Ok(Err(Failure(st, msg))) => {
            set_error(msg);
            st
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            PmcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PmcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copy `s` with a trailing NUL into `buf` of `len` bytes.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), Failure> {
    let n = s.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if s.as_bytes().contains(&0) {
        return Err(Failure(PmcStatus::Internal, "string contains NUL".into()));
    }
    if buf.is_null() || len < n {
        return Err(Failure(PmcStatus::BufferTooSmall, format!("buffer of {len} bytes, {n} needed")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Copy the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pmc_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> PmcStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_out(&msg, buf, len, needed) {
        Ok(()) => PmcStatus::Ok,
        Err(Failure(st, _)) => st,
    }
}

/// Parse an expression in the input syntax.
///
/// # Safety
/// `text_in` must be a NUL-terminated string; `out_expr` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_parse(text_in: *const c_char, out_expr: *mut *mut PmcExpr) -> PmcStatus {
    guard(|| {
        let t = text(text_in, "text")?;
        let o = out(out_expr, "out_expr")?;
        *o = Box::into_raw(Box::new(PmcExpr(parse_expr(t)?)));
        Ok(())
    })
}

/// Release an expression; null is ignored.
///
/// # Safety
/// `e` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_free(e: *mut PmcExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Render in the input syntax.
///
/// # Safety
/// `e` must be a live handle; `buf` must point to `len` writable bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_render(
    e: *const PmcExpr,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PmcStatus {
    guard(|| {
        let e = handle(e, "expr")?;
        copy_out(&render(&e.0), buf, len, needed)
    })
}

/// Derivative with respect to α, a or ā (Wirtinger).
///
/// # Safety
/// `e` must be a live handle; `out_expr` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_diff(e: *const PmcExpr, wrt: PmcDiffVar, out_expr: *mut *mut PmcExpr) -> PmcStatus {
    guard(|| {
        let e = handle(e, "expr")?;
        let o = out(out_expr, "out_expr")?;
        let v = match wrt {
            PmcDiffVar::Alpha => DiffVar::Alpha,
            PmcDiffVar::A => DiffVar::A,
            PmcDiffVar::Abar => DiffVar::Abar,
        };
        *o = Box::into_raw(Box::new(PmcExpr(e.0.differentiate(v)?)));
        Ok(())
    })
}

/// Exact equality in the quotient ring.
///
/// # Safety
/// `x`, `y` must be live handles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_equals(x: *const PmcExpr, y: *const PmcExpr, result: *mut bool) -> PmcStatus {
    guard(|| {
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        *out(result, "result")? = x.0.equals(&y.0)?;
        Ok(())
    })
}

/// Evaluate at `k=v,...` (alpha=pi/4|pi/3|radians or t=rational; a, rho, b) in floating point.
///
/// # Safety
/// `e` must be a live handle; `at` NUL-terminated; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_expr_eval(
    e: *const PmcExpr,
    at: *const c_char,
    precision: u32,
    re: *mut f64,
    im: *mut f64,
) -> PmcStatus {
    guard(|| {
        let e = handle(e, "expr")?;
        let spec = text(at, "at")?;
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let p = if precision == 0 { 128 } else { precision as usize };
        let v = eval_complex(&e.0, &AtSpec::parse(spec, p)?.num_point(p), &NumConfig::for_precision(p))?;
        *re = v.re_f64();
        *im = v.im_f64();
        Ok(())
    })
}

/// Build the catalog.
///
/// # Safety
/// `out_cat` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_catalog_new(out_cat: *mut *mut PmcCatalog) -> PmcStatus {
    guard(|| {
        let o = out(out_cat, "out_cat")?;
        *o = Box::into_raw(Box::new(PmcCatalog(catalog::symbolic()?)));
        Ok(())
    })
}

/// Release a catalog; null is ignored.
///
/// # Safety
/// `c` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pmc_catalog_free(c: *mut PmcCatalog) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// A copy of entry `id` (kappa, p1..p22, F).
///
/// # Safety
/// `c` must be a live handle; `id` NUL-terminated; `out_expr` writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_catalog_get(c: *const PmcCatalog, id: *const c_char, out_expr: *mut *mut PmcExpr) -> PmcStatus {
    guard(|| {
        let c = handle(c, "catalog")?;
        let id = text(id, "id")?;
        let o = out(out_expr, "out_expr")?;
        *o = Box::into_raw(Box::new(PmcExpr(c.0.get(id)?.clone())));
        Ok(())
    })
}

/// Run a suite ("static", "jet", "numeric", "all") in "symbolic" or "sampled" mode.
///
/// # Safety
/// `suite`, `mode` NUL-terminated; `out_report` writable.
#[no_mangle]
pub unsafe extern "C" fn pmc_verify_run(
    suite: *const c_char,
    mode: *const c_char,
    samples: usize,
    seed: u64,
    out_report: *mut *mut PmcReport,
) -> PmcStatus {
    guard(|| {
        let cfg = VerifyConfig {
            suite: text(suite, "suite")?.parse::<Suite>()?,
            mode: text(mode, "mode")?.parse::<Mode>()?,
            samples,
            seed,
            ..VerifyConfig::default()
        };
        let o = out(out_report, "out_report")?;
        *o = Box::into_raw(Box::new(PmcReport(run_suite(&cfg)?)));
        Ok(())
    })
}

/// The report as JSON.
///
/// # Safety
/// `r` must be a live handle; `buf` must point to `len` writable bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn pmc_report_json(r: *const PmcReport, buf: *mut c_char, len: usize, needed: *mut usize) -> PmcStatus {
    guard(|| copy_out(&handle(r, "report")?.0.to_json(), buf, len, needed))
}

/// 0 all pass, 1 any Fail, 3 overflow without fallback; -1 for a null handle.
///
/// # Safety
/// `r` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pmc_report_exit_code(r: *const PmcReport) -> i32 {
    match r.as_ref() {
        Some(r) => exit_code(&r.0),
        None => -1,
    }
}

/// Release a report; null is ignored.
///
/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pmc_report_free(r: *mut PmcReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
