//! C ABI over `genfrac`.
//!
//! Every entry point returns a `GenfracStatus`; results come back through
//! out-pointers. On a non-OK status the message is available from
//! `genfrac_last_error_message` on the same thread until the next call.
//! Panics never cross the boundary.
//!
//! Handles (`GenfracFunction`, `GenfracReport`) are opaque and owned by the
//! caller once returned; release them with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use genfrac::inequality::{run_suite, SuiteConfig, SuiteReport, Theorem};
use genfrac::operator::reduce_to_classical;
use genfrac::{ClassicalKind, Error, Interval, OperatorParams, QuadratureConfig, Side, TestFunction};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenfracStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    NonConvergence = 3,
    Parse = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Classical family codes reported by `genfrac_reduce`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenfracKind {
    Generalized = 0,
    RiemannLiouville = 1,
    Hadamard = 2,
    ErdelyiKober = 3,
    Katugampola = 4,
    Weyl = 5,
    Liouville = 6,
}

/// Operator parameters. `side` is 0 for left, 1 for right; `upper` is read
/// only on the right side and may be `INFINITY`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GenfracParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub eta: f64,
    pub kappa: f64,
    pub lower: f64,
    pub upper: f64,
    pub side: i32,
}

/// Quadrature result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GenfracResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Parsed test function with its domain.
pub struct GenfracFunction(TestFunction);

/// Inequality-suite report.
pub struct GenfracReport(SuiteReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> GenfracStatus {
    match err {
        Error::Domain(_) | Error::OutOfDomain { .. } => GenfracStatus::Domain,
        Error::NonConvergence { .. } => GenfracStatus::NonConvergence,
        Error::Parse { .. } => GenfracStatus::Parse,
        _ => GenfracStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> GenfracStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs `body`, converting panics into `Panic`.
fn guard(body: impl FnOnce() -> GenfracStatus) -> GenfracStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            GenfracStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("`", stringify!($p), "` is null"));
            return GenfracStatus::NullPointer;
        })+
    };
}

unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, GenfracStatus> {
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("`{name}` is not valid UTF-8"));
        GenfracStatus::InvalidArgument
    })
}

fn to_params(p: &GenfracParams) -> Result<OperatorParams, GenfracStatus> {
    let side = match p.side {
        0 => Side::Left,
        1 => Side::Right,
        s => {
            set_error(format!("side must be 0 or 1, got {s}"));
            return Err(GenfracStatus::InvalidArgument);
        }
    };
    let mut params = OperatorParams::left(p.alpha, p.beta, p.rho, p.eta, p.kappa, p.lower).with_side(side);
    if side == Side::Right {
        params = params.with_upper(p.upper);
    }
    Ok(params)
}

fn quad_config(rel_tol: f64, abs_tol: f64, max_subdivisions: u32) -> QuadratureConfig {
    let d = QuadratureConfig::default();
    QuadratureConfig {
        rel_tol: if rel_tol > 0.0 { rel_tol } else { d.rel_tol },
        abs_tol: if abs_tol > 0.0 { abs_tol } else { d.abs_tol },
        max_subdivisions: if max_subdivisions > 0 { max_subdivisions as usize } else { d.max_subdivisions },
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn genfrac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Γ(x).
///
/// # Safety
/// `out` must be a valid pointer to an `f64`.
#[no_mangle]
pub unsafe extern "C" fn genfrac_gamma(x: f64, out: *mut f64) -> GenfracStatus {
    guard(|| {
        non_null!(out);
        match genfrac::gamma_fn(x) {
            Ok(v) => {
                *out = v;
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// B(a, b).
///
/// # Safety
/// `out` must be a valid pointer to an `f64`.
#[no_mangle]
pub unsafe extern "C" fn genfrac_beta(a: f64, b: f64, out: *mut f64) -> GenfracStatus {
    guard(|| {
        non_null!(out);
        match genfrac::beta_fn(a, b) {
            Ok(v) => {
                *out = v;
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses a function spec on `[lo, hi]`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn genfrac_function_parse(
    spec: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut *mut GenfracFunction,
) -> GenfracStatus {
    guard(|| {
        non_null!(spec, out);
        let spec = match read_str(spec, "spec") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match Interval::new(lo, hi).and_then(|d| TestFunction::parse(spec, d)) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(GenfracFunction(f)));
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a function handle. Null is a no-op.
///
/// # Safety
/// `f` must come from `genfrac_function_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn genfrac_function_free(f: *mut GenfracFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// f(t), failing with `Domain` outside the function's interval.
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn genfrac_function_eval(f: *const GenfracFunction, t: f64, out: *mut f64) -> GenfracStatus {
    guard(|| {
        non_null!(f, out);
        match (*f).0.eval(t) {
            Ok(v) => {
                *out = v;
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Applies the operator to `f` at `x`. Non-positive tolerances and a zero
/// subdivision cap select the defaults. On `NonConvergence` the best
/// estimate is still written to `out`.
///
/// # Safety
/// `params` and `f` must be valid; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn genfrac_evaluate(
    params: *const GenfracParams,
    f: *const GenfracFunction,
    x: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: u32,
    out: *mut GenfracResult,
) -> GenfracStatus {
    guard(|| {
        non_null!(params, f, out);
        let p = match to_params(&*params) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let cfg = quad_config(rel_tol, abs_tol, max_subdivisions);
        let write = |r: genfrac::IntegralResult| GenfracResult {
            value: r.value,
            error_estimate: r.error_estimate,
            evaluations: r.evaluations as u64,
        };
        match genfrac::evaluate(&p, &(*f).0, x, &cfg) {
            Ok(r) => {
                *out = write(r);
                GenfracStatus::Ok
            }
            Err(e) => {
                if let Error::NonConvergence { best, .. } = &e {
                    *out = write(*best);
                }
                fail(e)
            }
        }
    })
}

/// Closed form of the operator applied to t^sigma at x.
///
/// # Safety
/// `params` must be valid; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn genfrac_closed_form_monomial(
    params: *const GenfracParams,
    sigma: f64,
    x: f64,
    out: *mut f64,
) -> GenfracStatus {
    guard(|| {
        non_null!(params, out);
        let p = match to_params(&*params) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match genfrac::closed_form_monomial(&p, sigma, x) {
            Ok(v) => {
                *out = v;
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Classical family the parameters reduce to, compared at tolerance `tol`.
///
/// # Safety
/// `params` must be valid; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn genfrac_reduce(params: *const GenfracParams, tol: f64, out: *mut GenfracKind) -> GenfracStatus {
    guard(|| {
        non_null!(params, out);
        let p = match to_params(&*params) {
            Ok(p) => p,
            Err(s) => return s,
        };
        *out = match reduce_to_classical(&p, tol) {
            ClassicalKind::Generalized => GenfracKind::Generalized,
            ClassicalKind::RiemannLiouville => GenfracKind::RiemannLiouville,
            ClassicalKind::Hadamard => GenfracKind::Hadamard,
            ClassicalKind::ErdelyiKober => GenfracKind::ErdelyiKober,
            ClassicalKind::Katugampola => GenfracKind::Katugampola,
            ClassicalKind::Weyl => GenfracKind::Weyl,
            ClassicalKind::Liouville => GenfracKind::Liouville,
        };
        GenfracStatus::Ok
    })
}

/// Runs the inequality suite on the default operator grid and bands.
/// `theorem` is `"all"`, `"8"`..`"15"` or `"T8"`..`"T15"`.
///
/// # Safety
/// `theorem` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn genfrac_suite_run(
    theorem: *const c_char,
    trials: u32,
    seed: u64,
    out: *mut *mut GenfracReport,
) -> GenfracStatus {
    guard(|| {
        non_null!(theorem, out);
        let name = match read_str(theorem, "theorem") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let theorems = if name.eq_ignore_ascii_case("all") {
            Theorem::OPERATOR.to_vec()
        } else {
            match name.parse::<Theorem>() {
                Ok(t) => vec![t],
                Err(e) => return fail(e),
            }
        };
        let cfg = SuiteConfig {
            theorems,
            trials: trials as usize,
            seed,
            ..SuiteConfig::default()
        };
        match run_suite(&cfg) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(GenfracReport(r)));
                GenfracStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Total failures, inconclusive trials and trials in a report. Any of the
/// out-pointers may be null.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn genfrac_report_counts(
    report: *const GenfracReport,
    trials: *mut u64,
    failures: *mut u64,
    inconclusive: *mut u64,
) -> GenfracStatus {
    guard(|| {
        non_null!(report);
        let r = &(*report).0;
        if !trials.is_null() {
            *trials = r.trials.len() as u64;
        }
        if !failures.is_null() {
            *failures = r.total_failures() as u64;
        }
        if !inconclusive.is_null() {
            *inconclusive = r.total_inconclusive() as u64;
        }
        GenfracStatus::Ok
    })
}

/// Report as pretty JSON. Release the string with `genfrac_string_free`.
///
/// # Safety
/// `report` must be a live handle; `out` a valid pointer slot.
#[no_mangle]
pub unsafe extern "C" fn genfrac_report_json(report: *const GenfracReport, out: *mut *mut c_char) -> GenfracStatus {
    guard(|| {
        non_null!(report, out);
        match (*report).0.to_json() {
            Ok(s) => match CString::new(s) {
                Ok(c) => {
                    *out = c.into_raw();
                    GenfracStatus::Ok
                }
                Err(_) => {
                    set_error("report JSON contains a NUL byte");
                    GenfracStatus::InvalidArgument
                }
            },
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn genfrac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a report handle. Null is a no-op.
///
/// # Safety
/// `report` must come from `genfrac_suite_run` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn genfrac_report_free(report: *mut GenfracReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
