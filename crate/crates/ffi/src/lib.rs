//! C ABI for `cechss`.
//!
//! Problems are opaque handles created from job JSON and released with
//! [`cechss_problem_free`]. Every function returns a [`CechssStatus`]; on
//! failure a message is kept per thread and can be read with
//! [`cechss_last_error_message`]. Strings handed out by the library are
//! released with [`cechss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cechss::cech::{cech_cohomology, verify_products};
use cechss::cli::{compute, Job};
use cechss::grading::Multidegree;
use cechss::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CechssStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InputError = 3,
    ContractViolation = 4,
    /// A verification ran to completion and found mismatches.
    VerificationFailed = 5,
    Internal = 6,
    Panic = 7,
}

/// Which ideal of the groups a cohomology query refers to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CechssIdeal {
    Sum = 0,
    Product = 1,
}

/// Opaque problem handle.
pub struct CechssProblem {
    job: Job,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> CechssStatus {
    match e {
        Error::Input(_) | Error::Json(_) | Error::Io(_) | Error::Linalg(_) => CechssStatus::InputError,
        Error::Contract(_) => CechssStatus::ContractViolation,
        Error::Invariant(_) => CechssStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<CechssStatus, (CechssStatus, String)>) -> CechssStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CechssStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CechssStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CechssStatus, String) {
    (CechssStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CechssStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CechssStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cechss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cechss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a job file's JSON text into a problem handle.
///
/// # Safety
/// `job_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cechss_problem_from_json(job_json: *const c_char, out: *mut *mut CechssProblem) -> CechssStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let job = Job::from_json(text(job_json, "job_json")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CechssProblem { job }));
        Ok(CechssStatus::Ok)
    })
}

/// Releases a problem handle. Null is ignored.
///
/// # Safety
/// `problem` must come from [`cechss_problem_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn cechss_problem_free(problem: *mut CechssProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of variables and of multidegrees in the window.
///
/// # Safety
/// All pointers must be valid; `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cechss_problem_shape(
    problem: *const CechssProblem,
    variables: *mut usize,
    groups: *mut usize,
    window_size: *mut usize,
) -> CechssStatus {
    guard(|| {
        let p = &problem.as_ref().ok_or_else(|| null("problem"))?.job.problem;
        if variables.is_null() || groups.is_null() || window_size.is_null() {
            return Err(null("output pointer"));
        }
        *variables = p.vars;
        *groups = p.n();
        *window_size = p.window.len();
        Ok(CechssStatus::Ok)
    })
}

/// `dim H^i` at multidegree `degree` (length = variable count) of the sum
/// or product of all groups, with coefficients in `R/J`.
///
/// # Safety
/// `degree` must point to `len` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cechss_local_cohomology(
    problem: *const CechssProblem,
    ideal: CechssIdeal,
    degree: *const i64,
    len: usize,
    i: i64,
    out: *mut usize,
) -> CechssStatus {
    guard(|| {
        let p = &problem.as_ref().ok_or_else(|| null("problem"))?.job.problem;
        if degree.is_null() || out.is_null() {
            return Err(null("degree or out"));
        }
        if len != p.vars {
            return Err((CechssStatus::InputError, format!("degree has {len} entries, expected {}", p.vars)));
        }
        let b = Multidegree(std::slice::from_raw_parts(degree, len).to_vec());
        let all = p.full_set();
        let seq = match ideal {
            CechssIdeal::Sum => p.sum_sequence(all),
            CechssIdeal::Product => p.product_sequence(all).map_err(lib_err)?,
        };
        let dims = cech_cohomology(p.field, &seq, &p.ideal, &b, false);
        *out = usize::try_from(i).ok().and_then(|i| dims.get(i).copied()).unwrap_or(0);
        Ok(CechssStatus::Ok)
    })
}

/// Compares interior and product-sequence cohomology over the window.
/// Writes the mismatch count and returns `VerificationFailed` when it is
/// nonzero. `jobs = 0` uses all cores.
///
/// # Safety
/// `problem` must be a live handle and `mismatches` valid.
#[no_mangle]
pub unsafe extern "C" fn cechss_verify_products(
    problem: *const CechssProblem,
    jobs: usize,
    mismatches: *mut usize,
) -> CechssStatus {
    guard(|| {
        let p = &problem.as_ref().ok_or_else(|| null("problem"))?.job.problem;
        if mismatches.is_null() {
            return Err(null("mismatches"));
        }
        let rep = verify_products(p, jobs).map_err(lib_err)?;
        *mismatches = rep.mismatches.len() + rep.exact_sequence_failures.len() + rep.torsion_failures.len();
        Ok(if rep.holds() { CechssStatus::Ok } else { CechssStatus::VerificationFailed })
    })
}

/// Runs every task of the problem's job, writes the output files into
/// `out_dir` and hands back the report JSON (free with
/// [`cechss_string_free`]). Returns `VerificationFailed` with the report
/// still filled in when some check failed.
///
/// # Safety
/// `out_dir` must be a NUL-terminated string; `report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cechss_compute(
    problem: *const CechssProblem,
    out_dir: *const c_char,
    jobs: usize,
    report: *mut *mut c_char,
) -> CechssStatus {
    guard(|| {
        let job = &problem.as_ref().ok_or_else(|| null("problem"))?.job;
        let dir = text(out_dir, "out_dir")?;
        if report.is_null() {
            return Err(null("report"));
        }
        let outcome = compute(job, Path::new(dir), jobs).map_err(lib_err)?;
        *report = CString::new(outcome.report.to_string()).map_err(|e| (CechssStatus::Internal, e.to_string()))?.into_raw();
        Ok(if outcome.passed { CechssStatus::Ok } else { CechssStatus::VerificationFailed })
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn cechss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
