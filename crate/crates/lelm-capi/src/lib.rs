//! C ABI over the lelm toolkit: classification, feasibility searches, and
//! no-go verification chains behind opaque report handles and error codes.
//!
//! Conventions: every function returns a [`LelmStatus`]; results come back
//! through out-pointers. Reports are opaque — read them through the
//! accessors and release them with `lelm_report_free`. Strings returned
//! through out-pointers are NUL-terminated, allocated by this library, and
//! must be released with `lelm_string_free`. All functions are safe to call
//! from any thread; a caught panic surfaces as `LELM_STATUS_INTERNAL_ERROR`.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lelm::fock::Statistics;
use lelm::report::{run_classify, run_nogo, run_search, NogoChain, RunReport};
use lelm::search::SearchConfig;

/// Status code returned by every API function.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LelmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments failed domain validation (dimension, set size, config).
    InvalidArgument = 2,
    /// The run completed but a verification step failed.
    VerificationFailed = 3,
    /// Unexpected internal failure.
    InternalError = 4,
}

/// Exchange statistics selector.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LelmStatistics {
    Boson = 0,
    Fermion = 1,
}

impl From<LelmStatistics> for Statistics {
    fn from(s: LelmStatistics) -> Self {
        match s {
            LelmStatistics::Boson => Statistics::Boson,
            LelmStatistics::Fermion => Statistics::Fermion,
        }
    }
}

/// Verification chain selector.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LelmChain {
    ProjectiveQutrit = 0,
    PovmQubit = 1,
    PovmQutrit = 2,
    SixSetCoverage = 3,
}

impl From<LelmChain> for NogoChain {
    fn from(c: LelmChain) -> Self {
        match c {
            LelmChain::ProjectiveQutrit => NogoChain::ProjectiveQutrit,
            LelmChain::PovmQubit => NogoChain::PovmQubit,
            LelmChain::PovmQutrit => NogoChain::PovmQutrit,
            LelmChain::SixSetCoverage => NogoChain::SixSetCoverage,
        }
    }
}

/// Opaque run report handle.
pub struct LelmReport {
    inner: RunReport,
    verified: bool,
}

/// NUL-terminated version string of the library; statically allocated, do
/// not free.
#[no_mangle]
pub extern "C" fn lelm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn deliver(
    out: *mut *mut LelmReport,
    result: Result<(RunReport, bool), lelm::Error>,
) -> LelmStatus {
    match result {
        Ok((inner, verified)) => {
            let handle = Box::new(LelmReport { inner, verified });
            unsafe { *out = Box::into_raw(handle) };
            if verified {
                LelmStatus::Ok
            } else {
                LelmStatus::VerificationFailed
            }
        }
        Err(_) => LelmStatus::InvalidArgument,
    }
}

fn guarded(out: *mut *mut LelmReport, f: impl FnOnce() -> LelmStatus) -> LelmStatus {
    if out.is_null() {
        return LelmStatus::NullArgument;
    }
    unsafe { *out = std::ptr::null_mut() };
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(LelmStatus::InternalError)
}

/// Classifies all size-k sets of qutrit Bell states (k = 4 or 6, d = 3).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_run_classify(
    k: usize,
    d: usize,
    out: *mut *mut LelmReport,
) -> LelmStatus {
    guarded(out, || {
        deliver(out, run_classify(k, d).map(|r| (r, true)))
    })
}

/// Runs the feasibility-search campaign over all size-k subsets of the d²
/// Bell states with the given restarts and seed (other knobs at defaults).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_run_search(
    k: usize,
    d: usize,
    statistics: LelmStatistics,
    restarts: usize,
    seed: u64,
    out: *mut *mut LelmReport,
) -> LelmStatus {
    guarded(out, || {
        let cfg = SearchConfig {
            restarts,
            seed,
            statistics: statistics.into(),
            ..SearchConfig::default()
        };
        deliver(out, run_search(k, d, &cfg).map(|r| (r, true)))
    })
}

/// Runs a no-go verification chain. Returns `LELM_STATUS_VERIFICATION_FAILED`
/// (with the report still delivered) if any step fails.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_run_nogo(
    chain: LelmChain,
    samples: usize,
    seed: u64,
    restarts: usize,
    out: *mut *mut LelmReport,
) -> LelmStatus {
    guarded(out, || {
        deliver(
            out,
            run_nogo(chain.into(), samples, seed, restarts)
                .map(|o| (o.report, o.all_verified)),
        )
    })
}

/// Whether every verification in the report passed.
///
/// # Safety
/// `report` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_report_verified(
    report: *const LelmReport,
    out: *mut bool,
) -> LelmStatus {
    if report.is_null() || out.is_null() {
        return LelmStatus::NullArgument;
    }
    *out = (*report).verified;
    LelmStatus::Ok
}

/// Number of result records in the report.
///
/// # Safety
/// `report` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_report_result_count(
    report: *const LelmReport,
    out: *mut usize,
) -> LelmStatus {
    if report.is_null() || out.is_null() {
        return LelmStatus::NullArgument;
    }
    *out = (*report).inner.results.len();
    LelmStatus::Ok
}

/// Serializes the full report as a JSON document. Free the string with
/// `lelm_string_free`.
///
/// # Safety
/// `report` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_report_to_json(
    report: *const LelmReport,
    out: *mut *mut c_char,
) -> LelmStatus {
    if report.is_null() || out.is_null() {
        return LelmStatus::NullArgument;
    }
    catch_unwind(AssertUnwindSafe(|| {
        let json = (*report).inner.to_json();
        match CString::new(json) {
            Ok(s) => {
                *out = s.into_raw();
                LelmStatus::Ok
            }
            Err(_) => LelmStatus::InternalError,
        }
    }))
    .unwrap_or(LelmStatus::InternalError)
}

/// Releases a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn lelm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a report handle. Null is a no-op.
///
/// # Safety
/// `report` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn lelm_report_free(report: *mut LelmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
