//! C interface to `hypercone`.
//!
//! Objects cross the boundary as opaque handles created by a `hc_*_new` or
//! `hc_*_from_json` call and released by the matching `hc_*_free`. Every
//! fallible function returns an [`HcStatus`]; on failure the message is kept
//! per thread and can be read with [`hc_last_error`]. Strings handed out by
//! the library are released with [`hc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypercone::cli::{execute, Cli};
use hypercone::cone::{ConeVec, DiscreteCone};
use hypercone::hypernorm::{lp_norm, LpTag};
use hypercone::poset::finite::FinitePosetJson;
use hypercone::poset::{dm_completion, FinitePoset};
use hypercone::suite::{run_criterion, CRITERIA};
use hypercone::{rat, Error};

use clap::Parser;

/// Result codes. `Ok` and `Counterexample` mirror the command line exit codes 0 and 1.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    /// The computation succeeded and produced a verified counterexample.
    Counterexample = 1,
    InvalidInput = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Dimension = 5,
    NotComparable = 6,
    BudgetExceeded = 7,
    NotProbability = 8,
    PreconditionFailed = 9,
    Unsupported = 10,
    /// A panic was caught at the boundary.
    Internal = 99,
}

impl From<&Error> for HcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => HcStatus::Dimension,
            Error::NotComparable(_) => HcStatus::NotComparable,
            Error::BudgetExceeded(_) | Error::ProblemTooLarge(_) | Error::Inconclusive(_) => HcStatus::BudgetExceeded,
            Error::NotProbability(_) => HcStatus::NotProbability,
            Error::PreconditionFailed(_) | Error::HypothesisFailed(_) | Error::EmptyOpen => HcStatus::PreconditionFailed,
            Error::UnsupportedPresentation(_) | Error::Irrational | Error::BoundaryCase => HcStatus::Unsupported,
            _ => HcStatus::InvalidInput,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: HcStatus, msg: impl Into<String>) -> HcStatus {
    set_error(msg);
    status
}

fn lib_error(e: Error) -> HcStatus {
    fail(HcStatus::from(&e), e.to_string())
}

/// Run `body`, turning a panic into [`HcStatus::Internal`].
fn guard(body: impl FnOnce() -> HcStatus) -> HcStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(HcStatus::Internal, "internal error"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HcStatus> {
    if s.is_null() {
        return Err(fail(HcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(HcStatus::InvalidUtf8, "string is not valid UTF-8"))
}

fn hand_out(text: String, out: *mut *mut c_char) -> HcStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HcStatus::Ok
        }
        Err(_) => fail(HcStatus::Internal, "output contains a NUL byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(HcStatus::NullPointer, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Message of the last failure on this thread, or null. Owned by the library
/// and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A weighted discrete cone `[0, inf]^n`.
pub struct HcCone(DiscreteCone);

/// A vector with coordinates in `[0, inf]`.
pub struct HcVec(ConeVec);

/// A finite poset.
pub struct HcPoset(FinitePoset);

/// Weights `num[i] / den[i]`, all strictly positive.
///
/// # Safety
/// `num` and `den` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_cone_new(num: *const i64, den: *const i64, n: usize, out: *mut *mut HcCone) -> HcStatus {
    guard(|| {
        non_null!(num, den, out);
        let (num, den) = (std::slice::from_raw_parts(num, n), std::slice::from_raw_parts(den, n));
        if den.contains(&0) {
            return fail(HcStatus::InvalidInput, "zero denominator");
        }
        match DiscreteCone::new(num.iter().zip(den).map(|(&a, &b)| rat(a, b)).collect()) {
            Ok(cone) => {
                *out = Box::into_raw(Box::new(HcCone(cone)));
                HcStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// `n` equal weights summing to one.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_cone_uniform(n: usize, out: *mut *mut HcCone) -> HcStatus {
    guard(|| {
        non_null!(out);
        if n == 0 {
            return fail(HcStatus::InvalidInput, "a cone needs at least one index");
        }
        let n_i64 = try_status!(i64::try_from(n).map_err(|_| fail(HcStatus::InvalidInput, "dimension too large")));
        let cone = DiscreteCone::new(vec![rat(1, n_i64); n]).expect("positive weights");
        *out = Box::into_raw(Box::new(HcCone(cone)));
        HcStatus::Ok
    })
}

/// # Safety
/// `cone` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_cone_free(cone: *mut HcCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// # Safety
/// `cone` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_cone_dim(cone: *const HcCone) -> usize {
    cone.as_ref().map_or(0, |c| c.0.dim())
}

/// Parse a JSON array such as `[1, "1/2", "inf"]`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_vec_from_json(json: *const c_char, out: *mut *mut HcVec) -> HcStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(json));
        match serde_json::from_str::<ConeVec>(text) {
            Ok(v) => {
                *out = Box::into_raw(Box::new(HcVec(v)));
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `v` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_vec_free(v: *mut HcVec) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_vec_len(v: *const HcVec) -> usize {
    v.as_ref().map_or(0, |v| v.0.len())
}

/// The vector as a JSON array. Free the result with [`hc_string_free`].
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_vec_to_json(v: *const HcVec, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        non_null!(v, out);
        hand_out(serde_json::to_string(&(*v).0).expect("vectors serialise"), out)
    })
}

/// `||f||_p` for a tag such as `"-1"`, `"1/2"`, `"-inf"`, `"0+"` or `"0-"`.
///
/// `exact` may be null; otherwise it receives 1 when the value is exact.
///
/// # Safety
/// Handles must be live, `tag` NUL-terminated and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn hc_lp_norm(cone: *const HcCone, f: *const HcVec, tag: *const c_char, value: *mut f64, exact: *mut i32) -> HcStatus {
    guard(|| {
        non_null!(cone, f, value);
        let tag: LpTag = match try_status!(read_str(tag)).parse() {
            Ok(t) => t,
            Err(e) => return lib_error(e),
        };
        match lp_norm(&(*cone).0, &(*f).0, &tag) {
            Ok(n) => {
                *value = n.value;
                if !exact.is_null() {
                    *exact = i32::from(n.exact.is_some());
                }
                HcStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// Parse `{"elements": [...], "leq": [[i, j], ...]}`; the order is the reflexive-transitive closure.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_poset_from_json(json: *const c_char, out: *mut *mut HcPoset) -> HcStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(json));
        let parsed: FinitePosetJson = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => return fail(HcStatus::InvalidInput, e.to_string()),
        };
        match FinitePoset::from_json(&parsed) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(HcPoset(p)));
                HcStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_poset_free(p: *mut HcPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_poset_len(p: *const HcPoset) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Number of cuts in the Dedekind-MacNeille completion.
///
/// # Safety
/// `p` must be a live handle; `cuts` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_poset_dm_size(p: *const HcPoset, cuts: *mut usize) -> HcStatus {
    guard(|| {
        non_null!(p, cuts);
        *cuts = dm_completion(&(*p).0).cuts.len();
        HcStatus::Ok
    })
}

/// Run a command line such as `{"norm", "--p", "-inf", "--f", "[3,1,2]"}` (without the
/// program name) and return its JSON report. The status is [`HcStatus::Ok`] or
/// [`HcStatus::Counterexample`] when a report was produced.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_command(argv: *const *const c_char, argc: usize, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        non_null!(out);
        if argc > 0 && argv.is_null() {
            return fail(HcStatus::NullPointer, "null argv");
        }
        let mut args = vec!["hypercone".to_string()];
        for i in 0..argc {
            args.push(try_status!(read_str(*argv.add(i))).to_string());
        }
        let cli = match Cli::try_parse_from(&args) {
            Ok(cli) => cli,
            Err(e) => return fail(HcStatus::InvalidInput, e.to_string()),
        };
        match execute(&cli) {
            Ok(report) => {
                let status = if report.passed { HcStatus::Ok } else { HcStatus::Counterexample };
                let text = serde_json::to_string(&report.to_json(cli.command.name())).expect("values serialise");
                match hand_out(text, out) {
                    HcStatus::Ok => status,
                    other => other,
                }
            }
            Err(e) => lib_error(e),
        }
    })
}

/// Number of acceptance criteria; valid ids are `1..=hc_suite_len()`.
#[no_mangle]
pub extern "C" fn hc_suite_len() -> u32 {
    CRITERIA as u32
}

/// Run one acceptance criterion. `passed` receives 1 or 0; `detail` may be
/// null, otherwise it receives a string to free with [`hc_string_free`].
///
/// # Safety
/// `passed` must be writable; `detail` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_suite_run(id: u32, seed: u64, passed: *mut i32, detail: *mut *mut c_char) -> HcStatus {
    guard(|| {
        non_null!(passed);
        let id = id as usize;
        if id == 0 || id > CRITERIA {
            return fail(HcStatus::InvalidInput, format!("no acceptance criterion {id}"));
        }
        let outcome = run_criterion(id, seed);
        *passed = i32::from(outcome.passed);
        if !detail.is_null() {
            return hand_out(outcome.detail, detail);
        }
        HcStatus::Ok
    })
}
