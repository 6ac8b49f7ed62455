//! C interface to the `invspan` solver.
//!
//! Instances and solutions are opaque handles. Every fallible call returns an
//! [`InvspanStatus`]; on failure [`invspan_last_error`] describes what went
//! wrong. Strings handed out by this library must be released with
//! [`invspan_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use invspan::cli::{verify_instance, Checks};
use invspan::family::DEFAULT_ENUM_CAP;
use invspan::io::{CertificateFile, InstanceFile, SolutionFile};
use invspan::minmax::certificate;
use invspan::model::Instance;
use invspan::rational::{fmt_rational, Rational};
use invspan::solver::{solve_multi, SolveOptions, Status};
use invspan::Error;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvspanStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInstance = 4,
    TooLarge = 5,
    IterationCap = 6,
    Constrained = 7,
    /// The solution is infeasible, so it has no span or deviation.
    NotOptimal = 8,
    OutOfRange = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvspanSolveStatus {
    Optimal = 0,
    Infeasible = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct InvspanSolveOptions {
    /// Iterations allowed per subproblem; 0 picks the default bound.
    pub cap: u64,
    /// Worker threads; 0 or 1 solves subproblems one after another.
    pub parallel: u32,
    /// Keep the iteration trace in the solution JSON.
    pub with_trace: bool,
}

/// Opaque instance handle.
pub struct InvspanInstance {
    inner: Instance,
}

/// Opaque solution handle.
pub struct InvspanSolution {
    status: Status,
    span: Option<Rational>,
    deviation: Vec<Rational>,
    iterations: u64,
    oracle_calls: u64,
    file: SolutionFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: InvspanStatus, msg: impl Into<String>) -> InvspanStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> InvspanStatus {
    let status = match &e {
        Error::Parse(_) => InvspanStatus::Parse,
        Error::EmptyInstance | Error::Invalid(_) | Error::NoFeasibleSolution | Error::DegeneratePair(_) => {
            InvspanStatus::InvalidInstance
        }
        Error::FamilyTooLarge(_) | Error::TooLarge(_) => InvspanStatus::TooLarge,
        Error::IterationCap(_) => InvspanStatus::IterationCap,
        Error::Constrained => InvspanStatus::Constrained,
        Error::Internal(_) => InvspanStatus::Internal,
    };
    fail(status, e.to_string())
}

// Runs `f`, turning a panic into `InvspanStatus::Panic`.
fn guard(f: impl FnOnce() -> InvspanStatus) -> InvspanStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(InvspanStatus::Panic, msg)
        }
    }
}

fn hand_out(s: String, out: *mut *mut c_char) -> InvspanStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null before getting here.
            unsafe { *out = c.into_raw() };
            InvspanStatus::Ok
        }
        Err(_) => fail(InvspanStatus::Internal, "string contains a NUL byte"),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn invspan_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn invspan_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn invspan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an instance given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn invspan_instance_from_json(
    json: *const c_char,
    out: *mut *mut InvspanInstance,
) -> InvspanStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(InvspanStatus::NullArgument, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(InvspanStatus::InvalidUtf8, "instance text is not UTF-8");
        };
        match InstanceFile::parse(text).and_then(|f| f.to_instance()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(InvspanInstance { inner }));
                InvspanStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Number of ground-set elements; 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn invspan_instance_len(inst: *const InvspanInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.n())
}

/// Releases an instance. NULL is ignored.
///
/// # Safety
/// `inst` must be NULL or a handle from [`invspan_instance_from_json`] that is
/// not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn invspan_instance_free(inst: *mut InvspanInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Solves an instance with any number of cost vectors. `options` may be NULL.
/// An infeasible instance still yields a solution handle with status
/// `INVSPAN_SOLVE_STATUS_INFEASIBLE`.
///
/// # Safety
/// `inst` must be a live instance handle, `options` NULL or readable, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_solve(
    inst: *const InvspanInstance,
    options: *const InvspanSolveOptions,
    out: *mut *mut InvspanSolution,
) -> InvspanStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        let o = options.as_ref().copied().unwrap_or_default();
        let opts = SolveOptions {
            cap: (o.cap != 0).then_some(o.cap),
            parallel: o.parallel as usize,
        };
        let inst = &inst.inner;
        match solve_multi(inst, &inst.family, &opts) {
            Ok(res) => {
                let sol = InvspanSolution {
                    status: res.status,
                    span: res.span.clone(),
                    deviation: res.deviation.as_ref().map(|p| p.values.clone()).unwrap_or_default(),
                    iterations: res.iterations,
                    oracle_calls: res.oracle_calls,
                    file: SolutionFile::from_outcome(inst, &res, o.with_trace),
                };
                *out = Box::into_raw(Box::new(sol));
                InvspanStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_status(sol: *const InvspanSolution) -> InvspanSolveStatus {
    match sol.as_ref().map(|s| s.status) {
        Some(Status::Optimal) => InvspanSolveStatus::Optimal,
        _ => InvspanSolveStatus::Infeasible,
    }
}

/// # Safety
/// `sol` must be NULL or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_iterations(sol: *const InvspanSolution) -> u64 {
    sol.as_ref().map_or(0, |s| s.iterations)
}

/// # Safety
/// `sol` must be NULL or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_oracle_calls(sol: *const InvspanSolution) -> u64 {
    sol.as_ref().map_or(0, |s| s.oracle_calls)
}

/// Optimal span as an exact rational string such as `"3/2"`.
///
/// # Safety
/// `sol` must be a live solution handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_span(sol: *const InvspanSolution, out: *mut *mut c_char) -> InvspanStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        match &sol.span {
            Some(s) => hand_out(fmt_rational(s), out),
            None => fail(InvspanStatus::NotOptimal, "instance is infeasible"),
        }
    })
}

/// Optimal span rounded to the nearest double.
///
/// # Safety
/// `sol` must be a live solution handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_span_f64(sol: *const InvspanSolution, out: *mut f64) -> InvspanStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        match sol.span.as_ref().and_then(|s| s.to_f64()) {
            Some(v) => {
                *out = v;
                InvspanStatus::Ok
            }
            None => fail(InvspanStatus::NotOptimal, "instance is infeasible"),
        }
    })
}

/// Deviation of element `index` (in instance order) as a rational string.
///
/// # Safety
/// `sol` must be a live solution handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_deviation(
    sol: *const InvspanSolution,
    index: usize,
    out: *mut *mut c_char,
) -> InvspanStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        if sol.status != Status::Optimal {
            return fail(InvspanStatus::NotOptimal, "instance is infeasible");
        }
        match sol.deviation.get(index) {
            Some(v) => hand_out(fmt_rational(v), out),
            None => fail(InvspanStatus::OutOfRange, format!("no element {index}")),
        }
    })
}

/// The solution in the same JSON layout as `invspan solve`.
///
/// # Safety
/// `sol` must be a live solution handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_to_json(sol: *const InvspanSolution, out: *mut *mut c_char) -> InvspanStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        hand_out(sol.file.to_json(), out)
    })
}

/// Releases a solution. NULL is ignored.
///
/// # Safety
/// `sol` must be NULL or a handle from [`invspan_solve`] that is not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn invspan_solution_free(sol: *mut InvspanSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Min-max certificate of an instance without bounds, as JSON.
///
/// # Safety
/// `inst` must be a live instance handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_minmax_json(inst: *const InvspanInstance, out: *mut *mut c_char) -> InvspanStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        let inst = &inst.inner;
        let cert = inst
            .family
            .enumerate(DEFAULT_ENUM_CAP)
            .and_then(|members| certificate(inst, &members));
        match cert {
            Ok(c) => hand_out(CertificateFile::from_certificate(&c, &inst.ids).to_json(), out),
            Err(e) => from_core(e),
        }
    })
}

/// Cross-checks the solver against the brute-force LPs and the feasibility
/// witnesses. `*passed` is set when every check agrees. `report` may be NULL;
/// otherwise it receives the JSON report.
///
/// # Safety
/// `inst` must be a live instance handle, `passed` writable, and `report`
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn invspan_verify(
    inst: *const InvspanInstance,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> InvspanStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), passed.is_null()) else {
            return fail(InvspanStatus::NullArgument, "null argument");
        };
        match verify_instance(&inst.inner, Checks::ALL, None) {
            Ok((json, ok)) => {
                *passed = ok;
                if report.is_null() {
                    InvspanStatus::Ok
                } else {
                    hand_out(json.to_string(), report)
                }
            }
            Err(e) => from_core(e),
        }
    })
}
