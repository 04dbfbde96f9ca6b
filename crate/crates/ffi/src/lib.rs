//! C interface to the decomposition engine.
//!
//! Handles are opaque. Every fallible call returns a [`PresdecStatus`];
//! the message of the last failure on a session is available from
//! [`presdec_last_error`]. Strings returned to the caller are released with
//! [`presdec_string_free`]. A session must not be used from two threads at
//! the same time; distinct sessions are independent.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{Duration, Instant};

use presdec::cli::{parse_pi, Report};
use presdec::lia::ExternalSolver;
use presdec::mondec::{check_decomposable_on, check_monadic, decompose_full_with, decompose_on_with};
use presdec::qelim::eliminate_with;
use presdec::smtlib::{parse_formula, parse_quantified, print_script};
use presdec::vardec::{check_pi, pi_decompose_with};
use presdec::{DecomposeOptions, Error, Formula, Solver, VarId};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresdecStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8 or a malformed argument.
    InvalidArgument = 1,
    /// The input text is not in the supported SMT-LIB subset.
    ParseError = 2,
    NotDecomposable = 3,
    /// Time, node or size budget exhausted.
    ResourceLimit = 4,
    /// The external solver failed or misbehaved.
    BackendFailure = 5,
    /// A bug: an internal check failed or a panic was caught.
    Internal = 6,
}

/// Solver settings and the last error message.
pub struct PresdecSession {
    solver: Solver,
    opts: DecomposeOptions,
    timeout: Option<Duration>,
    last_error: RefCell<CString>,
}

/// A parsed quantifier-free formula.
pub struct PresdecFormula {
    formula: Formula,
}

fn status_of(e: &Error) -> PresdecStatus {
    match e {
        Error::Syntax { .. }
        | Error::NonlinearTerm { .. }
        | Error::UnsupportedSort { .. }
        | Error::Unsupported { .. }
        | Error::NegativeLiteralVariableDomain { .. } => PresdecStatus::ParseError,
        Error::NotDecomposable { .. } => PresdecStatus::NotDecomposable,
        Error::ResourceLimit(_) | Error::TooLarge { .. } | Error::TooManyFunctions { .. } | Error::TooManyVariables { .. } => {
            PresdecStatus::ResourceLimit
        }
        Error::BackendFailure(_) => PresdecStatus::BackendFailure,
        Error::EquivalenceCheckFailed(_) => PresdecStatus::Internal,
        Error::UnboundVariable(_) | Error::NotMonadic(_) | Error::InvalidInput(_) | Error::Io(_) => {
            PresdecStatus::InvalidArgument
        }
    }
}

impl PresdecSession {
    fn fail(&self, status: PresdecStatus, message: &str) -> PresdecStatus {
        let text = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
        *self.last_error.borrow_mut() = text;
        status
    }

    /// Solver with the deadline counted from now.
    fn solver(&self) -> Solver {
        let mut s = self.solver.clone();
        s.config.deadline = self.timeout.map(|t| Instant::now() + t);
        s
    }

    /// Runs `f`, recording failures and catching panics.
    fn guard(&self, f: impl FnOnce(&Solver) -> Result<(), Error>) -> PresdecStatus {
        let solver = self.solver();
        match catch_unwind(AssertUnwindSafe(|| f(&solver))) {
            Ok(Ok(())) => {
                *self.last_error.borrow_mut() = CString::default();
                PresdecStatus::Ok
            }
            Ok(Err(e)) => self.fail(status_of(&e), &e.to_string()),
            Err(_) => self.fail(PresdecStatus::Internal, "internal panic"),
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::InvalidInput("null string argument".into()));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Error::InvalidInput("argument is not valid UTF-8".into()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn new_formula(formula: Formula) -> *mut PresdecFormula {
    Box::into_raw(Box::new(PresdecFormula { formula }))
}

/// New session using the built-in solver (or `$PRESDEC_SOLVER` when set).
#[no_mangle]
pub extern "C" fn presdec_session_new() -> *mut PresdecSession {
    Box::into_raw(Box::new(PresdecSession {
        solver: Solver::from_env(),
        opts: DecomposeOptions::default(),
        timeout: None,
        last_error: RefCell::new(CString::default()),
    }))
}

/// Switches the session to an external SMT-LIB solver command such as
/// `"z3 -in"`; null selects the built-in solver.
///
/// # Safety
/// `session` is a live session; `command` is null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn presdec_session_set_solver(
    session: *mut PresdecSession,
    command: *const c_char,
) -> PresdecStatus {
    // SAFETY: the caller guarantees `session` is live and unaliased.
    let Some(s) = (unsafe { session.as_mut() }) else {
        return PresdecStatus::InvalidArgument;
    };
    if command.is_null() {
        s.solver.backend = presdec::Backend::Builtin;
        return PresdecStatus::Ok;
    }
    // SAFETY: checked non-null above; the caller guarantees termination.
    let parsed = unsafe { text_arg(command) }.and_then(|c| {
        ExternalSolver::parse(c).ok_or_else(|| Error::InvalidInput("empty solver command".into()))
    });
    match parsed {
        Ok(ext) => {
            s.solver.backend = presdec::Backend::External(ext);
            PresdecStatus::Ok
        }
        Err(e) => s.fail(status_of(&e), &e.to_string()),
    }
}

/// Time budget per call in milliseconds; 0 removes it.
///
/// # Safety
/// `session` is null or a live session.
#[no_mangle]
pub unsafe extern "C" fn presdec_session_set_timeout_ms(session: *mut PresdecSession, ms: u64) -> PresdecStatus {
    // SAFETY: the caller guarantees `session` is live and unaliased.
    let Some(s) = (unsafe { session.as_mut() }) else {
        return PresdecStatus::InvalidArgument;
    };
    s.timeout = (ms > 0).then(|| Duration::from_millis(ms));
    PresdecStatus::Ok
}

/// Largest decomposition, in disjuncts, the session will build.
///
/// # Safety
/// `session` is null or a live session.
#[no_mangle]
pub unsafe extern "C" fn presdec_session_set_max_disjuncts(session: *mut PresdecSession, n: u64) -> PresdecStatus {
    // SAFETY: the caller guarantees `session` is live and unaliased.
    let Some(s) = (unsafe { session.as_mut() }) else {
        return PresdecStatus::InvalidArgument;
    };
    if n == 0 {
        return s.fail(PresdecStatus::InvalidArgument, "the disjunct cap must be positive");
    }
    s.opts.max_disjuncts = usize::try_from(n).unwrap_or(usize::MAX);
    PresdecStatus::Ok
}

/// # Safety
/// `session` is null or a session not yet freed.
#[no_mangle]
pub unsafe extern "C" fn presdec_session_free(session: *mut PresdecSession) {
    if !session.is_null() {
        // SAFETY: allocated by `presdec_session_new` and not freed before.
        drop(unsafe { Box::from_raw(session) });
    }
}

/// Message of the last failed call on the session, or an empty string.
/// The pointer stays valid until the next call on the session.
///
/// # Safety
/// `session` is null or a live session.
#[no_mangle]
pub unsafe extern "C" fn presdec_last_error(session: *const PresdecSession) -> *const c_char {
    // SAFETY: the caller guarantees `session` is live.
    match unsafe { session.as_ref() } {
        Some(s) => s.last_error.borrow().as_ptr(),
        None => c"null session".as_ptr(),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn presdec_status_message(status: PresdecStatus) -> *const c_char {
    match status {
        PresdecStatus::Ok => c"ok",
        PresdecStatus::InvalidArgument => c"invalid argument",
        PresdecStatus::ParseError => c"parse error",
        PresdecStatus::NotDecomposable => c"not decomposable",
        PresdecStatus::ResourceLimit => c"resource limit exceeded",
        PresdecStatus::BackendFailure => c"solver backend failure",
        PresdecStatus::Internal => c"internal error",
    }
    .as_ptr()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn presdec_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `formula` is null or a formula not yet freed.
#[no_mangle]
pub unsafe extern "C" fn presdec_formula_free(formula: *mut PresdecFormula) {
    if !formula.is_null() {
        // SAFETY: allocated by this library and not freed before.
        drop(unsafe { Box::from_raw(formula) });
    }
}

macro_rules! session {
    ($p:expr) => {
        // SAFETY: the caller guarantees the session pointer is null or live.
        match unsafe { $p.as_ref() } {
            Some(s) => s,
            None => return PresdecStatus::InvalidArgument,
        }
    };
}

macro_rules! formula {
    ($s:expr, $p:expr) => {
        // SAFETY: the caller guarantees the formula pointer is null or live.
        match unsafe { $p.as_ref() } {
            Some(f) => &f.formula,
            None => return $s.fail(PresdecStatus::InvalidArgument, "null formula"),
        }
    };
}

macro_rules! out {
    ($s:expr, $p:expr) => {
        if $p.is_null() {
            return $s.fail(PresdecStatus::InvalidArgument, "null output pointer");
        }
    };
}

/// Parses an SMT-LIB script (declarations and assertions over Int).
///
/// # Safety
/// `session` is live, `text` is a NUL-terminated string and `out` is
/// writable. On success `*out` owns a new formula.
#[no_mangle]
pub unsafe extern "C" fn presdec_formula_parse(
    session: *const PresdecSession,
    text: *const c_char,
    out: *mut *mut PresdecFormula,
) -> PresdecStatus {
    let s = session!(session);
    out!(s, out);
    s.guard(|_| {
        // SAFETY: the caller guarantees `text` is null or NUL-terminated.
        let phi = parse_formula(unsafe { text_arg(text) }?)?.formula;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = new_formula(phi) };
        Ok(())
    })
}

/// SMT-LIB script for the formula; free with [`presdec_string_free`].
///
/// # Safety
/// `formula` is null or live.
#[no_mangle]
pub unsafe extern "C" fn presdec_formula_to_smtlib(formula: *const PresdecFormula) -> *mut c_char {
    // SAFETY: the caller guarantees the pointer is null or live.
    match unsafe { formula.as_ref() } {
        Some(f) => into_c_string(print_script(&f.formula)),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `session` and `formula` are live; `out_sat` is writable.
#[no_mangle]
pub unsafe extern "C" fn presdec_check_sat(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    out_sat: *mut bool,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out_sat);
    s.guard(|solver| {
        let sat = solver.is_sat(phi)?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out_sat = sat };
        Ok(())
    })
}

/// Whether the formula is monadically decomposable.
///
/// # Safety
/// `session` and `formula` are live; `out_decomposable` is writable.
#[no_mangle]
pub unsafe extern "C" fn presdec_check_monadic(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    out_decomposable: *mut bool,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out_decomposable);
    s.guard(|solver| {
        let d = check_monadic(phi, solver)?.decomposable;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out_decomposable = d };
        Ok(())
    })
}

/// Whether the formula is decomposable on one variable.
///
/// # Safety
/// `session` and `formula` are live, `var` is NUL-terminated and
/// `out_decomposable` is writable.
#[no_mangle]
pub unsafe extern "C" fn presdec_check_decomposable_on(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    var: *const c_char,
    out_decomposable: *mut bool,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out_decomposable);
    s.guard(|solver| {
        // SAFETY: the caller guarantees `var` is null or NUL-terminated.
        let x = VarId::new(unsafe { text_arg(var) }?);
        let d = check_decomposable_on(phi, &x, None, solver)?.decomposable;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out_decomposable = d };
        Ok(())
    })
}

/// Whether the formula is decomposable along a partition such as
/// `"{x},{y,z}"`.
///
/// # Safety
/// `session` and `formula` are live, `partition` is NUL-terminated and
/// `out_decomposable` is writable.
#[no_mangle]
pub unsafe extern "C" fn presdec_check_pi(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    partition: *const c_char,
    out_decomposable: *mut bool,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out_decomposable);
    s.guard(|solver| {
        // SAFETY: the caller guarantees `partition` is null or NUL-terminated.
        let parts = parse_pi(unsafe { text_arg(partition) }?)?;
        let d = check_pi(phi, &parts, solver)?.iter().all(|v| v.decomposable);
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out_decomposable = d };
        Ok(())
    })
}

/// Equivalent monadic formula.
///
/// # Safety
/// `session` and `formula` are live; `out` is writable. On success `*out`
/// owns a new formula.
#[no_mangle]
pub unsafe extern "C" fn presdec_decompose_full(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    out: *mut *mut PresdecFormula,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out);
    s.guard(|solver| {
        let d = decompose_full_with(phi, solver, &s.opts)?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = new_formula(d) };
        Ok(())
    })
}

/// Equivalent formula in which `var` occurs only in atoms of its own.
///
/// # Safety
/// As [`presdec_decompose_full`]; `var` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn presdec_decompose_on(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    var: *const c_char,
    out: *mut *mut PresdecFormula,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out);
    s.guard(|solver| {
        // SAFETY: the caller guarantees `var` is null or NUL-terminated.
        let x = VarId::new(unsafe { text_arg(var) }?);
        let d = decompose_on_with(phi, &x, solver, &s.opts)?.to_formula();
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = new_formula(d) };
        Ok(())
    })
}

/// Decomposition along a partition such as `"{x},{y,z}"`.
///
/// # Safety
/// As [`presdec_decompose_full`]; `partition` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn presdec_pi_decompose(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    partition: *const c_char,
    out: *mut *mut PresdecFormula,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out);
    s.guard(|solver| {
        // SAFETY: the caller guarantees `partition` is null or NUL-terminated.
        let parts = parse_pi(unsafe { text_arg(partition) }?)?;
        let d = pi_decompose_with(phi, &parts, solver, &s.opts)?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = new_formula(d) };
        Ok(())
    })
}

/// Eliminates the single quantifier block of an SMT-LIB script.
///
/// # Safety
/// `session` is live, `text` is NUL-terminated and `out` is writable. On
/// success `*out` owns a new formula.
#[no_mangle]
pub unsafe extern "C" fn presdec_eliminate(
    session: *const PresdecSession,
    text: *const c_char,
    out: *mut *mut PresdecFormula,
) -> PresdecStatus {
    let s = session!(session);
    out!(s, out);
    s.guard(|solver| {
        // SAFETY: the caller guarantees `text` is null or NUL-terminated.
        let (block, _) = parse_quantified(unsafe { text_arg(text) }?)?;
        let r = eliminate_with(&block, solver, &s.opts)?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = new_formula(r) };
        Ok(())
    })
}

/// JSON report of the per-variable check, in the command-line report
/// format; free with [`presdec_string_free`].
///
/// # Safety
/// `session` and `formula` are live; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn presdec_report_json(
    session: *const PresdecSession,
    formula: *const PresdecFormula,
    out_json: *mut *mut c_char,
) -> PresdecStatus {
    let s = session!(session);
    let phi = formula!(s, formula);
    out!(s, out_json);
    s.guard(|solver| {
        let verdicts: Vec<_> = check_monadic(phi, solver)?.per_variable.into_values().collect();
        let mut report = Report::check("<ffi>".as_ref(), &verdicts);
        report.input = None;
        let json = serde_json::to_string(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out_json = into_c_string(json) };
        Ok(())
    })
}
