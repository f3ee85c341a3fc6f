//! C interface to the mopip solver.
//!
//! Problems and results are opaque handles created and released through
//! this API. Every fallible call returns a [`MopipError`]; on failure a
//! description is available from [`mopip_last_error`] on the same thread
//! until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use mopip::poly::{parse_polynomial, Polynomial, VarContext};
use mopip::problems::{deserialize, generate, serialize, Family, FamilySpec, GeneratedInstance};
use mopip::solver::{self, Algorithm, ParetoResult, SolveOptions, Status};
use mopip::systems::ProblemInstance;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MopipError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Solve = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Outcome stored in a result handle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MopipStatus {
    Solved = 0,
    Infeasible = 1,
}

/// A problem under construction or loaded from JSON.
pub struct MopipProblem {
    ctx: Arc<VarContext>,
    objectives: Vec<Polynomial>,
    inequalities: Vec<Polynomial>,
    equalities: Vec<Polynomial>,
    bounds: Option<Vec<u64>>,
    spec: Option<FamilySpec>,
}

/// The Pareto set returned by [`mopip_solve`].
pub struct MopipResult {
    result: ParetoResult,
    points: Vec<Vec<u8>>,
    values: Vec<Vec<mopip::poly::Rational>>,
    gb_millis: u64,
    total_millis: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(MopipError, String);

impl Failure {
    fn new(code: MopipError, message: impl ToString) -> Self {
        Failure(code, message.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MopipError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MopipError::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            MopipError::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::new(
            MopipError::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(MopipError::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(MopipError::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(
            MopipError::NullPointer,
            "output pointer is null",
        ));
    }
    *out = ptr::null_mut();
    Ok(())
}

impl MopipProblem {
    fn from_instance(inst: GeneratedInstance) -> Self {
        let p = inst.problem;
        MopipProblem {
            ctx: p.context().clone(),
            objectives: p.objectives().to_vec(),
            inequalities: p.inequalities().to_vec(),
            equalities: p.equalities().to_vec(),
            bounds: p.bounds().map(<[u64]>::to_vec),
            spec: inst.spec,
        }
    }

    fn instance(&self) -> Result<ProblemInstance, Failure> {
        let invalid = |e: mopip::systems::SystemError| Failure::new(MopipError::InvalidArgument, e);
        let p = ProblemInstance::in_context(
            &self.ctx,
            self.objectives.clone(),
            self.inequalities.clone(),
            self.equalities.clone(),
        )
        .map_err(invalid)?;
        match &self.bounds {
            Some(b) => p.with_bounds(b.clone()).map_err(invalid),
            None => Ok(p),
        }
    }
}

/// Last error message on this thread, or null. The string stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mopip_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mopip_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates an empty problem over binary variables `x1..xn`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_new(n: usize, out: *mut *mut MopipProblem) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        if n == 0 {
            return Err(Failure::new(
                MopipError::InvalidArgument,
                "n must be positive",
            ));
        }
        let problem = MopipProblem {
            ctx: VarContext::decision(n),
            objectives: Vec::new(),
            inequalities: Vec::new(),
            equalities: Vec::new(),
            bounds: None,
            spec: None,
        };
        *out = Box::into_raw(Box::new(problem));
        Ok(())
    })
}

/// Parses a problem from an instance document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_from_json(
    json: *const c_char,
    out: *mut *mut MopipProblem,
) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        let json = text(json, "json")?;
        let inst = deserialize(json.as_bytes()).map_err(|e| Failure::new(MopipError::Parse, e))?;
        *out = Box::into_raw(Box::new(MopipProblem::from_instance(inst)));
        Ok(())
    })
}

/// Generates a benchmark instance, e.g. family `"biobj_linkn"`.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_generate(
    family: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut MopipProblem,
) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        let family: Family = text(family, "family")?
            .parse()
            .map_err(|e| Failure::new(MopipError::InvalidArgument, e))?;
        let spec = FamilySpec::new(family, n, seed)
            .map_err(|e| Failure::new(MopipError::InvalidArgument, e))?;
        let inst = generate(&spec).map_err(|e| Failure::new(MopipError::InvalidArgument, e))?;
        *out = Box::into_raw(Box::new(MopipProblem::from_instance(inst)));
        Ok(())
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_free(problem: *mut MopipProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MopipConstraintKind {
    Objective = 0,
    Inequality = 1,
    Equality = 2,
}

/// Appends a polynomial written as e.g. `"3*x1 - 2/5*x2^2 + 1"`.
/// Inequalities read `p <= 0`, equalities `p = 0`.
///
/// # Safety
/// `problem` must be a live handle and `expr` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_add(
    problem: *mut MopipProblem,
    kind: MopipConstraintKind,
    expr: *const c_char,
) -> MopipError {
    guard(|| {
        let problem = problem
            .as_mut()
            .ok_or_else(|| Failure::new(MopipError::NullPointer, "problem is null"))?;
        let expr = text(expr, "expression")?;
        let poly =
            parse_polynomial(expr, &problem.ctx).map_err(|e| Failure::new(MopipError::Parse, e))?;
        match kind {
            MopipConstraintKind::Objective => problem.objectives.push(poly),
            MopipConstraintKind::Inequality => problem.inequalities.push(poly),
            MopipConstraintKind::Equality => problem.equalities.push(poly),
        }
        problem.spec = None;
        Ok(())
    })
}

/// Number of decision variables.
///
/// # Safety
/// `problem` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_num_vars(problem: *const MopipProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.ctx.len())
}

/// Serializes a problem to an instance document. Free the string with
/// [`mopip_string_free`].
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_problem_to_json(
    problem: *const MopipProblem,
    out: *mut *mut c_char,
) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        let problem = handle(problem, "problem")?;
        let inst = GeneratedInstance {
            spec: problem.spec,
            problem: problem.instance()?,
            data: None,
        };
        *out = CString::new(serialize(&inst))
            .expect("JSON has no NUL")
            .into_raw();
        Ok(())
    })
}

/// Solves with the named algorithm (`alg1`, `kkt`, `kkt_sl`, `fj`, `fj_sl`,
/// `mofj` or `brute`). A `budget` of 0 keeps the default step budget.
///
/// # Safety
/// `problem` must be a live handle, `algorithm` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_solve(
    problem: *const MopipProblem,
    algorithm: *const c_char,
    budget: u64,
    out: *mut *mut MopipResult,
) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        let problem = handle(problem, "problem")?;
        let algo: Algorithm = text(algorithm, "algorithm")?
            .parse()
            .map_err(|e: String| Failure::new(MopipError::InvalidArgument, e))?;
        let mut opts = SolveOptions::default();
        if budget > 0 {
            opts = opts.with_budget(budget);
        }
        let solved = solver::solve(&problem.instance()?, algo, &opts).map_err(|e| {
            let code = if e.is_budget_exceeded() {
                MopipError::BudgetExceeded
            } else {
                MopipError::Solve
            };
            Failure::new(code, e)
        })?;
        let points: Vec<Vec<u8>> = solved.result.x_e().keys().cloned().collect();
        let inst = problem.instance()?;
        let values = points
            .iter()
            .map(|x| solver::evaluate_objectives(x, &inst))
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::new(MopipError::Solve, e))?;
        *out = Box::into_raw(Box::new(MopipResult {
            result: solved.result,
            points,
            values,
            gb_millis: solved.gb_time.as_millis() as u64,
            total_millis: solved.total_time.as_millis() as u64,
        }));
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_free(result: *mut MopipResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_status(result: *const MopipResult) -> MopipStatus {
    match result.as_ref().map(|r| r.result.status()) {
        Some(Status::Solved) => MopipStatus::Solved,
        _ => MopipStatus::Infeasible,
    }
}

/// Number of nondominated points `x` (the size of `X_E`).
///
/// # Safety
/// `result` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mopip_result_num_points(result: *const MopipResult) -> usize {
    result.as_ref().map_or(0, |r| r.points.len())
}

/// Number of distinct objective vectors (the size of `Y_E`).
///
/// # Safety
/// `result` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mopip_result_num_values(result: *const MopipResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.y_e().len())
}

/// Gröbner and total wall time in milliseconds.
///
/// # Safety
/// `result` must be a live handle; the output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_timings(
    result: *const MopipResult,
    gb_ms: *mut u64,
    total_ms: *mut u64,
) {
    if let Some(r) = result.as_ref() {
        if !gb_ms.is_null() {
            *gb_ms = r.gb_millis;
        }
        if !total_ms.is_null() {
            *total_ms = r.total_millis;
        }
    }
}

/// Copies point `index` of `X_E` (sorted lexicographically) into `buf`,
/// which must hold `len >= n` bytes of 0/1 values.
///
/// # Safety
/// `result` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_point(
    result: *const MopipResult,
    index: usize,
    buf: *mut u8,
    len: usize,
) -> MopipError {
    guard(|| {
        let r = handle(result, "result")?;
        let x = r.points.get(index).ok_or_else(|| {
            Failure::new(
                MopipError::OutOfRange,
                format!("point {index} out of range"),
            )
        })?;
        if buf.is_null() {
            return Err(Failure::new(MopipError::NullPointer, "buffer is null"));
        }
        if len < x.len() {
            return Err(Failure::new(
                MopipError::OutOfRange,
                format!("buffer needs {} bytes", x.len()),
            ));
        }
        ptr::copy_nonoverlapping(x.as_ptr(), buf, x.len());
        Ok(())
    })
}

/// Objective `objective` at point `index` as a fraction `num/den` with
/// `den > 0`. Fails with `OutOfRange` when either part exceeds 64 bits.
///
/// # Safety
/// `result` must be a live handle and `num`, `den` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_value(
    result: *const MopipResult,
    index: usize,
    objective: usize,
    num: *mut i64,
    den: *mut i64,
) -> MopipError {
    guard(|| {
        let r = handle(result, "result")?;
        let v = r
            .values
            .get(index)
            .and_then(|row| row.get(objective))
            .ok_or_else(|| Failure::new(MopipError::OutOfRange, "index out of range"))?;
        if num.is_null() || den.is_null() {
            return Err(Failure::new(
                MopipError::NullPointer,
                "output pointer is null",
            ));
        }
        let conv = |x: &mopip::poly::Integer| {
            i64::try_from(x)
                .map_err(|_| Failure::new(MopipError::OutOfRange, "value exceeds 64 bits"))
        };
        *num = conv(v.numer())?;
        *den = conv(v.denom())?;
        Ok(())
    })
}

/// Result document with exact `num/den` strings. Free with
/// [`mopip_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mopip_result_to_json(
    result: *const MopipResult,
    out: *mut *mut c_char,
) -> MopipError {
    guard(|| {
        out_ptr(out)?;
        let r = handle(result, "result")?;
        let text =
            serde_json::to_string(&r.result).map_err(|e| Failure::new(MopipError::Solve, e))?;
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mopip_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
