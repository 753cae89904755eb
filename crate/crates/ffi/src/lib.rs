//! C ABI over `gamemu`. Objects cross the boundary as opaque handles that
//! the caller frees with the matching `gm_*_free`. Every entry point returns
//! a `GmStatus`; on failure the message is available from
//! `gm_last_error_message` on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gamemu::ode::{refine_reach, to_f64, ReachQuery, ReachVerdict};
use gamemu::proof::{check_proof, Proof, Verdict};
use gamemu::semantics::{default_support, eval_formula, Structure};
use gamemu::syntax::{parse_formula_infer, Formula, GameSignature, Logic};
use gamemu::translate::{g1, g_combined, parikh_f};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Malformed structure, proof or query, or an unsupported argument.
    Input = 4,
    /// The formula does not fit the structure or translation.
    Semantics = 5,
    Panic = 6,
}

pub const GM_LOGIC_GL: i32 = 0;
pub const GM_LOGIC_MU: i32 = 1;

pub const GM_TRANSLATE_F: i32 = 0;
pub const GM_TRANSLATE_G1: i32 = 1;
pub const GM_TRANSLATE_G: i32 = 2;

pub const GM_REACH_PASSED: i32 = 0;
pub const GM_REACH_REJECTED_AT_LEVEL0: i32 = 1;
pub const GM_REACH_NO_WITNESS: i32 = 2;

/// A finite structure.
pub struct GmStructure(Structure);

/// A parsed formula together with its inferred signature.
pub struct GmFormula {
    formula: Formula,
    sig: GameSignature,
    logic: Logic,
}

/// Outcome of `gm_reach`. Rationals are rounded to the nearest double.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GmReachResult {
    /// One of the `GM_REACH_*` constants.
    pub verdict: i32,
    /// Depth passed, or the first depth without a witness.
    pub depth: u32,
    pub budget_exhausted: bool,
    pub lhs: f64,
    pub bound: f64,
    pub n: f64,
    pub checks: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GmStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn fail<T>(status: GmStatus, msg: impl ToString) -> FfiResult<T> {
    Err(Failure(status, msg.to_string()))
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', "\\0")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, records its error and converts panics into `GmStatus::Panic`.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> GmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            GmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("internal error: {msg}")));
            GmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(GmStatus::NullArgument, format!("`{what}` is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(GmStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref()
        .map_or_else(|| fail(GmStatus::NullArgument, format!("`{what}` is null")), Ok)
}

fn out<T>(p: *mut T, what: &str) -> FfiResult<*mut T> {
    if p.is_null() {
        fail(GmStatus::NullArgument, format!("`{what}` is null"))
    } else {
        Ok(p)
    }
}

fn logic(code: i32) -> FfiResult<Logic> {
    match code {
        GM_LOGIC_GL => Ok(Logic::Gl),
        GM_LOGIC_MU => Ok(Logic::Mu),
        _ => fail(GmStatus::Input, format!("unknown logic {code}")),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next `gm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `gm_*` function that hands over ownership.
#[no_mangle]
pub unsafe extern "C" fn gm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a structure from its JSON description.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_structure` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_structure_from_json(json: *const c_char, out_structure: *mut *mut GmStructure) -> GmStatus {
    guard(|| {
        let dst = out(out_structure, "out_structure")?;
        let st = Structure::from_json_str(read_str(json, "json")?).or_else(|e| fail(GmStatus::Input, e))?;
        *dst = Box::into_raw(Box::new(GmStructure(st)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or come from `gm_structure_from_json`, freed once.
#[no_mangle]
pub unsafe extern "C" fn gm_structure_free(s: *mut GmStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parses a formula of the given logic (`GM_LOGIC_*`).
///
/// # Safety
/// `src` must be a nul-terminated string and `out_formula` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_formula_parse(src: *const c_char, logic_code: i32, out_formula: *mut *mut GmFormula) -> GmStatus {
    guard(|| {
        let dst = out(out_formula, "out_formula")?;
        let logic = logic(logic_code)?;
        let (formula, sig) = parse_formula_infer(read_str(src, "src")?, logic).or_else(|e| fail(GmStatus::Parse, e))?;
        *dst = Box::into_raw(Box::new(GmFormula { formula, sig, logic }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a formula handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn gm_formula_free(f: *mut GmFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Prints a formula. Free the result with `gm_string_free`.
///
/// # Safety
/// `f` must be a live formula handle and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_formula_to_string(f: *const GmFormula, out_text: *mut *mut c_char) -> GmStatus {
    guard(|| {
        let dst = out(out_text, "out_text")?;
        let f = handle(f, "formula")?;
        *dst = CString::new(f.formula.to_string()).expect("printer emits no nul").into_raw();
        Ok(())
    })
}

fn denotation(st: &Structure, f: &GmFormula) -> FfiResult<gamemu::semantics::StateSet> {
    st.check_signature(&f.sig).or_else(|e| fail(GmStatus::Semantics, e))?;
    let sup = default_support(&[&f.formula], &[]);
    eval_formula(st, &f.formula, &sup).or_else(|e| fail(GmStatus::Semantics, e))
}

/// Whether the formula holds in every state of the structure, with the
/// number of satisfying assignments over its variables in sorted order.
/// Either out pointer may be null.
///
/// # Safety
/// Handles must be live; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_check(
    structure: *const GmStructure,
    formula: *const GmFormula,
    out_valid: *mut bool,
    out_satisfying: *mut u64,
) -> GmStatus {
    guard(|| {
        let st = &handle(structure, "structure")?.0;
        let set = denotation(st, handle(formula, "formula")?)?;
        if !out_valid.is_null() {
            *out_valid = set.is_full();
        }
        if !out_satisfying.is_null() {
            *out_satisfying = set.len() as u64;
        }
        Ok(())
    })
}

/// Translates with `GM_TRANSLATE_F` (game to fixpoint formulas),
/// `GM_TRANSLATE_G1` or `GM_TRANSLATE_G` (fixpoint to game formulas).
///
/// # Safety
/// `formula` must be live and `out_formula` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_translate(formula: *const GmFormula, direction: i32, out_formula: *mut *mut GmFormula) -> GmStatus {
    guard(|| {
        let dst = out(out_formula, "out_formula")?;
        let f = handle(formula, "formula")?;
        let (want, to) = match direction {
            GM_TRANSLATE_F => (Logic::Gl, Logic::Mu),
            GM_TRANSLATE_G1 | GM_TRANSLATE_G => (Logic::Mu, Logic::Gl),
            d => return fail(GmStatus::Input, format!("unknown direction {d}")),
        };
        if f.logic != want {
            return fail(GmStatus::Input, format!("translation expects a {want} formula"));
        }
        let result = match direction {
            GM_TRANSLATE_F => parikh_f(&f.formula),
            GM_TRANSLATE_G1 => g1(&f.formula),
            _ => g_combined(&f.formula).or_else(|e| fail(GmStatus::Semantics, e))?,
        };
        let sig = GameSignature::of_formula(&result).or_else(|e| fail(GmStatus::Semantics, e))?;
        *dst = Box::into_raw(Box::new(GmFormula {
            formula: result,
            sig,
            logic: to,
        }));
        Ok(())
    })
}

/// Checks a JSON-lines proof. `out_line` receives 0 when accepted and the
/// 1-based position of the first rejected line otherwise.
///
/// # Safety
/// `jsonl` must be a nul-terminated string; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn gm_prove(jsonl: *const c_char, calculus: i32, out_accepted: *mut bool, out_line: *mut usize) -> GmStatus {
    guard(|| {
        let acc = out(out_accepted, "out_accepted")?;
        let line = out(out_line, "out_line")?;
        let logic = logic(calculus)?;
        let p = Proof::from_jsonl(read_str(jsonl, "jsonl")?, logic).or_else(|e| fail(GmStatus::Input, e))?;
        match check_proof(&p, logic) {
            Verdict::Accepted => {
                *acc = true;
                *line = 0;
            }
            Verdict::Rejected { line: k, .. } => {
                *acc = false;
                *line = k + 1;
            }
        }
        Ok(())
    })
}

/// Runs the reachability refinement on a JSON query.
///
/// # Safety
/// `query_json` must be a nul-terminated string and `out_result` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_reach(query_json: *const c_char, out_result: *mut GmReachResult) -> GmStatus {
    guard(|| {
        let dst = out(out_result, "out_result")?;
        let q = ReachQuery::from_json(read_str(query_json, "query_json")?).or_else(|e| fail(GmStatus::Input, e))?;
        let r = refine_reach(&q).or_else(|e| fail(GmStatus::Input, e))?;
        let (verdict, depth, budget_exhausted) = match r.verdict {
            ReachVerdict::PassedToDepth(d) => (GM_REACH_PASSED, d, false),
            ReachVerdict::RejectedAtLevel0 => (GM_REACH_REJECTED_AT_LEVEL0, 0, false),
            ReachVerdict::NoWitnessFound { depth, budget_exhausted } => (GM_REACH_NO_WITNESS, depth, budget_exhausted),
        };
        *dst = GmReachResult {
            verdict,
            depth,
            budget_exhausted,
            lhs: to_f64(&r.level0.lhs),
            bound: to_f64(&r.level0.bound),
            n: to_f64(&r.n),
            checks: r.checks as u64,
        };
        Ok(())
    })
}
