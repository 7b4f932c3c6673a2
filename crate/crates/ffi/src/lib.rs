//! C ABI for the workbench: opaque handles, status codes, and JSON
//! strings for structured results.
//!
//! Conventions:
//!
//! - Every `char*` returned here is allocated by this library and must
//!   be released with [`pn_string_free`]; handles are released with
//!   their `_free` functions.
//! - Functions that can fail return a [`PnStatus`]; on failure a
//!   human-readable message is retrievable (once) via
//!   [`pn_last_error_message`].
//! - Null pointers where data is expected produce
//!   `PN_STATUS_NULL_POINTER` (or a null result), never undefined
//!   behavior.
//! - Structured results (condition tables, search outcomes, proof
//!   reports, replication summaries) are JSON documents with the same
//!   shape the CLI emits under `--json`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pnlogic::formula::{self, Formula};
use pnlogic::model::{self, Model};
use pnlogic::proof;
use pnlogic::replicate;
use pnlogic::search::{self, ConditionSet, SearchSpec, SearchVerdict};
use pnlogic::semantics::{self, BoxMode, EvalContext};

/// Status code of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    EvalError = 5,
    BudgetExceeded = 6,
}

/// Necessity interpretations exposed through the C ABI.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PnBoxMode {
    Standard = 0,
    Simple = 1,
}

impl From<PnBoxMode> for BoxMode {
    fn from(mode: PnBoxMode) -> BoxMode {
        match mode {
            PnBoxMode::Standard => BoxMode::Standard,
            PnBoxMode::Simple => BoxMode::Simple,
        }
    }
}

/// Opaque parsed formula.
pub struct PnFormula {
    inner: Formula,
}

/// Opaque model (frame plus valuation).
pub struct PnModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string())
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Takes the most recent error message, or null when none is pending.
/// The caller owns the returned string.
#[no_mangle]
pub extern "C" fn pn_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow_mut()
            .take()
            .map_or(ptr::null_mut(), CString::into_raw)
    })
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must have been returned by a `pnlogic-ffi` function and not
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn pn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

unsafe fn read_utf8<'a>(text: *const c_char) -> Result<&'a str, PnStatus> {
    if text.is_null() {
        set_error("null pointer");
        return Err(PnStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(text) }.to_str().map_err(|e| {
        set_error(format!("invalid UTF-8: {e}"));
        PnStatus::InvalidUtf8
    })
}

/// Parses a formula. On success stores a handle in `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_formula_parse(
    text: *const c_char,
    out: *mut *mut PnFormula,
) -> PnStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PnStatus::NullPointer;
    }
    let text = match unsafe { read_utf8(text) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    match formula::parse(text) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(PnFormula { inner })) };
            PnStatus::Ok
        }
        Err(e) => {
            set_error(e);
            PnStatus::ParseError
        }
    }
}

/// Renders a formula in the ASCII grammar; null on null input. The
/// caller owns the returned string.
///
/// # Safety
/// `f` must be a live handle from [`pn_formula_parse`] or null.
#[no_mangle]
pub unsafe extern "C" fn pn_formula_print(f: *const PnFormula) -> *mut c_char {
    if f.is_null() {
        return ptr::null_mut();
    }
    into_c_string(unsafe { &(*f).inner }.to_string())
}

/// Releases a formula handle. Null is accepted.
///
/// # Safety
/// `f` must be a handle from [`pn_formula_parse`], not freed before.
#[no_mangle]
pub unsafe extern "C" fn pn_formula_free(f: *mut PnFormula) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Parses a model file (JSON). A file without a valuation is accepted
/// with every atom empty.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_model_parse_json(
    text: *const c_char,
    out: *mut *mut PnModel,
) -> PnStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PnStatus::NullPointer;
    }
    let text = match unsafe { read_utf8(text) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    match model::model_from_json(text) {
        Ok(loaded) => {
            unsafe { *out = Box::into_raw(Box::new(PnModel { inner: loaded.value })) };
            PnStatus::Ok
        }
        Err(e) => {
            set_error(e);
            PnStatus::ParseError
        }
    }
}

/// Releases a model handle. Null is accepted.
///
/// # Safety
/// `m` must be a handle from [`pn_model_parse_json`], not freed before.
#[no_mangle]
pub unsafe extern "C" fn pn_model_free(m: *mut PnModel) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Number of worlds, or -1 on null input.
///
/// # Safety
/// `m` must be a live model handle or null.
#[no_mangle]
pub unsafe extern "C" fn pn_model_world_count(m: *const PnModel) -> i32 {
    if m.is_null() {
        return -1;
    }
    unsafe { &(*m).inner }.frame().world_count() as i32
}

/// Condition table for the model as a JSON array (order axioms,
/// condition (1), condition (2), star, subset closure, valuation
/// monotonicity); null on null input. The caller owns the string.
///
/// # Safety
/// `m` must be a live model handle or null.
#[no_mangle]
pub unsafe extern "C" fn pn_model_check_json(m: *const PnModel) -> *mut c_char {
    if m.is_null() {
        return ptr::null_mut();
    }
    let model = unsafe { &(*m).inner };
    let mut reports = model::validate_model(model);
    let valuation = reports.pop().expect("valuation report present");
    reports.push(model::check_cond2(model.frame()));
    reports.push(model::check_star(model.frame()));
    reports.push(model::check_starstar(model.frame()));
    reports.push(valuation);
    into_c_string(serde_json::to_string(&reports).expect("reports serialize"))
}

/// Whether `world` forces the formula under the given box mode.
///
/// # Safety
/// `m` and `f` must be live handles and `out` a valid pointer to
/// writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_forces(
    m: *const PnModel,
    world: u8,
    f: *const PnFormula,
    mode: PnBoxMode,
    out: *mut bool,
) -> PnStatus {
    if m.is_null() || f.is_null() || out.is_null() {
        set_error("null pointer");
        return PnStatus::NullPointer;
    }
    let model = unsafe { &(*m).inner };
    let formula = unsafe { &(*f).inner };
    let ctx = EvalContext::new(model, mode.into()).expect("neighborhood mode");
    match semantics::forces(&ctx, world, formula) {
        Ok(holds) => {
            unsafe { *out = holds };
            PnStatus::Ok
        }
        Err(e) => {
            set_error(e);
            PnStatus::EvalError
        }
    }
}

/// Extension of the formula as a bitmask over world indices.
///
/// # Safety
/// `m` and `f` must be live handles and `out` a valid pointer to
/// writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_extension(
    m: *const PnModel,
    f: *const PnFormula,
    mode: PnBoxMode,
    out: *mut u16,
) -> PnStatus {
    if m.is_null() || f.is_null() || out.is_null() {
        set_error("null pointer");
        return PnStatus::NullPointer;
    }
    let model = unsafe { &(*m).inner };
    let formula = unsafe { &(*f).inner };
    let ctx = EvalContext::new(model, mode.into()).expect("neighborhood mode");
    match semantics::extension(&ctx, formula) {
        Ok(set) => {
            unsafe { *out = set.mask() };
            PnStatus::Ok
        }
        Err(e) => {
            set_error(e);
            PnStatus::EvalError
        }
    }
}

/// Searches for a countermodel to the scheme and stores a JSON document
/// in `out` with the verdict, search stats, and (when found) the
/// countermodel in the model file format plus a witness block.
///
/// # Safety
/// `scheme` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_search_countermodel_json(
    scheme: *const c_char,
    max_worlds: u8,
    nbhd_family_cap: u8,
    mode: PnBoxMode,
    require_cond2: bool,
    require_star: bool,
    require_starstar: bool,
    out: *mut *mut c_char,
) -> PnStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PnStatus::NullPointer;
    }
    let text = match unsafe { read_utf8(scheme) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    let scheme = match formula::parse(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(e);
            return PnStatus::ParseError;
        }
    };
    let spec = SearchSpec::new(scheme)
        .max_worlds(max_worlds)
        .family_cap(nbhd_family_cap)
        .box_mode(mode.into())
        .require(ConditionSet {
            cond2: require_cond2,
            star: require_star,
            starstar: require_starstar,
        });
    let outcome = match search::find_countermodel(&spec) {
        Ok(o) => o,
        Err(e) => {
            let status = match e {
                search::SearchError::Budget { .. } => PnStatus::BudgetExceeded,
                _ => PnStatus::InvalidArgument,
            };
            set_error(e);
            return status;
        }
    };
    let document = serde_json::json!({
        "verdict": outcome.verdict,
        "scheme": spec.scheme.to_string(),
        "stats": outcome.stats,
        "countermodel": search::countermodel_document(&spec.scheme, &outcome),
    });
    unsafe { *out = into_c_string(document.to_string()) };
    if outcome.verdict == SearchVerdict::BudgetExhausted {
        set_error("assignment budget exhausted before the space was covered");
        return PnStatus::BudgetExceeded;
    }
    PnStatus::Ok
}

/// Checks a proof file and stores a JSON report
/// `{"valid": bool, "first_error": {"line": n, "reason": "..."} | null}`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_proof_check_json(
    text: *const c_char,
    out: *mut *mut c_char,
) -> PnStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PnStatus::NullPointer;
    }
    let text = match unsafe { read_utf8(text) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    let lines = match proof::parse_proof(text) {
        Ok(l) => l,
        Err(e) => {
            set_error(e);
            return PnStatus::ParseError;
        }
    };
    let report = proof::check_proof(&lines);
    let document = serde_json::json!({
        "valid": report.valid,
        "first_error": report.first_error.map(|e| serde_json::json!({
            "line": e.line,
            "reason": e.defect.to_string(),
        })),
    });
    unsafe { *out = into_c_string(document.to_string()) };
    PnStatus::Ok
}

/// Runs every replication case and stores the JSON summary the CLI
/// prints for `replicate all --json`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pn_replicate_all_json(out: *mut *mut c_char) -> PnStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PnStatus::NullPointer;
    }
    let cases = replicate::run_all();
    let passed = cases.iter().filter(|c| c.pass).count();
    let total = cases.len();
    let document = serde_json::json!({
        "cases": cases,
        "passed": passed,
        "total": total,
    });
    unsafe { *out = into_c_string(document.to_string()) };
    PnStatus::Ok
}
