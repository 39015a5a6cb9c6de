//! C ABI over `alephfree`.
//!
//! Objects cross the boundary as opaque handles returned by the parsing and
//! loading functions and released with the matching `af_*_free`. Every fallible
//! function returns an [`AfStatus`] and writes its result through an out
//! pointer; on failure `af_last_error` describes the problem. Strings
//! returned by the library are NUL-terminated UTF-8 and must be released
//! with [`af_string_free`]. Handles may be shared between threads for
//! reading; the last-error slot is per thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use alephfree::formula::{is_delta0, parse_formula, relativize, Formula, Var};
use alephfree::group::{
    is_pure, pontryagin_certify, pure_closure, quotient_presentation, Family, GeneratorSet, GroupFile, LatticeGroup,
    LevelledGroup, PresentationFile, PresentedGroup, Verdict,
};
use alephfree::hf::{absoluteness_scan, evaluate, v_level, Assignment, HfSet, ModelDomain, ModelFile};
use alephfree::linalg::{snf, IntMatrix, MatrixFile};
use alephfree::SCHEMA_VERSION;

/// Result codes. Yes/no answers come back through out parameters, so a
/// negative answer is still `AF_STATUS_OK`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    EngineError = 5,
    Panic = 6,
}

pub struct AfFormula(Formula);
pub struct AfModel(ModelDomain);
pub struct AfGroup(LatticeGroup);
pub struct AfPresented(PresentedGroup);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

struct Fail(AfStatus, String);

type FfiResult<T> = Result<T, Fail>;

fn fail<T>(status: AfStatus, msg: impl ToString) -> FfiResult<T> {
    Err(Fail(status, msg.to_string()))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> AfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            AfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(AfStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(AfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().map_or_else(|| fail(AfStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return fail(AfStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).or_else(|_| fail(AfStatus::EngineError, "string contains NUL"))?;
    write_out(out, c.into_raw())
}

fn json_arg<T: for<'de> serde::Deserialize<'de>>(text: &str, what: &str) -> FfiResult<T> {
    serde_json::from_str(text).or_else(|e| fail(AfStatus::InvalidInput, format!("{what}: {e}")))
}

fn engine<T, E: ToString>(r: Result<T, E>) -> FfiResult<T> {
    r.or_else(|e| fail(AfStatus::EngineError, e))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn af_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Version number carried by every JSON report.
#[no_mangle]
pub extern "C" fn af_schema_version() -> u32 {
    SCHEMA_VERSION
}

#[no_mangle]
pub unsafe extern "C" fn af_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- formulas ----

#[no_mangle]
pub unsafe extern "C" fn af_formula_parse(text: *const c_char, out: *mut *mut AfFormula) -> AfStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let phi = parse_formula(text).or_else(|e| fail(AfStatus::ParseError, e))?;
        write_out(out, Box::into_raw(Box::new(AfFormula(phi))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_formula_free(f: *mut AfFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub unsafe extern "C" fn af_formula_to_string(f: *const AfFormula, out: *mut *mut c_char) -> AfStatus {
    guard(|| write_string(out, handle(f, "formula")?.0.to_string()))
}

/// The formula tree as JSON.
#[no_mangle]
pub unsafe extern "C" fn af_formula_to_json(f: *const AfFormula, out: *mut *mut c_char) -> AfStatus {
    guard(|| write_string(out, serde_json::to_string(&handle(f, "formula")?.0).expect("formula serializes")))
}

#[no_mangle]
pub unsafe extern "C" fn af_formula_is_delta0(f: *const AfFormula, out: *mut bool) -> AfStatus {
    guard(|| write_out(out, is_delta0(&handle(f, "formula")?.0).verdict))
}

/// Delta0 verdict with its rule trace, as JSON.
#[no_mangle]
pub unsafe extern "C" fn af_formula_delta0_json(f: *const AfFormula, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let v = is_delta0(&handle(f, "formula")?.0);
        write_string(out, serde_json::to_string(&v).expect("verdict serializes"))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_formula_relativize(
    f: *const AfFormula,
    model_var: *const c_char,
    out: *mut *mut AfFormula,
) -> AfStatus {
    guard(|| {
        let phi = &handle(f, "formula")?.0;
        let m = Var::new(str_arg(model_var, "model_var")?);
        let r = engine(relativize(phi, &m))?;
        write_out(out, Box::into_raw(Box::new(AfFormula(r))))
    })
}

// ---- models ----

#[no_mangle]
pub unsafe extern "C" fn af_model_v_level(k: usize, out: *mut *mut AfModel) -> AfStatus {
    guard(|| {
        let m = engine(v_level(k))?;
        write_out(out, Box::into_raw(Box::new(AfModel(m))))
    })
}

/// Model from `{"name": ..., "elements": [ackermann indices]}`.
#[no_mangle]
pub unsafe extern "C" fn af_model_from_json(json: *const c_char, out: *mut *mut AfModel) -> AfStatus {
    guard(|| {
        let file: ModelFile = json_arg(str_arg(json, "json")?, "model")?;
        write_out(out, Box::into_raw(Box::new(AfModel(ModelDomain::from_file(&file)))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_model_free(m: *mut AfModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn af_model_len(m: *const AfModel, out: *mut usize) -> AfStatus {
    guard(|| write_out(out, handle(m, "model")?.0.len()))
}

#[no_mangle]
pub unsafe extern "C" fn af_model_is_transitive(m: *const AfModel, out: *mut bool) -> AfStatus {
    guard(|| write_out(out, handle(m, "model")?.0.is_transitive()))
}

/// Truth value under an assignment given as `{"var": ackermann-index, ...}`.
#[no_mangle]
pub unsafe extern "C" fn af_evaluate(
    f: *const AfFormula,
    m: *const AfModel,
    assignment_json: *const c_char,
    out: *mut bool,
) -> AfStatus {
    guard(|| {
        let raw: std::collections::BTreeMap<String, u64> = json_arg(str_arg(assignment_json, "assignment")?, "assignment")?;
        let a: Assignment = raw.into_iter().map(|(v, i)| (Var::new(v), HfSet::from_index(i))).collect();
        let value = engine(evaluate(&handle(f, "formula")?.0, &handle(m, "model")?.0, &a))?;
        write_out(out, value)
    })
}

/// Absoluteness report between `m ⊆ n` as JSON.
#[no_mangle]
pub unsafe extern "C" fn af_absoluteness_scan_json(
    f: *const AfFormula,
    m: *const AfModel,
    n: *const AfModel,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let r = engine(absoluteness_scan(&handle(f, "formula")?.0, &handle(m, "M")?.0, &handle(n, "N")?.0))?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}

// ---- groups ----

/// Group from `{"ambient_dim": n, "generators": [[rational strings]]}`.
#[no_mangle]
pub unsafe extern "C" fn af_group_from_json(json: *const c_char, out: *mut *mut AfGroup) -> AfStatus {
    guard(|| {
        let file: GroupFile = json_arg(str_arg(json, "json")?, "group")?;
        let g = LatticeGroup::from_file(file).or_else(|e| fail(AfStatus::InvalidInput, e))?;
        write_out(out, Box::into_raw(Box::new(AfGroup(g))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_group_free(g: *mut AfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn af_group_rank(g: *const AfGroup, out: *mut usize) -> AfStatus {
    guard(|| write_out(out, handle(g, "group")?.0.rank0()))
}

/// Canonical basis in group-file form.
#[no_mangle]
pub unsafe extern "C" fn af_group_to_json(g: *const AfGroup, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let f = handle(g, "group")?.0.to_canonical_file();
        write_string(out, serde_json::to_string(&f).expect("group serializes"))
    })
}

/// Pure closure of a JSON list of vectors inside `g`.
#[no_mangle]
pub unsafe extern "C" fn af_pure_closure(g: *const AfGroup, set_json: *const c_char, out: *mut *mut AfGroup) -> AfStatus {
    guard(|| {
        let s: GeneratorSet = json_arg(str_arg(set_json, "set")?, "set")?;
        let c = engine(pure_closure(&handle(g, "group")?.0, &s))?;
        write_out(out, Box::into_raw(Box::new(AfGroup(c))))
    })
}

/// Purity report `{pure, witness}` as JSON.
#[no_mangle]
pub unsafe extern "C" fn af_is_pure_json(h: *const AfGroup, g: *const AfGroup, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let r = engine(is_pure(&handle(h, "subgroup")?.0, &handle(g, "group")?.0))?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_is_pure(h: *const AfGroup, g: *const AfGroup, out: *mut bool) -> AfStatus {
    guard(|| write_out(out, engine(is_pure(&handle(h, "subgroup")?.0, &handle(g, "group")?.0))?.pure))
}

#[no_mangle]
pub unsafe extern "C" fn af_quotient(g: *const AfGroup, h: *const AfGroup, out: *mut *mut AfPresented) -> AfStatus {
    guard(|| {
        let q = engine(quotient_presentation(&handle(g, "group")?.0, &handle(h, "subgroup")?.0))?;
        write_out(out, Box::into_raw(Box::new(AfPresented(q))))
    })
}

/// Presented group from `{"m": m, "relations": [[integer strings]]}`.
#[no_mangle]
pub unsafe extern "C" fn af_presented_from_json(json: *const c_char, out: *mut *mut AfPresented) -> AfStatus {
    guard(|| {
        let file: PresentationFile = json_arg(str_arg(json, "json")?, "presentation")?;
        let p = PresentedGroup::from_file(file).or_else(|e| fail(AfStatus::InvalidInput, e))?;
        write_out(out, Box::into_raw(Box::new(AfPresented(p))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_presented_free(p: *mut AfPresented) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[no_mangle]
pub unsafe extern "C" fn af_presented_is_free(p: *const AfPresented, out: *mut bool) -> AfStatus {
    guard(|| write_out(out, handle(p, "presented group")?.0.is_free()))
}

#[no_mangle]
pub unsafe extern "C" fn af_presented_torsion_free_rank(p: *const AfPresented, out: *mut usize) -> AfStatus {
    guard(|| write_out(out, handle(p, "presented group")?.0.torsion_free_rank()))
}

/// `{"invariant_factors": [...], "torsion_coefficients": [...]}` as JSON strings of integers.
#[no_mangle]
pub unsafe extern "C" fn af_presented_invariants_json(p: *const AfPresented, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let p = &handle(p, "presented group")?.0;
        let show = |v: Vec<_>| v.iter().map(ToString::to_string).collect::<Vec<String>>();
        let v = serde_json::json!({
            "invariant_factors": show(p.invariant_factors()),
            "torsion_coefficients": show(p.torsion_coefficients()),
            "torsion_free_rank": p.torsion_free_rank(),
        });
        write_string(out, v.to_string())
    })
}

/// Smith form of `{"rows", "cols", "entries"}` as `{invariant_factors, rank}`.
#[no_mangle]
pub unsafe extern "C" fn af_snf_json(matrix_json: *const c_char, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let file: MatrixFile = json_arg(str_arg(matrix_json, "matrix")?, "matrix")?;
        let a = IntMatrix::from_file(file).or_else(|e| fail(AfStatus::InvalidInput, e))?;
        let s = snf(&a);
        let v = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "rank": s.rank,
            "invariant_factors": s.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        write_string(out, v.to_string())
    })
}

/// Certification report for a built-in family, as JSON. `*non_free` is set
/// when a witness was found.
#[no_mangle]
pub unsafe extern "C" fn af_certify_family_json(
    family: *const c_char,
    depth: usize,
    max_subset_size: usize,
    non_free: *mut bool,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let f: Family = str_arg(family, "family")?.parse().or_else(|e| fail(AfStatus::InvalidInput, e))?;
        let r = engine(pontryagin_certify(&LevelledGroup::family(f), depth, max_subset_size))?;
        write_out(non_free, r.verdict == Verdict::NonFreeWitness)?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}
