//! C ABI for polyreach.
//!
//! Formulas, models and complexes cross the boundary as opaque handles that
//! the caller releases with the matching `_free` function. Every function
//! returns a [`PolyreachStatus`]; results are written through out-pointers
//! only on success. After a failure, [`polyreach_last_error`] describes it.
//! Strings returned by the library are released with
//! [`polyreach_string_free`].
//!
//! Panics never unwind into C: they are caught and reported as
//! `POLYREACH_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polyreach::formula::{parse, Formula};
use polyreach::geometry::{Maze, PolyhedralModel, RoomWeights};
use polyreach::kripke::{bounded_sat, evaluate, PreorderModel, SatOutcome, MAX_SAT_WORLDS};
use polyreach::transforms::{cut, nerve};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyreachStatus {
    Ok = 0,
    NullPointer = 1,
    /// Text is not valid UTF-8 or does not parse.
    ParseError = 2,
    /// Arguments are out of range.
    InvalidInput = 3,
    NotAPoset = 4,
    UnknownWorld = 5,
    /// The complex is not valid or a point lies outside it.
    GeometryError = 6,
    /// A search finished without a result.
    NotFound = 7,
    Panic = 8,
}

pub struct PolyreachFormula(Formula);

pub struct PolyreachModel(PreorderModel);

pub struct PolyreachComplex(PolyhedralModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("interior nul bytes were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Outcome = Result<(), (PolyreachStatus, String)>;

fn fail<T>(status: PolyreachStatus, message: impl Into<String>) -> Result<T, (PolyreachStatus, String)> {
    Err((status, message.into()))
}

/// Runs `body`, converting errors and panics into a status and clearing the
/// error slot on success.
fn guard(body: impl FnOnce() -> Outcome) -> PolyreachStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PolyreachStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {message}"));
            PolyreachStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (PolyreachStatus, String)> {
    if p.is_null() {
        return fail(PolyreachStatus::NullPointer, "string argument is null");
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|e| fail(PolyreachStatus::ParseError, format!("invalid UTF-8: {e}")))
}

/// # Safety
/// `p` is null or points to a live `T`.
unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (PolyreachStatus, String)> {
    p.as_ref().map_or_else(|| fail(PolyreachStatus::NullPointer, "handle is null"), Ok)
}

fn check_out<T>(out: *mut T) -> Outcome {
    if out.is_null() {
        fail(PolyreachStatus::NullPointer, "output pointer is null")
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul bytes were replaced").into_raw()
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn polyreach_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polyreach_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a formula such as `gamma(p, q) & ~<>q`.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_formula_parse(
    source: *const c_char,
    out: *mut *mut PolyreachFormula,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let src = text(source)?;
        let f = parse(src).or_else(|e| fail(PolyreachStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolyreachFormula(f)));
        Ok(())
    })
}

/// Canonical text of a formula; parsing it gives the same formula.
///
/// # Safety
/// `f` is a live formula handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_formula_print(
    f: *const PolyreachFormula,
    out: *mut *mut c_char,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        *out = c_string(handle(f)?.0.to_string());
        Ok(())
    })
}

/// # Safety
/// `f` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polyreach_formula_free(f: *mut PolyreachFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses the model text format (`worlds`, `order`, `valuation` lines).
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_parse(
    source: *const c_char,
    out: *mut *mut PolyreachModel,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let m = PreorderModel::parse(text(source)?)
            .or_else(|e| fail(PolyreachStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolyreachModel(m)));
        Ok(())
    })
}

/// # Safety
/// `m` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_free(m: *mut PolyreachModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` is a live model handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_to_text(
    m: *const PolyreachModel,
    out: *mut *mut c_char,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        *out = c_string(handle(m)?.0.to_text());
        Ok(())
    })
}

/// # Safety
/// `m` is a live model handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_world_count(
    m: *const PolyreachModel,
    out: *mut usize,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        *out = handle(m)?.0.world_count();
        Ok(())
    })
}

/// Index of the world called `name`.
///
/// # Safety
/// `m` is a live model handle, `name` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_world_id(
    m: *const PolyreachModel,
    name: *const c_char,
    out: *mut usize,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let name = text(name)?;
        match handle(m)?.0.world(name) {
            Some(w) => {
                *out = w;
                Ok(())
            }
            None => fail(PolyreachStatus::UnknownWorld, format!("unknown world `{name}`")),
        }
    })
}

/// Extension of `f` as sorted world names, for example `{a, u}`.
///
/// # Safety
/// `m` and `f` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_evaluate(
    m: *const PolyreachModel,
    f: *const PolyreachFormula,
    out: *mut *mut c_char,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let m = &handle(m)?.0;
        let ext = evaluate(m, &handle(f)?.0);
        *out = c_string(m.format_set(&ext));
        Ok(())
    })
}

/// # Safety
/// `m` and `f` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_holds_at(
    m: *const PolyreachModel,
    f: *const PolyreachFormula,
    world: usize,
    out: *mut bool,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let m = &handle(m)?.0;
        if world >= m.world_count() {
            return fail(PolyreachStatus::UnknownWorld, format!("world index {world} out of range"));
        }
        *out = evaluate(m, &handle(f)?.0).contains(world);
        Ok(())
    })
}

/// Chain model of a poset.
///
/// # Safety
/// `m` is a live model handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_nerve(
    m: *const PolyreachModel,
    out: *mut *mut PolyreachModel,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let m = handle(m)?.0.clone();
        let poset = m.into_poset().or_else(|e| fail(PolyreachStatus::NotAPoset, e.to_string()))?;
        let n = nerve(&poset).into_model().into_inner();
        *out = Box::into_raw(Box::new(PolyreachModel(n)));
        Ok(())
    })
}

/// # Safety
/// `m` is a live model handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_model_cut(
    m: *const PolyreachModel,
    out: *mut *mut PolyreachModel,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let c = cut(&handle(m)?.0).into_inner();
        *out = Box::into_raw(Box::new(PolyreachModel(c)));
        Ok(())
    })
}

/// Searches posets with at most `max_worlds` worlds for a model of `f`.
/// Returns `POLYREACH_STATUS_NOT_FOUND` when there is none; `out_model` and
/// `out_world` are written only on success.
///
/// # Safety
/// `f` is a live handle; both out-pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_bounded_sat(
    f: *const PolyreachFormula,
    max_worlds: usize,
    out_model: *mut *mut PolyreachModel,
    out_world: *mut usize,
) -> PolyreachStatus {
    guard(|| {
        check_out(out_model)?;
        check_out(out_world)?;
        let f = &handle(f)?.0;
        if !(1..=MAX_SAT_WORLDS).contains(&max_worlds) {
            return fail(
                PolyreachStatus::InvalidInput,
                format!("max_worlds must be between 1 and {MAX_SAT_WORLDS}"),
            );
        }
        if max_worlds * f.atoms().len() >= 40 {
            return fail(PolyreachStatus::InvalidInput, "too many atoms for the requested bound");
        }
        match bounded_sat(f, max_worlds) {
            SatOutcome::Sat { model, world } => {
                *out_model = Box::into_raw(Box::new(PolyreachModel(model.into_inner())));
                *out_world = world;
                Ok(())
            }
            SatOutcome::UnsatUpTo { bound } => {
                fail(PolyreachStatus::NotFound, format!("UNSAT-UP-TO {bound}"))
            }
        }
    })
}

/// Parses and validates the complex text format (`vertex`, `simplex`,
/// `valuation` lines).
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_complex_parse(
    source: *const c_char,
    out: *mut *mut PolyreachComplex,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let k = PolyhedralModel::parse(text(source)?)
            .or_else(|e| fail(PolyreachStatus::ParseError, e.to_string()))?;
        k.validate().or_else(|e| fail(PolyreachStatus::GeometryError, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolyreachComplex(k)));
        Ok(())
    })
}

/// # Safety
/// `k` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polyreach_complex_free(k: *mut PolyreachComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// # Safety
/// `k` is a live complex handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_complex_to_text(
    k: *const PolyreachComplex,
    out: *mut *mut c_char,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        *out = c_string(handle(k)?.0.to_text());
        Ok(())
    })
}

/// Truth of `f` at the point `coords[0..len]`.
///
/// # Safety
/// `k` and `f` are live handles, `coords` points to `len` doubles and `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_complex_evaluate_point(
    k: *const PolyreachComplex,
    f: *const PolyreachFormula,
    coords: *const f64,
    len: usize,
    out: *mut bool,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        if coords.is_null() {
            return fail(PolyreachStatus::NullPointer, "coordinates are null");
        }
        let x = std::slice::from_raw_parts(coords, len);
        *out = handle(k)?
            .0
            .evaluate_at(&handle(f)?.0, x)
            .or_else(|e| fail(PolyreachStatus::GeometryError, e.to_string()))?;
        Ok(())
    })
}

/// Face-poset model of a complex.
///
/// # Safety
/// `k` is a live complex handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_complex_companion(
    k: *const PolyreachComplex,
    out: *mut *mut PolyreachModel,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let c = handle(k)?.0.companion().into_inner();
        *out = Box::into_raw(Box::new(PolyreachModel(c)));
        Ok(())
    })
}

/// Seeded random maze on a `width` by `height` grid, triangulated and
/// labeled with the atoms `red`, `green`, `white`, `gray` and `corridor`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn polyreach_maze_generate(
    width: usize,
    height: usize,
    seed: u64,
    out: *mut *mut PolyreachComplex,
) -> PolyreachStatus {
    guard(|| {
        check_out(out)?;
        let maze = Maze::generate(width, height, seed, &RoomWeights::default())
            .or_else(|e| fail(PolyreachStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolyreachComplex(maze.polyhedral_model())));
        Ok(())
    })
}
