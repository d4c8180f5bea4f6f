//! C ABI over the engine. Objects are opaque handles released with their
//! `_free` function; strings returned through out-pointers are owned by the
//! caller and released with [`sp_string_free`]. Every call returns an
//! [`SpStatus`]; on failure [`sp_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use superprolong::ag2lab::{experiment_bj, experiment_bj_partial, Experiment, ExperimentOptions, Route, Variant};
use superprolong::sc::ScTable;
use superprolong::{ContactStructure, DPElement, FieldSpace, Signature};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Engine = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMode {
    Full = 0,
    PartialPrime = 1,
    PartialDoublePrime = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpRoute {
    FullG0 = 0,
    TildeG0 = 1,
}

/// A finished prolong run.
pub struct SpExperiment {
    inner: Experiment,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (SpStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SpStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SpStatus::Panic
        }
    }
}

fn engine(e: superprolong::Error) -> Failure {
    (SpStatus::Engine, e.to_string())
}

fn null(what: &str) -> Failure {
    (SpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (SpStatus::Engine, "string contains a nul byte".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a>(h: *const SpExperiment) -> Result<&'a Experiment, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| null("experiment"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a prolong. `route` is ignored for partial modes, which need p = 3.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_run(
    p: u64,
    height: u32,
    mode: SpMode,
    route: SpRoute,
    out: *mut *mut SpExperiment,
) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if ![3, 5, 7].contains(&p) || !(1..=3).contains(&height) {
            return Err((SpStatus::InvalidArgument, format!("unsupported p = {p}, N = {height}")));
        }
        let opts = ExperimentOptions::default();
        let route = match route {
            SpRoute::FullG0 => Route::FullG0,
            SpRoute::TildeG0 => Route::TildeG0,
        };
        let inner = match mode {
            SpMode::Full => experiment_bj(p, height, route, &opts),
            SpMode::PartialPrime | SpMode::PartialDoublePrime if p != 3 => {
                return Err((SpStatus::InvalidArgument, "partial prolongs need p = 3".into()))
            }
            SpMode::PartialPrime => experiment_bj_partial(Variant::Prime, height, &opts),
            SpMode::PartialDoublePrime => experiment_bj_partial(Variant::DoublePrime, height, &opts),
        }
        .map_err(engine)?;
        *out = Box::into_raw(Box::new(SpExperiment { inner }));
        Ok(())
    })
}

/// Releases an experiment. Null is ignored.
///
/// # Safety
/// `h` must come from [`sp_experiment_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_free(h: *mut SpExperiment) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Total superdimension.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_total(h: *const SpExperiment, even: *mut usize, odd: *mut usize) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        if even.is_null() || odd.is_null() {
            return Err(null("out"));
        }
        *even = e.report.total.even;
        *odd = e.report.total.odd;
        Ok(())
    })
}

/// Superdimension of one degree; zero outside the range.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_degree_sdim(
    h: *const SpExperiment,
    degree: i32,
    even: *mut usize,
    odd: *mut usize,
) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        if even.is_null() || odd.is_null() {
            return Err(null("out"));
        }
        let d = e.report.degrees.iter().find(|d| d.degree == degree);
        *even = d.map_or(0, |d| d.sdim.even);
        *odd = d.map_or(0, |d| d.sdim.odd);
        Ok(())
    })
}

/// Lowest and highest nonzero degree.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_degree_range(h: *const SpExperiment, min: *mut i32, max: *mut i32) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        if min.is_null() || max.is_null() {
            return Err(null("out"));
        }
        *min = e.algebra.min_degree().unwrap_or(0);
        *max = e.algebra.max_degree().unwrap_or(0);
        Ok(())
    })
}

/// Both simplicity tests agree on "simple".
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_is_simple(h: *const SpExperiment, out: *mut bool) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = e.report.simple();
        Ok(())
    })
}

/// The report as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_report_json(h: *const SpExperiment, out: *mut *mut c_char) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        let s = serde_json::to_string(&e.report).map_err(|e| (SpStatus::Engine, e.to_string()))?;
        write_string(out, s)
    })
}

/// Structure constants in sc-v1.
///
/// # Safety
/// Pointers must be valid; `name` is a nul-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn sp_experiment_export_sc(
    h: *const SpExperiment,
    name: *const c_char,
    out: *mut *mut c_char,
) -> SpStatus {
    guard(|| {
        let e = handle(h)?;
        let name = read_str(name, "name")?;
        let t = ScTable::from_algebra(&e.algebra, e.model.height, name).map_err(engine)?;
        write_string(out, t.to_text())
    })
}

fn contact(p: u64, height: u32) -> Result<ContactStructure, Failure> {
    let sig = Arc::new(Signature::contact_1_7(p, height).map_err(|e| (SpStatus::InvalidArgument, e.to_string()))?);
    ContactStructure::ag2_form(FieldSpace::new(sig)).map_err(engine)
}

/// Canonical rendering of a function on O(1;N|7) over GF(p).
///
/// # Safety
/// `text` is a nul-terminated UTF-8 string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_function_canonical(
    p: u64,
    height: u32,
    text: *const c_char,
    out: *mut *mut c_char,
) -> SpStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let sig = Arc::new(Signature::contact_1_7(p, height).map_err(|e| (SpStatus::InvalidArgument, e.to_string()))?);
        let g = DPElement::parse(&sig, text).map_err(|e| (SpStatus::InvalidArgument, e.to_string()))?;
        write_string(out, g.render())
    })
}

/// The contact field of a homogeneous generating function.
///
/// # Safety
/// `text` is a nul-terminated UTF-8 string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sp_contact_field(p: u64, height: u32, text: *const c_char, out: *mut *mut c_char) -> SpStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let c = contact(p, height)?;
        let g = DPElement::parse(c.signature(), text).map_err(|e| (SpStatus::InvalidArgument, e.to_string()))?;
        write_string(out, c.field_of(&g).map_err(engine)?.render())
    })
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn sp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
