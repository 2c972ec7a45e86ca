//! C interface to `cuweb`.
//!
//! Every fallible call returns a [`CuwebStatus`]. On failure the message is kept per thread and
//! read with [`cuweb_last_error_message`]. Handles are opaque and freed with the matching
//! `*_free`. Strings handed out by the library are freed with [`cuweb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use cuweb::axioms::{check_axiom, Axiom, AxiomVerdict, FiniteStructure};
use cuweb::json::{
    monoid_to_json, parse_document, system_to_json, to_canonical, web_to_json, Document,
};
use cuweb::order::FiniteOrderedMonoid;
use cuweb::systems::GroupSystem;
use cuweb::webbing::{web, web_windowed, WebbedSemigroup};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuwebStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    WrongDocument = 4,
    Web = 5,
    UnknownAxiom = 6,
    Infeasible = 7,
    Panic = 8,
}

/// A finite positively ordered monoid.
pub struct CuwebMonoid(FiniteOrderedMonoid);

/// A system of abelian groups over a finite monoid.
pub struct CuwebSystem(Arc<GroupSystem>);

/// A materialized web.
pub struct CuwebWeb(WebbedSemigroup);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let c = CString::new(msg.to_string().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Outcome = Result<(), (CuwebStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> CuwebStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CuwebStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cuweb");
            CuwebStatus::Panic
        }
    }
}

fn null() -> (CuwebStatus, String) {
    (CuwebStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (CuwebStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (CuwebStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut *mut T, v: T) {
    *out = Box::into_raw(Box::new(v));
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome {
    let c = CString::new(s).map_err(|e| (CuwebStatus::Parse, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn parse(json: *const c_char) -> Result<Document, (CuwebStatus, String)> {
    let text = read_str(json)?;
    parse_document(text).map_err(|e| (CuwebStatus::Parse, e.to_string()))
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn cuweb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cuweb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a monoid document.
///
/// # Safety
/// `json` is a nul-terminated string, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_monoid_from_json(
    json: *const c_char,
    out: *mut *mut CuwebMonoid,
) -> CuwebStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        match parse(json)? {
            Document::Monoid(m) => {
                write_out(out, CuwebMonoid(m));
                Ok(())
            }
            d => Err((
                CuwebStatus::WrongDocument,
                format!("expected monoid, got {}", d.kind()),
            )),
        }
    })
}

/// # Safety
/// `m` is null or a live monoid handle.
#[no_mangle]
pub unsafe extern "C" fn cuweb_monoid_free(m: *mut CuwebMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` is a live monoid handle.
#[no_mangle]
pub unsafe extern "C" fn cuweb_monoid_size(m: *const CuwebMonoid) -> usize {
    m.as_ref().map_or(0, |m| m.0.size())
}

/// Canonical JSON of a monoid.
///
/// # Safety
/// `m` is a live monoid handle, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_monoid_to_json(
    m: *const CuwebMonoid,
    out: *mut *mut c_char,
) -> CuwebStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        write_string(out, to_canonical(&monoid_to_json(&m.0)))
    })
}

/// Parses a system document.
///
/// # Safety
/// `json` is a nul-terminated string, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_system_from_json(
    json: *const c_char,
    out: *mut *mut CuwebSystem,
) -> CuwebStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        match parse(json)? {
            Document::System(s) => {
                write_out(out, CuwebSystem(s));
                Ok(())
            }
            d => Err((
                CuwebStatus::WrongDocument,
                format!("expected system, got {}", d.kind()),
            )),
        }
    })
}

/// # Safety
/// `s` is null or a live system handle.
#[no_mangle]
pub unsafe extern "C" fn cuweb_system_free(s: *mut CuwebSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Canonical JSON of a system.
///
/// # Safety
/// `s` is a live system handle, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_system_to_json(
    s: *const CuwebSystem,
    out: *mut *mut c_char,
) -> CuwebStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        write_string(out, to_canonical(&system_to_json(&s.0)))
    })
}

/// Builds the web of a system. A negative `window` means no window, which fails on Z fibers.
///
/// # Safety
/// `s` is a live system handle, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_web_new(
    s: *const CuwebSystem,
    window: i64,
    out: *mut *mut CuwebWeb,
) -> CuwebStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let w = if window < 0 {
            web(&s.0)
        } else {
            web_windowed(&s.0, window)
        };
        let w = w.map_err(|e| (CuwebStatus::Web, e.to_string()))?;
        write_out(out, CuwebWeb(w));
        Ok(())
    })
}

/// # Safety
/// `w` is null or a live web handle.
#[no_mangle]
pub unsafe extern "C" fn cuweb_web_free(w: *mut CuwebWeb) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `w` is a live web handle.
#[no_mangle]
pub unsafe extern "C" fn cuweb_web_size(w: *const CuwebWeb) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Tables of a web as canonical JSON.
///
/// # Safety
/// `w` is a live web handle, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_web_to_json(
    w: *const CuwebWeb,
    out: *mut *mut c_char,
) -> CuwebStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        write_string(out, to_canonical(&web_to_json(&w.0)))
    })
}

unsafe fn axiom_on<S: FiniteStructure>(
    s: &S,
    tag: *const c_char,
    holds: *mut bool,
    verdict_json: *mut *mut c_char,
) -> Outcome {
    let axiom: Axiom = read_str(tag)?
        .parse()
        .map_err(|e| (CuwebStatus::UnknownAxiom, e))?;
    if holds.is_null() {
        return Err(null());
    }
    let v: AxiomVerdict =
        check_axiom(s, axiom).map_err(|e| (CuwebStatus::Infeasible, e.to_string()))?;
    *holds = v.holds;
    if !verdict_json.is_null() {
        write_string(verdict_json, to_canonical(&v))?;
    }
    Ok(())
}

/// Checks one axiom (`"PC"`, `"AU"`, ...) on a web. `verdict_json` may be null; otherwise it
/// receives the verdict with its witness.
///
/// # Safety
/// `w` is a live web handle, `tag` a nul-terminated string, `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_web_check_axiom(
    w: *const CuwebWeb,
    tag: *const c_char,
    holds: *mut bool,
    verdict_json: *mut *mut c_char,
) -> CuwebStatus {
    guard(|| axiom_on(&w.as_ref().ok_or_else(null)?.0, tag, holds, verdict_json))
}

/// Same as [`cuweb_web_check_axiom`] on a monoid.
///
/// # Safety
/// `m` is a live monoid handle, `tag` a nul-terminated string, `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn cuweb_monoid_check_axiom(
    m: *const CuwebMonoid,
    tag: *const c_char,
    holds: *mut bool,
    verdict_json: *mut *mut c_char,
) -> CuwebStatus {
    guard(|| axiom_on(&m.as_ref().ok_or_else(null)?.0, tag, holds, verdict_json))
}
