//! C interface to `satura`.
//!
//! Objects cross the boundary as opaque pointers created by `*_new`/`*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`SaturaStatus`]; on failure a message is kept per thread and
//! can be read with [`satura_last_error`]. Strings returned through `out`
//! parameters are owned by the caller and released with
//! [`satura_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use satura::arith::{FieldDescriptor, PrimeField, Rationals};
use satura::cli::load_problem;
use satura::groebner::{buchberger_in, BuchbergerOptions, GroebnerBasis};
use satura::poly::{parse_text_system, AnySystem, MonomialOrder, Ring, SystemFile};
use satura::saturate::compute_gi;
use satura::Error;

/// Result codes of every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    NotZeroDimensional = 5,
    Timeout = 6,
    PrimeTooSmall = 7,
    Internal = 8,
}

/// Monomial orders accepted by [`satura_groebner`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturaOrder {
    GrevLex = 0,
    Lex = 1,
}

/// A polynomial system over `Q` or `F_p`.
pub struct SaturaSystem {
    inner: AnySystem,
}

/// A reduced Groebner basis.
pub struct SaturaBasis {
    inner: AnyBasis,
}

enum AnyBasis {
    Rational(GroebnerBasis<Rationals>),
    Modular(GroebnerBasis<PrimeField>),
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SaturaStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownVariable(_) | Error::Json(_) => SaturaStatus::ParseError,
        Error::NotZeroDimensional => SaturaStatus::NotZeroDimensional,
        Error::Timeout => SaturaStatus::Timeout,
        Error::PrimeTooSmall { .. } => SaturaStatus::PrimeTooSmall,
        _ => SaturaStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (SaturaStatus, String)>) -> SaturaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SaturaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SaturaStatus::Internal
        }
    }
}

fn lib(e: Error) -> (SaturaStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SaturaStatus, String)> {
    if p.is_null() {
        return Err((SaturaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SaturaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn check_out<T>(out: *mut T) -> Result<(), (SaturaStatus, String)> {
    if out.is_null() {
        Err((SaturaStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn satura_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn satura_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn satura_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system from the JSON interchange format.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_system_from_json(json: *const c_char, out: *mut *mut SaturaSystem) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json, "json")?;
        let file = SystemFile::from_json(text).map_err(lib)?;
        let inner = AnySystem::from_file(&file, MonomialOrder::GrevLex).map_err(lib)?;
        *out = Box::into_raw(Box::new(SaturaSystem { inner }));
        Ok(())
    })
}

/// Parses polynomials given as text. `vars` is a comma-separated list and
/// `field` is `Q` or `Fp:<p>`.
///
/// # Safety
/// All strings must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_system_from_text(
    vars: *const c_char,
    field: *const c_char,
    text: *const c_char,
    out: *mut *mut SaturaSystem,
) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let names: Vec<&str> = read_str(vars, "vars")?.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        let field: FieldDescriptor = read_str(field, "field")?.parse().map_err(lib)?;
        let text = read_str(text, "text")?;
        let inner = match field {
            FieldDescriptor::Rationals => {
                let ring = Ring::new(&names, Rationals, MonomialOrder::GrevLex).map_err(lib)?;
                AnySystem::Rational(ring.clone(), parse_text_system(text, &ring).map_err(lib)?)
            }
            FieldDescriptor::PrimeField(p) => {
                let ring = Ring::new(&names, PrimeField::new(p).map_err(lib)?, MonomialOrder::GrevLex).map_err(lib)?;
                AnySystem::Modular(ring.clone(), parse_text_system(text, &ring).map_err(lib)?)
            }
        };
        *out = Box::into_raw(Box::new(SaturaSystem { inner }));
        Ok(())
    })
}

/// Number of polynomials in the system.
///
/// # Safety
/// `sys` must be a live system handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn satura_system_len(sys: *const SaturaSystem) -> usize {
    match sys.as_ref().map(|s| &s.inner) {
        Some(AnySystem::Rational(_, p)) => p.len(),
        Some(AnySystem::Modular(_, p)) => p.len(),
        None => 0,
    }
}

/// Serializes the system to the JSON interchange format.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_system_to_json(sys: *const SaturaSystem, out: *mut *mut c_char) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let sys = sys.as_ref().ok_or((SaturaStatus::NullPointer, "system is null".into()))?;
        *out = into_c_string(sys.inner.to_file().to_json());
        Ok(())
    })
}

/// # Safety
/// `sys` must come from this library and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn satura_system_free(sys: *mut SaturaSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Reduced Groebner basis of the system under `order`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_groebner(sys: *const SaturaSystem, order: SaturaOrder, out: *mut *mut SaturaBasis) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let sys = sys.as_ref().ok_or((SaturaStatus::NullPointer, "system is null".into()))?;
        let order = match order {
            SaturaOrder::GrevLex => MonomialOrder::GrevLex,
            SaturaOrder::Lex => MonomialOrder::Lex,
        };
        let opts = BuchbergerOptions::default();
        let inner = match sys.inner.clone().into_field(sys.inner.descriptor(), order).map_err(lib)? {
            AnySystem::Rational(r, p) => AnyBasis::Rational(buchberger_in(&r, &p, opts).map_err(lib)?),
            AnySystem::Modular(r, p) => AnyBasis::Modular(buchberger_in(&r, &p, opts).map_err(lib)?),
        };
        *out = Box::into_raw(Box::new(SaturaBasis { inner }));
        Ok(())
    })
}

/// Number of basis elements.
///
/// # Safety
/// `basis` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn satura_basis_len(basis: *const SaturaBasis) -> usize {
    match basis.as_ref().map(|b| &b.inner) {
        Some(AnyBasis::Rational(g)) => g.len(),
        Some(AnyBasis::Modular(g)) => g.len(),
        None => 0,
    }
}

/// Number of standard monomials; fails with `NotZeroDimensional` when
/// infinite.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_basis_degree(basis: *const SaturaBasis, out: *mut u64) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let b = basis.as_ref().ok_or((SaturaStatus::NullPointer, "basis is null".into()))?;
        let d = match &b.inner {
            AnyBasis::Rational(g) => g.degree(),
            AnyBasis::Modular(g) => g.degree(),
        }
        .map_err(lib)?;
        *out = d as u64;
        Ok(())
    })
}

/// Serializes the basis to the JSON interchange format.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_basis_to_json(basis: *const SaturaBasis, out: *mut *mut c_char) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let b = basis.as_ref().ok_or((SaturaStatus::NullPointer, "basis is null".into()))?;
        let file = match &b.inner {
            AnyBasis::Rational(g) => SystemFile::from_polys(g.generators(), g.ring()),
            AnyBasis::Modular(g) => SystemFile::from_polys(g.generators(), g.ring()),
        };
        *out = into_c_string(file.to_json());
        Ok(())
    })
}

/// # Safety
/// `basis` must come from this library and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn satura_basis_free(basis: *mut SaturaBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Randomized count `g_i` of a built-in problem over `F_prime`, or over
/// `Q` when `prime` is 0. A unit-ideal draw reports 0.
///
/// # Safety
/// `problem` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satura_compute_gi(problem: *const c_char, i: u32, prime: u64, seed: u64, out: *mut u64) -> SaturaStatus {
    guard(|| {
        check_out(out)?;
        let inst = load_problem(read_str(problem, "problem")?).map_err(lib)?;
        let field = if prime == 0 { FieldDescriptor::Rationals } else { FieldDescriptor::PrimeField(prime) };
        let r = compute_gi(&inst, i as usize, field, seed).map_err(lib)?;
        *out = r.value as u64;
        Ok(())
    })
}
