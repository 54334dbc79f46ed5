//! C ABI over jll-core.
//!
//! Every function returns a [`JllStatus`]; on failure the message is kept per
//! thread and read with [`jll_last_error`]. A [`JllLab`] is an opaque handle
//! owning the sample grid, the prime sieve, the zero table and a ladder
//! configuration.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use jll_core::ladder::{Ladder, LadderConfig};
use jll_core::quadrature::{CacheFormat, GridSpec};
use jll_core::verify::{self, SweepKind};
use jll_core::{Error, Lab};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JllStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

/// Checks reachable through [`jll_verify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JllCheck {
    GapLaw = 0,
    Fundamental = 1,
    FundamentalChord = 2,
    /// uses `u`
    Theorem1 = 3,
    Theorem2 = 4,
    /// uses `order` as n
    Chebyshev = 5,
    /// uses `order` as k
    Selberg = 6,
    Prediction = 7,
    Lemma1 = 8,
}

pub struct JllLab {
    lab: Lab,
    cfg: LadderConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> JllStatus {
    match e {
        Error::Domain { .. } | Error::Config(_) => JllStatus::Domain,
        Error::Io(_) | Error::Cache(_) | Error::Json(_) => JllStatus::Io,
        _ => JllStatus::Numerical,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (JllStatus, String)>>(f: F) -> JllStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            JllStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            JllStatus::Panic
        }
    }
}

fn core<T>(r: jll_core::Result<T>) -> Result<T, (JllStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (JllStatus, String) {
    (JllStatus::NullPointer, format!("{what} is null"))
}

unsafe fn lab_ref<'a>(lab: *const JllLab) -> Result<&'a JllLab, (JllStatus, String)> {
    lab.as_ref().ok_or_else(|| null("lab"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), (JllStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call on the same thread.
#[no_mangle]
pub extern "C" fn jll_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a laboratory. `cache_dir` may be null for an in-memory grid;
/// otherwise the binary grid cache in that directory is loaded and written
/// back by [`jll_lab_persist`]. `a_param` must lie in [7, 8].
///
/// # Safety
/// `cache_dir` is null or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_lab_new(cache_dir: *const c_char, a_param: f64, out: *mut *mut JllLab) -> JllStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = LadderConfig {
            a_param,
            ..LadderConfig::default()
        };
        core(cfg.validate())?;
        let spec = GridSpec::default();
        let lab = if cache_dir.is_null() {
            core(Lab::new(spec))?
        } else {
            let s = CStr::from_ptr(cache_dir)
                .to_str()
                .map_err(|_| (JllStatus::InvalidArgument, "cache_dir is not UTF-8".to_string()))?;
            let dir = Path::new(s);
            core(std::fs::create_dir_all(dir).map_err(Error::from))?;
            core(Lab::with_cache_dir(spec, dir, CacheFormat::Binary))?
        };
        out.write(Box::into_raw(Box::new(JllLab { lab, cfg })));
        Ok(())
    })
}

/// # Safety
/// `lab` is null or came from [`jll_lab_new`] and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jll_lab_free(lab: *mut JllLab) {
    if !lab.is_null() {
        drop(Box::from_raw(lab));
    }
}

/// Writes the grid back to the cache file if it grew.
///
/// # Safety
/// `lab` came from [`jll_lab_new`].
#[no_mangle]
pub unsafe extern "C" fn jll_lab_persist(lab: *mut JllLab) -> JllStatus {
    guard(|| {
        let l = lab.as_mut().ok_or_else(|| null("lab"))?;
        core(l.lab.persist())?;
        Ok(())
    })
}

/// Hardy's Z(t).
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_z(t: f64, out: *mut f64) -> JllStatus {
    guard(|| {
        let v = core(jll_core::critical_line::z(t))?;
        write(out, v.z)
    })
}

/// theta(t).
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_theta(t: f64, out: *mut f64) -> JllStatus {
    guard(|| {
        let v = core(jll_core::critical_line::theta(t))?;
        write(out, v.theta)
    })
}

/// F(T) = int_0^T Z^2.
///
/// # Safety
/// `lab` came from [`jll_lab_new`]; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_hl_cumulative(lab: *const JllLab, t: f64, out: *mut f64) -> JllStatus {
    guard(|| {
        let l = lab_ref(lab)?;
        let v = core(l.lab.quad().hl_cumulative(t))?;
        write(out, v)
    })
}

/// phi(T) and its relative residual.
///
/// # Safety
/// `lab` came from [`jll_lab_new`]; `phi` and `residual` are writable.
#[no_mangle]
pub unsafe extern "C" fn jll_solve(lab: *const JllLab, t: f64, phi: *mut f64, residual: *mut f64) -> JllStatus {
    guard(|| {
        let l = lab_ref(lab)?;
        if phi.is_null() || residual.is_null() {
            return Err(null("output pointer"));
        }
        let lad = core(Ladder::new(&l.lab, l.cfg))?;
        let p = core(lad.solve(t))?;
        phi.write(p.phi);
        residual.write(p.residual);
        Ok(())
    })
}

/// phi1(T) = phi(T) / 2.
///
/// # Safety
/// `lab` came from [`jll_lab_new`]; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_phi1(lab: *const JllLab, t: f64, out: *mut f64) -> JllStatus {
    guard(|| {
        let l = lab_ref(lab)?;
        let lad = core(Ladder::new(&l.lab, l.cfg))?;
        let v = core(lad.phi1(t))?;
        write(out, v)
    })
}

/// t with phi1(t) = y.
///
/// # Safety
/// `lab` came from [`jll_lab_new`]; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn jll_phi1_inverse(lab: *const JllLab, y: f64, out: *mut f64) -> JllStatus {
    guard(|| {
        let l = lab_ref(lab)?;
        let lad = core(Ladder::new(&l.lab, l.cfg))?;
        let v = core(lad.phi1_inverse(y))?;
        write(out, v)
    })
}

/// Runs one check and returns its report as a JSON string, to be released
/// with [`jll_string_free`]. `passed` (may be null) receives 1 when the report
/// passes and 0 otherwise.
///
/// # Safety
/// `lab` came from [`jll_lab_new`]; `json` is writable; `passed` is null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn jll_verify(
    lab: *const JllLab,
    check: JllCheck,
    t: f64,
    u: f64,
    order: u32,
    json: *mut *mut c_char,
    passed: *mut i32,
) -> JllStatus {
    guard(|| {
        let l = lab_ref(lab)?;
        if json.is_null() {
            return Err(null("json"));
        }
        let lad = core(Ladder::new(&l.lab, l.cfg))?;
        let r = core(match check {
            JllCheck::Theorem1 => verify::verify_theorem1(&lad, t, u),
            JllCheck::GapLaw => SweepKind::GapLaw.run(&lad, t),
            JllCheck::Fundamental => SweepKind::Fundamental.run(&lad, t),
            JllCheck::FundamentalChord => SweepKind::FundamentalChord.run(&lad, t),
            JllCheck::Theorem2 => SweepKind::Theorem2.run(&lad, t),
            JllCheck::Chebyshev => SweepKind::Chebyshev(order).run(&lad, t),
            JllCheck::Selberg => SweepKind::Selberg(order).run(&lad, t),
            JllCheck::Prediction => SweepKind::Prediction.run(&lad, t),
            JllCheck::Lemma1 => SweepKind::Lemma1.run(&lad, t),
        })?;
        let text = core(r.to_json())?;
        let c = CString::new(text).map_err(|_| (JllStatus::Io, "report holds NUL".to_string()))?;
        if !passed.is_null() {
            passed.write(r.pass as i32);
        }
        json.write(c.into_raw());
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jll_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
