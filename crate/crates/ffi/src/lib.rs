//! C ABI over `sgtool-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible call returns an
//! [`SgStatus`]; on failure the message is kept per thread and can be read
//! with [`sg_last_error_message`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sgtool_core::model::neumann_data_from_wave;
use sgtool_core::remainder::t_epsilon;
use sgtool_core::solver::{solve_perturbed, solve_reduced, SolverConfig};
use sgtool_core::{green, ASign, Error, JunctionParams, SpaceTimeField, TravelingWave, WaveFamily};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    Precondition = 3,
    Singular = 4,
    Truncation = 5,
    Instability = 6,
    Contraction = 7,
    NotConverged = 8,
    Envelope = 9,
    DegenerateFit = 10,
    Hypothesis = 11,
    NonFinite = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgWaveFamily {
    GammaZeroY = 0,
    GammaOneY = 1,
    SubCriticalY = 2,
    SubCriticalZ = 3,
    SuperCritical = 4,
}

/// Sign of `A` for the sub-critical `y` family; `None` elsewhere.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgASign {
    None = 0,
    Plus = 1,
    Minus = 2,
}

/// Opaque parameter set.
pub struct SgParams(JunctionParams);

/// Opaque traveling wave.
pub struct SgWave(TravelingWave);

/// Opaque sampled field `u(x_i, t_k)`.
pub struct SgField(SpaceTimeField);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::Parameter(_) => SgStatus::Parameter,
        Error::Precondition(_) => SgStatus::Precondition,
        Error::Singular { .. } => SgStatus::Singular,
        Error::Truncation { .. } => SgStatus::Truncation,
        Error::Instability { .. } => SgStatus::Instability,
        Error::Contraction { .. } => SgStatus::Contraction,
        Error::NotConverged { .. } => SgStatus::NotConverged,
        Error::Envelope { .. } => SgStatus::Envelope,
        Error::DegenerateFit(_) => SgStatus::DegenerateFit,
        Error::Hypothesis(_) => SgStatus::Hypothesis,
        Error::NonFinite(_) => SgStatus::NonFinite,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), SgStatusError>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SgStatus::Ok
        }
        Ok(Err(SgStatusError(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside sgtool");
            SgStatus::Panic
        }
    }
}

struct SgStatusError(SgStatus, String);

impl From<Error> for SgStatusError {
    fn from(e: Error) -> Self {
        Self(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> SgStatusError {
    SgStatusError(SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, SgStatusError> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, v: T, what: &str) -> Result<(), SgStatusError> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_params_new(
    alpha: f64,
    epsilon: f64,
    gamma_bias: f64,
    ell: f64,
    horizon: f64,
    out: *mut *mut SgParams,
) -> SgStatus {
    guard(|| {
        let p = JunctionParams::new(alpha, epsilon, gamma_bias, ell, horizon)?;
        write_out(out, Box::into_raw(Box::new(SgParams(p))), "out")
    })
}

/// # Safety
/// `p` must come from [`sg_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_params_free(p: *mut SgParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Green function at `(x, ξ, t)` with certified tail bound `≤ tol`.
///
/// # Safety
/// `params` must be a live handle; out pointers valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_green_eval(
    params: *const SgParams,
    x: f64,
    xi: f64,
    t: f64,
    tol: f64,
    out_value: *mut f64,
    out_n_terms: *mut usize,
    out_tail_bound: *mut f64,
) -> SgStatus {
    guard(|| {
        let p = borrow(params, "params")?;
        let g = green::green_eval(x, xi, t, &p.0, tol)?;
        write_out(out_value, g.value, "out_value")?;
        if !out_n_terms.is_null() {
            out_n_terms.write(g.n_terms);
        }
        if !out_tail_bound.is_null() {
            out_tail_bound.write(g.tail_bound);
        }
        Ok(())
    })
}

/// # Safety
/// `params` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_wave_new(
    params: *const SgParams,
    family: SgWaveFamily,
    c_wave: f64,
    a_sign: SgASign,
    out: *mut *mut SgWave,
) -> SgStatus {
    guard(|| {
        let p = borrow(params, "params")?;
        let family = match family {
            SgWaveFamily::GammaZeroY => WaveFamily::GammaZeroY,
            SgWaveFamily::GammaOneY => WaveFamily::GammaOneY,
            SgWaveFamily::SubCriticalY => WaveFamily::SubCriticalY,
            SgWaveFamily::SubCriticalZ => WaveFamily::SubCriticalZ,
            SgWaveFamily::SuperCritical => WaveFamily::SuperCritical,
        };
        let sign = match a_sign {
            SgASign::None => None,
            SgASign::Plus => Some(ASign::Plus),
            SgASign::Minus => Some(ASign::Minus),
        };
        let w = TravelingWave::new(family, c_wave, &p.0, sign)?;
        write_out(out, Box::into_raw(Box::new(SgWave(w))), "out")
    })
}

/// # Safety
/// `w` must come from [`sg_wave_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_wave_free(w: *mut SgWave) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `wave` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_wave_value(wave: *const SgWave, x: f64, t: f64, out: *mut f64) -> SgStatus {
    guard(|| {
        let w = borrow(wave, "wave")?;
        write_out(out, w.0.value(x, t)?, "out")
    })
}

/// # Safety
/// `wave` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_wave_uxxt(wave: *const SgWave, x: f64, t: f64, out: *mut f64) -> SgStatus {
    guard(|| {
        let w = borrow(wave, "wave")?;
        write_out(out, w.0.uxxt(x, t)?, "out")
    })
}

/// Solves to the params horizon with initial and edge data taken from
/// `wave`. `reduced != 0` switches the viscous term off.
///
/// # Safety
/// `params` and `wave` must be live handles; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_solve(
    params: *const SgParams,
    wave: *const SgWave,
    nx: usize,
    cfl: f64,
    theta: f64,
    reduced: i32,
    out: *mut *mut SgField,
) -> SgStatus {
    guard(|| {
        let p = borrow(params, "params")?;
        let w = borrow(wave, "wave")?;
        let cfg = SolverConfig { nx, cfl, theta, ..SolverConfig::default() };
        cfg.validate()?;
        let grid = cfg.grid(p.0.ell())?;
        let time = cfg.time_axis(p.0.ell(), p.0.horizon())?;
        let data = neumann_data_from_wave(&w.0, grid, time)?;
        let field = if reduced != 0 { solve_reduced(&p.0, &data, &cfg)? } else { solve_perturbed(&p.0, &data, &cfg)? };
        write_out(out, Box::into_raw(Box::new(SgField(field))), "out")
    })
}

/// # Safety
/// `f` must come from [`sg_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_field_free(f: *mut SgField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Grid points, number of time steps (levels are `nt + 1`) and step sizes.
///
/// # Safety
/// `field` must be a live handle; out pointers valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn sg_field_dims(
    field: *const SgField,
    out_nx: *mut usize,
    out_nt: *mut usize,
    out_dx: *mut f64,
    out_dt: *mut f64,
) -> SgStatus {
    guard(|| {
        let f = &borrow(field, "field")?.0;
        write_out(out_nx, f.grid.nx, "out_nx")?;
        write_out(out_nt, f.time.nt, "out_nt")?;
        write_out(out_dx, f.grid.dx(), "out_dx")?;
        write_out(out_dt, f.time.dt, "out_dt")
    })
}

/// Copies the samples, time-major (`buf[k*nx + i] = u(x_i, t_k)`).
///
/// # Safety
/// `field` must be a live handle; `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_field_copy(field: *const SgField, buf: *mut f64, len: usize) -> SgStatus {
    guard(|| {
        let f = &borrow(field, "field")?.0;
        let v = f.values();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < v.len() {
            return Err(SgStatusError(SgStatus::BufferTooSmall, format!("buffer holds {len}, field has {}", v.len())));
        }
        std::ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// `T_ε = (1 − h)·ln(1/ε)·min{1/N, 1}`; `out_warning` is set to 1 when
/// `ε ≥ 1` forced the value to 0.
///
/// # Safety
/// `out` valid for one write; `out_warning` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sg_t_epsilon(eps: f64, h_exp: f64, n_const: f64, out: *mut f64, out_warning: *mut i32) -> SgStatus {
    guard(|| {
        let t = t_epsilon(eps, h_exp, n_const)?;
        if !out_warning.is_null() {
            out_warning.write(t.warning as i32);
        }
        write_out(out, t.value, "out")
    })
}
