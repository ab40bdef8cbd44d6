use std::f64::consts::PI;
use std::ffi::{c_char, CStr};
use std::ptr;

use sgtool_core::{green, JunctionParams};
use sgtool_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        sg_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn params(eps: f64, gamma: f64, horizon: f64) -> *mut SgParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sg_params_new(0.5, eps, gamma, PI, horizon, &mut p) }, SgStatus::Ok);
    assert!(!p.is_null());
    p
}

fn kink(p: *const SgParams) -> *mut SgWave {
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sg_wave_new(p, SgWaveFamily::SubCriticalZ, -0.5, SgASign::None, &mut w) }, SgStatus::Ok);
    w
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(sg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn green_matches_the_library() {
    let p = params(1e-2, 0.6, 2.0);
    let (mut v, mut n, mut tail) = (0.0, 0usize, 0.0);
    assert_eq!(unsafe { sg_green_eval(p, 0.4, 1.7, 0.9, 1e-9, &mut v, &mut n, &mut tail) }, SgStatus::Ok);
    let want = green::green_eval(0.4, 1.7, 0.9, &JunctionParams::new(0.5, 1e-2, 0.6, PI, 2.0).unwrap(), 1e-9).unwrap();
    assert_eq!(v.to_bits(), want.value.to_bits());
    assert_eq!((n, tail), (want.n_terms, want.tail_bound));
    // optional outputs may be null
    assert_eq!(unsafe { sg_green_eval(p, 0.4, 1.7, 0.9, 1e-9, &mut v, ptr::null_mut(), ptr::null_mut()) }, SgStatus::Ok);
    unsafe { sg_params_free(p) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sg_params_new(-1.0, 1e-2, 0.6, PI, 1.0, &mut p) }, SgStatus::Parameter);
    assert!(p.is_null());
    assert!(last_error().contains("alpha"), "{}", last_error());

    let p = params(0.1, 0.6, 1.0);
    let mut v = 0.0;
    let s = unsafe { sg_green_eval(p, 0.0, 0.0, 1e-3, 1e-12, &mut v, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(s, SgStatus::Truncation);
    assert_eq!(unsafe { sg_green_eval(ptr::null(), 0.0, 0.0, 1.0, 1e-6, &mut v, ptr::null_mut(), ptr::null_mut()) }, SgStatus::NullPointer);
    assert_eq!(unsafe { sg_green_eval(p, 0.0, 0.0, 1.0, 1e-6, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) }, SgStatus::NullPointer);
    assert!(last_error().contains("out_value"));
    unsafe { sg_params_free(p) };
}

#[test]
fn short_error_buffer_is_truncated_and_terminated() {
    let mut p = ptr::null_mut();
    unsafe { sg_params_new(f64::NAN, 1e-2, 0.6, PI, 1.0, &mut p) };
    let mut buf = [1 as c_char; 8];
    let full = unsafe { sg_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(full > 7);
    assert_eq!(buf[7], 0);
    assert_eq!(unsafe { sg_last_error_message(ptr::null_mut(), 0) }, full);
}

#[test]
fn wave_handles_evaluate_and_reject_poles() {
    let p = params(1e-2, 0.6, 1.0);
    let w = kink(p);
    let (mut u, mut k) = (0.0, 0.0);
    assert_eq!(unsafe { sg_wave_value(w, 0.3, 0.2, &mut u) }, SgStatus::Ok);
    assert_eq!(unsafe { sg_wave_uxxt(w, 0.3, 0.2, &mut k) }, SgStatus::Ok);
    assert!(u.is_finite() && k.is_finite());
    unsafe { sg_wave_free(w) };

    let q = params(1e-2, 1.0, 1.0);
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sg_wave_new(q, SgWaveFamily::GammaOneY, 1.0, SgASign::None, &mut w) }, SgStatus::Ok);
    assert_eq!(unsafe { sg_wave_value(w, 0.5, 0.5, &mut u) }, SgStatus::Singular);
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { sg_wave_new(p, SgWaveFamily::GammaZeroY, 1.0, SgASign::None, &mut bad) }, SgStatus::Parameter);
    unsafe {
        sg_wave_free(w);
        sg_params_free(p);
        sg_params_free(q);
    }
}

#[test]
fn solve_round_trips_a_field() {
    let p = params(1e-2, 0.6, 0.5);
    let w = kink(p);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { sg_solve(p, w, 41, 0.5, 0.5, 0, &mut f) }, SgStatus::Ok);
    let (mut nx, mut nt, mut dx, mut dt) = (0, 0, 0.0, 0.0);
    assert_eq!(unsafe { sg_field_dims(f, &mut nx, &mut nt, &mut dx, &mut dt) }, SgStatus::Ok);
    assert_eq!(nx, 41);
    assert!((dx - PI / 40.0).abs() < 1e-15 && (nt as f64 * dt - 0.5).abs() < 1e-12);
    let len = nx * (nt + 1);
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { sg_field_copy(f, buf.as_mut_ptr(), len - 1) }, SgStatus::BufferTooSmall);
    assert_eq!(unsafe { sg_field_copy(f, buf.as_mut_ptr(), len) }, SgStatus::Ok);
    // first level is the wave itself
    let mut u0 = 0.0;
    unsafe { sg_wave_value(w, 2.0 * dx, 0.0, &mut u0) };
    assert_eq!(buf[2], u0);
    assert!(buf.iter().all(|v| v.is_finite()));

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { sg_solve(p, w, 41, 0.5, 0.5, 1, &mut r) }, SgStatus::Ok);
    let mut rbuf = vec![0.0; len];
    unsafe { sg_field_copy(r, rbuf.as_mut_ptr(), len) };
    let gap = buf.iter().zip(&rbuf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap > 0.0 && gap < 1e-2, "{gap}");
    assert_eq!(unsafe { sg_solve(p, w, 4, 0.5, 0.5, 0, &mut r) }, SgStatus::Parameter);
    unsafe {
        sg_field_free(f);
        sg_field_free(r);
        sg_wave_free(w);
        sg_params_free(p);
    }
}

#[test]
fn horizon_reports_its_warning() {
    let (mut t, mut warn) = (0.0, -1);
    assert_eq!(unsafe { sg_t_epsilon(1e-3, 0.8, 0.5, &mut t, &mut warn) }, SgStatus::Ok);
    assert!((t - 0.2 * 1e3f64.ln()).abs() < 1e-12);
    assert_eq!(warn, 0);
    assert_eq!(unsafe { sg_t_epsilon(0.0, 0.8, 0.5, &mut t, ptr::null_mut()) }, SgStatus::Parameter);
}

#[test]
fn free_accepts_null() {
    unsafe {
        sg_params_free(ptr::null_mut());
        sg_wave_free(ptr::null_mut());
        sg_field_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/sgtool.h");
    for name in [
        "sg_version",
        "sg_last_error_message",
        "sg_params_new",
        "sg_params_free",
        "sg_green_eval",
        "sg_wave_new",
        "sg_wave_free",
        "sg_wave_value",
        "sg_wave_uxxt",
        "sg_solve",
        "sg_field_free",
        "sg_field_dims",
        "sg_field_copy",
        "sg_t_epsilon",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name}");
    }
    assert!(header.contains("typedef struct SgParams SgParams") || header.contains("struct SgParams;"));
}
