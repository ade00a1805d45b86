use std::ffi::{c_char, CString};
use std::ptr;

use green_ffi::*;

fn domain(json: &str) -> *mut GreenDomain {
    let text = CString::new(json).unwrap();
    let mut d = ptr::null_mut();
    let status = unsafe { green_domain_from_json(text.as_ptr(), &mut d) };
    assert_eq!(status, GreenStatus::Ok, "{}", last_error());
    assert!(!d.is_null());
    d
}

fn last_error() -> String {
    let mut buf = vec![0u8; 512];
    let n = unsafe { green_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    buf.truncate(n.min(511));
    String::from_utf8(buf).unwrap()
}

fn p2(x: f64, y: f64) -> GreenPoint {
    GreenPoint { x, y, z: 0.0 }
}

const DISK: &str = r#"{"type":"disk","center":[0,0],"radius":1}"#;

#[test]
fn closed_form_disk() {
    let d = domain(DISK);
    let mut v = GreenValue::default();
    let status =
        unsafe { green_evaluate(d, GreenMethod::ClosedForm, p2(0.5, 0.0), p2(0.0, 0.0), ptr::null(), &mut v) };
    assert_eq!(status, GreenStatus::Ok);
    assert!((v.value - 2f64.ln()).abs() < 1e-14);
    unsafe { green_domain_free(d) };
}

#[test]
fn domain_queries() {
    let d = domain(r#"{"type":"annulus","center":[0,0],"r_inner":0.5,"r_outer":1}"#);
    let (mut dim, mut comps) = (0usize, 0usize);
    unsafe {
        assert_eq!(green_domain_dimension(d, &mut dim), GreenStatus::Ok);
        assert_eq!(green_domain_component_count(d, &mut comps), GreenStatus::Ok);
    }
    assert_eq!((dim, comps), (2, 2));
    let (mut dist, mut inside) = (0.0, false);
    assert_eq!(unsafe { green_domain_distance(d, p2(0.7, 0.0), &mut dist, &mut inside) }, GreenStatus::Ok);
    assert!((dist - 0.2).abs() < 1e-12 && inside);
    unsafe { green_domain_free(d) };
}

#[test]
fn mfs_handle_matches_closed_form() {
    let d = domain(DISK);
    let w = p2(0.3, 0.2);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { green_mfs_solve(d, w, 0, &mut sol) }, GreenStatus::Ok, "{}", last_error());
    let (mut res, mut count, mut g) = (0.0, 0usize, 0.0);
    let mut exact = GreenValue::default();
    unsafe {
        assert_eq!(green_mfs_residual(sol, &mut res), GreenStatus::Ok);
        assert_eq!(green_mfs_charge_count(sol, &mut count), GreenStatus::Ok);
        assert_eq!(green_mfs_evaluate(sol, p2(-0.4, 0.1), &mut g), GreenStatus::Ok);
        green_evaluate(d, GreenMethod::ClosedForm, p2(-0.4, 0.1), w, ptr::null(), &mut exact);
        green_mfs_free(sol);
        green_domain_free(d);
    }
    assert!(res < 1e-8);
    assert!(count >= 64);
    assert!((g - exact.value).abs() < 1e-8);
}

#[test]
fn wos_estimate_is_seeded() {
    let d = domain(DISK);
    let opts = GreenOptions { walks: 2000, seed: 9, ..green_options_default() };
    let mut a = GreenWosResult::default();
    let mut b = GreenWosResult::default();
    unsafe {
        assert_eq!(green_wos_estimate(d, p2(0.5, 0.0), p2(0.0, 0.0), &opts, &mut a), GreenStatus::Ok);
        green_wos_estimate(d, p2(0.5, 0.0), p2(0.0, 0.0), &opts, &mut b);
        green_domain_free(d);
    }
    assert_eq!(a, b);
    assert_eq!(a.walks_used, 2000);
    assert!((a.estimate - 2f64.ln()).abs() < 5.0 * a.std_error);
}

#[test]
fn spatial_ball() {
    let d = domain(r#"{"type":"ball3","center":[0,0,0],"radius":1}"#);
    let mut v = GreenValue::default();
    let x = GreenPoint { x: 0.5, y: 0.0, z: 0.0 };
    let status = unsafe { green_evaluate(d, GreenMethod::ClosedForm, x, GreenPoint::default(), ptr::null(), &mut v) };
    assert_eq!(status, GreenStatus::Ok);
    assert!((v.value - 1.0).abs() < 1e-14);
    unsafe { green_domain_free(d) };
}

#[test]
fn error_codes() {
    let bad = CString::new("{not json").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { green_domain_from_json(bad.as_ptr(), &mut d) }, GreenStatus::Parse);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { green_domain_from_json(ptr::null(), &mut d) }, GreenStatus::NullPointer);

    let invalid = CString::new(r#"{"type":"disk","center":[0,0],"radius":-1}"#).unwrap();
    assert_eq!(unsafe { green_domain_from_json(invalid.as_ptr(), &mut d) }, GreenStatus::InvalidArgument);

    let disk = domain(DISK);
    let mut v = GreenValue::default();
    let pole = unsafe { green_evaluate(disk, GreenMethod::ClosedForm, p2(0.0, 0.0), p2(0.0, 0.0), ptr::null(), &mut v) };
    assert_eq!(pole, GreenStatus::Pole);
    let ball = domain(r#"{"type":"ball3","center":[0,0,0],"radius":1}"#);
    let mfs = unsafe { green_evaluate(ball, GreenMethod::Mfs, p2(0.5, 0.0), p2(0.0, 0.0), ptr::null(), &mut v) };
    assert_eq!(mfs, GreenStatus::Infeasible);
    assert!(last_error().contains("wos"), "{}", last_error());
    let null_out = unsafe { green_domain_dimension(disk, ptr::null_mut()) };
    assert_eq!(null_out, GreenStatus::NullPointer);
    unsafe {
        green_domain_free(disk);
        green_domain_free(ball);
        green_domain_free(ptr::null_mut());
        green_mfs_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_error() {
    let mut d = ptr::null_mut();
    unsafe { green_domain_from_json(ptr::null(), &mut d) };
    assert!(!last_error().is_empty());
    let disk = domain(DISK);
    assert!(last_error().is_empty());
    unsafe { green_domain_free(disk) };
}

#[test]
fn error_message_truncates() {
    let mut d = ptr::null_mut();
    unsafe { green_domain_from_json(ptr::null(), &mut d) };
    let mut buf = [0x7fu8; 4];
    let n = unsafe { green_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    assert!(n > 3);
    assert_eq!(buf[3], 0);
}

#[test]
fn reproduce_writes_outputs() {
    let dir = std::env::temp_dir().join(format!("green-ffi-{}", std::process::id()));
    let name = CString::new("lemma-oneside").unwrap();
    let out = CString::new(dir.to_str().unwrap()).unwrap();
    let mut passed = false;
    let status = unsafe { green_reproduce(name.as_ptr(), out.as_ptr(), ptr::null(), &mut passed) };
    assert_eq!(status, GreenStatus::Ok, "{}", last_error());
    assert!(passed);
    assert!(dir.join("lemma-oneside.csv").exists());
    std::fs::remove_dir_all(dir).ok();

    let unknown = CString::new("nope").unwrap();
    let status = unsafe { green_reproduce(unknown.as_ptr(), ptr::null(), ptr::null(), &mut passed) };
    assert_eq!(status, GreenStatus::InvalidArgument);
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/green.h");
    for sym in [
        "green_options_default",
        "green_last_error_message",
        "green_domain_from_json",
        "green_domain_free",
        "green_domain_dimension",
        "green_domain_component_count",
        "green_domain_distance",
        "green_evaluate",
        "green_wos_estimate",
        "green_mfs_solve",
        "green_mfs_evaluate",
        "green_mfs_residual",
        "green_mfs_charge_count",
        "green_mfs_free",
        "green_reproduce",
    ] {
        assert!(header.contains(&format!("{sym}(")), "{sym} missing from header");
    }
}
