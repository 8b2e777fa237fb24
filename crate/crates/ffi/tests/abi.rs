use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pmc_verify_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    let st = unsafe { pmc_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    assert_eq!(st, PmcStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

fn parse(s: &str) -> *mut PmcExpr {
    let mut e = ptr::null_mut();
    let st = unsafe { pmc_expr_parse(c(s).as_ptr(), &mut e) };
    assert_eq!(st, PmcStatus::Ok, "{}", last_error());
    e
}

fn render(e: *const PmcExpr) -> String {
    let mut needed = 0usize;
    let st = unsafe { pmc_expr_render(e, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, PmcStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    let st = unsafe { pmc_expr_render(e, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(st, PmcStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_render_diff_equals() {
    let e = parse("sin(alpha)^2*a*abar");
    assert_eq!(render(e), "sin(alpha)^2*a*abar");
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pmc_expr_diff(e, PmcDiffVar::Alpha, &mut d) }, PmcStatus::Ok);
    let want = parse("2*sin(alpha)*cos(alpha)*a*abar");
    let mut eq = false;
    assert_eq!(unsafe { pmc_expr_equals(d, want, &mut eq) }, PmcStatus::Ok);
    assert!(eq);
    let one = parse("sin(alpha)^2 + cos(alpha)^2");
    let also = parse("1");
    assert_eq!(unsafe { pmc_expr_equals(one, also, &mut eq) }, PmcStatus::Ok);
    assert!(eq);
    unsafe {
        for h in [e, d, want, one, also] {
            pmc_expr_free(h);
        }
        pmc_expr_free(ptr::null_mut());
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { pmc_expr_parse(c("a + * b").as_ptr(), &mut e) }, PmcStatus::Syntax);
    assert!(last_error().contains("syntax"));
    assert_eq!(unsafe { pmc_expr_parse(ptr::null(), &mut e) }, PmcStatus::NullArgument);
    let bad = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { pmc_expr_parse(bad.as_ptr(), &mut e) }, PmcStatus::InvalidUtf8);
    let p = parse("1/(a+b)");
    let (mut re, mut im) = (0.0, 0.0);
    let st = unsafe { pmc_expr_eval(p, c("alpha=pi/4,a=-1,b=1").as_ptr(), 128, &mut re, &mut im) };
    assert_eq!(st, PmcStatus::Pole);
    let st = unsafe { pmc_expr_eval(p, c("alpha=pi/4,b=0").as_ptr(), 128, &mut re, &mut im) };
    assert_eq!(st, PmcStatus::Config);
    unsafe { pmc_expr_free(p) };
}

#[test]
fn catalog_entries_and_eval() {
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { pmc_catalog_new(&mut cat) }, PmcStatus::Ok);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { pmc_catalog_get(cat, c("F").as_ptr(), &mut f) }, PmcStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    let st = unsafe { pmc_expr_eval(f, c("alpha=pi/4,rho=1,b=1").as_ptr(), 0, &mut re, &mut im) };
    assert_eq!(st, PmcStatus::Ok);
    assert!((re - 1.875).abs() < 1e-12 && im.abs() < 1e-12);
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { pmc_catalog_get(cat, c("p99").as_ptr(), &mut none) }, PmcStatus::UnknownId);
    unsafe {
        pmc_expr_free(f);
        pmc_catalog_free(cat);
    }
}

#[test]
fn static_suite_report() {
    let mut r = ptr::null_mut();
    let st = unsafe { pmc_verify_run(c("static").as_ptr(), c("symbolic").as_ptr(), 10, 0, &mut r) };
    assert_eq!(st, PmcStatus::Ok);
    assert_eq!(unsafe { pmc_report_exit_code(r) }, 0);
    let mut needed = 0;
    unsafe { pmc_report_json(r, ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { pmc_report_json(r, buf.as_mut_ptr(), needed, &mut needed) }, PmcStatus::Ok);
    let json = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["total"], 5);
    let st = unsafe { pmc_verify_run(c("nope").as_ptr(), c("symbolic").as_ptr(), 10, 0, &mut r) };
    assert_eq!(st, PmcStatus::Config);
    assert_eq!(unsafe { pmc_report_exit_code(ptr::null()) }, -1);
    unsafe { pmc_report_free(r) };
}
