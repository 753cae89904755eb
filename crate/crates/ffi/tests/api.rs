use std::ffi::{CStr, CString};
use std::ptr;

use gamemu_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = gm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn structure(json: &str) -> *mut GmStructure {
    let mut st = ptr::null_mut();
    assert_eq!(unsafe { gm_structure_from_json(c(json).as_ptr(), &mut st) }, GmStatus::Ok);
    st
}

fn formula(src: &str, logic: i32) -> *mut GmFormula {
    let mut f = ptr::null_mut();
    let status = unsafe { gm_formula_parse(c(src).as_ptr(), logic, &mut f) };
    assert_eq!(status, GmStatus::Ok, "{src}");
    f
}

fn text(f: *const GmFormula) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gm_formula_to_string(f, &mut s) }, GmStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { gm_string_free(s) };
    out
}

#[test]
fn check_on_structure() {
    let st = structure(r#"{"domain": 2, "relations": {"R": [[1]]}}"#);
    let f = formula("mu X . (R(x) | <x := *> X)", GM_LOGIC_MU);
    let (mut valid, mut count) = (false, 0u64);
    assert_eq!(unsafe { gm_check(st, f, &mut valid, &mut count) }, GmStatus::Ok);
    assert!(valid);
    assert_eq!(count, 2);
    let r = formula("R(x) & x = y", GM_LOGIC_GL);
    assert_eq!(unsafe { gm_check(st, r, &mut valid, &mut count) }, GmStatus::Ok);
    assert!(!valid);
    assert_eq!(count, 1);
    assert_eq!(unsafe { gm_check(st, r, ptr::null_mut(), ptr::null_mut()) }, GmStatus::Ok);
    unsafe {
        gm_formula_free(f);
        gm_formula_free(r);
        gm_structure_free(st);
    }
}

#[test]
fn translation_round() {
    let f = formula("<(a(x:x))*> R(x)", GM_LOGIC_GL);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gm_translate(f, GM_TRANSLATE_F, &mut out) }, GmStatus::Ok);
    assert_eq!(text(out), "mu X . (R(x) | <a(x:x)> X)");
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { gm_translate(out, GM_TRANSLATE_G1, &mut back) }, GmStatus::Ok);
    assert_eq!(unsafe { gm_translate(out, GM_TRANSLATE_F, &mut back) }, GmStatus::Input);
    assert!(last_error().contains("expects a gl formula"));
    assert_eq!(unsafe { gm_translate(f, 9, &mut back) }, GmStatus::Input);
    unsafe {
        gm_formula_free(f);
        gm_formula_free(out);
        gm_formula_free(back);
    }
}

#[test]
fn errors_are_reported() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gm_formula_parse(c("R(x").as_ptr(), GM_LOGIC_GL, &mut f) }, GmStatus::Parse);
    assert!(last_error().starts_with("parse error"));
    assert!(f.is_null());
    assert_eq!(unsafe { gm_formula_parse(ptr::null(), GM_LOGIC_GL, &mut f) }, GmStatus::NullArgument);
    assert_eq!(unsafe { gm_formula_parse(c("R(x)").as_ptr(), 7, &mut f) }, GmStatus::Input);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { gm_formula_parse(bad.as_ptr().cast(), GM_LOGIC_GL, &mut f) }, GmStatus::InvalidUtf8);

    let mut st = ptr::null_mut();
    assert_eq!(unsafe { gm_structure_from_json(c("{}").as_ptr(), &mut st) }, GmStatus::Input);
    let st = structure(r#"{"domain": 1}"#);
    let s = formula("S(x)", GM_LOGIC_GL);
    assert_eq!(unsafe { gm_check(st, s, ptr::null_mut(), ptr::null_mut()) }, GmStatus::Semantics);
    assert!(last_error().contains("S"));
    assert_eq!(unsafe { gm_check(ptr::null(), s, ptr::null_mut(), ptr::null_mut()) }, GmStatus::NullArgument);
    unsafe {
        gm_formula_free(s);
        gm_structure_free(st);
    }
    // Success clears the message.
    let _ = formula("true", GM_LOGIC_GL);
    assert!(gm_last_error_message().is_null());
}

#[test]
fn proofs() {
    let good = include_str!("../../core/proofs/mc.jsonl");
    let (mut ok, mut line) = (false, 99usize);
    assert_eq!(unsafe { gm_prove(c(good).as_ptr(), GM_LOGIC_GL, &mut ok, &mut line) }, GmStatus::Ok);
    assert!(ok);
    assert_eq!(line, 0);
    let bad = concat!(
        r#"{"id": 1, "formula": "R(x) -> R(x)", "just": {"kind": "taut"}}"#,
        "\n",
        r#"{"id": 2, "formula": "R(x)", "just": {"kind": "mp", "from": [1, 1]}}"#
    );
    assert_eq!(unsafe { gm_prove(c(bad).as_ptr(), GM_LOGIC_GL, &mut ok, &mut line) }, GmStatus::Ok);
    assert!(!ok);
    assert_eq!(line, 2);
    assert_eq!(unsafe { gm_prove(c("not json").as_ptr(), GM_LOGIC_GL, &mut ok, &mut line) }, GmStatus::Input);
}

#[test]
// The query time is a truncation of pi/2, not the constant.
#[allow(clippy::approx_constant)]
fn reach() {
    let q = r#"{"vars":["x1","x2"],"field":["x2","-x1"],"x0":[1,0],"y":[1.9,1.9],"t":1.5707963,"K":2,"depth":6}"#;
    let mut r = GmReachResult::default();
    assert_eq!(unsafe { gm_reach(c(q).as_ptr(), &mut r) }, GmStatus::Ok);
    assert_eq!(r.verdict, GM_REACH_REJECTED_AT_LEVEL0);
    // 1.9 + t against t^2 for t = 1.5707963.
    assert!((r.lhs - 3.4707963).abs() < 1e-12);
    assert!((r.bound - 1.5707963f64.powi(2)).abs() < 1e-12);
    assert_eq!(r.n, 2.0);
    let e = r#"{"vars":["x"],"field":["x"],"x0":[1],"y":[2.718281828],"t":1,"K":3,"depth":4}"#;
    assert_eq!(unsafe { gm_reach(c(e).as_ptr(), &mut r) }, GmStatus::Ok);
    assert_eq!((r.verdict, r.depth), (GM_REACH_PASSED, 4));
    assert_eq!(unsafe { gm_reach(c("{}").as_ptr(), &mut r) }, GmStatus::Input);
}

#[test]
fn version() {
    let v = unsafe { CStr::from_ptr(gm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
