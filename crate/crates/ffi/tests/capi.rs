use std::ffi::{CStr, CString};
use std::ptr;

use bohr_ffi::*;

fn parse(text: &str, horizon: u64) -> *mut BohrSeries {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bohr_series_parse(c.as_ptr(), horizon, &mut out) }, BohrStatus::Ok);
    out
}

fn to_string(s: *const BohrSeries) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bohr_series_to_string(s, &mut out) }, BohrStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { bohr_string_free(out) };
    text
}

fn last_error() -> String {
    let p = bohr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn series_round_trip_and_norm() {
    let f = parse("# f\n1 1 0\n2 1 0\n6 1 0\n", 64);
    assert_eq!(to_string(f), "1 1 0\n2 1 0\n6 1 0\n");
    let mut h = 0;
    assert_eq!(unsafe { bohr_series_horizon(f, &mut h) }, BohrStatus::Ok);
    assert_eq!(h, 64);
    let mut v = 0.0;
    assert_eq!(unsafe { bohr_series_norm_dalpha(f, 1.0, &mut v) }, BohrStatus::Ok);
    assert!((v - 1.75f64.sqrt()).abs() < 1e-15);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { bohr_series_evaluate(f, 1.0, 0.0, &mut re, &mut im) }, BohrStatus::Ok);
    assert!((re - (1.0 + 0.5 + 1.0 / 6.0)).abs() < 1e-15 && im == 0.0);
    assert!(bohr_last_error_message().is_null());
    unsafe { bohr_series_free(f) };
}

#[test]
fn convolution_and_composition() {
    let a = parse("1 1 0\n2 1 0\n", 8);
    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { bohr_series_convolve(a, a, 8, &mut sq) }, BohrStatus::Ok);
    assert_eq!(to_string(sq), "1 1 0\n2 2 0\n4 1 0\n");

    let f = parse("2 1 0\n", 2);
    let sym_text = CString::new("c0 2\n").unwrap();
    let mut sym = ptr::null_mut();
    assert_eq!(unsafe { bohr_symbol_parse(sym_text.as_ptr(), 4, &mut sym) }, BohrStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bohr_compose(f, sym, 1 << 10, &mut g) }, BohrStatus::Ok);
    assert_eq!(to_string(g), "4 1 0\n");
    unsafe {
        bohr_series_free(a);
        bohr_series_free(sq);
        bohr_series_free(f);
        bohr_series_free(g);
        bohr_symbol_free(sym);
    }
}

#[test]
fn error_codes_and_messages() {
    let bad = CString::new("1 1 0\n2 nope 0\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bohr_series_parse(bad.as_ptr(), 8, &mut out) }, BohrStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("line 2"));

    assert_eq!(unsafe { bohr_series_parse(ptr::null(), 8, &mut out) }, BohrStatus::NullPointer);
    let mut d = 0;
    assert_eq!(unsafe { bohr_divisor_count(0, &mut d) }, BohrStatus::Domain);
    assert_eq!(unsafe { bohr_divisor_count(360, &mut d) }, BohrStatus::Ok);
    assert_eq!(d, 24);
    assert!(bohr_last_error_message().is_null());
    assert_eq!(unsafe { bohr_divisor_count(12, ptr::null_mut()) }, BohrStatus::NullPointer);

    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { bohr_series_parse(invalid.as_ptr().cast(), 8, &mut out) },
        BohrStatus::InvalidUtf8
    );
    let f = parse("1 1 0\n", 4);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bohr_series_convolve(f, f, 0, &mut g) }, BohrStatus::Domain);
    unsafe {
        bohr_series_free(f);
        bohr_series_free(ptr::null_mut());
        bohr_symbol_free(ptr::null_mut());
        bohr_string_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bohr.h")).unwrap();
    for name in [
        "BOHR_STATUS_OK",
        "typedef struct BohrSeries BohrSeries",
        "typedef struct BohrSymbol BohrSymbol",
        "bohr_series_parse",
        "bohr_series_free",
        "bohr_series_to_string",
        "bohr_string_free",
        "bohr_series_evaluate",
        "bohr_series_norm_dalpha",
        "bohr_series_convolve",
        "bohr_symbol_parse",
        "bohr_compose",
        "bohr_divisor_count",
        "bohr_last_error_message",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
