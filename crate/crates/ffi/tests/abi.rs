use std::ffi::{CStr, CString};
use std::ptr;

use superprolong_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    sp_string_free(s);
    out
}

#[test]
fn ag2_at_p5() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sp_experiment_run(5, 1, SpMode::Full, SpRoute::FullG0, &mut h), SpStatus::Ok);
        assert!(!h.is_null());
        let (mut e, mut o) = (0usize, 0usize);
        assert_eq!(sp_experiment_total(h, &mut e, &mut o), SpStatus::Ok);
        assert_eq!((e, o), (17, 14));
        assert_eq!(sp_experiment_degree_sdim(h, -1, &mut e, &mut o), SpStatus::Ok);
        assert_eq!(e + o, 7);
        assert_eq!(sp_experiment_degree_sdim(h, 40, &mut e, &mut o), SpStatus::Ok);
        assert_eq!((e, o), (0, 0));
        let (mut lo, mut hi) = (0, 0);
        assert_eq!(sp_experiment_degree_range(h, &mut lo, &mut hi), SpStatus::Ok);
        assert_eq!((lo, hi), (-2, 2));
        let mut simple = false;
        assert_eq!(sp_experiment_is_simple(h, &mut simple), SpStatus::Ok);
        assert!(simple);

        let mut s = ptr::null_mut();
        assert_eq!(sp_experiment_report_json(h, &mut s), SpStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["p"], 5);

        let name = CString::new("ag2").unwrap();
        assert_eq!(sp_experiment_export_sc(h, name.as_ptr(), &mut s), SpStatus::Ok);
        let sc = take(s);
        assert!(sc.starts_with("# p=5\n# N=1\n# algebra=ag2\n"));
        assert_eq!(sc.lines().filter(|l| l.starts_with("b ")).count(), 31);
        sp_experiment_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sp_experiment_run(4, 1, SpMode::Full, SpRoute::FullG0, &mut h), SpStatus::InvalidArgument);
        assert!(h.is_null());
        let msg = CStr::from_ptr(sp_last_error()).to_str().unwrap();
        assert!(msg.contains("p = 4"), "{msg}");
        assert_eq!(
            sp_experiment_run(5, 1, SpMode::PartialPrime, SpRoute::FullG0, &mut h),
            SpStatus::InvalidArgument
        );
        assert_eq!(sp_experiment_run(5, 1, SpMode::Full, SpRoute::FullG0, ptr::null_mut()), SpStatus::NullPointer);
        let mut e = 0usize;
        assert_eq!(sp_experiment_total(ptr::null(), &mut e, &mut e), SpStatus::NullPointer);

        let mut s = ptr::null_mut();
        let bad = CString::new("t^^").unwrap();
        assert_eq!(sp_function_canonical(3, 1, bad.as_ptr(), &mut s), SpStatus::InvalidArgument);
        assert!(!sp_last_error().is_null());
        let good = CString::new("v1").unwrap();
        assert_eq!(sp_function_canonical(3, 1, good.as_ptr(), &mut s), SpStatus::Ok);
        assert!(sp_last_error().is_null());
        sp_string_free(s);
        sp_experiment_free(ptr::null_mut());
        sp_string_free(ptr::null_mut());
    }
}

#[test]
fn functions_and_fields() {
    unsafe {
        let mut s = ptr::null_mut();
        let text = CString::new("w1 + v1 + 2 v1 + t^1").unwrap();
        assert_eq!(sp_function_canonical(3, 1, text.as_ptr(), &mut s), SpStatus::Ok);
        let canon = take(s);
        assert!(!canon.contains("v1"), "{canon}");
        let one = CString::new("1").unwrap();
        assert_eq!(sp_contact_field(3, 1, one.as_ptr(), &mut s), SpStatus::Ok);
        assert!(take(s).contains("d/dt"));
        let v = CStr::from_ptr(sp_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn bj_partial_through_the_abi() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(
            sp_experiment_run(3, 1, SpMode::PartialDoublePrime, SpRoute::TildeG0, &mut h),
            SpStatus::Ok
        );
        let (mut e, mut o) = (0usize, 0usize);
        sp_experiment_total(h, &mut e, &mut o);
        assert_eq!((e, o), (10, 14));
        sp_experiment_free(h);
    }
}
