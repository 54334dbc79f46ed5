use std::ffi::{CStr, CString};
use std::ptr;

use jll_ffi::*;

fn last_error() -> String {
    let p = jll_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn z_and_theta() {
    let mut z = 0.0;
    assert_eq!(unsafe { jll_z(50.0, &mut z) }, JllStatus::Ok);
    assert!((z + 0.340_735_005_955_025).abs() < 1e-9);
    assert!(jll_last_error().is_null());
    let mut th = 0.0;
    assert_eq!(unsafe { jll_theta(100.0, &mut th) }, JllStatus::Ok);
    assert!((th - 87.972_165_231_787_22).abs() < 1e-9);
    assert_eq!(unsafe { jll_z(1.0, &mut z) }, JllStatus::Domain);
    assert!(last_error().contains("z"));
    assert_eq!(unsafe { jll_z(50.0, ptr::null_mut()) }, JllStatus::NullPointer);
}

#[test]
fn lab_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().to_str().unwrap()).unwrap();
    let mut lab = ptr::null_mut();
    assert_eq!(unsafe { jll_lab_new(path.as_ptr(), 7.0, &mut lab) }, JllStatus::Ok);
    assert!(!lab.is_null());
    let (mut phi, mut res) = (0.0, 0.0);
    assert_eq!(unsafe { jll_solve(lab, 1e3, &mut phi, &mut res) }, JllStatus::Ok);
    assert!(res < 1e-8 && phi > 1e3 && phi < 2e3);
    let mut y = 0.0;
    assert_eq!(unsafe { jll_phi1(lab, 1e3, &mut y) }, JllStatus::Ok);
    assert_eq!(y, phi / 2.0);
    // the inverse needs y inside the ladder domain
    assert_eq!(unsafe { jll_phi1(lab, 3e3, &mut y) }, JllStatus::Ok);
    let mut t = 0.0;
    assert_eq!(unsafe { jll_phi1_inverse(lab, y, &mut t) }, JllStatus::Ok);
    assert!((t - 3e3).abs() < 1e-6, "{t}");
    let mut f = 0.0;
    assert_eq!(unsafe { jll_hl_cumulative(lab, 100.0, &mut f) }, JllStatus::Ok);
    assert!((f - 295.635_099_054_719_1).abs() < 1e-6);
    assert_eq!(unsafe { jll_solve(lab, 10.0, &mut phi, &mut res) }, JllStatus::Domain);
    assert_eq!(unsafe { jll_lab_persist(lab) }, JllStatus::Ok);
    unsafe { jll_lab_free(lab) };
    assert!(std::fs::read_dir(dir.path()).unwrap().count() == 1);
}

#[test]
fn reports_as_json() {
    let mut lab = ptr::null_mut();
    assert_eq!(unsafe { jll_lab_new(ptr::null(), 7.5, &mut lab) }, JllStatus::Ok);
    let mut json = ptr::null_mut();
    let mut passed = -1;
    let s = unsafe { jll_verify(lab, JllCheck::GapLaw, 1e3, 0.0, 0, &mut json, &mut passed) };
    assert_eq!(s, JllStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    unsafe { jll_string_free(json) };
    assert!(text.starts_with('{') && text.contains("\"name\":\"gaplaw\""), "{text}");
    assert_eq!(passed, 1);
    let s = unsafe { jll_verify(lab, JllCheck::Lemma1, 10.0, 0.0, 0, &mut json, ptr::null_mut()) };
    assert_eq!(s, JllStatus::Domain);
    unsafe { jll_lab_free(lab) };
}

#[test]
fn bad_configuration() {
    let mut lab = ptr::null_mut();
    assert_eq!(unsafe { jll_lab_new(ptr::null(), 9.0, &mut lab) }, JllStatus::Domain);
    assert!(lab.is_null());
    assert_eq!(unsafe { jll_lab_new(ptr::null(), 7.0, ptr::null_mut()) }, JllStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { jll_phi1(ptr::null(), 1e4, &mut x) }, JllStatus::NullPointer);
    unsafe {
        jll_lab_free(ptr::null_mut());
        jll_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let obj = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("smoke.o");
    let mut cmd = std::process::Command::new("cc");
    cmd.args(["-std=c99", "-Wall", "-Werror", "-c"])
        .arg(format!("-I{dir}/include"))
        .arg(format!("{dir}/tests/c/smoke.c"))
        .arg("-o")
        .arg(&obj);
    match cmd.status() {
        Ok(s) => assert!(s.success()),
        // no C compiler on this machine
        Err(e) => eprintln!("skipping: {e}"),
    }
}
