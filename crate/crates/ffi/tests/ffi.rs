use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dulac_ffi::*;

const CASE2: &str = r#"{"eigenvalues":{"alpha":"1","beta":"1/2"},"centre_dim":1,"jet_order":2,"degree":3,
  "terms":[{"component":"y","exponents":[0,0,2],"coeff":{"(0)":"1"}}]}"#;

const CASE1_XZ: &str = r#"{"eigenvalues":{"alpha":"2/3","beta":"1/2"},"centre_dim":1,"jet_order":2,"degree":3,
  "terms":[{"component":"y","exponents":[1,0,1],"coeff":{"(0)":"1"}},
           {"component":"y","exponents":[1,1,2],"coeff":{"(0)":"1/4"}}]}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dulac_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn field(json: &str) -> *mut DulacField {
    let c = CString::new(json).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { dulac_field_from_json(c.as_ptr(), &mut f) },
        DulacStatus::Ok,
        "{}",
        last_error()
    );
    f
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    dulac_string_free(p);
    s
}

#[test]
fn field_json_round_trip() {
    let f = field(CASE1_XZ);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(dulac_field_to_json(f, &mut out), DulacStatus::Ok);
        let text = take_string(out);
        let g = field(&text);
        let mut again = ptr::null_mut();
        assert_eq!(dulac_field_to_json(g, &mut again), DulacStatus::Ok);
        assert_eq!(take_string(again), text);
        dulac_field_free(g);
        dulac_field_free(f);
    }
}

#[test]
fn series_evaluation_matches_closed_form() {
    let f = field(CASE2);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            dulac_series_new(f, 2, ptr::null(), &mut s),
            DulacStatus::Ok,
            "{}",
            last_error()
        );
        let (mut a, mut b) = (1.0, 1.0);
        assert_eq!(
            dulac_series_rate_offsets(s, &mut a, &mut b),
            DulacStatus::Ok
        );
        assert_eq!((a, b), (0.0, 0.0));
        let (mut y, mut z) = (0.0, 0.0);
        let mut u = [f64::NAN];
        let st = dulac_series_eval(s, 0.01, 1.0, 1.0, a, b, &mut y, &mut z, u.as_mut_ptr(), 1);
        assert_eq!(st, DulacStatus::Ok);
        assert!((y - 0.01 * (1.0 + 100f64.ln())).abs() < 1e-14);
        assert!((z - 0.1).abs() < 1e-15);
        assert_eq!(u[0], 0.0);

        // wrong buffer length and out-of-range x0
        let st = dulac_series_eval(s, 0.01, 1.0, 1.0, a, b, &mut y, &mut z, u.as_mut_ptr(), 2);
        assert_eq!(st, DulacStatus::InvalidField);
        let st = dulac_series_eval(s, 2.0, 1.0, 1.0, a, b, &mut y, &mut z, ptr::null_mut(), 0);
        assert_eq!(st, DulacStatus::InvalidField);

        let mut json = ptr::null_mut();
        assert_eq!(dulac_series_to_json(s, &mut json), DulacStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["case"], "case2");
        dulac_series_free(s);
        dulac_field_free(f);
    }
}

#[test]
fn normalize_then_series() {
    let f = field(CASE1_XZ);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            dulac_series_new(f, 1, ptr::null(), &mut s),
            DulacStatus::NotNormalForm
        );
        assert!(s.is_null());
        assert!(last_error().contains("normal form"), "{}", last_error());
        let mut nf = ptr::null_mut();
        assert_eq!(dulac_normalize(f, 0, &mut nf), DulacStatus::Ok);
        assert_eq!(
            dulac_series_new(nf, 1, ptr::null(), &mut s),
            DulacStatus::Ok,
            "{}",
            last_error()
        );
        dulac_series_free(s);
        dulac_field_free(nf);
        dulac_field_free(f);
    }
}

#[test]
fn resonances_report() {
    let (a, b) = (CString::new("1").unwrap(), CString::new("1/2").unwrap());
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            dulac_resonances_json(a.as_ptr(), b.as_ptr(), 4, &mut out),
            DulacStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["m"], 2);
        assert!(v["monomials"]["y"]
            .as_array()
            .unwrap()
            .contains(&serde_json::json!([0, 0, 2])));
    }
}

#[test]
fn error_codes() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(
            dulac_field_from_json(ptr::null(), &mut f),
            DulacStatus::NullArgument
        );
        let bad = CString::new("{\"eigenvalues\": 3}").unwrap();
        assert_eq!(
            dulac_field_from_json(bad.as_ptr(), &mut f),
            DulacStatus::Parse
        );
        assert!(f.is_null());
        let utf = [0xffu8 as c_char, 0];
        assert_eq!(
            dulac_field_from_json(utf.as_ptr(), &mut f),
            DulacStatus::InvalidUtf8
        );
        let ratio = CString::new(CASE2.replace("\"1/2\"", "\"1/3\"")).unwrap();
        // alpha/beta = 3 is fine; beta > alpha is not
        assert_eq!(
            dulac_field_from_json(ratio.as_ptr(), &mut f),
            DulacStatus::Ok
        );
        dulac_field_free(f);
        let swapped = CString::new(CASE2.replace("\"1\",\"beta\"", "\"1/4\",\"beta\"")).unwrap();
        assert_eq!(
            dulac_field_from_json(swapped.as_ptr(), &mut f),
            DulacStatus::InvalidField,
            "{}",
            last_error()
        );
        dulac_field_free(ptr::null_mut());
        dulac_series_free(ptr::null_mut());
        dulac_string_free(ptr::null_mut());
        assert_eq!(dulac_series_centre_dim(ptr::null()), 0);
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/ffi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/dulac.h");
    let text = std::fs::read_to_string(&header).expect("header generated by the build script");
    for sym in [
        "dulac_field_from_json",
        "dulac_series_eval",
        "dulac_last_error",
        "DULAC_STATUS_NOT_NORMAL_FORM",
    ] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let lib = target_dir().join("libdulac_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let out = std::env::temp_dir().join(format!("dulac_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C smoke test failed to build");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
