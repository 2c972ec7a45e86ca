use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cuweb::fixtures::w5;
use cuweb::json::{system_to_json, to_canonical};
use cuweb_ffi::*;

fn fixture(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cuweb_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = cuweb_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn w5_round_trip_and_au_witness() {
    unsafe {
        let json = fixture("w5.json");
        let mut sys = ptr::null_mut();
        assert_eq!(
            cuweb_system_from_json(json.as_ptr(), &mut sys),
            CuwebStatus::Ok
        );
        assert!(cuweb_last_error_message().is_null());

        let mut text = ptr::null_mut();
        assert_eq!(cuweb_system_to_json(sys, &mut text), CuwebStatus::Ok);
        assert_eq!(take(text), to_canonical(&system_to_json(&w5())));

        let mut web = ptr::null_mut();
        assert_eq!(cuweb_web_new(sys, -1, &mut web), CuwebStatus::Ok);
        assert_eq!(cuweb_web_size(web), 5);

        let tag = CString::new("AU").unwrap();
        let mut holds = true;
        let mut verdict = ptr::null_mut();
        assert_eq!(
            cuweb_web_check_axiom(web, tag.as_ptr(), &mut holds, &mut verdict),
            CuwebStatus::Ok
        );
        assert!(!holds);
        let verdict = take(verdict);
        assert!(
            verdict.contains("\"(1,1)\"") && verdict.contains("\"(∞,0)\""),
            "{verdict}"
        );

        let tag = CString::new("PC").unwrap();
        assert_eq!(
            cuweb_web_check_axiom(web, tag.as_ptr(), &mut holds, ptr::null_mut()),
            CuwebStatus::Ok
        );
        assert!(holds);

        let mut tables = ptr::null_mut();
        assert_eq!(cuweb_web_to_json(web, &mut tables), CuwebStatus::Ok);
        assert!(take(tables).contains("\"way_below\""));

        cuweb_web_free(web);
        cuweb_system_free(sys);
    }
}

#[test]
fn errors_are_reported_with_messages() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(
            cuweb_system_from_json(ptr::null(), &mut sys),
            CuwebStatus::NullPointer
        );
        assert!(sys.is_null());

        let bad = CString::new("{\"cuweb_schema\":1,").unwrap();
        assert_eq!(
            cuweb_system_from_json(bad.as_ptr(), &mut sys),
            CuwebStatus::Parse
        );
        assert!(!last_error().is_empty());

        let untagged = CString::new("{\"elements\":[]}").unwrap();
        assert_eq!(
            cuweb_monoid_from_json(untagged.as_ptr(), &mut ptr::null_mut()),
            CuwebStatus::Parse
        );

        let diagram = fixture("diagram.json");
        assert_eq!(
            cuweb_system_from_json(diagram.as_ptr(), &mut sys),
            CuwebStatus::WrongDocument
        );
        assert!(last_error().contains("diagram"));

        let json = fixture("w5.json");
        assert_eq!(
            cuweb_system_from_json(json.as_ptr(), &mut sys),
            CuwebStatus::Ok
        );
        let mut web = ptr::null_mut();
        assert_eq!(cuweb_web_new(sys, -1, &mut web), CuwebStatus::Ok);
        let tag = CString::new("O7").unwrap();
        let mut holds = false;
        assert_eq!(
            cuweb_web_check_axiom(web, tag.as_ptr(), &mut holds, ptr::null_mut()),
            CuwebStatus::UnknownAxiom
        );
        assert_eq!(cuweb_web_size(ptr::null()), 0);
        cuweb_web_free(web);
        cuweb_system_free(sys);
        cuweb_system_free(ptr::null_mut());
        cuweb_string_free(ptr::null_mut());
    }
}

#[test]
fn z_fibers_need_a_window() {
    unsafe {
        let json = fixture("chain-z3.json");
        let mut sys = ptr::null_mut();
        assert_eq!(
            cuweb_system_from_json(json.as_ptr(), &mut sys),
            CuwebStatus::Ok
        );
        let mut text = ptr::null_mut();
        assert_eq!(cuweb_system_to_json(sys, &mut text), CuwebStatus::Ok);
        let has_z = take(text).contains("\"Z\"");
        let mut web = ptr::null_mut();
        let status = cuweb_web_new(sys, -1, &mut web);
        if has_z {
            assert_eq!(status, CuwebStatus::Web);
            assert_eq!(cuweb_web_new(sys, 2, &mut web), CuwebStatus::Ok);
        } else {
            assert_eq!(status, CuwebStatus::Ok);
        }
        assert!(cuweb_web_size(web) > 0);
        cuweb_web_free(web);
        cuweb_system_free(sys);
    }
}

#[test]
fn monoid_handles() {
    unsafe {
        let text = CString::new(
            r#"{"cuweb_schema":1,"elements":["0","1"],"zero":0,"add":[[0,1],[1,1]],"leq":[[1,1],[0,1]],"positively_ordered":true}"#,
        )
        .unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(
            cuweb_monoid_from_json(text.as_ptr(), &mut m),
            CuwebStatus::Ok
        );
        assert_eq!(cuweb_monoid_size(m), 2);
        let tag = CString::new("pd").unwrap();
        let mut holds = false;
        assert_eq!(
            cuweb_monoid_check_axiom(m, tag.as_ptr(), &mut holds, ptr::null_mut()),
            CuwebStatus::Ok
        );
        assert!(holds);
        let mut out = ptr::null_mut();
        assert_eq!(cuweb_monoid_to_json(m, &mut out), CuwebStatus::Ok);
        assert!(take(out).starts_with("{\n"));
        cuweb_monoid_free(m);
    }
}

/// The generated header compiles as C and as C++.
#[test]
fn header_compiles() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile_dir();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"cuweb.h\"\n\
         int main(void) {\n\
           CuwebSystem *s = 0;\n\
           CuwebStatus st = cuweb_system_from_json(\"{}\", &s);\n\
           bool holds = false;\n\
           (void)holds;\n\
           return st == CUWEB_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    for (compiler, extra) in [
        ("cc", vec!["-x", "c", "-std=c99"]),
        ("c++", vec!["-x", "c++"]),
    ] {
        let status = Command::new(compiler)
            .args(&extra)
            .arg("-fsyntax-only")
            .arg("-Wall")
            .arg("-Werror")
            .arg("-I")
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected cuweb.h"),
            Err(e) => eprintln!("skipping {compiler}: {e}"),
        }
    }
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cuweb-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
