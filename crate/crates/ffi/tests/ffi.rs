use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use apolarity_ffi::*;

fn parse(vars: &str, poly: &str) -> *mut ApForm {
    let v = CString::new(vars).unwrap();
    let p = CString::new(poly).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ap_form_parse(v.as_ptr(), p.as_ptr(), &mut out) }, ApStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take_string(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ap_string_free(s) };
    text
}

fn last_error() -> String {
    let p = ap_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn form_basics() {
    let f = parse("x,y", "x^3 + y^3");
    let (mut d, mut n) = (0u32, 0usize);
    unsafe {
        assert_eq!(ap_form_degree(f, &mut d), ApStatus::Ok);
        assert_eq!(ap_form_nvars(f, &mut n), ApStatus::Ok);
    }
    assert_eq!((d, n), (3, 2));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ap_form_render(f, &mut s) }, ApStatus::Ok);
    let text = take_string(s);
    assert!(text.contains("x^3") && text.contains("y^3"), "{text}");

    let mut rank = 0usize;
    assert_eq!(unsafe { ap_binary_rank(f, &mut rank) }, ApStatus::Ok);
    assert_eq!(rank, 2);
    unsafe { ap_form_free(f) };
}

#[test]
fn hilbert_buffer_protocol() {
    let f = parse("x,y,z", "x*y*z");
    let mut len = 0usize;
    assert_eq!(unsafe { ap_hilbert(f, ptr::null_mut(), 0, &mut len) }, ApStatus::BufferTooSmall);
    assert_eq!(len, 4);
    let mut buf = vec![0usize; len];
    assert_eq!(unsafe { ap_hilbert(f, buf.as_mut_ptr(), buf.len(), &mut len) }, ApStatus::Ok);
    assert_eq!(buf, [1, 3, 3, 1]);
    unsafe { ap_form_free(f) };
}

#[test]
fn errors_are_reported() {
    let v = CString::new("x,y").unwrap();
    let p = CString::new("x^2 + y").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ap_form_parse(v.as_ptr(), p.as_ptr(), &mut out) }, ApStatus::InvalidInput);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    let p = CString::new("x^2 + q^2").unwrap();
    assert_eq!(unsafe { ap_form_parse(v.as_ptr(), p.as_ptr(), &mut out) }, ApStatus::Parse);

    assert_eq!(unsafe { ap_form_parse(ptr::null(), p.as_ptr(), &mut out) }, ApStatus::NullPointer);
    assert_eq!(unsafe { ap_form_degree(ptr::null(), &mut 0) }, ApStatus::NullPointer);

    let f = parse("x,y,z", "x^2 + y^2 + z^2");
    let mut r = 0usize;
    assert_eq!(unsafe { ap_binary_rank(f, &mut r) }, ApStatus::InvalidInput);
    unsafe { ap_form_free(f) };

    unsafe {
        ap_form_free(ptr::null_mut());
        ap_string_free(ptr::null_mut());
    }
}

#[test]
fn family_certificate() {
    let name = CString::new("ikeda").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ap_form_from_family(name.as_ptr(), ptr::null(), 0, &mut f) }, ApStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ap_wild_certificate_json(f, &mut s) }, ApStatus::Ok);
    let cert: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(cert["schema"], "apolarity.wild-certificate/v1");
    assert_eq!(cert["verdict"], "wild");
    unsafe { ap_form_free(f) };

    let bad = CString::new("no-such-family").unwrap();
    let mut g = ptr::null_mut();
    assert_ne!(unsafe { ap_form_from_family(bad.as_ptr(), ptr::null(), 0, &mut g) }, ApStatus::Ok);
    assert!(g.is_null());
}

#[test]
fn analysis_report() {
    let f = parse("x,y,u,v", "x*u^2 + y*v^2");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ap_analyze_json(f, &mut s) }, ApStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(report["schema"], "apolarity.analysis/v1");
    assert_eq!(report["degree"], 3);
    assert!(report.get("generatedAt").is_none());
    unsafe { ap_form_free(f) };
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(ap_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/apolarity.h")).unwrap();
    for name in [
        "ap_form_parse",
        "ap_form_from_family",
        "ap_form_free",
        "ap_form_degree",
        "ap_form_nvars",
        "ap_form_render",
        "ap_hilbert",
        "ap_binary_rank",
        "ap_wild_certificate_json",
        "ap_analyze_json",
        "ap_string_free",
        "ap_last_error_message",
        "ap_version",
        "typedef struct ApForm ApForm",
        "AP_STATUS_BUFFER_TOO_SMALL = 6",
    ] {
        assert!(header.contains(name), "header is missing {name}");
    }
}

fn target_dir() -> PathBuf {
    // tests/ffi-<hash> lives in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libapolarity_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = std::env::temp_dir().join(format!("apolarity-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "apolarity.h"
int main(void) {
    ApForm *f = NULL;
    if (ap_form_parse("x,y,z", "x*y*z", &f) != AP_STATUS_OK) return 1;
    size_t buf[8], len = 0;
    if (ap_hilbert(f, buf, 8, &len) != AP_STATUS_OK || len != 4) return 2;
    printf("%zu %zu %zu %zu\n", buf[0], buf[1], buf[2], buf[3]);
    ap_form_free(f);
    if (ap_form_parse("x", "x +", &f) == AP_STATUS_OK) return 3;
    if (ap_last_error_message() == NULL) return 4;
    return 0;
}
"#,
    )
    .unwrap();
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 3 3 1");
    let _ = std::fs::remove_dir_all(&dir);
}
