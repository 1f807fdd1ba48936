use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use omega_ffi::*;

const SAMPLE_TABLE: &str = r#"{"type":"table","format":1,"programs":[
    {"bits":"0001","output":"1"},{"bits":"000001","output":"10"},{"bits":"000011","output":"11"}]}"#;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    omega_string_free(s);
    owned
}

fn last_error() -> String {
    let p = omega_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p).to_str().unwrap().to_owned() }
}

fn table() -> *mut OmegaMachine {
    let json = CString::new(SAMPLE_TABLE).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { omega_machine_from_json(json.as_ptr(), &mut m) },
        OmegaStatus::Ok
    );
    m
}

#[test]
fn exact_omega_of_three_key_table() {
    let m = table();
    let (mut frac, mut bin) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(omega_exact(m, &mut frac, &mut bin), OmegaStatus::Ok);
        assert_eq!(take(frac), "3/2^5");
        assert_eq!(take(bin), "0.000110");
        let mut digest = ptr::null_mut();
        assert_eq!(omega_machine_digest(m, &mut digest), OmegaStatus::Ok);
        assert!(take(digest).starts_with("sha256:"));
        omega_machine_free(m);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut m = ptr::null_mut();
        let bad =
            CString::new(r#"{"type":"table","format":1,"programs":[{"bits":"0"},{"bits":"01"}]}"#)
                .unwrap();
        assert_eq!(
            omega_machine_from_json(bad.as_ptr(), &mut m),
            OmegaStatus::InvalidMachine
        );
        assert!(m.is_null());
        assert!(last_error().contains("(0, 01)"));

        assert_eq!(
            omega_machine_from_json(ptr::null(), &mut m),
            OmegaStatus::NullArgument
        );
        let missing = CString::new("/nonexistent/m.json").unwrap();
        assert_eq!(
            omega_machine_load(missing.as_ptr(), &mut m),
            OmegaStatus::Io
        );

        let u = omega_machine_universal();
        let mut frac = ptr::null_mut();
        assert_eq!(
            omega_exact(u, &mut frac, ptr::null_mut()),
            OmegaStatus::NotTable
        );

        let mut result = std::mem::zeroed::<OmegaRunResult>();
        let program = CString::new("10x0").unwrap();
        assert_eq!(
            omega_run(u, program.as_ptr(), 10, &mut result),
            OmegaStatus::InvalidBits
        );
        let program = CString::new("1000").unwrap();
        assert_eq!(
            omega_run(u, program.as_ptr(), 0, &mut result),
            OmegaStatus::InvalidArgument
        );
        omega_machine_free(u);
        omega_machine_free(ptr::null_mut());
    }
}

#[test]
fn run_outcomes() {
    unsafe {
        let u = omega_machine_universal();
        let mut r = std::mem::zeroed::<OmegaRunResult>();
        let halt_out = CString::new("1111").unwrap();
        assert_eq!(omega_run(u, halt_out.as_ptr(), 5, &mut r), OmegaStatus::Ok);
        assert_eq!(r.outcome, OmegaOutcome::Halted);
        assert_eq!((r.steps, r.bits_consumed), (1, 4));
        assert_eq!(take(r.output), "0");

        let invalid = CString::new("0").unwrap();
        assert_eq!(omega_run(u, invalid.as_ptr(), 5, &mut r), OmegaStatus::Ok);
        assert_eq!(r.outcome, OmegaOutcome::Invalid);
        assert!(r.output.is_null());
        omega_machine_free(u);
    }
}

#[test]
fn dovetailer_resume_matches_straight_run() {
    unsafe {
        let u = omega_machine_universal();
        let mut straight = ptr::null_mut();
        assert_eq!(
            omega_dovetailer_new(u, ptr::null(), &mut straight),
            OmegaStatus::Ok
        );
        let mut reports = Vec::new();
        for _ in 0..10 {
            let mut line = ptr::null_mut();
            assert_eq!(omega_dovetailer_next(straight, &mut line), OmegaStatus::Ok);
            reports.push(take(line));
        }
        assert_eq!(omega_dovetailer_stage(straight), 10);

        let mut first = ptr::null_mut();
        assert_eq!(
            omega_dovetailer_new(u, ptr::null(), &mut first),
            OmegaStatus::Ok
        );
        for _ in 0..4 {
            assert_eq!(
                omega_dovetailer_next(first, ptr::null_mut()),
                OmegaStatus::Ok
            );
        }
        let mut ckpt = ptr::null_mut();
        assert_eq!(
            omega_dovetailer_checkpoint(first, &mut ckpt),
            OmegaStatus::Ok
        );
        let ckpt = CString::new(take(ckpt)).unwrap();
        omega_dovetailer_free(first);
        // The handle keeps its own machine, so freeing the source is fine.
        omega_machine_free(u);

        let u = omega_machine_universal();
        let mut resumed = ptr::null_mut();
        assert_eq!(
            omega_dovetailer_new(u, ckpt.as_ptr(), &mut resumed),
            OmegaStatus::Ok
        );
        for expected in &reports[4..] {
            let mut line = ptr::null_mut();
            assert_eq!(omega_dovetailer_next(resumed, &mut line), OmegaStatus::Ok);
            assert_eq!(&take(line), expected);
        }
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        omega_dovetailer_omega(straight, &mut a);
        omega_dovetailer_omega(resumed, &mut b);
        assert_eq!(take(a), take(b));

        let t = table();
        let mut wrong = ptr::null_mut();
        assert_eq!(
            omega_dovetailer_new(t, ckpt.as_ptr(), &mut wrong),
            OmegaStatus::InvalidCheckpoint
        );
        assert!(wrong.is_null());

        omega_dovetailer_free(straight);
        omega_dovetailer_free(resumed);
        omega_machine_free(u);
        omega_machine_free(t);
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// `target/<profile>`, found from this test binary in `target/<profile>/deps`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/omega.h")).unwrap();
    for name in [
        "typedef struct OmegaMachine OmegaMachine;",
        "typedef struct OmegaDovetailer OmegaDovetailer;",
        "OMEGA_STATUS_INVALID_MACHINE = 4",
        "omega_machine_from_json(",
        "omega_exact(",
        "omega_run(",
        "omega_dovetailer_checkpoint(",
        "omega_last_error_message(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = profile_dir().join("libomega_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("main.c");
    std::fs::write(
        &source,
        r#"
#include <stdio.h>
#include <string.h>
#include "omega.h"

int main(void) {
    const char *json = "{\"type\":\"table\",\"format\":1,\"programs\":["
        "{\"bits\":\"0001\"},{\"bits\":\"000001\"},{\"bits\":\"000011\"}]}";
    OmegaMachine *m = NULL;
    if (omega_machine_from_json(json, &m) != OMEGA_STATUS_OK) return 1;
    char *frac = NULL, *bin = NULL;
    if (omega_exact(m, &frac, &bin) != OMEGA_STATUS_OK) return 2;
    printf("%s = %s\n", frac, bin);
    omega_string_free(frac);
    omega_string_free(bin);
    omega_machine_free(m);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3/2^5 = 0.000110\n");
}
