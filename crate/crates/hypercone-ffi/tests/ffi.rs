use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hypercone_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = hc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn norm_of_minimum_under_uniform_weights() {
    unsafe {
        let mut cone = ptr::null_mut();
        assert_eq!(hc_cone_uniform(3, &mut cone), HcStatus::Ok);
        assert_eq!(hc_cone_dim(cone), 3);
        let mut f = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c("[3, 1, 2]").as_ptr(), &mut f), HcStatus::Ok);
        assert_eq!(hc_vec_len(f), 3);
        let (mut value, mut exact) = (0.0, 0);
        assert_eq!(hc_lp_norm(cone, f, c("-inf").as_ptr(), &mut value, &mut exact), HcStatus::Ok);
        assert_eq!((value, exact), (1.0, 1));
        assert_eq!(hc_lp_norm(cone, f, c("-1").as_ptr(), &mut value, ptr::null_mut()), HcStatus::Ok);
        assert!((value - 18.0 / 11.0).abs() < 1e-12);
        hc_vec_free(f);
        hc_cone_free(cone);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut cone = ptr::null_mut();
        let (num, den) = ([1i64, 1], [2i64, 4]);
        assert_eq!(hc_cone_new(num.as_ptr(), den.as_ptr(), 2, &mut cone), HcStatus::Ok);
        let mut f = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c("[1, \"inf\"]").as_ptr(), &mut f), HcStatus::Ok);
        let mut value = 0.0;
        assert_eq!(hc_lp_norm(cone, f, c("0+").as_ptr(), &mut value, ptr::null_mut()), HcStatus::NotProbability);
        assert!(last_error().contains("sum"));

        let mut g = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c("[1, 2, 3]").as_ptr(), &mut g), HcStatus::Ok);
        assert_eq!(hc_lp_norm(cone, g, c("1/2").as_ptr(), &mut value, ptr::null_mut()), HcStatus::Dimension);
        assert_eq!(hc_lp_norm(cone, f, c("3").as_ptr(), &mut value, ptr::null_mut()), HcStatus::InvalidInput);
        assert_eq!(hc_lp_norm(ptr::null(), f, c("1").as_ptr(), &mut value, ptr::null_mut()), HcStatus::NullPointer);

        let mut bad = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c("[-1]").as_ptr(), &mut bad), HcStatus::InvalidInput);
        assert!(bad.is_null());
        let zero = [0i64];
        assert_eq!(hc_cone_new(zero.as_ptr(), zero.as_ptr(), 1, &mut cone), HcStatus::InvalidInput);

        hc_vec_free(f);
        hc_vec_free(g);
        hc_cone_free(cone);
        hc_cone_free(ptr::null_mut());
        hc_string_free(ptr::null_mut());
    }
}

#[test]
fn vector_round_trip() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c("[\"1/2\", \"inf\", 0]").as_ptr(), &mut v), HcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(hc_vec_to_json(v, &mut out), HcStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        hc_string_free(out);
        let mut w = ptr::null_mut();
        assert_eq!(hc_vec_from_json(c(&text).as_ptr(), &mut w), HcStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(hc_vec_to_json(w, &mut again), HcStatus::Ok);
        assert_eq!(CStr::from_ptr(again).to_str().unwrap(), text);
        hc_string_free(again);
        hc_vec_free(v);
        hc_vec_free(w);
    }
}

#[test]
fn poset_cut_count() {
    unsafe {
        let mut p = ptr::null_mut();
        let json = c(r#"{"elements": ["a", "b", "c", "d"], "leq": [[0, 2], [1, 2], [0, 3], [1, 3]]}"#);
        assert_eq!(hc_poset_from_json(json.as_ptr(), &mut p), HcStatus::Ok);
        assert_eq!(hc_poset_len(p), 4);
        let mut cuts = 0;
        assert_eq!(hc_poset_dm_size(p, &mut cuts), HcStatus::Ok);
        // Bottom, a, b, {a, b}, c, d and the top.
        assert_eq!(cuts, 7);
        hc_poset_free(p);

        let cyclic = c(r#"{"elements": ["a", "b"], "leq": [[0, 1], [1, 0]]}"#);
        assert_ne!(hc_poset_from_json(cyclic.as_ptr(), &mut p), HcStatus::Ok);
    }
}

#[test]
fn command_reports_and_exit_statuses() {
    let run = |args: &[&str]| -> (HcStatus, Option<serde_json::Value>) {
        let owned: Vec<CString> = args.iter().map(|a| c(a)).collect();
        let ptrs: Vec<_> = owned.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        let status = unsafe { hc_command(ptrs.as_ptr(), ptrs.len(), &mut out) };
        let json = (!out.is_null()).then(|| {
            let v = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
            unsafe { hc_string_free(out) };
            v
        });
        (status, json)
    };
    let (status, json) = run(&["norm", "--p", "-inf", "--f", "[3,1,2]"]);
    assert_eq!(status, HcStatus::Ok);
    let json = json.unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["result"]["value"], 1.0);

    let (status, json) = run(&["check-mcp", "--catalog", "c", "--lam", "0", "--eta", "1"]);
    assert_eq!(status, HcStatus::Counterexample);
    assert_eq!(json.unwrap()["result"]["answer"]["witness"]["description"], "(n, 0)");

    let (status, json) = run(&["no-such-command"]);
    assert_eq!(status, HcStatus::InvalidInput);
    assert!(json.is_none());
}

#[test]
fn suite_entry_point() {
    assert_eq!(hc_suite_len(), 15);
    let (mut passed, mut detail) = (0, ptr::null_mut());
    assert_eq!(unsafe { hc_suite_run(15, 7, &mut passed, &mut detail) }, HcStatus::Ok);
    assert_eq!(passed, 1);
    assert!(!detail.is_null());
    unsafe { hc_string_free(detail) };
    assert_eq!(unsafe { hc_suite_run(16, 7, &mut passed, ptr::null_mut()) }, HcStatus::InvalidInput);
}

/// Compile `tests/smoke.c` against the generated header and the static library.
#[test]
fn c_program_links_against_header() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/hypercone.h")).expect("header generated by the build script");
    for name in ["hc_cone_new", "hc_lp_norm", "hc_command", "hc_suite_run", "HC_STATUS_COUNTEREXAMPLE"] {
        assert!(header.contains(name), "{name} missing from the header");
    }
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libhypercone_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link check: no C compiler or static library");
        return;
    }
    let exe = std::env::temp_dir().join(format!("hypercone-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "C smoke test exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
