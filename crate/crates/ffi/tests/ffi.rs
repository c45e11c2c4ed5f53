use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cluster_teleport_ffi::*;

fn channel(alpha: f64, beta: f64, gamma: f64, eta: f64) -> *mut CtChannel {
    let mut out = ptr::null_mut();
    let code = unsafe { ct_channel_new(alpha, 0.0, beta, 0.0, gamma, 0.0, eta, 0.0, &mut out) };
    assert_eq!(code, CtError::Ok);
    out
}

fn input(a: f64, b: f64) -> *mut CtInput {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ct_input_new(a, 0.0, b, 0.0, &mut out) }, CtError::Ok);
    out
}

fn last_error() -> String {
    let p = ct_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn uniform_channel_round_trip() {
    let ch = channel(0.5, 0.5, 0.5, 0.5);
    let zeta = input(0.6, 0.8);
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { ct_proposed_teleport(zeta, ch, 7, &mut res) }, CtError::Ok);
    let mut status = CtStatus::FailInconclusive;
    assert_eq!(unsafe { ct_result_status(res, &mut status) }, CtError::Ok);
    assert_eq!(status, CtStatus::Success);
    let mut f = 0.0;
    assert_eq!(unsafe { ct_result_target_fidelity(res, &mut f) }, CtError::Ok);
    assert!((f - 1.0).abs() < 1e-9);
    assert_eq!(unsafe { ct_result_sender_fidelity(res, &mut f) }, CtError::NoValue);

    let json = unsafe { ct_result_transcript_json(res) };
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { ct_string_free(json) };
    let events: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(events[0]["event"], "measured");

    unsafe {
        ct_result_free(res);
        ct_input_free(zeta);
        ct_channel_free(ch);
    }
}

#[test]
fn recovered_input_feeds_the_next_attempt() {
    let ch = channel(0.1, 0.2, 0.6, 0.59f64.sqrt());
    let zeta = input(0.8, 0.6);
    let mut recovered = ptr::null_mut();
    for seed in 0..100 {
        let mut res = ptr::null_mut();
        assert_eq!(unsafe { ct_proposed_teleport(zeta, ch, seed, &mut res) }, CtError::Ok);
        let code = unsafe { ct_result_recovered_input(res, &mut recovered) };
        unsafe { ct_result_free(res) };
        if code == CtError::Ok {
            break;
        }
        assert_eq!(code, CtError::NoValue);
    }
    assert!(!recovered.is_null(), "no failure in 100 seeds");
    let (mut ar, mut ai, mut br, mut bi) = (0.0, 0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { ct_input_amplitudes(recovered, &mut ar, &mut ai, &mut br, &mut bi) },
        CtError::Ok
    );
    // Same state up to a global phase.
    let overlap = (0.8 * ar + 0.6 * br).hypot(0.8 * ai + 0.6 * bi);
    assert!((overlap - 1.0).abs() < 1e-9);
    unsafe {
        ct_input_free(recovered);
        ct_input_free(zeta);
        ct_channel_free(ch);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ct_channel_new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, &mut out) },
        CtError::InvalidArgument
    );
    assert!(last_error().contains("not normalized"));
    assert!(out.is_null());

    let unordered = channel(0.5, 0.4, 0.5f64.sqrt(), 0.3);
    let zeta = input(1.0, 0.0);
    let mut res = ptr::null_mut();
    assert_eq!(
        unsafe { ct_proposed_teleport(zeta, unordered, 0, &mut res) },
        CtError::AssumptionViolated
    );
    assert_eq!(
        unsafe { ct_proposed_teleport(ptr::null(), unordered, 0, &mut res) },
        CtError::NullPointer
    );
    let mut p = 0.0;
    assert_eq!(unsafe { ct_success_probability(unordered, &mut p) }, CtError::AssumptionViolated);

    let ch = channel(0.3, 0.4, 0.5f64.sqrt(), 0.5);
    assert_eq!(unsafe { ct_ramirez_teleport(zeta, ch, 1.0, 0, &mut res) }, CtError::PovmNotPsd);
    assert!(last_error().starts_with("Λ₃ not positive semidefinite"));
    assert_eq!(unsafe { ct_ramirez_teleport(zeta, ch, f64::NAN, 0, &mut res) }, CtError::Ok);
    unsafe {
        ct_result_free(res);
        ct_input_free(zeta);
        ct_channel_free(ch);
        ct_channel_free(unordered);
    }
}

#[test]
fn analysis_entry_points() {
    let mut v = 0.0;
    assert_eq!(unsafe { ct_geometric_success(0.1, 2, &mut v) }, CtError::Ok);
    assert!((v - 0.19).abs() < 1e-15);
    assert_eq!(unsafe { ct_geometric_success(0.1, 0, &mut v) }, CtError::InvalidArgument);
    assert_eq!(unsafe { ct_geometric_success(0.1, 2, ptr::null_mut()) }, CtError::NullPointer);

    let ch = channel(0.5, 0.5, 0.5, 0.5);
    let zeta = input(0.6, 0.8);
    let json = unsafe { ct_monte_carlo_repeat_json(zeta, ch, 100, 3, 1) };
    assert!(!json.is_null());
    let stats: serde_json::Value =
        serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(stats["successes"], 100);
    assert_eq!(stats["p_hat"], 1.0);
    unsafe { ct_string_free(json) };
    assert!(unsafe { ct_monte_carlo_repeat_json(zeta, ch, 0, 3, 1) }.is_null());
    unsafe {
        ct_input_free(zeta);
        ct_channel_free(ch);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        ct_channel_free(ptr::null_mut());
        ct_input_free(ptr::null_mut());
        ct_result_free(ptr::null_mut());
        ct_string_free(ptr::null_mut());
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(crate_dir().join("include/cluster_teleport.h")).unwrap();
    for name in [
        "typedef struct CtChannel CtChannel;",
        "typedef struct CtInput CtInput;",
        "typedef struct CtResult CtResult;",
        "CT_ERROR_POVM_NOT_PSD = 4",
        "ct_proposed_teleport(",
        "ct_ramirez_teleport(",
        "ct_result_transcript_json(",
        "ct_monte_carlo_repeat_json(",
        "ct_last_error_message(",
        "ct_string_free(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/<test binary> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libcluster_teleport_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C toolchain or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
