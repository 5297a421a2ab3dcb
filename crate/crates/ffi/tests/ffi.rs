use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use keyforge_ffi::*;

fn code(id: &CStr) -> *mut KfCode {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kf_code_new(id.as_ptr(), &mut out) }, KfStatus::Ok);
    out
}

#[test]
fn gen_serialize_parse_rep() {
    let c = code(c"gc-rs-1024");
    assert_eq!(unsafe { (kf_code_n(c), kf_code_k(c)) }, (1024, 131));
    let bits: Vec<bool> = (0..1024).map(|i| (i * 11 + 5) % 7 < 3).collect();
    let mut response = pack_response(&bits);
    let mut helper = ptr::null_mut();
    let mut key = [0u8; 16];
    assert_eq!(
        unsafe { kf_gen(c, response.as_ptr(), response.len(), 3, &mut helper, key.as_mut_ptr()) },
        KfStatus::Ok
    );
    let mut need = 0;
    assert_eq!(unsafe { kf_helper_serialize(helper, ptr::null_mut(), 0, &mut need) }, KfStatus::BufferTooSmall);
    let mut buf = vec![0u8; need];
    assert_eq!(unsafe { kf_helper_serialize(helper, buf.as_mut_ptr(), buf.len(), &mut need) }, KfStatus::Ok);
    let mut parsed = ptr::null_mut();
    assert_eq!(unsafe { kf_helper_parse(buf.as_ptr(), buf.len(), &mut parsed) }, KfStatus::Ok);
    assert_eq!(unsafe { kf_helper_n(parsed) }, 1024);
    response[3] ^= 0x10;
    let mut key2 = [0u8; 16];
    assert_eq!(
        unsafe { kf_rep(c, parsed, response.as_ptr(), response.len(), key2.as_mut_ptr()) },
        KfStatus::Ok
    );
    assert_eq!(key, key2);
    unsafe {
        kf_helper_free(parsed);
        kf_helper_free(helper);
        kf_code_free(c);
    }
}

#[test]
fn status_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kf_code_new(c"nope".as_ptr(), &mut out) }, KfStatus::UnknownCode);
    assert!(out.is_null());
    assert_eq!(unsafe { kf_code_new(ptr::null(), &mut out) }, KfStatus::NullPointer);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { kf_helper_parse(b"PUFX".as_ptr(), 4, &mut h) }, KfStatus::FormatError);

    let rm = code(c"gc-rm-2048");
    let rs = code(c"gc-rs-1024");
    let mut helper = ptr::null_mut();
    let mut key = [0u8; 16];
    let response = [0u8; 128];
    assert_eq!(unsafe { kf_gen(rs, response.as_ptr(), 128, 0, &mut helper, key.as_mut_ptr()) }, KfStatus::Ok);
    let long = vec![0u8; 256];
    assert_eq!(
        unsafe { kf_rep(rm, helper, long.as_ptr(), 256, key.as_mut_ptr()) },
        KfStatus::CodeMismatch
    );
    // heavy noise on every byte
    let noisy: Vec<u8> = (0..128u32).map(|i| (i.wrapping_mul(0x9E37_79B9) >> 13) as u8).collect();
    assert_eq!(
        unsafe { kf_rep(rs, helper, noisy.as_ptr(), 128, key.as_mut_ptr()) },
        KfStatus::DecodeFailure
    );
    let mut x = 0usize;
    assert_eq!(unsafe { kf_power_lmax(4, 5, &mut x) }, KfStatus::InvalidArgument);
    assert_eq!(unsafe { kf_power_radius(64, 4, 5, &mut x) }, KfStatus::Ok);
    assert_eq!(x, 45);
    let mut p = 1.0;
    assert_eq!(unsafe { kf_stage_fail_prob(8, 4, 0.8, 0.8, KfTail::Trinomial, &mut p) }, KfStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(kf_status_message(KfStatus::DecodeFailure)) };
    assert_eq!(msg.to_str().unwrap(), "decoding failed");
    unsafe {
        kf_helper_free(helper);
        kf_code_free(rm);
        kf_code_free(rs);
        kf_code_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/keyforge.h")).unwrap();
    for name in [
        "typedef struct KfCode KfCode",
        "typedef struct KfHelper KfHelper",
        "KF_STATUS_DECODE_FAILURE = 4",
        "kf_code_new",
        "kf_gen",
        "kf_rep",
        "kf_helper_serialize",
        "kf_helper_parse",
        "kf_helper_free",
        "kf_power_radius",
        "kf_stage_fail_prob",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Directory holding the library artifacts next to this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = artifact_dir().join("libkeyforge_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("kf_smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke test failed: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
