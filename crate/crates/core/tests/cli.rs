use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn keyforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyforge")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_response(path: &Path, n_bytes: usize, salt: u8) {
    let bytes: Vec<u8> = (0..n_bytes).map(|i| (i as u8).wrapping_mul(37) ^ salt).collect();
    fs::write(path, bytes).unwrap();
}

#[test]
fn gen_then_rep_reproduces_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let (r, h, k, k2) = (dir.path().join("r"), dir.path().join("h"), dir.path().join("k"), dir.path().join("k2"));
    write_response(&r, 256, 0);
    let out = keyforge(&["gen", "--code", "gc-rm-2048", "--response", p(&r), "--helper", p(&h), "--key", p(&k), "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&h).unwrap().len(), 280);
    assert_eq!(fs::read(&k).unwrap().len(), 16);

    // A few flipped bits are corrected.
    let mut noisy = fs::read(&r).unwrap();
    noisy[0] ^= 0x81;
    noisy[100] ^= 0x10;
    fs::write(&r, noisy).unwrap();
    let out = keyforge(&["rep", "--helper", p(&h), "--response", p(&r), "--key", p(&k2)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&k).unwrap(), fs::read(&k2).unwrap());
}

#[test]
fn gen_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r");
    write_response(&r, 128, 5);
    let mut helpers = Vec::new();
    for (seed, name) in [("9", "a"), ("9", "b"), ("10", "c")] {
        let h = dir.path().join(name);
        let k = dir.path().join(format!("{name}.key"));
        let out = keyforge(&["gen", "--code", "gc-rs-1024", "--response", p(&r), "--helper", p(&h), "--key", p(&k), "--seed", seed]);
        assert_eq!(code(&out), 0);
        helpers.push((fs::read(h).unwrap(), fs::read(k).unwrap()));
    }
    assert_eq!(helpers[0], helpers[1]);
    assert_ne!(helpers[0].0, helpers[2].0);
    assert_eq!(helpers[0].1, helpers[2].1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (r, h, k) = (dir.path().join("r"), dir.path().join("h"), dir.path().join("k"));
    write_response(&r, 256, 3);

    assert_eq!(code(&keyforge(&["gen", "--code", "nope", "--response", p(&r), "--helper", p(&h), "--key", p(&k)])), 1);
    assert_eq!(code(&keyforge(&["frobnicate"])), 1);
    assert_eq!(code(&keyforge(&["simulate", "--code", "gc-rm-2048", "--p", "1.5"])), 1);
    assert_eq!(code(&keyforge(&["gen", "--code", "gc-rm-2048", "--response", "/nonexistent/r", "--helper", p(&h), "--key", p(&k)])), 2);

    let short = dir.path().join("short");
    write_response(&short, 255, 3);
    assert_eq!(code(&keyforge(&["gen", "--code", "gc-rm-2048", "--response", p(&short), "--helper", p(&h), "--key", p(&k)])), 3);

    assert_eq!(code(&keyforge(&["gen", "--code", "gc-rm-2048", "--response", p(&r), "--helper", p(&h), "--key", p(&k), "--seed", "4"])), 0);
    let mut corrupt = fs::read(&h).unwrap();
    corrupt[20] ^= 1;
    let bad = dir.path().join("bad");
    fs::write(&bad, corrupt).unwrap();
    assert_eq!(code(&keyforge(&["rep", "--helper", p(&bad), "--response", p(&r), "--key", p(&k)])), 2);

    // An unrelated response is far outside the decoding radius.
    let other = dir.path().join("other");
    fs::write(&other, (0..256).map(|i| (i * 91 + 17) as u8).collect::<Vec<u8>>()).unwrap();
    let k_out = dir.path().join("k_out");
    assert_eq!(code(&keyforge(&["rep", "--helper", p(&h), "--response", p(&other), "--key", p(&k_out)])), 4);
    assert!(!k_out.exists());
}

#[test]
fn radius_csv() {
    let out = keyforge(&["radius", "--n", "32", "--k-range", "1-3", "--csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,ell_max,tau,half_distance");
    assert_eq!(lines[2], "2,5,23,15");
    assert_eq!(lines.len(), 4);
    assert_eq!(code(&keyforge(&["radius", "--n", "32", "--k-range", "5-2"])), 1);
}

#[test]
fn simulate_csv_is_reproducible() {
    let args = ["simulate", "--code", "gc-rm-2048", "--p", "0.2", "--trials", "300", "--seed", "3", "--csv"];
    let a = keyforge(&args);
    let b = keyforge(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("code,p,trials,seed,gmd,block_errors"));
}

#[test]
fn analyze_reports_stages_and_union_bound() {
    let out = keyforge(&["analyze", "--code", "gc-rm-2048", "--p", "0.14"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stage 1:"));
    assert!(text.contains("stage 2:"));
    assert!(text.contains("union bound 1.49e-9"), "{text}");
}
