use std::path::Path;
use std::process::{Command, Output};

use owsg::circuits::{CircuitDescription, EnsembleParams};
use owsg::signatures::format::{deserialize_signatures, serialize_signatures};
use serde_json::Value;
use tempfile::TempDir;

fn owsg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owsg"))
        .args(args)
        .current_dir(dir)
        .env_remove("OWSG_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn without_metadata(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("metadata");
    v
}

fn keygen_and_sign(dir: &Path, extra: &[&str], message: &str) {
    let mut args = vec!["keygen", "--sk", "sk.bin", "--pk", "pk.json"];
    args.extend_from_slice(extra);
    let out = owsg(dir, &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = owsg(dir, &["sign", "--sk", "sk.bin", "--message", message, "--sig", "sig.bin"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn noiseless_roundtrip_exits_zero() {
    let dir = TempDir::new().unwrap();
    keygen_and_sign(dir.path(), &["--n", "4", "--t", "6", "--slots", "3", "--seed", "9"], "101");
    let out = owsg(dir.path(), &["verify", "--pk", "pk.json", "--sig", "sig.bin", "--message", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["params"]["k"], 6);
    assert!((v["result"]["accept_prob"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["result"]["per_bit"][2]["per_block"].as_array().unwrap().len(), 6);
}

#[test]
fn tampered_signature_fails_threshold_at_k_equal_t() {
    let dir = TempDir::new().unwrap();
    keygen_and_sign(dir.path(), &["--n", "5", "--t", "4", "--seed", "2"], "1");
    let path = dir.path().join("sig.bin");
    let mut sigs = deserialize_signatures(&std::fs::read(&path).unwrap()).unwrap();
    let p = *sigs[0].circuits[0].params();
    sigs[0].circuits[0] = CircuitDescription::sample_seeded(EnsembleParams { seed: 12345, ..p }).unwrap();
    std::fs::write(&path, serialize_signatures(&sigs)).unwrap();
    let out = owsg(dir.path(), &["verify", "--pk", "pk.json", "--sig", "sig.bin", "--message", "1", "--k", "4"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["result"]["accept"], false);
    // the replaced block accepts with probability |<C|D>|^2, the rest with certainty
    let blocks: Vec<f64> =
        v["result"]["per_bit"][0]["per_block"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(blocks[0] < 0.5);
    assert!(blocks[1..].iter().all(|p| (p - 1.0).abs() < 1e-9));
}

#[test]
fn distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    keygen_and_sign(dir.path(), &["--n", "3", "--t", "2"], "0");
    let reuse = owsg(dir.path(), &["sign", "--sk", "sk.bin", "--message", "0", "--sig", "again.bin"]);
    assert_eq!(reuse.status.code(), Some(5));
    assert!(!dir.path().join("again.bin").exists());

    std::fs::write(dir.path().join("junk.bin"), b"not a key").unwrap();
    let bad_file = owsg(dir.path(), &["sign", "--sk", "junk.bin", "--message", "0", "--sig", "x.bin"]);
    assert_eq!(bad_file.status.code(), Some(3));
    let missing = owsg(dir.path(), &["verify", "--pk", "nope.json", "--sig", "sig.bin", "--message", "0"]);
    assert_eq!(missing.status.code(), Some(3));

    let bad_noise = owsg(dir.path(), &["keygen", "--n", "3", "--t", "2", "--noise-f", "1.5", "--sk", "a", "--pk", "b"]);
    assert_eq!(bad_noise.status.code(), Some(2));
    let bad_flag = owsg(dir.path(), &["keygen", "--n", "3"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let bad_message = owsg(dir.path(), &["verify", "--pk", "pk.json", "--sig", "sig.bin", "--message", "2"]);
    assert_eq!(bad_message.status.code(), Some(2));
}

/// Default verification under white noise at the calibrated fidelity of the
/// proposal, on 6-qubit blocks with t = 200 and k = 11.
#[test]
fn noisy_verification_accepts_at_proposal_fidelity() {
    let c = owsg::analysis::calibrate_c(67, 32, 1e-3).unwrap();
    let f = owsg::noise::eta(20, 20, c).to_string();
    let runs = 100;
    let mut accepted = 0;
    for seed in 0..runs {
        let dir = TempDir::new().unwrap();
        let s = seed.to_string();
        keygen_and_sign(dir.path(), &["--n", "6", "--t", "200", "--noise-f", &f, "--seed", &s], "1");
        let out = owsg(
            dir.path(),
            &["verify", "--pk", "pk.json", "--sig", "sig.bin", "--message", "1", "--k", "11", "--pk-mode", "trajectory", "--seed", &s],
        );
        accepted += (out.status.code() == Some(0)) as usize;
    }
    assert!(accepted * 100 >= 99 * runs as usize, "{accepted}/{runs} accepted");
}

#[test]
fn calc_landau_liu_exceeds_1e34() {
    let out = owsg(Path::new("."), &["calc", "landau-liu", "--n", "10", "--d", "10", "--eps", "0.99", "--delta", "0.01"]);
    assert!(out.status.success());
    assert!(json(&out)["result"]["samples_log10"].as_f64().unwrap() >= 34.0);
}

#[test]
fn calc_pubkey_curve_csv() {
    let out = owsg(Path::new("."), &["calc", "pubkey-curve", "--format", "csv", "--d-max", "25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# format_version=1\n"));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "d,eta,t_required,pubkey_qubits,feasible");
    assert_eq!(body.len(), 26);
    let row: Vec<&str> = body[20].split(',').collect();
    assert_eq!(row[0], "20");
    // oracle: smallest t with (eta - sqrt(10/t)) t >= 11 at eta = 1e-3^(400/2144)
    let eta = 1e-3f64.powf(400.0 / 2144.0);
    let t = (1..).find(|&t: &usize| ((eta - (10.0 / t as f64).sqrt()) * t as f64 + 1e-9).floor() >= 11.0).unwrap();
    assert_eq!(row[2].parse::<usize>().unwrap(), t);
    assert_eq!(row[3].parse::<usize>().unwrap(), 20 * t);
}

#[test]
fn calc_proposal_pubkey_is_4000() {
    let out = owsg(Path::new("."), &["calc", "proposal"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["pubkey_qubits"], 4000);
    let eta = v["result"]["eta"].as_f64().unwrap();
    assert!((eta - 0.28).abs() < 0.01);
}

#[test]
fn brute_force_game_succeeds_at_three_qubits() {
    let out = owsg(Path::new("."), &["owsg-game", "--n", "3", "--adversary", "brute-force", "--trials", "30"]);
    assert!(out.status.success());
    let est = json(&out)["result"]["estimate"].as_f64().unwrap();
    assert!((est - 1.0).abs() < 1e-9, "estimate {est}");
}

#[test]
fn reports_are_deterministic_modulo_metadata() {
    let dir = TempDir::new().unwrap();
    let runs: Vec<Value> = (0..2)
        .map(|_| {
            let out = Command::new(env!("CARGO_BIN_EXE_owsg"))
                .args(["attack-bench", "--attack", "oracle", "--n", "4", "--trials", "5"])
                .env("OWSG_SEED", "77")
                .current_dir(dir.path())
                .output()
                .unwrap();
            assert!(out.status.success());
            without_metadata(json(&out))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0]["seed"], 77);
    let other = owsg(dir.path(), &["attack-bench", "--attack", "oracle", "--n", "4", "--trials", "5", "--seed", "78"]);
    assert_ne!(without_metadata(json(&other)), runs[0]);
}
