use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn polysig(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polysig"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const SMALL: &str = r#"{"family":"matrix","ring":{"q":6,"n":16},"k":4,"l":2,"t":2,"degree_mode":{"mode":"up-to","bound":2},"numeric_reps":8}"#;

#[test]
fn matrix_keygen_sign_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("params.json"), SMALL).unwrap();
    fs::write(d.join("msg"), b"hello").unwrap();
    fs::write(d.join("other"), b"hullo").unwrap();

    let o = polysig(d, &["keygen", "--scheme", "matrix", "--params", "params.json", "--seed", "0a0b", "--out", "k"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&polysig(d, &["sign", "--key", "k.key", "--message", "msg", "--out", "s.json"])), 0);

    let ok = polysig(d, &["verify", "--key", "k.pub", "--message", "msg", "--signature", "s.json"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "accept");
    let bad = polysig(d, &["verify", "--key", "k.pub", "--message", "other", "--signature", "s.json"]);
    assert_eq!(code(&bad), 1);
    let numeric = polysig(
        d,
        &["verify", "--key", "k.pub", "--message", "msg", "--signature", "s.json", "--numeric", "--reps", "8", "--seed", "01"],
    );
    assert_eq!(code(&numeric), 0);
    let missing = polysig(d, &["verify", "--key", "k.pub", "--message", "msg", "--signature", "none.json"]);
    assert_eq!(code(&missing), 2);
    // a key used as a signature is an error, not a rejection
    let wrong = polysig(d, &["verify", "--key", "k.pub", "--message", "msg", "--signature", "k.pub"]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("params.json"), SMALL).unwrap();
    fs::write(d.join("msg"), b"same").unwrap();
    for out in ["a", "b"] {
        polysig(d, &["keygen", "--scheme", "matrix", "--params", "params.json", "--seed", "ff", "--out", out]);
        let sig = format!("{out}.sig");
        polysig(d, &["sign", "--key", &format!("{out}.key"), "--message", "msg", "--out", &sig]);
    }
    assert_eq!(fs::read(d.join("a.pub")).unwrap(), fs::read(d.join("b.pub")).unwrap());
    assert_eq!(fs::read(d.join("a.sig")).unwrap(), fs::read(d.join("b.sig")).unwrap());
}

#[test]
fn scrap_and_pke_flows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("msg"), b"scrap message").unwrap();
    assert_eq!(code(&polysig(d, &["keygen", "--scheme", "scrap", "--params", "paper-scrap", "--seed", "01", "--out", "s"])), 0);
    let no_pub = polysig(d, &["sign", "--key", "s.key", "--message", "msg", "--out", "sig"]);
    assert_eq!(code(&no_pub), 2);
    assert_eq!(code(&polysig(d, &["sign", "--key", "s.key", "--public", "s.pub", "--message", "msg", "--out", "sig"])), 0);
    assert_eq!(code(&polysig(d, &["verify", "--key", "s.pub", "--message", "msg", "--signature", "sig"])), 0);

    fs::write(d.join("params.json"), SMALL).unwrap();
    let kg = polysig(d, &["keygen", "--scheme", "pke", "--params", "params.json", "--seed", "02", "--out", "p"]);
    assert!(String::from_utf8_lossy(&kg.stderr).contains("warning"));
    assert_eq!(code(&polysig(d, &["encrypt", "--key", "p.pub", "--message", "msg", "--out", "c.json"])), 0);
    let dec = polysig(d, &["decrypt", "--key", "p.key", "--ciphertext", "c.json"]);
    assert_eq!(code(&dec), 0);
    assert_eq!(dec.stdout, b"scrap message");
}

#[test]
fn attacks_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("params.json"), SMALL).unwrap();
    polysig(d, &["keygen", "--scheme", "matrix", "--params", "params.json", "--seed", "03", "--out", "k"]);
    let lin = polysig(d, &["attack", "linearize", "--key", "k.pub", "--degree", "15"]);
    assert_eq!(code(&lin), 1);
    assert!(String::from_utf8_lossy(&lin.stdout).contains("refused"));

    let est = polysig(d, &["estimate", "--params", "paper-matrix", "--json"]);
    assert_eq!(code(&est), 0);
    let report: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    assert_eq!(report["lines"][0]["exact"], "4367914309753280");

    let bench = polysig(d, &["bench", "--scheme", "matrix", "--params", "params.json", "--trials", "2", "--json"]);
    assert_eq!(code(&bench), 0);
    let b: serde_json::Value = serde_json::from_slice(&bench.stdout).unwrap();
    assert_eq!(b["seconds"]["verify"]["samples"], 2);
}
