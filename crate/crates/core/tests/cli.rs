use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauli-forge")).args(args).output().expect("spawn binary")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn cx_lines(text: &str) -> usize {
    text.lines().filter(|l| l.starts_with("CX ")).count()
}

#[test]
fn synth_single_zz() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "zz.txt", "ZZ 0.5\n");
    let out = dir.path().join("out.txt");
    let metrics = dir.path().join("m.json");
    let o = run(&[
        "synth", "--mode", "count", "--angles", "-i", &input, "-o", out.to_str().unwrap(),
        "--metrics", metrics.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(cx_lines(&text), 1);
    assert!(text.lines().any(|l| l.starts_with("RZ 1 0.5")), "{text}");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(m["cnot_count"], 1);
}

#[test]
fn synth_ordered_depth_verifies() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "seq.txt", "ZZI\nXXI\nIZZ\nYIY\n");
    let out = dir.path().join("net.txt");
    let o = run(&["synth", "--mode", "depth", "--ordered", "-i", &input, "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["verify", "--network", out.to_str().unwrap(), "--paulis", &input, "--ordered"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let empty = write(dir.path(), "empty.txt", "QUBITS 2\n");
    let trivial = write(dir.path(), "trivial.txt", "ZI\nIX\n");
    let hard = write(dir.path(), "hard.txt", "ZZ\n");
    let o = run(&["verify", "--network", &empty, "--paulis", &trivial]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--network", &empty, "--paulis", &hard]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "zz.txt", "ZZ\n");
    let out = dir.path().join("o.txt");
    let o = run(&["synth", "--mode", "walrus", "-i", &input, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "ZQ\n");
    let o = run(&["synth", "--mode", "count", "-i", &bad, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn resynth_reports_metrics() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "c.txt", "QUBITS 3\nCCX 0 1 2\nH 0\nT 0\nCX 0 1\n");
    let out = dir.path().join("r.txt");
    let o = run(&["resynth", "--mode", "count", "-i", &input, "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["before"]["cnot_count"], 7);
    assert!(v["after"]["cnot_count"].as_u64().is_some());
    assert!(fs::read_to_string(&out).unwrap().starts_with("QUBITS 3"));
}

#[test]
fn bench_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("b{k}.csv"));
        let json = dir.path().join(format!("b{k}.json"));
        let gains = dir.path().join(format!("g{k}.csv"));
        let o = run(&[
            "bench", "--random", "6,30,9", "--instances", "2", "--methods",
            "naive,rcount,rdepth,rcount-ordered,rdepth-ordered", "-o", csv.to_str().unwrap(), "--json",
            json.to_str().unwrap(), "--gains", gains.to_str().unwrap(), "--no-timing",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((fs::read(&csv).unwrap(), fs::read(&json).unwrap(), fs::read(&gains).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("instance,n,m,method,cnot_count,cnot_depth,seconds"));
    assert_eq!(csv.lines().count(), 1 + 2 * 5);
}

#[test]
fn bench_reads_directory() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.txt", "ZZZ 0.1\nXXI 0.2\n");
    write(dir.path(), "b.txt", "ZIZ\n");
    let csv = dir.path().join("out").with_extension("csv");
    let sub = dir.path().to_str().unwrap().to_string();
    let o = run(&["bench", "--dir", &sub, "--methods", "naive,rcount", "-o", csv.to_str().unwrap(), "--no-timing"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains("a,3,2,naive,"), "{text}");
    assert!(text.contains("b,3,1,rcount,"), "{text}");
}
