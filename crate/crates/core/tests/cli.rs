use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn noisebit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noisebit")).args(args).env_remove("NOISEBIT_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_samples_give_an_empty_file_with_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("empty.bin");
    let r = noisebit(&["rng", "-k", "1", "-n", "0", "--seed", "5", "-o", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(std::fs::read(&out).unwrap().len(), 0);
    let meta: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("empty.bin.json")).unwrap()).unwrap();
    assert_eq!(meta["n"], 0);
    assert_eq!(meta["generators"], 1);
    assert_eq!(meta["bit_order"], "lsb-first");
    assert_eq!(meta["seeds"].as_array().unwrap().len(), 1);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.bin"), dir.path().join("b.bin"));
    for p in [&a, &b] {
        assert_eq!(code(&noisebit(&["rng", "-k", "3", "-n", "20000", "--seed", "9", "-o", s(p)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&a).unwrap().len(), 2500);
    let c = dir.path().join("c.bin");
    noisebit(&["rng", "-k", "3", "-n", "20000", "--seed", "10", "-o", s(&c)]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.bin"), dir.path().join("b.bin"));
    noisebit(&["rng", "-k", "1", "-n", "4096", "--seed", "77", "-o", s(&a)]);
    let r = Command::new(env!("CARGO_BIN_EXE_noisebit"))
        .args(["rng", "-k", "1", "-n", "4096", "-o", s(&b)])
        .env("NOISEBIT_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(code(&r), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn generated_megabit_passes_the_battery() {
    let dir = TempDir::new().unwrap();
    let bits = dir.path().join("bits.bin");
    assert_eq!(code(&noisebit(&["rng", "-k", "4", "-n", "1000000", "--seed", "1", "-o", s(&bits)])), 0);
    let r = noisebit(&["test", "--in", s(&bits)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stdout));
    let report = stdout_json(&r);
    assert_eq!(report["n"], 1_000_000);
    assert_eq!(report["battery"]["pass"], true);
    assert_eq!(report["config"]["args"]["alpha"], 1e-4);
}

#[test]
fn constant_stream_fails_the_battery() {
    let dir = TempDir::new().unwrap();
    let bits = dir.path().join("zeros.bin");
    std::fs::write(&bits, vec![0u8; 10_000]).unwrap();
    let report_path = dir.path().join("report.json");
    let r = noisebit(&["test", "--in", s(&bits), "--report", s(&report_path)]);
    assert_eq!(code(&r), 1);
    let report: Value = serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();
    assert_eq!(report["battery"]["pass"], false);
}

#[test]
fn short_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bits = dir.path().join("short.bin");
    std::fs::write(&bits, [0xA5u8; 12]).unwrap();
    let r = noisebit(&["test", "--in", s(&bits)]);
    assert_eq!(code(&r), 2);
    assert!(!r.stderr.is_empty());
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&noisebit(&["test", "--in", s(&dir.path().join("nope.bin"))])), 3);
    let r = noisebit(&["nbl", "--state", s(&dir.path().join("nope.json")), "-m", "0"]);
    assert_eq!(code(&r), 3);
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(code(&noisebit(&["rng", "-n", "10"])), 2);
    assert_eq!(code(&noisebit(&["frobnicate"])), 2);
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.bin");
    assert_eq!(code(&noisebit(&["rng", "--rho", "1.5", "-n", "10", "-o", s(&out)])), 2);
    assert!(!out.exists());
}

#[test]
fn singleton_membership_is_certain() {
    let dir = TempDir::new().unwrap();
    let state =
        write(&dir, "s.json", r#"{"n": 5, "master_seed": 3, "kind": "explicit", "strings": ["10110"]}"#);
    let r = noisebit(&["nbl", "--state", s(&state), "-m", "10110", "-m", "00000", "-M", "2000"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let report = stdout_json(&r);
    assert_eq!(report["kind"], "explicit");
    let m = &report["measurements"];
    assert_eq!(m[0]["estimate"][0], 1.0);
    assert_eq!(m[0]["decision"], true);
    assert_eq!(m[1]["decision"], false);
}

#[test]
fn full_superposition_step_cost() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "s.json", r#"{"n": 3, "master_seed": 0, "kind": "product", "preset": "full"}"#);
    let report = stdout_json(&noisebit(&["nbl", "--state", s(&state)]));
    assert_eq!(report["ops_per_step_total"], 5);
    assert_eq!(report["extended_precision"], false);
}

#[test]
fn hadamard_state_estimate_within_band() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "s.json", r#"{"n": 4, "master_seed": 21, "kind": "product", "preset": "zero"}"#);
    let gates = write(
        &dir,
        "g.json",
        r#"[{"gate": "H", "bit": 0}, {"gate": "h", "bit": 1}, {"gate": "H", "bit": 2}, {"gate": "H", "bit": 3}]"#,
    );
    let r = noisebit(&["nbl", "--state", s(&state), "--gates", s(&gates), "-m", "0110", "-M", "4096"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let report = stdout_json(&r);
    assert_eq!(report["gate_ops"]["mul"], 16);
    let m = &report["measurements"][0];
    let est = m["estimate"][0].as_f64().unwrap();
    let exact = m["exact"][0].as_f64().unwrap();
    assert!((exact - 0.25).abs() < 1e-12);
    assert!((est - 0.25).abs() <= m["half_width"].as_f64().unwrap(), "{est}");
}

#[test]
fn explicit_matrix_gate() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "s.json", r#"{"n": 2, "master_seed": 1, "kind": "product", "preset": "zero"}"#);
    let x = write(&dir, "g.json", r#"[{"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]], "bit": 1}]"#);
    let report =
        stdout_json(&noisebit(&["nbl", "--state", s(&state), "--gates", s(&x), "-m", "01", "-M", "512"]));
    assert_eq!(report["measurements"][0]["exact"][0], 1.0);
    assert_eq!(report["measurements"][0]["decision"], true);

    let bad = write(&dir, "bad.json", r#"[{"matrix": [[[1,0],[1,0]],[[0,0],[1,0]]], "bit": 0}]"#);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&state), "--gates", s(&bad)])), 2);
}

#[test]
fn malformed_nbl_inputs_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let explicit =
        write(&dir, "e.json", r#"{"n": 2, "master_seed": 1, "kind": "explicit", "strings": ["01"]}"#);
    let product = write(&dir, "p.json", r#"{"n": 2, "master_seed": 1, "kind": "product", "preset": "zero"}"#);
    let gates = write(&dir, "g.json", r#"[{"gate": "X", "bit": 0}]"#);
    let unknown = write(&dir, "u.json", r#"[{"gate": "CNOT", "bit": 0}]"#);
    let out_of_range = write(&dir, "o.json", r#"[{"gate": "X", "bit": 2}]"#);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&explicit), "--gates", s(&gates)])), 2);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&product), "--gates", s(&unknown)])), 2);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&product), "--gates", s(&out_of_range)])), 2);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&product), "-m", "011"])), 2);
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&product), "-m", "0a"])), 2);
    let garbage = write(&dir, "x.json", "{");
    assert_eq!(code(&noisebit(&["nbl", "--state", s(&garbage)])), 2);
}

#[test]
fn bench_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bench.csv");
    let r = noisebit(&["bench", "--max-n", "200", "--steps", "50", "-o", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,product_ops_per_step,gate_ops,bruteforce_eval_ops,bruteforce_gate_ops,wall_time_ns"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    for row in &rows {
        let n: u64 = row[0].parse().unwrap();
        assert_eq!(row[1].parse::<u64>().unwrap(), 2 * n - 1);
        assert_eq!(row[2], "6");
        if n <= 16 {
            assert_eq!(row[3].parse::<u64>().unwrap(), (1 << n) * n - 1);
            assert_eq!(row[4].parse::<u64>().unwrap(), 3 << n);
        } else {
            assert!(row[3].is_empty() && row[4].is_empty());
        }
    }
    let last = rows.last().unwrap();
    assert_eq!((last[0], last[1]), ("200", "399"));
    assert!(dir.path().join("bench.csv.json").exists());

    let r = noisebit(&["bench", "--max-n", "4", "--steps", "10"]);
    assert_eq!(String::from_utf8(r.stdout).unwrap().lines().count(), 5);
}
