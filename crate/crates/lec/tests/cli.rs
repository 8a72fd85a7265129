//! The `mcid-lec` binary end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mcid_lec::bench;
use mcid_testkit::{balance, fixtures, ripple_adder};
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcid-lec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_reports_trace_and_respects_arrivals() {
    let dir = TempDir::new().unwrap();
    let imp = put(&dir, "late_input.bench", &bench::write(&fixtures::late_input()));
    let golden = put(&dir, "golden.bench", &bench::write(&fixtures::late_input_golden()));
    let out = bin(&["verify", s(&imp), s(&golden)]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains(
        "CYCLE 0: a=0 b=1 c=1 d=1\nCYCLE 1: a=0 b=1 c=1 d=0\nGOLDEN: a=0 b=1 c=1 d=0\nOUTPUT y: impl=1 golden=0\n"
    ));
    assert!(text.contains("verdict: INEQUIVALENT at output y"));

    let arrivals = put(&dir, "arrivals.txt", "d = 1\n");
    let trace = dir.path().join("trace.txt");
    let cnf = dir.path().join("miter.cnf");
    let out = bin(&[
        "verify",
        s(&imp),
        s(&golden),
        "--arrivals",
        s(&arrivals),
        "--trace",
        s(&trace),
        "--cnf",
        s(&cnf),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: EQUIVALENT"));
    assert!(!trace.exists());
    // The aligned halves hash together: one empty clause.
    let vars: String = ["a@t-3", "b@t-3", "c@t-3", "d@t-3"]
        .iter()
        .enumerate()
        .map(|(i, n)| format!("c var {} = {}\n", i + 1, n))
        .collect();
    assert_eq!(fs::read_to_string(&cnf).unwrap(), format!("{vars}p cnf 4 1\n0\n"));
}

#[test]
fn trace_file_and_tsv_report() {
    let dir = TempDir::new().unwrap();
    let imp = put(&dir, "late_input.bench", &bench::write(&fixtures::late_input()));
    let golden = put(&dir, "golden.bench", &bench::write(&fixtures::late_input_golden()));
    let trace = dir.path().join("trace.txt");
    let report = dir.path().join("report.tsv");
    let out = bin(&[
        "verify",
        s(&imp),
        s(&golden),
        "--trace",
        s(&trace),
        "--tsv",
        "--report",
        s(&report),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "");
    assert!(fs::read_to_string(&trace).unwrap().starts_with("CYCLE 0: a=0"));
    let tsv = fs::read_to_string(&report).unwrap();
    let stages: Vec<&str> = tsv.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(stages, ["fanout", "path-balance", "mcid", "itcl", "miter", "solve"]);
    assert!(tsv.lines().all(|l| l.split('\t').count() == 4 && l.ends_with("\t-")));
    assert!(tsv.contains("solve\tINEQUIVALENT\t"));
}

#[test]
fn check_structure_rejects_missing_splitter() {
    let dir = TempDir::new().unwrap();
    let good = put(&dir, "adder.bench", &bench::write(&balance(&ripple_adder(3))));
    let out = bin(&["check-structure", s(&good)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let faulty = dir.path().join("faulty.bench");
    let out = bin(&[
        "inject-fault",
        s(&good),
        "--kind",
        "remove-splitter",
        "--seed",
        "7",
        "--output",
        s(&faulty),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let sidecar = fs::read_to_string(dir.path().join("faulty.bench.fault")).unwrap();
    assert!(sidecar.starts_with("FAULT RemoveSplitter "));
    assert_eq!(stdout(&out), sidecar);

    let out = bin(&["check-structure", s(&faulty)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("VIOLATION FanoutExceeded"));

    // The verify flow stops at the fanout stage.
    let golden = put(&dir, "golden.bench", &bench::write(&ripple_adder(3)));
    let out = bin(&["verify", s(&faulty), s(&golden)]);
    assert_eq!(code(&out), 3);
    assert!(!stdout(&out).contains("solve"));
}

#[test]
fn removed_dff_gives_trace() {
    let dir = TempDir::new().unwrap();
    let golden_n = ripple_adder(2);
    let imp = put(&dir, "adder.bench", &bench::write(&balance(&golden_n)));
    let golden = put(&dir, "golden.bench", &bench::write(&golden_n));
    let out = bin(&["verify", s(&imp), s(&golden)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("duplicated gates: N/A"));

    let faulty = dir.path().join("faulty.bench");
    let out = bin(&["inject-fault", s(&imp), "--kind", "remove-dff", "--seed", "3", "--output", s(&faulty)]);
    assert_eq!(code(&out), 0);
    let out = bin(&["verify", s(&faulty), s(&golden)]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("path-balance  WARN"));
    assert!(text.contains("CYCLE 1:"));
}

#[test]
fn build_mcid_dump_reparses() {
    let dir = TempDir::new().unwrap();
    let imp = put(&dir, "late_input.bench", &bench::write(&fixtures::late_input()));
    let arrivals = put(&dir, "arr.txt", "d = 1\n");
    let out = bin(&["build-mcid", s(&imp), "--arrivals", s(&arrivals)]);
    assert_eq!(code(&out), 0);
    let dump = stdout(&out);
    let m = bench::parse(&dump, "m").unwrap();
    assert!(m.input_names().any(|n| n == "d@t-3"));
    assert!(m.gate_by_name("d$itcl1@t-2").is_some());
    assert_eq!(m.output_names().collect::<Vec<_>>(), ["y@t0"]);

    let path = dir.path().join("m.bench");
    let out = bin(&["build-mcid", s(&imp), "--mcid-dump", s(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().next(), Some("# late_input: 5 gates"));
    assert!(stdout(&out).starts_with("mcid"));
}

#[test]
fn simulate_prints_outputs_per_cycle() {
    let dir = TempDir::new().unwrap();
    let n = put(&dir, "dff.bench", "INPUT(a)\nOUTPUT(q)\nq = DFF(a)\n");
    let wave = put(&dir, "wave.txt", "a=1\n\na=0\n\na=1\n");
    let out = bin(&["simulate", s(&n), "--wave", s(&wave)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "CYCLE 0: q=0\nCYCLE 1: q=1\nCYCLE 2: q=0\nCYCLE 3: q=1\n");
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.bench", "INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n");
    let out = bin(&["check-structure", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3, column 5: unknown gate kind `FOO`"));

    let good = put(&dir, "good.bench", "INPUT(a)\nOUTPUT(y)\ny = BUF(a)\n");
    let out = bin(&["check-structure", s(&good), "--profile", "ttl"]);
    assert_eq!(code(&out), 2);
    let out = bin(&["check-structure", s(&dir.path().join("missing.bench"))]);
    assert_eq!(code(&out), 2);
    let out = bin(&["verify", s(&good)]);
    assert_eq!(code(&out), 2);
    let out = bin(&["inject-fault", s(&good), "--kind", "remove-dff", "--output", s(&dir.path().join("o"))]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no gate is eligible"), "{}", stderr(&out));
}

#[test]
fn profile_file_and_conflict_limit() {
    let dir = TempDir::new().unwrap();
    let profile = put(
        &dir,
        "comb.profile",
        "name = comb\ndefault_fanout_limit = 8\nsplitter_fanout_limit = 8\nnon_clocked_kinds = AND2, OR2, XOR2, NAND2, NOR2, XNOR2, INV, BUF, SPLIT\nrequires_path_balancing = false\nrequires_fanout_check = false\n",
    );
    // Same function, different structure: the search has to work.
    let golden = put(&dir, "g.bench", "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR2(a, b)\n");
    let imp = put(&dir, "i.bench", "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nna = INV(a)\ny = XNOR2(na, b)\n");
    let out = bin(&["verify", s(&imp), s(&golden), "--profile", s(&profile)]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let out = bin(&["verify", s(&imp), s(&golden), "--profile", s(&profile), "--max-conflicts", "0"]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("verdict: UNKNOWN"));
}
