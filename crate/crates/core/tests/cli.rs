use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;

const ENV_VARS: [&str; 3] = ["TRAPRED_SCAN_WARN", "TRAPRED_ENUM_LIMIT", "TRAPRED_ORACLE_BUDGET"];

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture(&format!("golden/{name}"))).unwrap()
}

fn cmd(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_trapred"));
    c.args(args);
    for v in ENV_VARS {
        c.env_remove(v);
    }
    c
}

fn run(args: &[&str]) -> Output {
    cmd(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = cmd(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn table1_matches_golden() {
    let start = Instant::now();
    let o = run(&["table1"]);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("table1.txt"));
    assert_eq!(stdout(&run(&["table1", "--format", "csv"])), golden("table1.csv"));
}

#[test]
fn table1_json_rows() {
    let v = json(&run(&["--format", "json", "table1"]));
    let rows: Vec<(u64, u64, u64, u64, u64)> = v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let f = |k: &str| r[k].as_u64().unwrap();
            (f("a"), f("b"), f("trivial_lower_bound"), f("theorem1"), f("lll"))
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            (6, 5, 1320, 1320, 1394),
            (8, 5, 1320, 1320, 1413),
            (12, 5, 1320, 1320, 1448),
            (14, 5, 1320, 1320, 1464),
        ]
    );
    assert_eq!(v["mode"], "certified-float");
}

#[test]
fn bound_json_matches_golden() {
    let o = run(&["--format", "json", "bound", "--family", "theorem1", "-n", "3", "-k", "1", "-a", "2", "-b", "1", "-d", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("bound_theorem1_rep3.json"));
}

#[test]
fn bound_examples() {
    let v = json(&run(&["--format", "json", "bound", "--family", "theorem1", "-n", "2640", "-k", "1320", "-a", "6", "-b", "5"]));
    assert_eq!(v["result"]["value"], 1320);
    assert_eq!(v["result"]["optimizer_t"], 1320);
    let v = json(&run(&["--format", "json", "bound", "--family", "lll", "-n", "2640", "-k", "1320", "-a", "12", "-b", "5"]));
    assert_eq!(v["result"]["value"], 1448);
    assert_eq!(v["result"]["lll_m"], 129);
    let v = json(&run(&["--format", "json", "bound", "--family", "gv", "-n", "7", "-k", "4", "-d", "3"]));
    assert_eq!(v["result"]["holds"], false);
    let v = json(&run(&["--format", "json", "bound", "--family", "corollary2", "-n", "2640", "-k", "1320", "-a", "14", "-b", "5"]));
    assert_eq!(v["result"]["holds"], true);
    assert!(v["result"]["lhs"]["upper_bound"].as_f64().unwrap() < 1.0);
}

#[test]
fn exact_mode_over_threshold_is_a_budget_error() {
    let o = run(&["bound", "--family", "theorem1", "-n", "2640", "-k", "1320", "-a", "6", "-b", "5", "--mode", "exact"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn exit_code_matrix() {
    let id = fixture("fixtures/identity3.txt");
    let ham = fixture("fixtures/hamming.alist");
    let bad = fixture("fixtures/truncated.alist");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["scan", "--in", &id, "-a", "1", "-b", "2"], 1),
        (vec!["scan", "--in", &id, "-a", "1", "-b", "1"], 0),
        (vec!["scan", "--in", &id, "-a", "3", "-b", "0"], 0),
        (vec!["scan", "--in", &ham, "-a", "3", "-b", "1"], 1),
        (vec!["scan", "--in", &ham, "-a", "2", "-b", "1"], 0),
        (vec!["scan", "--in", &ham, "-a", "2", "-b", "0"], 0),
        (vec!["scan", "--in", &bad, "-a", "1", "-b", "1"], 2),
        (vec!["scan", "--in", "/nonexistent/h.alist", "-a", "1", "-b", "1"], 2),
        (vec!["scan", "--in", &id, "-a", "0", "-b", "1"], 2),
        (vec!["scan", "--in", &id, "-a", "9", "-b", "2", "--cap", "1"], 1),
        (vec!["bound", "--family", "theorem1", "-n", "3", "-k", "1", "-a", "3", "-b", "1", "-d", "3"], 2),
        (vec!["bound", "--family", "lll", "-n", "10", "-k", "5", "-a", "2", "-b", "0"], 2),
        (vec!["bound", "--family", "gv", "-n", "7", "-k", "4"], 2),
        (vec!["bound", "--family", "nonsense", "-n", "7", "-k", "4"], 2),
        (vec!["construct", "--code", "margulis-params", "-a", "1", "-b", "1", "--seed", "1"], 2),
        (vec!["construct", "--code", "no-such-code", "-a", "1", "-b", "1"], 2),
        (vec!["construct", "--code", "universe-4", "-a", "1", "-b", "1", "--seed", "1"], 2),
        (vec!["oracle", "--code", "golay-23-12", "-a", "1", "-b", "1"], 2),
        (vec!["oracle", "--code", "repetition-3", "-a", "2", "-b", "1"], 0),
        (vec!["frobnicate"], 2),
        (vec!["--help"], 0),
        (vec!["catalog"], 0),
    ];
    for (args, want) in cases {
        let o = run(&args);
        assert_eq!(code(&o), want, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn scan_reports() {
    let v = json(&run(&["--format", "json", "scan", "--in", &fixture("fixtures/identity3.txt"), "-a", "1", "-b", "2"]));
    assert_eq!(v["result"]["violations"].as_array().unwrap().len(), 3);
    let v = json(&run(&["--format", "json", "scan", "--in", &fixture("fixtures/hamming.alist"), "-a", "3", "-b", "1"]));
    let vs = v["result"]["violations"].as_array().unwrap();
    assert_eq!(vs.len(), 7);
    for x in vs {
        assert_eq!(x["subset"].as_array().unwrap().len(), 3);
        assert_eq!(x["odd_count"], 0);
    }
    let csv = stdout(&run(&["--format", "csv", "scan", "--in", &fixture("fixtures/identity3.txt"), "-a", "1", "-b", "2"]));
    assert_eq!(csv, "subset,size,odd_rows\n0,1,1\n1,1,1\n2,1,1\n");
}

#[test]
fn scan_reads_stdin_and_both_formats() {
    let dense = "0001111\n0110011\n1010101\n";
    let a = run_stdin(&["--format", "json", "scan", "--in", "-", "-a", "3", "-b", "1"], dense.as_bytes());
    let alist = std::fs::read(fixture("fixtures/hamming.alist")).unwrap();
    let b = run_stdin(&["--format", "json", "scan", "--in", "-", "-a", "3", "-b", "1"], &alist);
    assert_eq!(code(&a), 1);
    assert_eq!(json(&a)["result"], json(&b)["result"]);
}

#[test]
fn construct_pipes_into_scan() {
    let o = run(&["construct", "--code", "hamming-7-4", "-a", "1", "-b", "1", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("seed 7"));
    let s = run_stdin(&["scan", "--in", "-", "-a", "1", "-b", "1"], &o.stdout);
    assert_eq!(code(&s), 0, "{}", stdout(&s));
    let again = run(&["construct", "--code", "hamming-7-4", "-a", "1", "-b", "1", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);

    let lv = run(&["construct", "--code", "ext-golay-24-12", "-a", "2", "-b", "1", "--seed", "3", "--las-vegas"]);
    assert_eq!(code(&lv), 0, "{}", stderr(&lv));
    assert_eq!(code(&run_stdin(&["scan", "--in", "-", "-a", "2", "-b", "1"], &lv.stdout)), 0);
}

#[test]
fn construct_from_matrix_file() {
    let o = run(&["--format", "json", "construct", "--code", &fixture("fixtures/hamming.alist"), "-a", "2", "-b", "2", "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert!(v["assumptions"][0].as_str().unwrap().contains("minimum distance 3"));
    let alist = v["result"]["alist"].as_str().unwrap();
    assert_eq!(code(&run_stdin(&["scan", "--in", "-", "-a", "2", "-b", "2"], alist.as_bytes())), 0);
}

#[test]
fn missing_seed_is_drawn_and_reported() {
    let o = run(&["--format", "json", "construct", "--code", "repetition-3", "-a", "2", "-b", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let seed = v["seed"].as_u64().unwrap();
    assert_eq!(v["result"]["metadata"]["seed"].as_u64().unwrap(), seed);
    assert!(stderr(&o).contains(&format!("seed: {seed}")));
    let replay = json(&run(&["--format", "json", "construct", "--code", "repetition-3", "-a", "2", "-b", "1", "--seed", &seed.to_string()]));
    assert_eq!(replay["result"]["matrix"], v["result"]["matrix"]);
}

#[test]
fn json_envelope_is_uniform() {
    let runs = [
        vec!["--format", "json", "bound", "--family", "lll", "-n", "20", "-k", "10", "-a", "2", "-b", "1"],
        vec!["--format", "json", "scan", "--in", "FIX", "-a", "1", "-b", "1"],
        vec!["--format", "json", "construct", "--code", "repetition-4", "-a", "2", "-b", "1", "--seed", "2"],
        vec!["--format", "json", "oracle", "--code", "repetition-3", "-a", "2", "-b", "1", "--collective"],
        vec!["--format", "json", "estimate", "--code", "repetition-3", "-a", "2", "-b", "1", "-t", "2", "--trials", "100", "--seed", "1"],
        vec!["--format", "json", "table1"],
        vec!["--format", "json", "catalog"],
    ];
    let fix = fixture("fixtures/identity3.txt");
    for args in runs {
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIX" { fix.as_str() } else { a }).collect();
        let v = json(&run(&args));
        for key in ["command", "seed", "mode", "assumptions", "budgets", "result"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
        for key in ["scan_warn", "enum_limit", "oracle_budget"] {
            assert!(v["budgets"].get(key).is_some());
        }
    }
}

#[test]
fn oracle_example() {
    let o = run(&["oracle", "--code", "repetition-3", "-a", "2", "-b", "1", "--collective"]);
    assert!(stdout(&o).starts_with("collective trapping redundancy: 2\n"));
    let v = json(&run(&["--format", "json", "oracle", "--code", "hamming-7-4", "-a", "1", "-b", "1", "--collective"]));
    assert_eq!(v["result"]["value"], 3);
    assert_eq!(v["result"]["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn environment_sets_budgets() {
    let o = cmd(&["scan", "--in", &fixture("fixtures/hamming.alist"), "-a", "2", "-b", "1"])
        .env("TRAPRED_SCAN_WARN", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    let o = cmd(&["oracle", "--code", "hamming-7-4", "-a", "1", "-b", "1"])
        .env("TRAPRED_ORACLE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(
        &cmd(&["--format", "json", "catalog"])
            .env("TRAPRED_ENUM_LIMIT", "10")
            .output()
            .unwrap()
            .stdout,
    )
    .unwrap();
    assert_eq!(v["budgets"]["enum_limit"], 10);
}

#[test]
fn thread_count_does_not_change_results() {
    let h = fixture("fixtures/hamming.alist");
    let one = run(&["--threads", "1", "--format", "json", "scan", "--in", &h, "-a", "3", "-b", "2"]);
    let many = run(&["--threads", "4", "--format", "json", "scan", "--in", &h, "-a", "3", "-b", "2"]);
    assert_eq!(one.stdout, many.stdout);
    let one = run(&["--threads", "1", "--format", "json", "estimate", "--code", "hamming-7-4", "-a", "2", "-b", "1", "-t", "3", "--trials", "5000", "--seed", "9"]);
    let many = run(&["--threads", "3", "--format", "json", "estimate", "--code", "hamming-7-4", "-a", "2", "-b", "1", "-t", "3", "--trials", "5000", "--seed", "9"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn in_process_runner() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = trapred::cli::run(
        ["trapred", "scan", "--in", "-", "-a", "1", "-b", "1"],
        &mut "11\n01\n".as_bytes(),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().ends_with("clean\n"));
    let code = trapred::cli::run(["trapred", "scan", "--in", "-", "-a", "1", "-b", "1"], &mut "1x\n".as_bytes(), &mut Vec::new(), &mut err);
    assert_eq!(code, 2);
    assert!(String::from_utf8(err).unwrap().contains("line 1: bad character"));
}
