use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_envycut"))
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn instance(name: &str) -> PathBuf {
    crate_dir().join("instances").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn assert_schema(schema: &str, value: &Value) {
    let text = std::fs::read_to_string(crate_dir().join("schemas").join(format!("{schema}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let messages: Vec<String> = match compiled.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    panic!("schema violations: {messages:?}");
}

fn rational(v: &Value) -> (i128, i128) {
    let s = v.as_str().unwrap();
    match s.split_once('/') {
        Some((p, q)) => (p.parse().unwrap(), q.parse().unwrap()),
        None => (s.parse().unwrap(), 1),
    }
}

#[test]
fn bundled_instances_match_the_schema() {
    for name in ["uniform", "knife-fixture", "random-seed5"] {
        let value: Value = serde_json::from_str(&std::fs::read_to_string(instance(name)).unwrap()).unwrap();
        assert_schema("instance", &value);
    }
}

#[test]
fn solve3_on_uniform_instance_stays_within_the_query_budget() {
    let out = run(&["solve3", "--instance", path(&instance("uniform")), "--n", "1024", "--trace"]);
    let report = json_stdout(&out);
    assert_schema("solve-report", &report);
    assert!(report["query_count"].as_u64().unwrap() <= 60 * 100 + 200);
    assert_eq!(report["valid"], true);
    assert_eq!(report["trace"].as_array().unwrap().len() as u64, report["rounds"].as_u64().unwrap());
}

#[test]
fn solve_then_verify_and_detect_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let inst = instance("random-seed5");
    let out = run(&["solve", "--instance", path(&inst), "--n", "32", "--report", path(&report_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_schema("solve-report", &report);
    assert_eq!(report["valid"], true);

    let ok = run(&["verify", "--instance", path(&inst), "--solution", path(&report_path)]);
    let verdict = json_stdout(&ok);
    assert_schema("verify-report", &verdict);
    assert_eq!(verdict["envy_free"], true);

    // swap the pieces of two players
    let mut tampered = report.clone();
    let perm = tampered["solution"]["permutation"].as_array_mut().unwrap();
    perm.swap(0, 1);
    let tampered_path = dir.path().join("tampered.json");
    std::fs::write(&tampered_path, serde_json::to_string(&tampered).unwrap()).unwrap();
    let bad = run(&["verify", "--instance", path(&inst), "--solution", path(&tampered_path)]);
    assert_eq!(bad.status.code(), Some(6));
    let verdict: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(verdict["envy_free"], false);

    // move a vertex off the cell
    let mut moved = report;
    moved["solution"]["vertices"][0][0] = Value::from(0);
    std::fs::write(&tampered_path, serde_json::to_string(&moved).unwrap()).unwrap();
    let bad = run(&["verify", "--instance", path(&inst), "--solution", path(&tampered_path)]);
    assert_eq!(bad.status.code(), Some(6));
}

#[test]
fn brute_force_agrees_with_dnc_and_respects_the_budget() {
    let inst = instance("uniform");
    let brute = json_stdout(&run(&["solve", "--instance", path(&inst), "--n", "16", "--algo", "brute"]));
    assert!(brute["solutions_found"].as_u64().unwrap() >= 1);
    assert_eq!(brute["valid"], true);
    let limited = bin()
        .args(["solve", "--instance", path(&inst), "--n", "16", "--algo", "brute"])
        .env("ENVYCUT_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(4));
}

#[test]
fn epsilon_maps_to_a_power_of_two_grid() {
    // uniform densities have K = 1, so epsilon = 1/100 needs N = 128
    let report = json_stdout(&run(&["solve", "--instance", path(&instance("uniform")), "--epsilon", "1/100"]));
    assert_eq!(report["n"], 128);
    // cells have size 1/N <= epsilon / K; envy is bounded by K (d + 1) / N
    assert_eq!(report["bound"], "3/128");
    let (p, q) = rational(&report["max_envy"]);
    assert!(p * 128 <= 3 * q, "max_envy {p}/{q} above the bound");
}

#[test]
fn invalid_inputs_have_distinct_exit_codes() {
    let fixture = instance("knife-fixture");
    assert_eq!(run(&["solve", "--instance", path(&fixture), "--n", "8"]).status.code(), Some(3));
    let uniform = instance("uniform");
    assert_eq!(run(&["solve", "--instance", path(&uniform), "--n", "12"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--instance", "/nonexistent.json", "--n", "8"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"d": 2, "players": [{"breakpoints": ["0", "1"], "values": ["1"]}]}"#).unwrap();
    assert_eq!(run(&["solve", "--instance", path(&broken), "--n", "8"]).status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        assert!(run(&["gen", "--kind", "dp", "--n", "32", "--seed", "7", "--out", path(out)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let generated: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_schema("generated", &generated);

    let report = json_stdout(&run(&["solve", "--instance", path(&a)]));
    assert_schema("reduction-report", &report);
    assert_eq!(report["is_solution"], true);
    assert_eq!(report["embedded_n"], 64);
    let report_path = dir.path().join("report.json");
    std::fs::write(&report_path, serde_json::to_string(&report).unwrap()).unwrap();
    assert!(run(&["verify", "--instance", path(&a), "--solution", path(&report_path)]).status.success());

    let brouwer = dir.path().join("brouwer.json");
    assert!(run(&["gen", "--kind", "brouwer", "--n", "32", "--seed", "3", "--out", path(&brouwer)]).status.success());
    let report = json_stdout(&run(&["solve", "--instance", path(&brouwer)]));
    let plant: Value = serde_json::from_slice(&std::fs::read(&brouwer).unwrap()).unwrap();
    assert_eq!(report["square"], plant["plant"]);
}

#[test]
fn large_generated_instances_are_procedural() {
    let out = json_stdout(&run(&["gen", "--kind", "brouwer", "--n", "4096", "--seed", "2"]));
    assert_schema("generated", &out);
    assert!(out.get("values").is_none());
    assert_eq!(out["procedural"], "seeded-v1");
}

#[test]
fn stromquist_fixture_and_adversary() {
    let report = json_stdout(&run(&["stromquist", "--instance", path(&instance("knife-fixture"))]));
    assert_schema("stromquist-report", &report);
    assert_eq!(report["shout"]["shouter"], 2);
    let (p, q) = rational(&report["shout"]["sword"]);
    assert!(10 * p > 3 * q && 1000 * p <= 301 * q, "sword {p}/{q}");

    let report =
        json_stdout(&run(&["stromquist", "--adversary", "x=1/4,delta=1/1000000", "--queries", "20000", "--seed", "9"]));
    assert_schema("stromquist-report", &report);
    assert_eq!(report["shout"]["sword"], "1/4");
    assert_eq!(report["experiment"]["violations"], 0);
    assert_eq!(run(&["stromquist", "--adversary", "x=1/4"]).status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let inst = instance("random-seed5");
    let args = ["solve3", "--instance", path(&inst), "--n", "4096", "--trace"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn bench_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn fast3_bench_fits_a_quadratic_in_log_n() {
    let out =
        run(&["bench", "--suite", "fast3-scaling", "--sizes", "256,1024,4096,16384", "--seeds", "2", "--jobs", "4"]);
    let rows = bench_rows(&out);
    assert_eq!(rows.len(), 9);
    let fit = rows.last().unwrap();
    assert_eq!(fit[0], "fit");
    let b: f64 = fit[7].split("b=").nth(1).unwrap().parse().unwrap();
    assert!(b <= 60.0, "{fit:?}");
}

#[test]
fn dnc_bench_doubles_queries_in_two_dimensions() {
    let out = run(&["bench", "--suite", "dnc-scaling", "--d", "2", "--sizes", "64,128,256,512", "--seeds", "3"]);
    let rows = bench_rows(&out);
    let slope: f64 = rows.last().unwrap()[7].trim_start_matches("slope=").parse().unwrap();
    assert!((0.8..=1.2).contains(&slope), "slope {slope}");
}

#[test]
fn bench_marks_timed_out_rows_and_continues() {
    let out = run(&["bench", "--suite", "dnc-scaling", "--sizes", "8,256", "--seeds", "1", "--timeout", "0.5"]);
    let rows = bench_rows(&out);
    assert_eq!(rows[0][6], "ok");
    assert_eq!(rows[1][6], "timeout");
    assert_eq!(rows[2][0], "fit");
}

#[test]
fn cells_dump_lists_every_cell() {
    let out = run(&["cells", "--d", "3", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 8);
    assert_eq!(run(&["cells", "--d", "4", "--n", "64"]).status.code(), Some(2));
}
