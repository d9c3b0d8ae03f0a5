use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn stokes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stokes")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = stokes(&all);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?}, stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (code, v)
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--json", "--trials", "4", "check", "--which", "elementary"];
    let file = path("one_dimensional.json");
    let run = || stokes(&[&args[..], &[file.as_str()]].concat()).stdout;
    let (a, b) = (run(), run());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(v["elapsed_ms"].is_null());
    assert_eq!(v["seed"], 0);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = report(&["--timing", "build", &path("point_ab.json")]);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn every_corpus_entry_runs_within_ten_seconds() {
    let out = stokes(&["--corpus", "--json", "--timing"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<Value> =
        serde_json::Deserializer::from_slice(&out.stdout).into_iter().collect::<Result<_, _>>().unwrap();
    assert_eq!(reports.len(), 9);
    for r in &reports {
        assert!(r["elapsed_ms"].as_u64().unwrap() < 10_000, "{}", r["command"]);
    }
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("ok ")).count(), 9);
}

#[test]
fn each_corpus_file_builds_within_the_bound() {
    for name in [
        "one_dimensional.json",
        "circle_01.json",
        "two_level.json",
        "point_ab.json",
        "polyhedral_square.json",
        "interval_intro.json",
        "local_system.json",
    ] {
        let start = Instant::now();
        let (code, v) = report(&["build", &path(name)]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["verdict"], "valid");
        assert!(start.elapsed() < Duration::from_secs(10), "{name}");
    }
}

#[test]
fn one_dimensional_total_poset_has_eight_elements() {
    let (code, v) = report(&["build", &path("one_dimensional.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["total_poset"]["elements"].as_array().unwrap().len(), 8);
}

#[test]
fn empty_fibers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.json");
    std::fs::write(&file, r#"{"base": {"elements": ["x"]}, "fibers": {"x": {"elements": []}}, "transitions": {}}"#)
        .unwrap();
    let out = stokes(&["build", &file.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}

#[test]
fn syntax_errors_carry_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"base\":\n  {\"elements\": [\"x\"],\n}").unwrap();
    let out = stokes(&["build", &file.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn polyhedral_square_has_nine_cells() {
    let (code, v) = report(&["build", &path("polyhedral_square.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cells"].as_array().unwrap().len(), 9);
    assert_eq!(v["result"]["space"]["base"]["elements"].as_array().unwrap().len(), 9);
}

#[test]
fn point_with_an_order_is_a_counterexample() {
    let (code, v) = report(&["check", "--which", "elementary", &path("point_ab.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "counterexample");
    assert!(v["witness"]["functor"].is_object());
}

#[test]
fn stokes_matrices_give_a_stokes_functor() {
    let (code, v) = report(&["check", "--which", "stokes", &path("circle_01.json"), &path("stokes_data_11.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "true");
}

#[test]
fn devissage_passes_on_two_levels() {
    let (code, v) = report(&["--trials", "6", "check", "--which", "devissage", &path("two_level.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["levels"], 2);
}

#[test]
fn directions_of_the_basic_class() {
    let (code, v) = report(&["directions", &path("circle_01.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["directions"]["(0,1)"], serde_json::json!(["1/2π", "3/2π"]));
}

#[test]
fn tangent_of_the_trivial_local_system() {
    let (code, v) = report(&["tangent", &path("local_system.json"), &path("trivial_rank1.json")]);
    assert_eq!(code, 0);
    let ext: Vec<u64> = v["result"]["ext"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(&ext[..2], &[1, 1]);
    assert!(ext[2..].iter().all(|&x| x == 0));
    assert_eq!(v["result"]["euler_characteristic"], 0);
}

#[test]
fn tangent_of_the_zero_functor_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero.json");
    std::fs::write(&file, r#"{"dims": {}}"#).unwrap();
    let (code, v) = report(&["tangent", &path("local_system.json"), &file.to_string_lossy()]);
    assert_eq!(code, 0);
    assert!(v["result"]["ext"].as_array().unwrap().iter().all(|x| x == 0));
}

#[test]
fn missing_functor_is_an_input_error() {
    let out = stokes(&["check", "--which", "stokes", &path("circle_01.json")]);
    assert_eq!(out.status.code(), Some(64));
}
