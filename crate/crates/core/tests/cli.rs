use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use maxpres::analysis::closure_apply;
use maxpres::cli;
use maxpres::instances::{self, three_node_example, EntryKind};
use maxpres::mpmatrix::{apply, verification_grid, MpMap};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["maxpres"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn write_map(dir: &TempDir, name: &str, a: &MpMap) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(a).unwrap()).unwrap();
    p
}

fn write_text(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let good = write_map(&dir, "a.json", &three_node_example());
    assert_eq!(run(&["validate", s(&good)]).code, 0);

    let bad_pwl = write_text(
        &dir,
        "pwl.json",
        r#"{"n":2,"entries":[[{"kind":"zero"},{"kind":"pwl","points":[["1","1"]],"final_slope":"1"}],[{"kind":"zero"},{"kind":"zero"}]]}"#,
    );
    let r = run(&["validate", s(&bad_pwl)]);
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("entries[0][1]"), "{}", r.stderr);

    let bad_n = write_text(&dir, "n.json", r#"{"n":3,"entries":[[{"kind":"zero"}]]}"#);
    assert_eq!(run(&["validate", s(&bad_n)]).code, 65);
    let not_json = write_text(&dir, "x.json", "not json");
    assert_eq!(run(&["validate", s(&not_json)]).code, 65);
    assert_eq!(
        run(&["validate", s(&dir.path().join("missing.json"))]).code,
        64
    );
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let r = run(&[
        "check",
        s(&write_map(&dir, "a.json", &three_node_example())),
    ]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert_eq!(v["verdict"], "stable");
    let cycles = v["cycles"].as_array().unwrap();
    assert_eq!(cycles.len(), 5);
    assert!(cycles.iter().all(|c| c["verdict"] == "certified"));

    let r = run(&["check", s(&write_map(&dir, "id.json", &MpMap::identity(1)))]);
    assert_eq!(r.code, 2);
    assert_eq!(strings(&json(&r)["witness"]), vec!["1"]);

    let pow = write_text(
        &dir,
        "pow.json",
        r#"{"n":2,"entries":[[{"kind":"zero"},{"kind":"power","coef":"1","exp":"2"}],[{"kind":"power","coef":"1","exp":"2"},{"kind":"zero"}]]}"#,
    );
    let r = run(&["check", s(&pow)]);
    assert_eq!(r.code, 2);
    assert_eq!(json(&r)["cycles"][0]["witness_t"], "2");
}

#[test]
fn closure_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = three_node_example();
    let input = write_map(&dir, "a.json", &a);
    let out = dir.path().join("star.json");
    let r = run(&["closure", s(&input), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(run(&["validate", s(&out)]).code, 0);

    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["truncation_degree"], 2);
    let gains: Vec<Vec<String>> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|e| match e["kind"].as_str().unwrap() {
                    "identity" => "1".to_string(),
                    _ => e["gain"].as_str().unwrap().to_string(),
                })
                .collect()
        })
        .collect();
    assert_eq!(
        gains,
        vec![
            vec!["1", "3/7", "1/7"],
            vec!["2", "1", "2/7"],
            vec!["6", "3", "1"]
        ]
    );

    let star: MpMap = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    for x in verification_grid(3, 64) {
        assert_eq!(apply(&star, &x).unwrap(), closure_apply(&a, &x).unwrap());
    }

    let zero = run(&["closure", s(&write_map(&dir, "z.json", &MpMap::zero(2)))]);
    let star: MpMap = serde_json::from_str(&zero.stdout).unwrap();
    assert_eq!(star, MpMap::identity(2));

    assert_eq!(
        run(&[
            "closure",
            s(&write_map(&dir, "id.json", &MpMap::identity(2)))
        ])
        .code,
        2
    );
}

#[test]
fn closure_round_trip_on_random_maps() {
    let dir = TempDir::new().unwrap();
    let mut rng = instances::rng(99);
    for k in 0..10 {
        let a = instances::random_stable(&mut rng, 3, EntryKind::Mixed, 0.3);
        let input = write_map(&dir, &format!("a{k}.json"), &a);
        let r = run(&["closure", s(&input)]);
        assert_eq!(r.code, 0);
        let star: MpMap = serde_json::from_str(&r.stdout).unwrap();
        for x in verification_grid(3, 64) {
            assert_eq!(apply(&star, &x).unwrap(), closure_apply(&a, &x).unwrap());
        }
    }
}

#[test]
fn eigenvector_and_solve_outputs() {
    let dir = TempDir::new().unwrap();
    let input = write_map(&dir, "a.json", &three_node_example());
    let f = s(&input);

    let v = json(&run(&["left", f, "--vec", "1,1,1"]));
    assert_eq!(
        (
            v["l"].as_str(),
            v["l_of_ax"].as_str(),
            v["strict"].as_bool()
        ),
        (Some("9"), Some("62/7"), Some(true))
    );

    let v = json(&run(&["right", f, "--t", "1"]));
    assert_eq!(strings(&v["r"]), vec!["1", "2", "6"]);
    assert_eq!(strings(&v["ar"]), vec!["6/7", "2", "6"]);
    assert_eq!(v["relation"], "strictly-less");

    let v = json(&run(&["right", f, "--t", "1", "--lyapunov-at", "2,2,6"]));
    assert_eq!(v["lyapunov"]["v"], "2");

    let v = json(&run(&["solve", f, "--b", "1,1,1"]));
    assert_eq!(strings(&v["x"]), vec!["1", "2", "6"]);
    assert_eq!(v["fixed_point"], true);

    assert_eq!(run(&["left", f, "--vec", "1,1"]).code, 64);
    assert_eq!(run(&["left", f, "--vec", "1,x,1"]).code, 64);
    assert_eq!(
        run(&["left", f, "--vec", "1,1,1", "--weights", "1,0,1"]).code,
        64
    );
    assert_eq!(run(&["right", f, "--t", "-1"]).code, 64);
}

#[test]
fn eval_needs_approx_for_irrational_values() {
    let dir = TempDir::new().unwrap();
    let root = write_text(
        &dir,
        "r.json",
        r#"{"n":1,"entries":[[{"kind":"power","coef":"1","exp":"1/2"}]]}"#,
    );
    let r = run(&["eval", s(&root), "--vec", "4"]);
    assert_eq!(r.code, 0);
    assert_eq!(strings(&json(&r)["ax"]), vec!["2"]);
    assert!(json(&r).get("ax_approx").is_none());

    assert_eq!(run(&["eval", s(&root), "--vec", "2"]).code, 65);
    let r = run(&["eval", s(&root), "--vec", "2", "--approx", "--digits", "6"]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert!(v.get("ax").is_none());
    assert_eq!(strings(&v["ax_approx"]), vec!["1.414214"]);
}

#[test]
fn simulate_csv_and_codes() {
    let dir = TempDir::new().unwrap();
    let input = write_map(&dir, "a.json", &three_node_example());
    let r = run(&["simulate", s(&input), "--x0", "1,1,1", "--steps", "2"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.stdout, "k,x1,x2,x3\n0,1,1,1\n1,1/2,2,3\n2,2/3,1,6\n");
    let r = run(&[
        "simulate",
        s(&input),
        "--x0",
        "1,1,1",
        "--steps",
        "400",
        "--halt",
        "1/1000",
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("converged-below"));
    let r = run(&[
        "simulate",
        s(&input),
        "--x0",
        "1,1,1",
        "--steps",
        "1",
        "--approx",
        "--digits",
        "3",
    ]);
    assert_eq!(r.stdout, "# approximate: decimals rounded to 3 digits\nk,x1,x2,x3\n0,1.000,1.000,1.000\n1,0.500,2.000,3.000\n");

    let id = write_map(&dir, "id.json", &MpMap::identity(2));
    assert_eq!(run(&["simulate", s(&id), "--x0", "1,2"]).code, 2);
}

#[test]
fn certify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write_map(&dir, "a.json", &three_node_example());
    let a = run(&[
        "certify",
        s(&input),
        "--mode",
        "left-sum",
        "--samples",
        "100",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "certify",
        s(&input),
        "--mode",
        "left-sum",
        "--samples",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["all_strict"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 100);

    let out = dir.path().join("cert.json");
    let r = run(&[
        "certify",
        s(&input),
        "--mode",
        "max-separable",
        "--samples",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["mode"], "max-separable");

    assert_eq!(run(&["certify", s(&input), "--samples", "0"]).code, 64);
    assert_eq!(
        run(&[
            "certify",
            s(&write_map(&dir, "id.json", &MpMap::identity(1)))
        ])
        .code,
        2
    );
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&[]).code, 64);
    assert_eq!(run(&["frobnicate"]).code, 64);
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    for sub in [
        "validate", "check", "closure", "eval", "left", "right", "solve", "simulate", "certify",
    ] {
        assert!(r.stdout.contains(sub), "{sub}");
    }
}

#[test]
fn binary_propagates_exit_codes() {
    let dir = TempDir::new().unwrap();
    let id = write_map(&dir, "id.json", &MpMap::identity(1));
    let status = Command::new(env!("CARGO_BIN_EXE_maxpres"))
        .args(["check", s(&id)])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let status = Command::new(env!("CARGO_BIN_EXE_maxpres"))
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(64));
}
