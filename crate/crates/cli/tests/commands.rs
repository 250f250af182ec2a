use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mdsvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdsvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn gen_k3(dir: &Path) -> PathBuf {
    let path = dir.join("k3.json");
    let o = mdsvar(&[
        "gen",
        "--k",
        "3",
        "--q",
        "10007",
        "--seed",
        "7",
        "--out",
        path_str(&path),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn gen_prints_exact_rate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = mdsvar(&[
        "gen",
        "--k",
        "3",
        "--q",
        "10007",
        "--seed",
        "7",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("rate: 11/6 (1.833333)"));
    let doc = read_json(&path);
    assert_eq!(doc["K"], 3);
    assert_eq!(doc["block"], 6);
    assert_eq!(doc["rng"], "chacha20-rand_chacha-0.3");
    assert_eq!(doc["rng_seed"], 7);
}

#[test]
fn gen_single_user_writes_to_stdout() {
    let o = mdsvar(&["gen", "--k", "1", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("rate: 1 (1.000000)"));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["levels"], serde_json::json!([1]));
}

#[test]
fn gen_rejects_small_field() {
    let o = mdsvar(&["gen", "--k", "3", "--q", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("72"));
    assert!(o.stdout.is_empty());
}

#[test]
fn gen_partial_levels_and_block() {
    let o = mdsvar(&["gen", "--k", "3", "--q", "10007", "--levels", "1-2", "--block", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("rate: 3/2"));
    let o = mdsvar(&["gen", "--k", "3", "--levels", "2,3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mdsvar(&["gen", "--k", "3", "--block", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mdsvar(&["gen"]).status.code(), Some(2));
    assert_eq!(mdsvar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mdsvar(&["verify"]).status.code(), Some(2));
    assert_eq!(
        mdsvar(&["sum-demo", "--k", "4", "--table2", "--q", "5"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_generated_scheme_passes() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = gen_k3(dir.path());
    let report = dir.path().join("r.json");
    let o = mdsvar(&["verify", "--in", path_str(&scheme), "--out", path_str(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = read_json(&report);
    assert_eq!(doc["overall"], true);
    let labels: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels.iter().filter(|l| l.starts_with("rank ")).count(), 12);
    assert_eq!(labels.iter().filter(|l| l.starts_with("mds ")).count(), 21);
    assert!(labels.contains(&"source length vs harmonic target n_max=3"));
}

#[test]
fn verify_reports_zeroed_row() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = gen_k3(dir.path());
    let mut doc = read_json(&scheme);
    let entry = doc["H"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|h| h["user"] == 2 && h["level"] == 2)
        .unwrap();
    let width = entry["rows"][0].as_array().unwrap().len();
    entry["rows"][0] = serde_json::json!(vec![0; width]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = mdsvar(&["verify", "--in", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("[FAIL] mds n=2 U={1,2}"), "{err}");
    assert!(err.contains("[FAIL] rank H(n=2, U={2,3})"), "{err}");
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["overall"], false);
}

#[test]
fn verify_corrupt_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = gen_k3(dir.path());
    let text = std::fs::read_to_string(&scheme).unwrap();
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &text[..200]).unwrap();
    let o = mdsvar(&["verify", "--in", path_str(&cut)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line"));

    let unreduced = dir.path().join("unreduced.json");
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["H"][0]["rows"][0][0] = serde_json::json!(10007);
    std::fs::write(&unreduced, doc.to_string()).unwrap();
    assert_eq!(mdsvar(&["verify", "--in", path_str(&unreduced)]).status.code(), Some(3));

    let missing = dir.path().join("nope.json");
    assert_eq!(mdsvar(&["verify", "--in", path_str(&missing)]).status.code(), Some(3));
}

#[test]
fn verify_baseline() {
    let o = mdsvar(&["verify", "--baseline", "--k", "5", "--q", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("rate: 5 (5.000000)"));
    let o = mdsvar(&["verify", "--baseline", "--k", "5", "--q", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sum_demo_k4() {
    let o = mdsvar(&["sum-demo", "--k", "4", "--q", "10007", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("key rate: 11/6"));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["key_rate"], "11/6");
    let trips = doc["round_trips"].as_array().unwrap();
    assert_eq!(trips.len(), 11);
    assert!(trips.iter().all(|t| t["correct"] == t["trials"]));
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 11);
    for run in runs {
        let leak = run["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["label"].as_str().unwrap().starts_with("leakage"))
            .unwrap();
        assert_eq!(leak["lhs"], "0");
    }
}

#[test]
fn sum_demo_table2_and_pair() {
    let o = mdsvar(&["sum-demo", "--k", "3", "--table2", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["table2"], true);
    assert_eq!(doc["round_trips"].as_array().unwrap().len(), 4);
    assert_eq!(doc["L"], 2);
    assert_eq!(doc["L_Z"], 3);

    let o = mdsvar(&["sum-demo", "--k", "2", "--q", "101"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["key_rate"], "1");
    assert_eq!(doc["round_trips"].as_array().unwrap().len(), 1);
}

#[test]
fn sum_demo_keys_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let keys = dir.path().join("keys.json");
    let o = mdsvar(&["sum-demo", "--k", "3", "--q", "101", "--keys-out", path_str(&keys)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = read_json(&keys);
    assert_eq!(doc["sampled_seed"].as_array().unwrap().len(), 4);
    let o = mdsvar(&["sum-demo", "--in", path_str(&keys), "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(out["q"], 101);
}

#[test]
fn bounds_table_and_targets() {
    let o = mdsvar(&["bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rates: Vec<&str> = doc["harmonic"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rate"].as_str().unwrap())
        .collect();
    assert_eq!(
        rates,
        ["1", "3/2", "11/6", "25/12", "137/60", "49/20", "363/140", "761/280"]
    );

    let o = mdsvar(&["bounds", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("mds: achieved 11/6 (1.833333) target 11/6 (1.833333)"));

    let o = mdsvar(&["bounds", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("summation key: achieved 11/6 (1.833333) target 11/6 (1.833333)"));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let avg = doc["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["label"] == "averaged correlation U={1,2,3,4}")
        .unwrap();
    assert_eq!(avg["lhs"], "11");
    assert_eq!(avg["rhs"], "11");
}

#[test]
fn selftest_passes() {
    let o = mdsvar(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let oracle = doc["oracle"].as_array().unwrap();
    assert!(oracle.len() >= 50);
    assert!(oracle.iter().all(|c| c["pass"] == true));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 6] = [
        &["gen", "--k", "3", "--seed", "11"],
        &["verify", "--baseline", "--k", "4", "--q", "11"],
        &["sum-demo", "--k", "4", "--seed", "3", "--trials", "5"],
        &["sum-demo", "--k", "3", "--table2", "--q", "5", "--seed", "3"],
        &["bounds", "--k", "3", "--seed", "2"],
        &["selftest", "--seed", "9", "--cases", "5"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let outs: Vec<Vec<u8>> = (0..2)
            .map(|run| {
                let path = dir.path().join(format!("{i}-{run}.json"));
                let mut full = args.to_vec();
                full.extend(["--out", path_str(&path)]);
                let o = mdsvar(&full);
                assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
                std::fs::read(&path).unwrap()
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{args:?}");
    }
}
