use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptcache"))
        .args(args)
        .env_remove("PTCACHE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn construct_k7_t2() {
    let out = run(&["construct", "--preset", "theorem1", "--K", "7", "--t", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["fs"]["aggregate"], serde_json::json!([0, 2, 2]));
    assert_eq!(v["sizing"]["gamma"][1], "5/1");
}

#[test]
fn construct_jcm() {
    let v = json(&run(&[
        "construct",
        "--preset",
        "jcm",
        "--K",
        "5",
        "--t",
        "2",
    ]));
    assert_eq!(v["fs"]["aggregate"], serde_json::json!([2]));
    assert_eq!(v["sizing"]["packets_per_file"], 20);
}

#[test]
fn construct_constraint_exit_code() {
    let out = run(&["construct", "--preset", "theorem1", "--K", "8", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("K must be odd"));
    let out = run(&["construct", "--K", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_report_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ptcache"))
        .args([
            "simulate",
            "--preset",
            "theorem1",
            "--K",
            "7",
            "--t",
            "2",
            "--seed",
            "0",
            "--demands",
            "distinct",
            "--output",
            "report.json",
            "--transcript",
            "msgs.jsonl",
        ])
        .env("PTCACHE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["rate"], "5/2");
    assert_eq!(report["pass"], true);
    let lines = std::fs::read_to_string(dir.path().join("msgs.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 90);
    let first: Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["constituents"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_odd_t3_and_even_k() {
    let v = json(&run(&[
        "simulate", "--preset", "odd_t3", "--K", "9", "--t", "3", "--seed", "2",
    ]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["rate"], "2/1");
    let out = run(&["simulate", "--preset", "even_K", "--K", "12", "--t", "2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["rate"], "5/1");
}

#[test]
fn simulate_failure_exit_code() {
    // demand index beyond N
    let out = run(&[
        "simulate",
        "--K",
        "7",
        "--t",
        "2",
        "--demands",
        "1,2,3,4,5,6,9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate",
        "--K",
        "9",
        "--t",
        "2",
        "--seed",
        "7",
        "--demands",
        "uniform",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_examples() {
    let out = run(&[
        "verify",
        "--claims",
        "--t",
        "4",
        "--q-range",
        "5:15",
        "--strict",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["claims"].as_array().unwrap().len(), 11);
    assert_eq!(v["pass"], true);

    let v = json(&run(&["verify", "--remark3", "--q", "3"]));
    assert_eq!(
        v["remark3"][0]["satisfying"],
        serde_json::json!([[2, 2, 2]])
    );

    let v = json(&run(&["verify", "--lemma3", "--K", "13", "--t", "2"]));
    assert_eq!(v["lemma3"][0]["argmin"], 7);

    let v = json(&run(&["verify", "--obstruction", "--r", "2,3"]));
    assert_eq!(v["obstruction"][1]["lcm"], 12);
}

#[test]
fn verify_full_grid_strict() {
    let out = run(&["verify", "--strict"]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["claims", "lemma1", "lemma3", "remark3", "obstruction"] {
        assert!(v[key].is_array(), "{key}");
    }
}

#[test]
fn sweep_csv_and_json_agree() {
    let csv = run(&["sweep", "--t", "2", "--q-max", "4", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains(",6/7,"));
    assert!(rows[2].contains(",5/6,"));
    let v = json(&run(&["sweep", "--t", "2", "--q-max", "4"]));
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 2);
    for (rec, row) in recs.iter().zip(&rows[1..]) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(rec["F_PT"].to_string(), cols[4]);
        assert_eq!(rec["ratio"].as_str().unwrap(), cols[6]);
        assert_eq!(rec["gamma"].as_str().unwrap(), cols[10]);
    }
}

#[test]
fn sweep_odd_t_rejected() {
    let out = run(&["sweep", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr)
        .contains("even t required for theorem1 sweep; use --preset odd_t3"));
}

#[test]
fn compare_command() {
    let v = json(&run(&["compare", "--K", "7", "--t", "2"]));
    assert_eq!(v["F_PT"], 36);
    assert_eq!(v["F_JCM"], 42);
    assert_eq!(v["pass"], true);
}
