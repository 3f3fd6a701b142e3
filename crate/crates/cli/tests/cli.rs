use std::path::Path;
use std::process::Command;

use facloc_cli::run;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn facloc(args: &[&str]) -> facloc_cli::Outcome {
    run(std::iter::once("facloc").chain(args.iter().copied()))
}

#[test]
fn eval_reports_lottery_cost_and_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.json", r#"{"dim":1,"points":[[0],[1]]}"#);
    let out = facloc(&["eval", "--mech", "lrm", "--instance", &two]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["ratio"], 1.5);
    assert_eq!(v["cost"], 0.75);
    assert_eq!(v["lottery"].as_array().unwrap().len(), 3);

    let csv = facloc(&["eval", "--mech", "mixed:0.5", "--instance", &two, "--format", "csv"]);
    assert_eq!(csv.output, "point,prob,cost,ratio\n0,0.25,0.75,1.5\n0.5,0.5,0.75,1.5\n1,0.25,0.75,1.5\n");
}

#[test]
fn prediction_from_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "p.json",
        r#"{"dim":1,"points":[[0],[2]],"prediction":{"kind":"facility","point":[5]}}"#,
    );
    let v: serde_json::Value = serde_json::from_str(&facloc(&["eval", "--mech", "minmaxp", "--instance", &inst]).output).unwrap();
    assert_eq!(v["prediction_source"], "file");
    assert_eq!(v["ratio"], 2.0);
}

#[test]
fn unanimous_profile_with_off_point_output_has_infinite_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "u.json",
        r#"{"dim":2,"points":[[1,1],[1,1]],"prediction":{"kind":"extreme_ids","ids":[0,1]}}"#,
    );
    let out = facloc(&["eval", "--mech", "centroid-ext", "--instance", &inst]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["ratio"], 1.0);
    let gcm = write(dir.path(), "ph.json", r#"{"phantoms":[[9,9],[9,9],[9,9]]}"#);
    let out = facloc(&["eval", "--mech", &format!("gcm:{gcm}"), "--instance", &inst]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["ratio"], "inf");
}

#[test]
fn audit_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.json", r#"{"dim":1,"points":[[0],[1]]}"#);
    let ok = facloc(&["audit", "--mech", "lrm", "--instance", &two]);
    assert_eq!(ok.code, 0, "{}", ok.output);
    assert!(ok.output.contains("grid resolution"));
    let bad = facloc(&["audit", "--mech", "broken-weighted", "--instance", &two]);
    assert_eq!(bad.code, 1);
}

#[test]
fn witness_outputs() {
    let out = facloc(&["witness", "thm4"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["status"], "PASS");
    assert!((v["quantity"].as_f64().unwrap() - 2.414213562).abs() < 1e-9);
    assert_eq!(facloc(&["witness", "thm4", "--x-tilde", "-12"]).code, 0);
    for name in ["thm2", "thm5", "thm3-det", "thm3-rand"] {
        assert_eq!(facloc(&["witness", name]).code, 0, "{name}");
    }
    assert_eq!(facloc(&["witness", "thm3-rand", "--mech", "mixed:0.2"]).code, 2);
    assert_eq!(facloc(&["witness", "nope"]).code, 2);
}

#[test]
fn sweep_writes_frontier_csv() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("frontier.csv");
    let out = facloc(&["sweep", "--trials", "30", "--format", "csv", "--emit-plot-data", plot.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let text = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(text, out.output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,consistency,robustness");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "0,1,2");
    assert_eq!(lines[6], "0.5,1.5,1.5");
    assert_eq!(facloc(&["sweep", "--deltas", "0.7"]).code, 2);
    assert_eq!(facloc(&["sweep", "--deltas", ""]).code, 2);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.json", r#"{"dim":1,"points":[[0],[1]]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"dim":1,"points":[[0,1]]}"#);
    let junk = write(dir.path(), "junk.json", "not json");
    assert_eq!(facloc(&["eval", "--mech", "nope", "--instance", &two]).code, 2);
    assert_eq!(facloc(&["eval", "--mech", "mixed:0.9", "--instance", &two]).code, 2);
    assert_eq!(facloc(&["eval", "--mech", "lrm", "--instance", &bad]).code, 2);
    let out = facloc(&["eval", "--mech", "lrm", "--instance", &junk]);
    assert_eq!(out.code, 2);
    assert!(out.output.contains("malformed"));
    assert_eq!(facloc(&["eval", "--mech", "lrm", "--instance", "/no/such/file.json"]).code, 2);
    assert_eq!(facloc(&["eval", "--mech", "mbb", "--instance", &two]).code, 2);
    assert_eq!(facloc(&["frobnicate"]).code, 2);
}

#[test]
fn mec_and_onlym_rewrite() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", r#"{"dim":2,"points":[[0,0],[4,0],[2,1]]}"#);
    let v: serde_json::Value = serde_json::from_str(&facloc(&["mec", "--instance", &tri]).output).unwrap();
    assert_eq!(v["radius"], 2.0);
    assert_eq!(v["support"], serde_json::json!([0, 1]));

    let two = write(dir.path(), "two.json", r#"{"dim":1,"points":[[0],[1]]}"#);
    let lot = write(dir.path(), "l.json", "[[0.25, 1.0]]");
    let out = facloc(&["transform-onlym", "--instance", &two, "--lottery", &lot, "--format", "csv"]);
    assert_eq!(out.output, "point,prob,cost,left_cost,right_cost\n0,0.5,0.75,0.25,0.75\n0.5,0.5,0.75,0.25,0.75\n");
}

#[test]
fn probe_reports_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.json", r#"{"dim":1,"points":[[0],[1]]}"#);
    let out = facloc(&["probe", "--mech", "lrm", "--delta", "0.5", "--instance", &two]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["p_leq_l"], 0.25);
    assert_eq!(v["binding"], "boundary");
}

#[test]
fn estimators_run_from_the_command_line() {
    let out = facloc(&["consistency", "--mech", "centroid-all", "--trials", "50", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert!(out.output.starts_with("quantity,mechanism,max_ratio,evaluations\nconsistency,centroid-all,"));
    let out = facloc(&["robustness", "--mech", "minmaxp", "--trials", "20", "--grid", "21"]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["max_ratio"], 2.0);
    assert_eq!(facloc(&["consistency", "--mech", "lrm", "--min-agents", "3", "--max-agents", "2"]).code, 2);
}

#[test]
fn help_names_each_construct() {
    for (cmd, needle) in [
        ("eval", "egalitarian"),
        ("audit", "Truthfulness"),
        ("sweep", "LRM/MinMaxP"),
        ("witness", "phantom"),
        ("mec", "enclosing circle"),
        ("transform-onlym", "OnlyM"),
        ("probe", "delta - P(M)/2"),
        ("robustness", "adversarial"),
        ("consistency", "accurate"),
    ] {
        let out = facloc(&[cmd, "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.output.contains(needle), "{cmd}: {}", out.output);
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_facloc");
    let go = |seed: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["consistency", "--mech", "centroid-ext", "--trials", "30"]);
        match seed {
            Some(s) => c.env("FACLOC_SEED", s),
            None => c.env_remove("FACLOC_SEED"),
        };
        let out = c.output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let default = go(None);
    assert!(default.contains("\"seed\": 42"));
    assert_eq!(go(Some("42")), default);
    let other = go(Some("5"));
    assert!(other.contains("\"seed\": 5"));
    assert_eq!(go(Some("5")), other);
}
