use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ctn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctn"))
        .args(args)
        .env_remove("CTN_THREADS")
        .output()
        .expect("ctn runs")
}

fn ctn_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    all.extend(["--out", &out_s]);
    let o = ctn(&all);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (o.status.code().unwrap(), text)
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON report")
}

#[test]
fn bounds_csv_golden() {
    let o = ctn(&["bounds", "--l", "2..4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["l,kind,value,part", "2,exact,3/4,iv", "3,asymptotic,sqrt(2)-1,iii", "4,exponent,-1/2,i"]);
    assert!(text.starts_with("# ctn-core "));
}

#[test]
fn bounds_json_values() {
    let o = ctn(&["bounds", "--l", "2..10", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&String::from_utf8(o.stdout).unwrap());
    let rows = v["report"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0]["value"], "3/4");
    assert_eq!(rows[0]["edge_bound"], "54");
    assert_eq!(rows[2]["value"], "-1/2");
    assert_eq!(rows[5]["value"], "-1/7");
    assert_eq!(rows[1]["kind"], "asymptotic_ratio");
}

#[test]
fn exact_search_and_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = ctn_to(dir.path(), "s.json", &["search", "--n", "3", "--forbid", "4", "--method", "exact"]);
    assert_eq!(code, 0);
    let v = json(&text);
    assert_eq!(v["report"]["search"]["edges"], 6);
    assert_eq!(v["report"]["search"]["verified"], true);
    assert_eq!(v["report"]["within_exact_bound"], true);

    let mask = dir.path().join("mask.json");
    std::fs::write(&mask, serde_json::to_string(&v["report"]["search"]["subgraph"]).unwrap()).unwrap();
    let m = mask.to_str().unwrap();
    let (code, text) = ctn_to(dir.path(), "v.json", &["verify", "--n", "3", "--mask", m, "--forbid", "4"]);
    assert_eq!(code, 0);
    let v = json(&text);
    assert_eq!(v["report"]["freeness"]["free"], true);
    assert_eq!(v["report"]["edges"], 6);
    let (code, text) = ctn_to(dir.path(), "c.json", &["chi", "--n", "3", "--mask", m]);
    assert_eq!(code, 0);
    assert_eq!(json(&text)["report"]["chi"]["pi"], "2/3");
    let (code, _) = ctn_to(dir.path(), "b.json", &["build", "--n", "3", "--mask", m]);
    assert_eq!(code, 0);
}

#[test]
fn lemma_suite_passes_with_documented_mismatch() {
    for n in ["3", "4"] {
        let o = ctn(&["verify", "--n", n, "--suite", "lemmas"]);
        assert_eq!(o.status.code(), Some(0), "n={n}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&String::from_utf8(o.stdout).unwrap());
        let checks = v["report"]["checks"].as_array().unwrap();
        let status = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap()["status"].clone();
        assert_eq!(status("four-cycle-census"), "documented-mismatch");
        for name in ["two-path-four-cycles", "cycle-support", "aux-identities", "chi-identities", "girth"] {
            assert_eq!(status(name), "pass", "{name}");
        }
    }
}

#[test]
fn failed_verification_exits_one() {
    let o = ctn(&["verify", "--n", "3", "--forbid", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(v["passed"], false);
    assert_eq!(v["report"]["freeness"]["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two_and_name_the_cap() {
    let cases: [(&[&str], &str); 6] = [
        (&["census", "--n", "6"], "n <= 5"),
        (&["search", "--n", "4", "--forbid", "4", "--method", "exact"], "n <= 3"),
        (&["search", "--n", "5", "--forbid", "12"], "10"),
        (&["search", "--n", "3", "--forbid", "16"], "14"),
        (&["verify", "--n", "4", "--identities", "3"], "1, 2 and 8"),
        (&["bounds", "--l", "1..4"], "2 <= a"),
    ];
    for (args, needle) in cases {
        let o = ctn(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert_eq!(ctn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ctn(&["census"]).status.code(), Some(2));
    assert_eq!(ctn(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 3, "edges": [["123", "231"]]}"#).unwrap();
    let o = ctn(&["chi", "--n", "3", "--mask", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not adjacent"));
    let o = ctn(&["chi", "--n", "4", "--mask", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let col = dir.path().join("col.json");
    std::fs::write(&col, r#"{"n": 3, "colors": [0, 1]}"#).unwrap();
    let o = ctn(&["ramsey", "--n", "3", "--colors", "2", "--forbid", "4", "--coloring", col.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ramsey_reports() {
    let o = ctn(&["ramsey", "--n", "3", "--colors", "1", "--forbid", "6", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(v["report"]["monochromatic"]["color"], 0);
    assert_eq!(v["report"]["monochromatic"]["witness"].as_array().unwrap().len(), 6);

    let dir = tempfile::tempdir().unwrap();
    let col = dir.path().join("col.json");
    std::fs::write(&col, r#"{"n": 3, "colors": [0,1,2,3,4,5,6,7,8]}"#).unwrap();
    let o = ctn(&["ramsey", "--n", "3", "--colors", "9", "--forbid", "4", "--coloring", col.to_str().unwrap()]);
    let v = json(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(v["report"]["monochromatic"], Value::Null);
    assert_eq!(v["report"]["source"], "file");
}

#[test]
fn census_report_carries_both_values() {
    let o = ctn(&["census", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&String::from_utf8(o.stdout).unwrap());
    let r = &v["report"];
    assert_eq!(r["total"], 162);
    assert_eq!(r["per_edge_constant"], 9);
    assert_eq!(r["closed_form_per_edge"], "5");
    assert_eq!(r["mismatch"], true);
    assert_eq!(r["status"], "documented-mismatch");
}

#[test]
fn lift_demo_lifts_the_triangle() {
    let o = ctn(&["lift-demo", "--n", "4", "--x", "id", "--i", "1", "--l", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(v["report"]["aux_vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["report"]["aux_cycles"], 1);
    assert_eq!(v["report"]["lifted"][0]["lift"].as_array().unwrap().len(), 6);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["search", "--n", "4", "--forbid", "6", "--method", "local", "--seed", "42", "--budget", "2000", "--seeds", "3"],
        &["ramsey", "--n", "4", "--colors", "2", "--forbid", "4", "--seed", "9"],
        &["verify", "--n", "4", "--suite", "lemmas", "--seed", "5"],
        &["census", "--n", "4", "--format", "csv"],
        &["chi", "--n", "4"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let (c1, a) = ctn_to(dir.path(), &format!("a{k}"), args);
        let (c2, b) = ctn_to(dir.path(), &format!("a{k}"), args);
        assert_eq!(c1, c2);
        assert_eq!(a, b, "{args:?}");
        assert!(!a.is_empty());
        assert!(dir.path().join(format!("a{k}.log")).exists());
    }
}

#[test]
fn thread_settings() {
    let plain = ctn(&["chi", "--n", "3"]);
    let flagged = ctn(&["chi", "--n", "3", "--threads", "2"]);
    assert_eq!(flagged.status.code(), Some(0));
    let v = json(&String::from_utf8(flagged.stdout).unwrap());
    assert_eq!(v["config"]["threads"], 2);
    assert_eq!(json(&String::from_utf8(plain.stdout).unwrap())["report"], v["report"]);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_ctn"))
        .args(["chi", "--n", "3"])
        .env("CTN_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_ctn"))
        .args(["chi", "--n", "3", "--threads", "1"])
        .env("CTN_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}
