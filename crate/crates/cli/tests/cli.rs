use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oiglab_cli::doc::{canonical_json, parse_json, FdsDoc, ProblemDoc, SweepDoc};
use tempfile::TempDir;

fn oiglab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oiglab")).current_dir(dir).args(args).env_remove("OIGLAB_BUDGET_NODES").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Rows of a CSV as maps from column name to cell.
fn table(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    r.records().map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect()).collect()
}

const PATH: &str = r#"{"family":{"kind":"table","labels":["0","1"],
 "rows":[["0","0","0"],["1","0","0"],["1","1","0"],["1","1","1"]]}}"#;

const SINGLE: &str = r#"{"family":{"kind":"table","labels":["0","1"],"rows":[["0","1","1"]]}}"#;

const RECT: &str = r#"{"family":{"kind":"rectangles","d":2},"points":[["0","0"],["1","1"],["2","0"]],
 "distribution":{"support":[{"point":["0","0"],"label":"0","weight":"1/8"},{"point":["1","1"],"label":"1","weight":"3/8"},
 {"point":["2","0"],"label":"0","weight":"1/4"},{"point":["1","0"],"label":"1","weight":"1/4"}]}}"#;

const CONFLICT: &str = r#"{"left":[{"name":"a","domain":["0","1"]}],"right":["r","s"],
 "edges":[{"left":"a","right":"r","costs":["1","0"]},{"left":"a","right":"s","costs":["0","1"]}]}"#;

#[test]
fn orient_path_has_optimal_error_one_third() {
    let d = TempDir::new().unwrap();
    write(d.path(), "path.json", PATH);
    let o = oiglab(d.path(), &["orient", "--spec", "path.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["instance"], "path");
    assert_eq!(rows[0]["n"], "3");
    assert_eq!(rows[0]["k_star"], "1");
    assert_eq!((rows[0]["hall_eps_num"].as_str(), rows[0]["hall_eps_den"].as_str()), ("1", "3"));
    assert!(stderr(&o).contains("optimal error 1/3"));
}

#[test]
fn malformed_spec_reports_position() {
    let d = TempDir::new().unwrap();
    write(d.path(), "bad.json", "{\"family\":{\"kind\":\"thresholds\"},\n \"points\": [[\"1\"],\n  [\"2\"]\n  \"x\"]}");
    let o = oiglab(d.path(), &["orient", "--spec", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("bad.json:4:3:"), "{}", stderr(&o));
}

#[test]
fn unknown_fields_are_rejected() {
    let d = TempDir::new().unwrap();
    write(d.path(), "a.json", r#"{"family":{"kind":"thresholds","bogus":1},"points":[["1"]]}"#);
    write(d.path(), "b.json", r#"{"family":{"kind":"thresholds"},"points":[["1"]],"extra":true}"#);
    write(d.path(), "c.json", r#"{"family":{"kind":"rectangles"},"points":[["1","1"]]}"#);
    for (f, needle) in [("a.json", "bogus"), ("b.json", "extra"), ("c.json", "missing field `d`")] {
        let o = oiglab(d.path(), &["orient", "--spec", f]);
        assert_eq!(o.status.code(), Some(1), "{f}");
        assert!(stderr(&o).contains(needle), "{f}: {}", stderr(&o));
    }
}

#[test]
fn hall_on_single_labeling_is_zero() {
    let d = TempDir::new().unwrap();
    write(d.path(), "one.json", SINGLE);
    let o = oiglab(d.path(), &["hall", "--spec", "one.json", "--eps", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!((rows[0]["hall_eps_num"].as_str(), rows[0]["hall_eps_den"].as_str()), ("0", "1"));
    assert_eq!(rows[0]["feasible"], "true");
}

#[test]
fn hall_infeasible_exits_two_with_witness() {
    let d = TempDir::new().unwrap();
    write(d.path(), "path.json", PATH);
    let o = oiglab(d.path(), &["hall", "--spec", "path.json", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let rows = table(&stdout(&o));
    assert_eq!(rows[0]["feasible"], "false");
    assert!(!rows[0]["witness"].is_empty());
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let d = TempDir::new().unwrap();
    let messy = r#"{"family":{"kind":"table","labels":["+","-"],"rows":[["+","-"],["-","-"]]},
        "loss":{"kind":"table","entries":[{"predicted":"1","truth":"0","value":"0.50"},{"predicted":"0","truth":"1","value":"2/4"}]}}"#;
    write(d.path(), "p.json", messy);
    let first = oiglab(d.path(), &["canon", "--spec", "p.json", "--kind", "problem"]);
    assert!(first.status.success(), "{}", stderr(&first));
    write(d.path(), "q.json", &stdout(&first));
    let second = oiglab(d.path(), &["canon", "--spec", "q.json", "--kind", "problem"]);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("\"1/2\""));
    let parsed: ProblemDoc = parse_json(&stdout(&first), "q").unwrap();
    assert_eq!(canonical_json(&parsed), stdout(&first));

    let fds: FdsDoc = parse_json(CONFLICT, "f").unwrap();
    let text = canonical_json(&fds.canonical().unwrap());
    let back: FdsDoc = parse_json(&text, "f").unwrap();
    assert_eq!(canonical_json(&back.canonical().unwrap()), text);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let d = TempDir::new().unwrap();
    write(d.path(), "rect.json", RECT);
    let args = ["pac-eval", "--spec", "rect.json", "--learner", "minrect", "--samples", "3", "--trials", "40", "--seed", "11"];
    let a = oiglab(d.path(), &args);
    let b = oiglab(d.path(), &args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(table(&stdout(&a)).len(), 40);
    let mut other = args.to_vec();
    other[9] = "12";
    assert_ne!(a.stdout, oiglab(d.path(), &other).stdout);
}

#[test]
fn stochastic_tasks_require_a_seed() {
    let d = TempDir::new().unwrap();
    write(d.path(), "rect.json", RECT);
    let o = oiglab(d.path(), &["pac-eval", "--spec", "rect.json", "--learner", "minrect", "--samples", "3", "--trials", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn fds_solve_infeasible_exits_two_with_certificate() {
    let d = TempDir::new().unwrap();
    write(d.path(), "f.json", CONFLICT);
    let o = oiglab(d.path(), &["fds", "solve", "--spec", "f.json", "--eps", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    let rows = table(&stdout(&o));
    assert_eq!(rows[0]["status"], "infeasible");
    assert_eq!(rows[0]["certificate"], "r;s");

    let ok = oiglab(d.path(), &["fds", "solve", "--spec", "f.json", "--eps", "1"]);
    assert!(ok.status.success());
    assert_eq!(table(&stdout(&ok))[0]["status"], "feasible");

    let mm = oiglab(d.path(), &["fds", "minmax", "--spec", "f.json"]);
    assert_eq!(table(&stdout(&mm))[0]["value"], "1.000000");
}

#[test]
fn encoded_fds_minmax_matches_orientation() {
    let d = TempDir::new().unwrap();
    write(d.path(), "path.json", PATH);
    let enc = oiglab(d.path(), &["fds", "encode", "--spec", "path.json", "--out", "enc.json"]);
    assert!(enc.status.success(), "{}", stderr(&enc));
    let mm = oiglab(d.path(), &["fds", "minmax", "--spec", "enc.json"]);
    let row = &table(&stdout(&mm))[0];
    assert_eq!((row["value_num"].as_str(), row["value_den"].as_str()), ("1", "3"));
}

fn sweep(d: &Path, doc: &str) -> Output {
    write(d, "sweep.json", doc);
    let _: SweepDoc = parse_json(doc, "sweep").unwrap();
    oiglab(d, &["sweep", "--spec", "sweep.json"])
}

#[test]
fn sweep_thresholds_optimal_error_is_one_over_n() {
    let d = TempDir::new().unwrap();
    let o = sweep(
        d.path(),
        r#"{"template":{"task":"evaluate","problem":{"family":{"kind":"thresholds"}},"params":{"learner":"oig"}},
            "points":{"kind":"line"},"grid":[3,4,5,6,7,8]}"#,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 6);
    for (row, n) in rows.iter().zip(3..) {
        assert_eq!(row["n"], n.to_string());
        assert_eq!((row["value_num"].as_str(), row["value_den"].clone()), ("1", n.to_string()));
        assert_eq!(row["status"], "ok");
    }
}

#[test]
fn sweep_min_rect_worst_error_is_nonincreasing_and_within_bound() {
    let d = TempDir::new().unwrap();
    let pool: Vec<String> = (0..3).flat_map(|x| (0..3).map(move |y| format!(r#"["{x}","{y}"]"#))).collect();
    let doc = format!(
        r#"{{"template":{{"task":"evaluate","problem":{{"family":{{"kind":"rectangles","d":2}}}},"params":{{"learner":"minrect"}}}},
            "points":{{"kind":"subsets","pool":[{}]}},"grid":[2,3,4,5,6,7,8]}}"#,
        pool.join(",")
    );
    let o = sweep(d.path(), &doc);
    assert!(o.status.success(), "{}", stderr(&o));
    let values: Vec<(usize, f64)> = table(&stdout(&o))
        .iter()
        .map(|r| {
            let num: f64 = r["value_num"].parse().unwrap();
            let den: f64 = r["value_den"].parse().unwrap();
            (r["n"].parse().unwrap(), num / den)
        })
        .collect();
    assert_eq!(values.len(), 7);
    for w in values.windows(2) {
        assert!(w[1].1 <= w[0].1, "{values:?}");
    }
    for &(n, v) in &values {
        assert!(v <= 4.0 / n as f64 + 1e-12, "n = {n}: {v}");
    }
}

#[test]
fn empty_sweep_grid_prints_header_only() {
    let d = TempDir::new().unwrap();
    let o = sweep(
        d.path(),
        r#"{"template":{"task":"orient","problem":{"family":{"kind":"thresholds"}}},"points":{"kind":"line"},"grid":[]}"#,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,instances,value_num,value_den,value,status\n");
}

#[test]
fn failing_sweep_point_does_not_stop_the_sweep() {
    let d = TempDir::new().unwrap();
    let o = sweep(
        d.path(),
        r#"{"template":{"task":"orient","problem":{"family":{"kind":"rectangles","d":2}}},"points":{"kind":"grid","side":2},"grid":[2,5,3]}"#,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.iter().map(|r| r["n"].as_str()).collect::<Vec<_>>(), ["2", "5", "3"]);
    assert_eq!(rows[0]["status"], "ok");
    assert!(rows[1]["status"].starts_with("error:"));
    assert_eq!(rows[2]["status"], "ok");
}

#[test]
fn budget_error_names_the_limit() {
    let d = TempDir::new().unwrap();
    write(d.path(), "thr.json", r#"{"family":{"kind":"thresholds"},"points":[["1"],["2"],["3"],["4"]]}"#);
    let o = oiglab(d.path(), &["orient", "--spec", "thr.json", "--budget-nodes", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget") && stderr(&o).contains('2'), "{}", stderr(&o));

    let env = Command::new(env!("CARGO_BIN_EXE_oiglab"))
        .current_dir(d.path())
        .args(["orient", "--spec", "thr.json"])
        .env("OIGLAB_BUDGET_NODES", "2")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
}

#[test]
fn run_uses_spec_params_and_output_and_flags_override() {
    let d = TempDir::new().unwrap();
    write(d.path(), "rect.json", RECT);
    write(
        d.path(),
        "exp.json",
        r#"{"id":"e1","task":"pac-eval","problem":"rect.json","output":"out.csv",
            "params":{"learner":"minrect","samples":3,"trials":25,"seed":5}}"#,
    );
    let o = oiglab(d.path(), &["run", "--spec", "exp.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let file = std::fs::read_to_string(d.path().join("out.csv")).unwrap();
    let direct = oiglab(d.path(), &["pac-eval", "--spec", "rect.json", "--learner", "minrect", "--samples", "3", "--trials", "25", "--seed", "5"]);
    assert_eq!(file, stdout(&direct));

    let over = oiglab(d.path(), &["run", "--spec", "exp.json", "--seed", "6", "--out", "other.csv"]);
    assert!(over.status.success());
    let other = std::fs::read_to_string(d.path().join("other.csv")).unwrap();
    let direct6 = oiglab(d.path(), &["pac-eval", "--spec", "rect.json", "--learner", "minrect", "--samples", "3", "--trials", "25", "--seed", "6"]);
    assert_eq!(other, stdout(&direct6));
}

#[test]
fn output_uses_lf_line_endings() {
    let d = TempDir::new().unwrap();
    write(d.path(), "path.json", PATH);
    for args in [&["orient", "--spec", "path.json"][..], &["fds", "encode", "--spec", "path.json"], &["build-oig", "--spec", "path.json"]] {
        let o = oiglab(d.path(), args);
        assert!(o.status.success());
        assert!(!o.stdout.contains(&b'\r'));
        assert!(o.stdout.ends_with(b"\n"));
    }
}

#[test]
fn timing_column_is_opt_in() {
    let d = TempDir::new().unwrap();
    write(d.path(), "path.json", PATH);
    let plain = stdout(&oiglab(d.path(), &["orient", "--spec", "path.json"]));
    let timed = stdout(&oiglab(d.path(), &["orient", "--spec", "path.json", "--timing"]));
    assert!(!plain.contains("wall_ms"));
    assert!(timed.lines().next().unwrap().ends_with(",wall_ms"));
}

#[test]
fn evaluate_adversarial_erm_is_worse_than_optimal_on_thresholds() {
    let d = TempDir::new().unwrap();
    write(d.path(), "thr.json", r#"{"family":{"kind":"thresholds"},"points":[["1"],["2"],["3"],["4"]]}"#);
    let opt = table(&stdout(&oiglab(d.path(), &["evaluate", "--spec", "thr.json", "--learner", "oig"])));
    let erm = table(&stdout(&oiglab(d.path(), &["evaluate", "--spec", "thr.json", "--learner", "erm", "--tie", "adversarial"])));
    assert_eq!(opt[0]["worst_error"], "0.250000");
    assert_eq!(erm[0]["worst_error"], "0.500000");
}
