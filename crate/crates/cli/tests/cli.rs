use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use semident_core::{CensusSummary, GraphReport};
use serde_json::Value;

const INSTRUMENT: &str = "3; 1->2 2->3; 2<->3";
const SHARED_PARENT: &str = "4; 1->2 2->3 2->4 3->4; 1<->2 2<->4 3<->4";

fn semident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semident"))
        .args(args)
        .env_remove("SEMIDENT_STORE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn analyze_text() {
    let out = semident(&["analyze", INSTRUMENT]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: generically identifiable"), "{text}");
    assert!(text.contains("vanishing ideal: 0"));
    assert!(
        text.contains("l23: generically identifiable, formula s13 / s12"),
        "{text}"
    );
    assert!(text.contains("TE(1,3): generically identifiable"));

    let out = semident(&[
        "analyze",
        "4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4",
        "--targets",
        "l23,w11",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("verdict: algebraically 2-identified"),
        "{text}"
    );
    assert!(text.contains("l23: algebraically 2-identifiable"), "{text}");
    assert!(text.contains("w11: generically identifiable, formula s11"));
    assert!(!text.contains("l12:"));
}

#[test]
fn analyze_json_round_trips() {
    let out = semident(&["analyze", SHARED_PARENT, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["command"], "analyze");
    assert_eq!(
        value["rendered"]["TE(2,4)"],
        "generically identifiable, formula s14 / s12"
    );
    let report: GraphReport = serde_json::from_value(value["report"].clone()).unwrap();
    assert_eq!(report.graph.to_string(), SHARED_PARENT);
    assert_eq!(serde_json::to_value(&report).unwrap(), value["report"]);
}

#[test]
fn dot_output_parses_and_is_colored() {
    let out = semident(&["analyze", SHARED_PARENT, "--format", "dot"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let ast = dot_parser::ast::Graph::try_from(text.as_str()).expect("valid DOT");
    let graph = dot_parser::canonical::Graph::from(ast);
    assert!(graph.is_digraph);
    let attrs = |list: &dot_parser::ast::AList<_>| -> BTreeMap<String, String> {
        list.elems
            .iter()
            .map(|(k, v): &(dot_parser::ast::ID, dot_parser::ast::ID)| {
                (k.to_string(), v.to_string().trim_matches('"').to_string())
            })
            .collect()
    };
    assert_eq!(graph.nodes.set.len(), 4);
    assert_eq!(attrs(&graph.nodes.set["1"].attr)["color"], "green");
    assert_eq!(attrs(&graph.nodes.set["2"].attr)["color"], "red");
    assert_eq!(graph.edges.set.len(), 7);
    let mut directed = 0;
    let mut bidirected = 0;
    for e in &graph.edges.set {
        let a = attrs(&e.attr);
        let label = a["label"].clone();
        let expected = match label.as_str() {
            "l23" | "w24" => "green",
            _ => "red",
        };
        assert_eq!(a["color"], expected, "{label}");
        if a.get("dir").map(String::as_str) == Some("both") {
            assert_eq!(a["style"], "dashed");
            bidirected += 1;
        } else {
            directed += 1;
        }
    }
    assert_eq!((directed, bidirected), (4, 3));

    let dot = semident(&["dot", SHARED_PARENT]);
    assert_eq!(code(&dot), 0);
    assert_eq!(stdout(&dot), text);
}

fn census(store: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "census",
        "--nodes",
        "3",
        "--store",
        store.to_str().unwrap(),
        "--jobs",
        "1",
    ];
    args.extend_from_slice(extra);
    semident(&args)
}

#[test]
fn census_resume_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("m3.jsonl");
    let out = census(&store, &["--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let summary: CensusSummary = serde_json::from_value(value["summary"].clone()).unwrap();
    assert_eq!(
        (summary.generically_identifiable, summary.not_identifiable),
        (31, 33)
    );
    assert_eq!(summary.needs_instrument, [25, 26, 37, 44]);

    let again = census(&store, &[]);
    assert_eq!(code(&again), 5, "existing store without --resume");

    let before = std::fs::read(&store).unwrap();
    let resumed = census(&store, &["--resume", "--format", "json"]);
    assert_eq!(code(&resumed), 0);
    assert_eq!(std::fs::read(&store).unwrap(), before);
    let value: Value = serde_json::from_str(&stdout(&resumed)).unwrap();
    assert_eq!(
        serde_json::from_value::<CensusSummary>(value["summary"].clone()).unwrap(),
        summary
    );

    let text = stdout(&census(&store, &["--resume"]));
    assert!(text.contains("generically identifiable: 31"), "{text}");

    // dot from a stored record
    let dot = semident(&["dot", "--store", store.to_str().unwrap(), "--id", "37"]);
    assert_eq!(code(&dot), 0);
    assert!(stdout(&dot).contains("label=\"l23\", color=green"));
}

#[test]
fn census_only_and_store_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let env_store = dir.path().join("env.jsonl");
    let flag_store = dir.path().join("flag.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_semident"))
        .args(["census", "--nodes", "3", "--only", "25,26,37,44"])
        .env("SEMIDENT_STORE", &env_store)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(env_store.exists());
    assert!(stdout(&out).contains("identifiable graphs needing an instrument: 4"));

    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_semident"))
        .args([
            "census",
            "--nodes",
            "3",
            "--only",
            "0",
            "--store",
            flag_store.to_str().unwrap(),
        ])
        .env("SEMIDENT_STORE", &env_store)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(flag_store.exists());
    let env_lines = std::fs::read_to_string(&env_store).unwrap().lines().count();
    assert_eq!(env_lines, 5);

    let bad = census(&dir.path().join("x.jsonl"), &["--only", "64"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = semident(&["verify", INSTRUMENT, "--trials", "50"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("l23: pass (50 trials"), "{text}");

    let out = semident(&[
        "verify",
        "4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4",
        "--trials",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["command"], "verify");
    let results = value["results"].as_array().unwrap();
    assert!(!results.is_empty());
    assert!(results
        .iter()
        .all(|r| r["failures"].as_array().unwrap().is_empty()));

    let out = semident(&["verify", "3; 1->2; 1<->2", "--trials", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("l12: skipped (not generically identifiable)"));
}

#[test]
fn criteria_text_and_json() {
    let out = semident(&["criteria", INSTRUMENT]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("2->3: single-door NO; instrumental variable YES (z=1)"),
        "{text}"
    );
    assert!(text.contains("1->2: single-door YES (Z={})"), "{text}");

    let out = semident(&["criteria", SHARED_PARENT, "--format", "json"]);
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["command"], "criteria");
    assert_eq!(value["criteria"]["bow_free"], false);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(code(&semident(&["analyze", "3; 2->1"])), 2);
    assert_eq!(code(&semident(&["analyze", "not a graph"])), 2);
    assert_eq!(code(&semident(&["criteria", "2; 1->2; 1<->3"])), 2);
    assert_eq!(code(&semident(&["dot"])), 2);
    assert_eq!(
        code(&semident(&[
            "census",
            "--nodes",
            "9",
            "--store",
            "/nonexistent/x"
        ])),
        2
    );
    assert_eq!(code(&semident(&["frobnicate"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("broken.jsonl");
    std::fs::write(&store, "garbage\n").unwrap();
    let out = semident(&["dot", "--store", store.to_str().unwrap(), "--id", "1"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn starved_budget_is_unresolved() {
    let out = semident(&[
        "analyze",
        "4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4",
        "--timeout-secs",
        "0",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("unresolved"));
}
