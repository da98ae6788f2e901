//! Text, JSON and DOT renderings of reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use semident_core::{
    CensusSummary, CriteriaTable, CriterionResult, GraphReport, IdentStatus, MixedGraph,
    TargetKind, VerificationReport, Witness,
};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(command: &str, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    })
    .expect("reports serialize");
    s.push('\n');
    s
}

fn vanishing_text(report: &GraphReport) -> String {
    match &report.vanishing_ideal {
        None => "unresolved".to_string(),
        Some(gens) if gens.is_empty() => "0".to_string(),
        Some(gens) => gens
            .iter()
            .map(|g| report.render(g))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

pub fn report_text(report: &GraphReport) -> String {
    let mut out = String::new();
    writeln!(out, "graph: {}", report.graph).unwrap();
    writeln!(out, "verdict: {}", report.verdict.describe()).unwrap();
    writeln!(out, "vanishing ideal: {}", vanishing_text(report)).unwrap();
    for t in &report.targets {
        writeln!(out, "{}: {}", t.label, report.describe(&t.status)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct AnalyzeBody<'a> {
    report: &'a GraphReport,
    /// Label -> human-readable status.
    rendered: BTreeMap<&'a str, String>,
}

pub fn report_json(report: &GraphReport) -> String {
    let rendered = report
        .targets
        .iter()
        .map(|t| (t.label.as_str(), report.describe(&t.status)))
        .collect();
    json("analyze", AnalyzeBody { report, rendered })
}

/// Color and label shape of a status in drawings.
fn style(status: Option<&IdentStatus>) -> (&'static str, &'static str) {
    match status {
        Some(IdentStatus::GenericallyIdentifiable { .. })
        | Some(IdentStatus::TriviallyConstant { .. }) => ("green", "circle"),
        Some(IdentStatus::AlgebraicallyDIdentifiable { .. }) => ("blue", "ellipse"),
        Some(IdentStatus::NotGenericallyIdentifiable) => ("red", "box"),
        Some(IdentStatus::Unresolved { .. }) | None => ("gray", "diamond"),
    }
}

/// Directed edges are solid arrows, bidirected edges dashed double arrows,
/// and `w_ii` is drawn on vertex `i`. Green: generically identifiable, blue:
/// algebraically k-identifiable (k >= 2), red: not identifiable, gray:
/// unresolved. Vertices take the label shape directly; edges carry it in a
/// `labelshape` attribute.
pub fn report_dot(report: &GraphReport) -> String {
    let g = &report.graph;
    let m = g.m();
    let mut out = String::from("digraph sem {\n  rankdir=LR;\n");
    for v in g.vertices() {
        let kind = TargetKind::OmegaEntry { i: v, j: v };
        let (color, shape) = style(report.status(&kind));
        writeln!(
            out,
            "  {v} [label=\"X{v}\\n{}\", color={color}, fontcolor={color}, shape={shape}];",
            kind.label(m)
        )
        .unwrap();
    }
    for &(i, j) in g.directed() {
        let kind = TargetKind::DirectEffect { from: i, to: j };
        let (color, shape) = style(report.status(&kind));
        writeln!(
            out,
            "  {i} -> {j} [label=\"{}\", color={color}, fontcolor={color}, labelshape={shape}];",
            kind.label(m)
        )
        .unwrap();
    }
    for &(i, j) in g.bidirected() {
        let kind = TargetKind::OmegaEntry { i, j };
        let (color, shape) = style(report.status(&kind));
        writeln!(
            out,
            "  {i} -> {j} [dir=both, style=dashed, constraint=false, label=\"{}\", color={color}, fontcolor={color}, labelshape={shape}];",
            kind.label(m)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn summary_json(summary: &CensusSummary) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        summary: &'a CensusSummary,
    }
    json("census", Body { summary })
}

pub fn verification_text(report: &GraphReport, results: &[VerificationReport]) -> String {
    let mut out = String::new();
    writeln!(out, "graph: {}", report.graph).unwrap();
    let m = report.graph.m();
    for t in &report.targets {
        let label = &t.label;
        match results.iter().find(|r| r.target == t.target) {
            None => writeln!(out, "{label}: skipped ({})", report.describe(&t.status)).unwrap(),
            Some(r) if r.ok() => writeln!(
                out,
                "{label}: pass ({} trials, {} degenerate draws skipped)",
                r.passed, r.skipped
            )
            .unwrap(),
            Some(r) => {
                let what = if r.failures.is_empty() {
                    "degree never attained".to_string()
                } else {
                    format!("{} of {} trials failed", r.failures.len(), r.passed)
                };
                writeln!(out, "{label}: FAIL ({what})").unwrap();
                for c in &r.failures {
                    writeln!(
                        out,
                        "  counterexample {}: lambda {:?}, omega {:?}, expected {}, got {}",
                        r.target.label(m),
                        c.lambda,
                        c.omega,
                        c.expected,
                        c.found
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}

pub fn verification_json(report: &GraphReport, results: &[VerificationReport]) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        graph: &'a MixedGraph,
        results: &'a [VerificationReport],
    }
    json(
        "verify",
        Body {
            graph: &report.graph,
            results,
        },
    )
}

fn result_text(r: &CriterionResult) -> String {
    match &r.witness {
        None => "NO".to_string(),
        Some(Witness::Instrument(z)) => format!("YES (z={z})"),
        Some(Witness::ConditioningSet(set)) => {
            let items: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            format!("YES (Z={{{}}})", items.join(","))
        }
    }
}

pub fn criteria_text(g: &MixedGraph, table: &CriteriaTable) -> String {
    let mut out = String::new();
    writeln!(out, "graph: {g}").unwrap();
    writeln!(out, "bow-free: {}", table.bow_free).unwrap();
    for e in &table.edges {
        writeln!(
            out,
            "{}->{}: single-door {}; instrumental variable {}",
            e.from,
            e.to,
            result_text(&e.single_door),
            result_text(&e.instrumental_variable)
        )
        .unwrap();
    }
    for p in &table.total_effects {
        writeln!(
            out,
            "TE({},{}): back-door {}",
            p.from,
            p.to,
            result_text(&p.back_door)
        )
        .unwrap();
    }
    out
}

pub fn criteria_json(g: &MixedGraph, table: &CriteriaTable) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        graph: &'a MixedGraph,
        criteria: &'a CriteriaTable,
    }
    json(
        "criteria",
        Body {
            graph: g,
            criteria: table,
        },
    )
}
