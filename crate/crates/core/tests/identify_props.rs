use std::collections::BTreeMap;

use semident_core::algebra::{rational, Polynomial, Strategy};
use semident_core::{
    back_door, classify_graph, classify_parameter, criteria_table, enumerate_graphs, is_bow_free,
    sample_parameters, sigma_numeric, verify_numeric, ClassifyOptions, GraphReport, IdentStatus,
    MixedGraph, Parametrization, Presentation, TargetKind, Verdict,
};

fn small_graphs() -> impl Iterator<Item = MixedGraph> {
    (1..=3).flat_map(|m| enumerate_graphs(m).unwrap())
}

fn graph(text: &str) -> MixedGraph {
    text.parse().unwrap()
}

fn reports() -> Vec<GraphReport> {
    small_graphs()
        .map(|g| classify_graph(&g, &ClassifyOptions::default()))
        .collect()
}

fn lambda_statuses(report: &GraphReport) -> impl Iterator<Item = (&TargetKind, &IdentStatus)> {
    report
        .targets
        .iter()
        .filter(|t| matches!(t.target, TargetKind::DirectEffect { .. }))
        .map(|t| (&t.target, &t.status))
}

#[test]
fn direct_and_reduced_presentations_agree() {
    let direct = ClassifyOptions {
        presentation: Presentation::Direct,
        ..ClassifyOptions::default()
    };
    let mut normal = ClassifyOptions::default();
    normal.budget.strategy = Strategy::Normal;
    for g in small_graphs() {
        let reduced = classify_graph(&g, &ClassifyOptions::default()).without_timings();
        assert_eq!(
            classify_graph(&g, &direct).without_timings(),
            reduced,
            "{g}: presentations differ"
        );
        assert_eq!(
            classify_graph(&g, &normal).without_timings(),
            reduced,
            "{g}: strategies differ"
        );
    }
}

#[test]
fn direct_and_reduced_agree_on_the_quadratic_example() {
    let g = graph("4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4");
    let p = Parametrization::new(&g);
    let direct = ClassifyOptions {
        presentation: Presentation::Direct,
        ..ClassifyOptions::default()
    };
    for kind in [
        TargetKind::DirectEffect { from: 2, to: 3 },
        TargetKind::DirectEffect { from: 3, to: 4 },
        TargetKind::OmegaEntry { i: 1, j: 1 },
    ] {
        let t = p.target(kind.clone()).unwrap();
        let a = classify_parameter(&g, &t, &direct).unwrap();
        let b = classify_parameter(&g, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(a, b, "{kind:?}");
    }
}

#[test]
fn identified_targets_verify_on_exact_samples() {
    let mut checked = 0;
    for g in small_graphs() {
        let report = classify_graph(&g, &ClassifyOptions::default());
        let p = Parametrization::new(&g);
        for (t, tr) in p.all_targets().iter().zip(&report.targets) {
            if tr.status.degree().is_none() {
                continue;
            }
            let v = verify_numeric(&g, t, &tr.status, 100, 1).unwrap();
            assert!(v.ok(), "{g}: {} failed: {:?}", tr.label, v.failures);
            assert_eq!(v.passed, 100, "{g}: {}", tr.label);
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn wrong_formula_is_caught() {
    let g = graph("3; 1->2 2->3; 2<->3");
    let p = Parametrization::new(&g);
    let t = p
        .target(TargetKind::DirectEffect { from: 2, to: 3 })
        .unwrap();
    let report = classify_graph(&g, &ClassifyOptions::default());
    let IdentStatus::GenericallyIdentifiable { mut formula } =
        report.status(&t.kind).unwrap().clone()
    else {
        panic!("l23 should be generic");
    };
    let ring = report.ring.clone();
    formula.numerator = &formula.numerator + &ring.parse("s11").unwrap();
    let bad = IdentStatus::GenericallyIdentifiable { formula };
    let v = verify_numeric(&g, &t, &bad, 20, 0).unwrap();
    assert!(!v.ok());
    assert!(!v.failures.is_empty());
}

#[test]
fn instrument_formula_and_degenerate_draws() {
    let g = graph("3; 1->2 2->3; 2<->3");
    let report = classify_graph(&g, &ClassifyOptions::default());
    assert_eq!(report.verdict, Verdict::GenericallyIdentifiable);
    let IdentStatus::GenericallyIdentifiable { formula } = report.status_by_label("l23").unwrap()
    else {
        panic!("l23 should be generic");
    };
    assert_eq!(formula.render(&report.ring, &report.order), "s13 / s12");
    // sigma12 = 2, sigma13 = 6 at theta = (1, 1, 0, 1, 2, 3)
    let lambda: BTreeMap<_, _> = [((1, 2), rational(2, 1)), ((2, 3), rational(3, 1))].into();
    let mut omega = semident_core::RationalMatrix::identity(3);
    omega.set(1, 2, rational(0, 1));
    let sigma = sigma_numeric(&g, &lambda, &omega).unwrap();
    let mut point = vec![rational(0, 1); report.ring.dim()];
    for (k, (i, j)) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
        .into_iter()
        .enumerate()
    {
        point[k + 1] = sigma.get(i - 1, j - 1).clone();
    }
    let value =
        formula.numerator.evaluate(&point).unwrap() / formula.denominator.evaluate(&point).unwrap();
    assert_eq!(value, rational(3, 1));

    // lambda12 = 0 makes the denominator vanish; those draws are skipped
    let p = Parametrization::new(&g);
    let t = p
        .target(TargetKind::DirectEffect { from: 2, to: 3 })
        .unwrap();
    let v = verify_numeric(&g, &t, report.status(&t.kind).unwrap(), 100, 3).unwrap();
    assert!(v.ok());
    assert!(v.skipped > 0);
}

#[test]
fn sampled_omega_is_positive_definite() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    for g in enumerate_graphs(3).unwrap() {
        let (_, omega) = sample_parameters(&g, &mut rng);
        assert!(omega.is_symmetric() && omega.is_positive_definite());
        for i in 1..=3 {
            for j in i + 1..=3 {
                if !g.has_bidirected(i, j) {
                    assert_eq!(omega.get(i - 1, j - 1), &rational(0, 1));
                }
            }
        }
    }
}

#[test]
fn omega_consistency_and_census_invariants() {
    for report in reports() {
        let g = &report.graph;
        let all_lambda = lambda_statuses(&report).all(|(_, s)| s.degree() == Some(1));
        if all_lambda {
            for t in report
                .targets
                .iter()
                .filter(|t| matches!(t.target, TargetKind::OmegaEntry { .. }))
            {
                assert_eq!(t.status.degree(), Some(1), "{g}: {}", t.label);
            }
        }
        if is_bow_free(g) {
            assert_eq!(report.verdict, Verdict::GenericallyIdentifiable, "{g}");
        }
        assert!(report.targets.iter().all(|t| !t.status.is_unresolved()));
        assert!(
            !matches!(report.verdict, Verdict::AlgebraicallyIdentified { .. }),
            "{g}"
        );
    }
}

#[test]
fn criteria_are_sound_and_complete_on_three_vertices() {
    for report in reports() {
        let g = &report.graph;
        let table = criteria_table(g);
        for e in &table.edges {
            let status = report
                .status(&TargetKind::DirectEffect {
                    from: e.from,
                    to: e.to,
                })
                .unwrap();
            assert_eq!(
                e.certified(),
                status.degree() == Some(1),
                "{g}: {}->{}",
                e.from,
                e.to
            );
        }
        for pc in &table.total_effects {
            if pc.back_door.satisfied() {
                let status = report
                    .status(&TargetKind::TotalEffect {
                        from: pc.from,
                        to: pc.to,
                    })
                    .unwrap();
                assert_eq!(status.degree(), Some(1), "{g}: TE({},{})", pc.from, pc.to);
            }
        }
    }
}

#[test]
fn bow_freeness_is_monotone() {
    for g in enumerate_graphs(4).unwrap().filter(is_bow_free) {
        for &(i, j) in g.bidirected() {
            let b: Vec<_> = g
                .bidirected()
                .iter()
                .copied()
                .filter(|e| *e != (i, j))
                .collect();
            let smaller = MixedGraph::new(4, g.directed().iter().copied(), b).unwrap();
            assert!(is_bow_free(&smaller));
        }
    }
    assert_eq!(
        enumerate_graphs(4).unwrap().filter(is_bow_free).count(),
        729
    );
}

#[test]
fn partially_identified_three_vertex_graph() {
    let g = graph("3; 1->2 2->3; 1<->2 2<->3");
    let report = classify_graph(&g, &ClassifyOptions::default());
    assert_eq!(report.verdict, Verdict::NotIdentifiable);
    assert_eq!(
        report.status_by_label("l12"),
        Some(&IdentStatus::NotGenericallyIdentifiable)
    );
    assert_eq!(report.status_by_label("l23").unwrap().degree(), Some(1));
    assert_eq!(report.status_by_label("w11").unwrap().degree(), Some(1));
    assert_eq!(report.status_by_label("w33").unwrap().degree(), Some(1));
    let IdentStatus::GenericallyIdentifiable { formula } = report.status_by_label("w23").unwrap()
    else {
        panic!("w23 should be generic");
    };
    let ring = &report.ring;
    let expected_num = ring.parse("s12*s23 - s13*s22").unwrap();
    let expected_den = ring.parse("s12").unwrap();
    // equal as rational functions
    assert_eq!(
        &formula.numerator * &expected_den,
        &expected_num * &formula.denominator
    );
    assert_eq!(
        formula.render(ring, &report.order),
        "(-s13*s22 + s12*s23) / s12"
    );
    assert!(!back_door(&g, 1, 2).unwrap().satisfied());
}

#[test]
fn empty_graph_reads_off_the_diagonal() {
    let g = graph("3; ;");
    let report = classify_graph(&g, &ClassifyOptions::default());
    assert_eq!(report.verdict, Verdict::GenericallyIdentifiable);
    for i in 1..=3 {
        let IdentStatus::GenericallyIdentifiable { formula } =
            report.status_by_label(&format!("w{i}{i}")).unwrap()
        else {
            panic!("diagonal should be generic");
        };
        assert_eq!(
            formula.render(&report.ring, &report.order),
            format!("s{i}{i}")
        );
    }
    let vanishing = report.vanishing_ideal.as_ref().unwrap();
    let mut rendered: Vec<String> = vanishing.iter().map(|p| report.render(p)).collect();
    rendered.sort();
    assert_eq!(rendered, ["s12", "s13", "s23"]);
}

#[test]
fn reports_are_deterministic() {
    for text in [
        "4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4",
        "4; 1->2 2->3 2->4 3->4; 1<->2 2<->4 3<->4",
    ] {
        let g = graph(text);
        let a = classify_graph(&g, &ClassifyOptions::default()).without_timings();
        let b = classify_graph(&g, &ClassifyOptions::default()).without_timings();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let back: GraphReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }
}

#[test]
fn constant_targets_skip_the_engine() {
    let g = graph("2; 1->2");
    let p = Parametrization::new(&g);
    let t = semident_core::ParameterTarget {
        kind: TargetKind::TotalEffect { from: 1, to: 2 },
        polynomial: Polynomial::zero(p.ring().dim()),
    };
    let status = classify_parameter(&g, &t, &ClassifyOptions::default()).unwrap();
    assert_eq!(status, IdentStatus::TriviallyConstant { value: "0".into() });
    assert!(status.is_generic());
}

#[test]
fn budget_exhaustion_is_unresolved_not_misclassified() {
    let g = graph("4; 1->2 2->3 3->4; 1<->2 1<->3 1<->4");
    let mut options = ClassifyOptions::default();
    options.budget.max_pairs = Some(1);
    let starved = classify_graph(&g, &options);
    let full = classify_graph(&g, &ClassifyOptions::default());
    assert!(starved.any_unresolved());
    assert_eq!(starved.verdict, Verdict::Unresolved);
    for (a, b) in starved.targets.iter().zip(&full.targets) {
        assert!(
            a.status.is_unresolved() || a.status == b.status,
            "{}",
            a.label
        );
    }
}
