use std::path::Path;

use super::*;
use crate::complexes::{box_complex, neighborhood_complex};
use crate::graph::{graph_homs, interval_bigraph, kronecker_cover, standard_graph, Graph, StandardKind, Vertex};
use crate::topology::{homology, poset_homology, quillen_b_check, Status};

fn k(n: usize) -> Graph {
    standard_graph(StandardKind::Complete, n).unwrap()
}

fn c(n: usize) -> Graph {
    standard_graph(StandardKind::Cycle, n).unwrap()
}

fn small() -> Budgets {
    Budgets {
        cycle_levels: 5,
        ..Budgets::default()
    }
}

fn corpus_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

#[test]
fn claim_ids_round_trip() {
    for c in Claim::ALL {
        assert_eq!(c.id().parse::<Claim>().unwrap(), c);
    }
    assert_eq!(parse_claims("all").unwrap(), Claim::ALL.to_vec());
    assert_eq!(
        parse_claims("loop-classes,box-iso,box-iso").unwrap(),
        vec![Claim::BoxIso, Claim::LoopClasses]
    );
    assert!(parse_claims("box-iso,nope").is_err());
}

#[test]
fn box_iso_k3_has_twelve_element_witness() {
    let r = check_box_iso(&k(3), "k3", &Caps::default()).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert_eq!(r.evidence.iter().filter(|e| e.starts_with("witness ")).count(), 12);
}

#[test]
fn box_iso_k2_and_c7() {
    let r = check_box_iso(&k(2), "k2", &Caps::default()).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert!(r.evidence.contains(&"elements: 2".to_string()));
    assert_eq!(check_box_iso(&c(7), "c7", &Caps::default()).unwrap().status, Outcome::Pass);
}

#[test]
fn babson_kozlov_spheres_and_empty() {
    let b = small();
    for (g, s) in [(k(3), 1), (k(4), 2)] {
        let r = check_babson_kozlov(&g, "g", &b).unwrap();
        assert_eq!(r.status, Outcome::Pass);
        let (bx, _) = box_complex(&g, &b.caps).unwrap();
        let h = poset_homology(&bx, 3, &b.caps).unwrap();
        assert_eq!(h.betti[s], 1);
    }
    let edgeless = Graph::new((0..3).map(Vertex::Int), std::iter::empty()).unwrap();
    let r = check_babson_kozlov(&edgeless, "e3", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert!(r.evidence.iter().any(|e| e == "H_0 | 0 | 0"));
}

#[test]
fn broken_construction_fails_with_exact_mismatch() {
    let caps = Caps::default();
    let (bx, _) = box_complex(&k(3), &caps).unwrap();
    let hb = poset_homology(&bx, 3, &caps).unwrap();
    let wrong = homology(&neighborhood_complex(&k(4)), 3, &caps).unwrap();
    let r = compare_homology(Claim::BabsonKozlov, "k3", ("B(G)", &hb), ("N(K4)", &wrong));
    assert_eq!(r.status, Outcome::Fail);
    assert!(r.evidence.iter().any(|e| e == "mismatch: H_1 Z vs 0"));
    let ok = compare_homology(Claim::BabsonKozlov, "k3", ("a", &hb), ("b", &hb));
    assert!(ok.evidence.last().unwrap().contains("consistent with"));
}

#[test]
fn clique_box_examples() {
    let b = small();
    let l01 = interval_bigraph(0, 1).unwrap();
    let l03 = interval_bigraph(0, 3).unwrap();
    let (k2k3, _) = kronecker_cover(&k(3));
    for (x, name) in [(l01, "l0_1"), (l03, "l0_3"), (k2k3, "k2xk3")] {
        let r = check_clique_box(&x, name, &b).unwrap();
        assert_eq!(r.status, Outcome::Pass, "{name}: {:?}", r.evidence);
    }
}

#[test]
fn fold_invariance_examples() {
    let b = small();
    let r = check_fold_invariance(&interval_bigraph(-2, 3).unwrap(), "lm2_3", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert_eq!(r.evidence[0], "dismantlable vertices: 2");
    let (c6, _) = kronecker_cover(&k(3));
    let r = check_fold_invariance(&c6, "k2xk3", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert!(r.evidence.iter().any(|e| e.contains("vacuous")));
}

#[test]
fn group_order_classification() {
    let caps = Caps::default();
    let order = |g: &Graph| {
        let p = crate::topology::edge_path_presentation(&neighborhood_complex(g), 0, &caps).unwrap();
        GroupOrder::of(&p)
    };
    assert_eq!(order(&k(4)), GroupOrder::Finite(1));
    assert_eq!(order(&k(3)), GroupOrder::Infinite);
    assert_eq!(order(&c(5)), GroupOrder::Infinite);
    assert_eq!(order(&c(4)), GroupOrder::Finite(1));
}

#[test]
fn loop_classes_examples() {
    let b = small();
    for (g, name) in [(k(2), "k2"), (k(4), "k4"), (k(3), "k3"), (c(5), "c5")] {
        let r = check_loop_classes(&g, 0, name, &b).unwrap();
        assert_eq!(r.status, Outcome::Pass, "{name}: {:?}", r.evidence);
    }
    let r = check_loop_classes(&c(5), 0, "c5", &b).unwrap();
    assert!(r.evidence.iter().any(|e| e.contains("census: loops<=10") && e.ends_with("level-components=3")));
    let isolated = Graph::new([Vertex::Int(0), Vertex::Int(1)], std::iter::empty()).unwrap();
    assert_eq!(check_loop_classes(&isolated, 0, "e2", &b).unwrap().status, Outcome::Unknown);
}

#[test]
fn k3_census_reaches_every_level_component() {
    let b = small();
    let r = check_loop_classes(&k(3), 0, "k3", &b).unwrap();
    let line = r.evidence.iter().find(|e| e.starts_with("census:")).unwrap();
    assert!(line.ends_with("level-components=3"), "{line}");
}

#[test]
fn hom_count_oracle_matches_enumeration() {
    let caps = Caps::default();
    for g in [k(3), c(5), k(4)] {
        for m in 3..8 {
            let homs = graph_homs(&c(m), &g, &caps).unwrap().len() as u128;
            assert_eq!(hom_count_oracle(&g, m), homs);
        }
    }
}

#[test]
fn cycle_tower_table() {
    let b = small();
    let r = check_cycle_towers(&k(2), "k2", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass, "{:?}", r.evidence);
    let r = check_cycle_towers(&k(3), "k3", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass, "{:?}", r.evidence);
    let r = check_cycle_towers(&k(4), "k4", &b).unwrap();
    assert_eq!(r.status, Outcome::Unknown);
}

#[test]
fn endpoint_fibers_on_k2_and_path() {
    let b = small();
    let l01 = interval_bigraph(0, 1).unwrap();
    let a = reflection_involution(&l01);
    assert!(a.is_some());
    let r = check_endpoint_fibers(&l01, a.as_ref(), "l0_1", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    let l03 = interval_bigraph(0, 3).unwrap();
    let r = check_endpoint_fibers(&l03, reflection_involution(&l03).as_ref(), "l0_3", &b).unwrap();
    assert_eq!(r.status, Outcome::Pass, "{:?}", r.evidence);
}

#[test]
fn endpoint_fibers_k2xk3_truncation_and_zigzag() {
    let caps = Caps::default();
    let (x, alpha) = kronecker_cover(&k(3));
    let fm = endpoint_fiber_map(&x, Some(&alpha), 1, &caps).unwrap();
    assert_eq!((fm.source.len(), fm.target.len()), (4560, 360));
    let plain = quillen_b_check(&fm.source, &fm.target, &fm.map, None, false, 3, &caps).unwrap();
    assert_eq!(plain.status, Status::Refuted);
    let zz = zigzag_pi0(&fm, &x, &caps).unwrap();
    assert!(zz.violations.is_empty(), "{:?}", &zz.violations[..3.min(zz.violations.len())]);
    assert_eq!(zz.pairs, 1656);
    let r = check_endpoint_fibers(&x, Some(&alpha), "k2xk3", &small()).unwrap();
    assert_eq!(r.status, Outcome::Unknown);
}

#[test]
fn reflection_involution_needs_odd_width() {
    assert!(reflection_involution(&interval_bigraph(0, 3).unwrap()).is_some());
    assert!(reflection_involution(&interval_bigraph(-2, 3).unwrap()).is_some());
    assert!(reflection_involution(&interval_bigraph(0, 2).unwrap()).is_none());
}

#[test]
fn pinned_manifest_loads() {
    let corpus = load_manifest(&corpus_dir().join("corpus.manifest")).unwrap();
    let names: Vec<&str> = corpus.iter().map(Instance::name).collect();
    for want in ["k2", "k3", "k4", "k5", "c4", "c5", "c6", "c7", "p5", "chair", "l0_3", "lm2_3"] {
        assert!(names.contains(&want), "{want}");
    }
    let graphs = corpus.iter().filter(|i| matches!(i, Instance::Graph { .. })).count();
    assert_eq!(graphs, 14);
    let l03 = corpus.iter().find(|i| i.name() == "l0_3").unwrap();
    assert!(l03.bigraph().1.is_some());
    assert_eq!(l03.check_name(Claim::CliqueBox), "l0_3");
    let k3 = corpus.iter().find(|i| i.name() == "k3").unwrap();
    assert_eq!(k3.check_name(Claim::CliqueBox), "k2xk3");
    assert!(!l03.supports(Claim::BoxIso));
}

#[test]
fn malformed_manifest_is_a_parse_error() {
    let dir = tempdir();
    std::fs::write(dir.join("a.g"), "graph a\nv 0\n").unwrap();
    std::fs::write(dir.join("b.g"), "graph a\nv 1\n").unwrap();
    assert!(matches!(
        parse_manifest("a.g\nmissing.g\n", &dir),
        Err(Error::Parse { line: 2, .. })
    ));
    assert!(matches!(parse_manifest("a.g extra\n", &dir), Err(Error::Parse { line: 1, .. })));
    assert!(parse_manifest("a.g\nb.g\n", &dir).is_err());
    assert_eq!(parse_manifest("# only\n\na.g\n", &dir).unwrap().len(), 1);
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("boxloop-verify-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn suite_is_deterministic_across_job_counts() {
    let corpus = vec![
        Instance::Graph {
            name: "k3".into(),
            graph: k(3),
        },
        Instance::Graph {
            name: "k2".into(),
            graph: k(2),
        },
        Instance::Bigraph {
            name: "l0_3".into(),
            graph: interval_bigraph(0, 3).unwrap(),
            involution: reflection_involution(&interval_bigraph(0, 3).unwrap()),
        },
    ];
    let claims = [Claim::BoxIso, Claim::CliqueBox, Claim::FoldInvariance, Claim::LoopClasses];
    let b = small();
    let one = run_suite(&corpus, &claims, &b, 1).unwrap();
    let many = run_suite(&corpus, &claims, &b, 4).unwrap();
    assert_eq!(one, many);
    let text = one.render();
    assert_eq!(text, many.render());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "CHECK box-iso k2 pass box-iso__k2.txt");
    assert_eq!(lines[1], "CHECK box-iso k3 pass box-iso__k3.txt");
    assert_eq!(lines[2], "CHECK clique-box k2xk2 pass clique-box__k2xk2.txt");
    assert_eq!(*lines.last().unwrap(), "SUMMARY pass=10 fail=0 unknown=0");
    assert!(!one.any_fail());
}

#[test]
fn budget_errors_become_unknown() {
    let mut b = small();
    b.caps.poset_elements = 5;
    let inst = Instance::Graph {
        name: "k4".into(),
        graph: k(4),
    };
    let r = run_check(Claim::BabsonKozlov, &inst, &b).unwrap();
    assert_eq!(r.status, Outcome::Unknown);
    assert!(r.evidence[0].starts_with("budget exhausted"));
}

#[test]
fn evidence_files_are_written() {
    let dir = tempdir().join("ev");
    let inst = Instance::Graph {
        name: "k3".into(),
        graph: k(3),
    };
    let report = run_suite(&[inst], &[Claim::BoxIso], &small(), 1).unwrap();
    report.write_evidence(&dir).unwrap();
    let text = std::fs::read_to_string(dir.join("box-iso__k3.txt")).unwrap();
    assert!(text.starts_with("claim box-iso\ninstance k3\nstatus pass\n"));
    std::fs::remove_dir_all(dir.parent().unwrap()).ok();
}
