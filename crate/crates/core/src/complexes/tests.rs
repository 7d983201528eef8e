use proptest::prelude::*;

use super::io::{parse_complex, parse_poset, write_complex, write_poset};
use super::*;
use crate::error::Caps;
use crate::graph::{
    interval_bigraph, kronecker_cover, standard_graph, StandardKind, Vertex,
};

fn caps() -> Caps {
    Caps::default()
}

fn k(n: usize) -> Graph {
    standard_graph(StandardKind::Complete, n).unwrap()
}

fn c(n: usize) -> Graph {
    standard_graph(StandardKind::Cycle, n).unwrap()
}

fn chain(n: usize) -> Poset {
    let labels = (0..n).map(|i| format!("c{i}")).collect();
    let rel: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
    Poset::from_relations(labels, &rel).unwrap()
}

/// Independent count of pairs `(σ, τ)` with `σ × τ ⊆ E`, over bitmasks.
fn brute_box_count(g: &Graph, left: u64, right: u64) -> usize {
    let n = g.len();
    let mut count = 0;
    for s in 1u64..(1 << n) {
        if s & !left != 0 {
            continue;
        }
        for t in 1u64..(1 << n) {
            if t & !right != 0 {
                continue;
            }
            let ok = (0..n).all(|a| {
                s >> a & 1 == 0 || (0..n).all(|b| t >> b & 1 == 0 || g.has_edge(a, b))
            });
            count += ok as usize;
        }
    }
    count
}

#[test]
fn box_of_k2() {
    let (p, a) = box_complex(&k(2), &caps()).unwrap();
    assert_eq!(p.labels(), &["({0},{1})", "({1},{0})"]);
    assert_eq!(p.relation_count(), 0);
    assert_eq!(a.map(), &[1, 0]);
}

#[test]
fn box_of_k3_has_twelve_elements() {
    let (p, a) = box_complex(&k(3), &caps()).unwrap();
    assert_eq!(p.len(), 27 - 2 * 8 + 1);
    assert!(a.fixed_points().is_empty());
}

#[test]
fn box_counts_match_brute_force() {
    for g in [k(4), c(5), c(6), standard_graph(StandardKind::Interval, 3).unwrap()] {
        let all = (1u64 << g.len()) - 1;
        let (p, _) = box_complex(&g, &caps()).unwrap();
        assert_eq!(p.len(), brute_box_count(&g, all, all));
    }
}

#[test]
fn edgeless_box_is_empty() {
    let g = Graph::new((0..3usize).map(Vertex::from), []).unwrap();
    let (p, _) = box_complex(&g, &caps()).unwrap();
    assert!(p.is_empty());
}

#[test]
fn bigraph_box() {
    let k2 = interval_bigraph(0, 1).unwrap();
    let (p, _) = box_complex_bigraph(&k2, None, &caps()).unwrap();
    assert_eq!(p.labels(), &["({0},{1})"]);

    let l = interval_bigraph(0, 3).unwrap();
    let (p, _) = box_complex_bigraph(&l, None, &caps()).unwrap();
    let evens: u64 = 0b0101;
    assert_eq!(p.len(), brute_box_count(l.graph(), evens, !evens & 0b1111));
}

#[test]
fn bigraph_box_of_cover_matches_box() {
    for g in [k(2), k(3), k(4), c(4), c(5)] {
        let (x, alpha) = kronecker_cover(&g);
        let (p, pa) = box_complex_bigraph(&x, Some(&alpha), &caps()).unwrap();
        let (q, qa) = box_complex(&g, &caps()).unwrap();
        let m = is_isomorphic_poset(&p, &q, Some((&pa.unwrap(), &qa)), &caps()).unwrap();
        assert!(m.is_some(), "failed for {} vertices", g.len());
    }
}

#[test]
fn hom_from_k2_is_box() {
    let k2 = k(2);
    for g in [k(3), c(5), standard_graph(StandardKind::Interval, 2).unwrap()] {
        let h = hom_complex(&k2, &g, &caps()).unwrap();
        let (b, _) = box_complex(&g, &caps()).unwrap();
        assert_eq!(h, b);
    }
}

#[test]
fn hom_from_point_is_clique_face_poset() {
    let one = standard_graph(StandardKind::OneLoopedVertex, 0).unwrap();
    let mut g = standard_graph(StandardKind::Interval, 3).unwrap();
    g = Graph::new(
        g.vertices().iter().cloned().chain([Vertex::from("z")]),
        g.edges()
            .into_iter()
            .map(|(a, b)| (g.vertex(a as usize).clone(), g.vertex(b as usize).clone()))
            .chain([(Vertex::from(0i64), Vertex::from("z"))]),
    )
    .unwrap();
    let h = hom_complex(&one, &g, &caps()).unwrap();
    let f = face_poset(&clique_complex(&g), &caps()).unwrap();
    assert_eq!(h.len(), 7);
    assert!(is_isomorphic_poset(&h, &f, None, &caps()).unwrap().is_some());
}

#[test]
fn bigraph_hom_from_k2_is_bigraph_box() {
    let k2 = interval_bigraph(0, 1).unwrap();
    let (x, _) = kronecker_cover(&c(5));
    let h = hom_complex_bigraph(&k2, &x, &caps()).unwrap();
    let (b, _) = box_complex_bigraph(&x, None, &caps()).unwrap();
    assert_eq!(h, b);
}

#[test]
fn neighborhood_complexes() {
    let n = neighborhood_complex(&k(3));
    assert_eq!(n.facets(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    let n = neighborhood_complex(&c(5));
    assert_eq!(n.facets().len(), 5);
    assert!(n.facets().iter().all(|f| {
        let d = (f[1] - f[0]) as i64;
        d == 2 || d == 3
    }));
    let n = neighborhood_complex(&k(2));
    assert_eq!(n.facets(), &[vec![0], vec![1]]);
}

#[test]
fn clique_complexes() {
    let i2 = standard_graph(StandardKind::Interval, 2).unwrap();
    assert_eq!(clique_complex(&i2).facets(), &[vec![0, 1], vec![1, 2]]);
    let full = Graph::new(
        (0..3usize).map(Vertex::from),
        (0..3usize).flat_map(|i| (i..3usize).map(move |j| (Vertex::from(i), Vertex::from(j)))),
    )
    .unwrap();
    assert_eq!(clique_complex(&full).facets(), &[vec![0, 1, 2]]);
    assert!(clique_complex(&c(5)).is_empty());
}

#[test]
fn order_complexes() {
    let two = Poset::from_relations(vec!["a".into(), "b".into()], &[]).unwrap();
    assert_eq!(order_complex(&two, &caps()).unwrap().facets(), &[vec![0], vec![1]]);
    let ch = chain(3);
    assert_eq!(order_complex(&ch, &caps()).unwrap().facets(), &[vec![0, 1, 2]]);
    let (b, _) = box_complex(&k(3), &caps()).unwrap();
    let oc = order_complex(&b, &caps()).unwrap();
    assert_eq!(oc.vertex_count(), 12);
    assert_eq!(oc.f_vector(1000).unwrap(), vec![12, 12]);
}

#[test]
fn face_posets() {
    let edge = SimplicialComplex::new(vec!["a".into(), "b".into()], vec![vec![0, 1]]).unwrap();
    let f = face_poset(&edge, &caps()).unwrap();
    assert_eq!(f.labels(), &["{a}", "{b}", "{a,b}"]);
    assert_eq!(f.covers(), vec![(0, 2), (1, 2)]);
    let empty = SimplicialComplex::new(Vec::new(), Vec::new()).unwrap();
    assert!(face_poset(&empty, &caps()).unwrap().is_empty());
}

#[test]
fn product_posets() {
    let grid = product_poset(&chain(2), &chain(2), &caps()).unwrap();
    assert_eq!(grid.len(), 4);
    assert_eq!(grid.covers().len(), 4);
    assert_eq!(grid.minimal_elements().len(), 1);
    let (b, _) = box_complex(&k(2), &caps()).unwrap();
    let bb = product_poset(&b, &b, &caps()).unwrap();
    assert_eq!(bb.len(), 4);
    assert_eq!(bb.relation_count(), 0);
}

#[test]
fn poset_axioms_rejected() {
    let labels = vec!["a".to_string(), "b".to_string()];
    assert!(Poset::from_relations(labels.clone(), &[(0, 1), (1, 0)]).is_err());
    assert!(Poset::from_below(labels.clone(), vec![vec![1], vec![]]).is_ok());
    let three: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    // c > b > a but a missing from c's down-set
    assert!(Poset::from_below(three, vec![vec![], vec![0], vec![1]]).is_err());
}

#[test]
fn covers_of_boolean_lattice() {
    let tri = SimplicialComplex::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![vec![0, 1, 2]],
    )
    .unwrap();
    let f = face_poset(&tri, &caps()).unwrap();
    assert_eq!(f.len(), 7);
    assert_eq!(f.covers().len(), 9);
    assert_eq!(f.relation_count(), 12);
}

#[test]
fn involution_validation() {
    let ch = chain(2);
    assert!(InvolutionAction::on_poset(&ch, vec![1, 0]).is_err());
    assert!(InvolutionAction::on_poset(&ch, vec![0, 1]).is_ok());
    assert!(InvolutionAction::on_graph(&c(5), vec![1, 0, 2, 3, 4]).is_err());
    assert!(InvolutionAction::on_graph(&c(5), vec![0, 4, 3, 2, 1]).is_ok());
}

#[test]
fn poset_map_fibers() {
    let ch = chain(3);
    let pt = chain(1);
    let m = PosetMap::new(&ch, &pt, vec![0, 0, 0]).unwrap();
    assert_eq!(m.fiber_below(&pt, 0), vec![0, 1, 2]);
    assert!(PosetMap::new(&ch, &ch, vec![2, 1, 0]).is_err());
}

#[test]
fn poset_file_round_trip() {
    let (b, _) = box_complex(&k(3), &caps()).unwrap();
    let text = write_poset(&b);
    let back = parse_poset(&text).unwrap();
    assert_eq!(back.len(), 12);
    assert_eq!(write_poset(&back), text);
    assert!(is_isomorphic_poset(&b, &back, None, &caps()).unwrap().is_some());
}

#[test]
fn complex_file_round_trip() {
    let n = neighborhood_complex(&c(5));
    let text = write_complex(&n);
    assert_eq!(text.lines().next(), Some("facet 0 2"));
    let back = parse_complex(&text).unwrap();
    assert_eq!(write_complex(&back), text);
    assert!(parse_complex("facet\n").is_err());
    assert!(parse_poset("el a\ncov a b\n").is_err());
}

#[test]
fn multihom_validation() {
    assert!(MultiHom::new(&k(2), &k(3), vec![vec![0], vec![1, 2]]).is_ok());
    assert!(MultiHom::new(&k(2), &k(3), vec![vec![0, 1], vec![1, 2]]).is_err());
    assert!(MultiHom::new(&k(2), &k(3), vec![vec![], vec![1]]).is_err());
    let k2 = interval_bigraph(0, 1).unwrap();
    let l = interval_bigraph(0, 3).unwrap();
    assert!(MultiHom::new_bigraph(&k2, &l, vec![vec![0, 2], vec![1]]).is_ok());
    assert!(MultiHom::new_bigraph(&k2, &l, vec![vec![1], vec![0]]).is_err());
}

fn arb_multihom(n: usize, m: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(
        proptest::collection::btree_set(0..m as u32, 1..=m).prop_map(|s| s.into_iter().collect()),
        n,
    )
}

proptest! {
    #[test]
    fn composition_associative_and_monotone(
        a in arb_multihom(4, 4),
        b in arb_multihom(4, 4),
        c2 in arb_multihom(4, 4),
        extra in arb_multihom(4, 4),
    ) {
        // the reflexive complete graph accepts every set assignment
        let full = Graph::new(
            (0..4usize).map(Vertex::from),
            (0..4usize).flat_map(|i| (0..4usize).map(move |j| (Vertex::from(i), Vertex::from(j)))),
        ).unwrap();
        let mh = |s: Vec<Vec<u32>>| MultiHom::new(&full, &full, s).unwrap();
        let (a, b, c2) = (mh(a), mh(b), mh(c2));
        prop_assert_eq!(a.then(&b).then(&c2), a.then(&b.then(&c2)));
        let bigger = mh(a.sets().iter().zip(extra.iter()).map(|(x, y)| {
            let mut u: Vec<u32> = x.iter().chain(y).copied().collect();
            u.sort_unstable();
            u.dedup();
            u
        }).collect());
        prop_assert!(a.le(&bigger));
        prop_assert!(a.then(&b).le(&bigger.then(&b)));
        let b_big = mh(b.sets().iter().zip(extra.iter()).map(|(x, y)| {
            let mut u: Vec<u32> = x.iter().chain(y).copied().collect();
            u.sort_unstable();
            u.dedup();
            u
        }).collect());
        prop_assert!(a.then(&b).le(&a.then(&b_big)));
    }

    #[test]
    fn hom_from_k2_equals_box(edges in proptest::collection::vec((0usize..6, 0usize..6), 0..12)) {
        let g = Graph::new(
            (0..6usize).map(Vertex::from),
            edges.into_iter().map(|(a, b)| (Vertex::from(a), Vertex::from(b))),
        ).unwrap();
        let (b, swap) = box_complex(&g, &caps()).unwrap();
        let h = hom_complex(&k(2), &g, &caps()).unwrap();
        prop_assert_eq!(&h, &b);
        prop_assert_eq!(b.len(), brute_box_count(&g, 63, 63));
        prop_assert!(InvolutionAction::on_poset(&h, swap.map().to_vec()).is_ok());
    }
}
