use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::graph::{standard_graph, StandardKind};

fn complete(n: usize) -> Graph {
    standard_graph(StandardKind::Complete, n).unwrap()
}

fn cycle(n: usize) -> Graph {
    standard_graph(StandardKind::Cycle, n).unwrap()
}

fn lp(g: &Graph, v: &[u32]) -> BasedLoop {
    BasedLoop::new(g, v.to_vec()).unwrap()
}

#[test]
fn loop_validation() {
    let g = cycle(5);
    assert!(BasedLoop::new(&g, vec![0, 1, 0]).is_ok());
    assert!(BasedLoop::new(&g, vec![0, 2, 0]).is_err());
    assert!(BasedLoop::new(&g, vec![0, 1]).is_err());
    assert!(BasedLoop::new(&g, vec![]).is_err());
}

#[test]
fn insert_into_trivial_loop() {
    let g = cycle(5);
    let t = BasedLoop::trivial(0);
    let l = move1_insert(&g, &t, 0, 1).unwrap();
    assert_eq!(l.values(), &[0, 1, 0]);
    assert_eq!(move1_delete(&l, 0).unwrap(), t);
    assert!(move1_insert(&g, &t, 0, 2).is_err());
}

#[test]
fn insert_at_the_end() {
    let g = cycle(5);
    let l = lp(&g, &[0, 1, 0]);
    let m = move1_insert(&g, &l, 2, 4).unwrap();
    assert_eq!(m.values(), &[0, 1, 0, 4, 0]);
    assert!(move1_insert(&g, &l, 3, 4).is_err());
    assert!(move1_delete(&m, 1).is_err());
}

#[test]
fn move2_conventions_on_c5() {
    let g = cycle(5);
    let a = lp(&g, &[0, 1, 0]);
    let b = lp(&g, &[0, 4, 0]);
    assert!(!move2_adjacent(&g, &a, &b, Move2Convention::Reflexive).unwrap());
    assert!(move2_adjacent(&g, &a, &b, Move2Convention::Loopless).unwrap());
    assert!(move2_adjacent(&g, &a, &lp(&g, &[0]), Move2Convention::Loopless).is_err());
}

#[test]
fn move2_on_the_cover_of_c5() {
    // even loops of length 4 at (0,0) differing in one position
    let (x, _) = kronecker_cover(&cycle(5));
    let g = x.graph();
    let loops: Vec<BasedLoop> = even_loops(g, 0, 4, 1000)
        .unwrap()
        .into_iter()
        .filter(|l| l.len() == 4)
        .collect();
    let mut found = 0;
    for a in &loops {
        for b in &loops {
            let diff = (0..5).filter(|&i| a.values()[i] != b.values()[i]).count();
            if diff == 1 {
                assert!(move2_adjacent(g, a, b, Move2Convention::Loopless).unwrap());
                assert!(!move2_adjacent(g, a, b, Move2Convention::Reflexive).unwrap());
                found += 1;
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn move2_neighbors_match_condition() {
    let g = complete(4);
    let loops = even_loops(&g, 0, 4, 10_000).unwrap();
    for conv in [Move2Convention::Loopless, Move2Convention::Reflexive] {
        for a in loops.iter().filter(|l| l.len() == 4) {
            let fast: BTreeSet<BasedLoop> = move2_neighbors(&g, a, conv).into_iter().collect();
            let slow: BTreeSet<BasedLoop> = loops
                .iter()
                .filter(|b| b.len() == 4 && *b != a && move2_adjacent(&g, a, b, conv).unwrap())
                .cloned()
                .collect();
            assert_eq!(fast, slow);
        }
    }
}

#[test]
fn parity_examples() {
    let g = cycle(5);
    assert_eq!(parity(&BasedLoop::trivial(0)), 0);
    let five = lp(&g, &[0, 1, 2, 3, 4, 0]);
    assert_eq!(parity(&five), 1);
    assert_eq!(parity(&move1_insert(&g, &five, 2, 3).unwrap()), 1);
}

#[test]
fn spur_is_one_move() {
    let g = cycle(5);
    let t = BasedLoop::trivial(0);
    let s = lp(&g, &[0, 1, 0]);
    let r = equivalent_loops(&g, &t, &s, 4, 1000, Move2Convention::Loopless).unwrap();
    assert_eq!(r, LoopEquivalence::Equivalent(vec![LoopMove::Insert { x: 0, u: 1 }]));
}

#[test]
fn parity_short_circuits() {
    let g = cycle(5);
    let five = lp(&g, &[0, 1, 2, 3, 4, 0]);
    let r = equivalent_loops(&g, &BasedLoop::trivial(0), &five, 6, 1000, Move2Convention::Loopless);
    assert_eq!(r.unwrap(), LoopEquivalence::NotEquivalent);
}

#[test]
fn opposite_windings_stay_apart() {
    // windings +1 and -1 on C5 differ in the even part; the search finds no witness
    let g = cycle(5);
    let a = lp(&g, &[0, 1, 2, 3, 4, 0]);
    let b = lp(&g, &[0, 4, 3, 2, 1, 0]);
    let r = equivalent_loops(&g, &a, &b, 9, 200_000, Move2Convention::Loopless).unwrap();
    assert!(matches!(r, LoopEquivalence::Unknown { .. }), "{r}");
}

#[test]
fn contractible_loop_in_k4() {
    let g = complete(4);
    let a = lp(&g, &[0, 1, 2, 0]);
    let b = lp(&g, &[0, 2, 1, 0]);
    let r = equivalent_loops(&g, &a, &b, 5, 200_000, Move2Convention::Loopless).unwrap();
    let LoopEquivalence::Equivalent(moves) = r else {
        panic!("{r}");
    };
    assert_eq!(replay(&g, &a, &moves, Move2Convention::Loopless).unwrap(), b);
}

#[test]
fn replay_rejects_bad_witness() {
    let g = cycle(5);
    let a = lp(&g, &[0, 1, 0]);
    let bad = [LoopMove::Move2(vec![0, 2, 0])];
    assert!(replay(&g, &a, &bad, Move2Convention::Loopless).is_err());
    assert!(replay(&g, &a, &[LoopMove::Delete { x: 1 }], Move2Convention::Loopless).is_err());
}

#[test]
fn witness_lines_round_trip() {
    let g = cycle(5);
    for m in [
        LoopMove::Insert { x: 2, u: 3 },
        LoopMove::Delete { x: 0 },
        LoopMove::Move2(vec![0, 4, 0]),
    ] {
        let line = m.render(&g);
        assert_eq!(LoopMove::parse(&g, &line).unwrap(), m);
    }
    assert_eq!(LoopMove::Insert { x: 2, u: 3 }.render(&g), "m1+ 2 3");
    assert!(LoopMove::parse(&g, "m3 1").is_err());
}

#[test]
fn loop_lines_round_trip() {
    let g = cycle(5);
    let l = lp(&g, &[0, 1, 2, 1, 0]);
    let line = format_loop("c5", &g, &l);
    assert_eq!(line, "loop c5 0 1 2 1 0");
    assert_eq!(parse_loop(&g, &line).unwrap(), ("c5".to_string(), l));
    assert!(parse_loop(&g, "loop c5 0 2 0").is_err());
}

#[test]
fn lift_formula() {
    let g = complete(3);
    let t = lift_to_cover(&g, &BasedLoop::trivial(1)).unwrap();
    assert_eq!(t.values(), &[1]);
    let l = lift_to_cover(&g, &lp(&g, &[0, 2, 0])).unwrap();
    assert_eq!(l.values(), &[0, 5, 0]);
    assert!(lift_to_cover(&g, &lp(&g, &[0, 1, 2, 0])).is_err());
    let (x, _) = kronecker_cover(&g);
    assert_eq!(x.graph().vertex(5).to_string(), "(1,2)");
    assert!(BasedLoop::new(x.graph(), l.values().to_vec()).is_ok());
}

#[test]
fn lift_is_injective_and_projects_back() {
    let g = complete(4);
    let loops = even_loops(&g, 0, 6, 100_000).unwrap();
    let (x, _) = kronecker_cover(&g);
    let lifted: BTreeSet<BasedLoop> = loops.iter().map(|l| lift_to_cover(&g, l).unwrap()).collect();
    assert_eq!(lifted.len(), loops.len());
    for l in &loops {
        let up = lift_to_cover(&g, l).unwrap();
        assert!(BasedLoop::new(x.graph(), up.values().to_vec()).is_ok());
        let down: Vec<u32> = up.values().iter().map(|&v| v % 4).collect();
        assert_eq!(down, l.values());
    }
    // every loop at (0,0) in the cover arises
    let cover_loops = even_loops(x.graph(), 0, 6, 100_000).unwrap();
    assert_eq!(cover_loops.len(), loops.len());
}

#[test]
fn bigraph_loops_are_even() {
    let (x, _) = kronecker_cover(&cycle(5));
    let mut walk = vec![0u32];
    fn rec(g: &Graph, walk: &mut Vec<u32>, depth: usize) {
        if walk.len() > 1 && walk[0] == *walk.last().unwrap() {
            assert_eq!((walk.len() - 1) % 2, 0);
        }
        if depth == 0 {
            return;
        }
        for &w in g.neighbors(*walk.last().unwrap() as usize) {
            walk.push(w);
            rec(g, walk, depth - 1);
            walk.pop();
        }
    }
    rec(x.graph(), &mut walk, 9);
}

fn cover_setup(g: &Graph) -> (Bigraph, (u32, u32)) {
    let (x, _) = kronecker_cover(g);
    let w = g.neighbors(0)[0];
    (x, (0, g.len() as u32 + w))
}

#[test]
fn phi_of_trivial_loop_is_basepoint() {
    let (x, base) = cover_setup(&cycle(5));
    for n in 0..4 {
        let row = phi(&x, base, &BasedLoop::trivial(0), n).unwrap();
        assert!(row.iter().enumerate().all(|(k, &v)| v == if k % 2 == 0 { base.0 } else { base.1 }));
        let omega = omega_level(&x, base, n, &Caps::default()).unwrap();
        assert!(omega.find(&row).is_some());
    }
}

#[test]
fn phi_of_a_spur_joins_the_basepoint() {
    let (x, base) = cover_setup(&complete(3));
    let spur = lp(x.graph(), &[base.0, base.1, base.0]);
    let omega = omega_level(&x, base, 1, &Caps::default()).unwrap();
    let (_, comp) = omega.components();
    let a = omega.find(&phi(&x, base, &spur, 1).unwrap()).unwrap();
    let b = omega.find(&phi(&x, base, &BasedLoop::trivial(base.0), 1).unwrap()).unwrap();
    assert_eq!(comp[a], comp[b]);
}

#[test]
fn phi_rejects_misfits() {
    let (x, base) = cover_setup(&complete(3));
    let l = lp(x.graph(), &[0, 4, 2, 4, 0]);
    assert!(phi(&x, base, &l, 1).is_err());
    assert!(phi(&x, base, &l, 2).is_ok());
    assert!(phi_at(&x, base, &l, 2, -2).is_ok());
    assert!(phi_at(&x, base, &l, 2, -4).is_err());
    assert!(phi_at(&x, base, &l, 2, -1).is_err());
    let odd_base = lp(x.graph(), &[4, 0, 4]);
    assert!(phi(&x, base, &odd_base, 2).is_err());
}

#[test]
fn phi_carries_move2_to_edges() {
    let (x, base) = cover_setup(&cycle(5));
    let g = x.graph();
    let loops: Vec<BasedLoop> = even_loops(g, base.0, 6, 10_000).unwrap();
    let omega = omega_level(&x, base, 2, &Caps::default()).unwrap();
    let mut pairs = 0;
    for a in loops.iter().filter(|l| l.len() == 4) {
        let ia = omega.find(&phi(&x, base, a, 2).unwrap()).unwrap();
        let nb = omega.neighbors(ia);
        for b in move2_neighbors(g, a, Move2Convention::Loopless) {
            let ib = omega.find(&phi(&x, base, &b, 2).unwrap()).unwrap();
            assert!(nb.contains(&(ib as u32)));
            pairs += 1;
        }
    }
    assert!(pairs > 0);
}

fn check_walk(omega: &Level, walk: &[Vec<u32>]) {
    let idx: Vec<usize> = walk.iter().map(|r| omega.find(r).expect("row in level")).collect();
    for w in idx.windows(2) {
        assert!(omega.neighbors(w[0]).contains(&(w[1] as u32)));
    }
}

#[test]
fn move1_walks_stay_in_the_level() {
    for g in [complete(3), cycle(5), complete(4)] {
        let (x, base) = cover_setup(&g);
        let loops = even_loops(x.graph(), base.0, 4, 10_000).unwrap();
        let n = 2;
        let omega = omega_level(&x, base, n, &Caps::default()).unwrap();
        for l in loops.iter().filter(|l| l.len() <= 2) {
            for at in 0..=l.len() {
                for &u in x.graph().neighbors(l.values()[at] as usize) {
                    let walk = move1_walk(&x, base, l, at, u, n, -2).unwrap();
                    check_walk(&omega, &walk);
                    let target = move1_insert(x.graph(), l, at, u).unwrap();
                    assert_eq!(walk.last().unwrap(), &phi_at(&x, base, &target, n, -2).unwrap());
                }
            }
        }
    }
}

#[test]
fn census_of_k4() {
    let c = pi2_even_classes(&complete(4), 0, 6, census_level(6), &Caps::default()).unwrap();
    assert_eq!(c.level, 2);
    assert_eq!(c.components_hit, 1);
    assert_eq!(c.level_components, 1);
}

#[test]
fn census_of_c5_matches_windings() {
    // displacement of an even closed walk on C5 is a multiple of 5 with the
    // parity of the length, so windings come in steps of 2
    let g = cycle(5);
    let max_len = 10;
    let windings: BTreeSet<i64> = even_loops(&g, 0, max_len, 1_000_000)
        .unwrap()
        .iter()
        .map(|l| {
            let d: i64 = l
                .values()
                .windows(2)
                .map(|w| if (w[0] + 1) % 5 == w[1] { 1 } else { -1 })
                .sum();
            d / 5
        })
        .collect();
    assert_eq!(windings, BTreeSet::from([-2, 0, 2]));
    let c = pi2_even_classes(&g, 0, max_len, census_level(max_len), &Caps::default()).unwrap();
    assert_eq!(c.level, 3);
    assert_eq!(c.components_hit, windings.len());
    assert_eq!(c.level_components, windings.len());
}

#[test]
fn census_of_k2() {
    let c = pi2_even_classes(&complete(2), 0, 8, census_level(8), &Caps::default()).unwrap();
    assert_eq!(c.components_hit, 1);
    assert_eq!(c.loops, 5);
}

#[test]
fn census_neighbor_choice_does_not_matter() {
    let g = cycle(5);
    let (x, _) = kronecker_cover(&g);
    let counts: Vec<usize> = [1u32, 4]
        .iter()
        .map(|&w| omega_level(&x, (0, 5 + w), 3, &Caps::default()).unwrap().components().0)
        .collect();
    assert_eq!(counts[0], counts[1]);
}

#[test]
fn census_rejects_bad_input() {
    let edgeless = Graph::new([Vertex::Int(0)], []).unwrap();
    assert!(pi2_even_classes(&edgeless, 0, 2, 1, &Caps::default()).is_err());
    assert!(pi2_even_classes(&cycle(5), 0, 10, 2, &Caps::default()).is_err());
}

fn random_moves(g: &Graph, start: &BasedLoop, seeds: &[(usize, usize, bool)], max_len: usize) -> BasedLoop {
    let mut cur = start.clone();
    for &(a, b, ins) in seeds {
        if ins && cur.len() + 2 <= max_len {
            let x = a % (cur.len() + 1);
            let nb = g.neighbors(cur.values()[x] as usize);
            cur = move1_insert(g, &cur, x, nb[b % nb.len()]).unwrap();
        } else {
            let spurs: Vec<usize> = (0..cur.len().saturating_sub(1))
                .filter(|&x| cur.values()[x] == cur.values()[x + 2])
                .collect();
            if !spurs.is_empty() {
                cur = move1_delete(&cur, spurs[a % spurs.len()]).unwrap();
            }
        }
    }
    cur
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_replay(seeds in proptest::collection::vec((0usize..8, 0usize..8, any::<bool>()), 1..5)) {
        let g = complete(4);
        let start = lp(&g, &[0, 1, 0]);
        let target = random_moves(&g, &start, &seeds, 5);
        let r = equivalent_loops(&g, &start, &target, 5, 100_000, Move2Convention::Loopless).unwrap();
        let LoopEquivalence::Equivalent(moves) = r else {
            panic!("moves generated a reachable loop");
        };
        prop_assert_eq!(replay(&g, &start, &moves, Move2Convention::Loopless).unwrap(), target);
    }

    #[test]
    fn parity_is_invariant(seeds in proptest::collection::vec((0usize..8, 0usize..8, any::<bool>()), 0..6)) {
        let g = cycle(5);
        let start = lp(&g, &[0, 1, 2, 3, 4, 0]);
        let end = random_moves(&g, &start, &seeds, 11);
        prop_assert_eq!(parity(&end), parity(&start));
    }

    #[test]
    fn lift_respects_insertions(at in 0usize..5, pick in 0usize..4) {
        let g = complete(4);
        let l = lp(&g, &[0, 1, 2, 3, 0]);
        let nb = g.neighbors(l.values()[at] as usize);
        let u = nb[pick % nb.len()];
        let lifted_u = ((at as u32 + 1) % 2) * 4 + u;
        let (x, _) = kronecker_cover(&g);
        let lhs = lift_to_cover(&g, &move1_insert(&g, &l, at, u).unwrap()).unwrap();
        let rhs = move1_insert(x.graph(), &lift_to_cover(&g, &l).unwrap(), at, lifted_u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
