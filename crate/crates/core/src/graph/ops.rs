use std::collections::{HashSet, VecDeque};

use super::{Bigraph, Graph, GraphHom, OddInvolution, Vertex};
use crate::error::{check_cap, Caps, Error, Result};

/// Categorical product `G × H`; vertex `(a, b)` sits at index `ia * |H| + ib`.
pub fn product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.len();
    let mut vertices = Vec::with_capacity(g.len() * nh);
    for a in g.vertices() {
        for b in h.vertices() {
            vertices.push(Vertex::pair(a.clone(), b.clone()));
        }
    }
    let mut adj = vec![Vec::new(); vertices.len()];
    for a in 0..g.len() {
        for b in 0..nh {
            let list = &mut adj[a * nh + b];
            for &a2 in g.neighbors(a) {
                for &b2 in h.neighbors(b) {
                    list.push(a2 * nh as u32 + b2);
                }
            }
        }
    }
    Graph::from_parts(vertices, adj)
}

/// `X × G` as a bigraph colored through the first projection.
pub fn product_bigraph(x: &Bigraph, g: &Graph) -> Bigraph {
    let graph = product(x.graph(), g);
    let colors = (0..x.len())
        .flat_map(|i| std::iter::repeat(x.color(i)).take(g.len()))
        .collect();
    Bigraph::new(graph, colors).expect("product with a bigraph is properly colored")
}

/// The Kronecker double cover `K₂ × G` with its deck involution `(i, v) ↔ (1 - i, v)`.
pub fn kronecker_cover(g: &Graph) -> (Bigraph, OddInvolution) {
    let k2 = super::interval_bigraph(0, 1).expect("K2");
    let x = product_bigraph(&k2, g);
    let n = g.len() as u32;
    let map = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
    let alpha = OddInvolution::new(&x, map).expect("deck transformation is an odd involution");
    (x, alpha)
}

/// `X/α`: one vertex per orbit, labelled by its color-0 member.
pub fn quotient_by_involution(x: &Bigraph, alpha: &OddInvolution) -> Graph {
    let g = x.graph();
    let rep = |i: usize| -> usize {
        let j = alpha.apply(i);
        assert_ne!(i, j, "odd involutions are fixed-point free");
        if x.color(i) == 0 {
            i
        } else {
            j
        }
    };
    let vertices: Vec<Vertex> = x
        .part(0)
        .iter()
        .map(|&i| g.vertex(i as usize).clone())
        .collect();
    let edges = g.edges().into_iter().map(|(a, b)| {
        (
            g.vertex(rep(a as usize)).clone(),
            g.vertex(rep(b as usize)).clone(),
        )
    });
    Graph::new(vertices, edges).expect("orbit representatives are declared")
}

/// Mixed-radix enumeration of vertex maps: `domains[i]` lists the allowed
/// images of source vertex `i`. Maps are ordered lexicographically.
struct MapSpace {
    domains: Vec<Vec<u32>>,
    /// position of a target vertex inside `domains[i]`
    slot: Vec<Vec<u32>>,
    weights: Vec<usize>,
    total: usize,
}

impl MapSpace {
    fn new(domains: Vec<Vec<u32>>, target_len: usize, cap: usize) -> Result<MapSpace> {
        let mut total: usize = 1;
        for d in &domains {
            total = total.checked_mul(d.len()).unwrap_or(usize::MAX);
            if total > cap {
                return Err(Error::SizeCap {
                    what: "exponential graph vertices",
                    bound: cap,
                    counted: total,
                });
            }
        }
        let mut weights = vec![1usize; domains.len()];
        for i in (0..domains.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * domains[i + 1].len();
        }
        let slot = domains
            .iter()
            .map(|d| {
                let mut s = vec![u32::MAX; target_len];
                for (k, &t) in d.iter().enumerate() {
                    s[t as usize] = k as u32;
                }
                s
            })
            .collect();
        Ok(MapSpace {
            domains,
            slot,
            weights,
            total,
        })
    }

    fn decode(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.domains.len()];
        for i in 0..self.domains.len() {
            let w = self.weights[i];
            out[i] = self.domains[i][idx / w];
            idx %= w;
        }
        out
    }

    fn encode(&self, map: &[u32]) -> usize {
        map.iter()
            .enumerate()
            .map(|(i, &t)| self.slot[i][t as usize] as usize * self.weights[i])
            .sum()
    }
}

fn exponential_over(
    source: &Graph,
    target: &Graph,
    domains: Vec<Vec<u32>>,
    caps: &Caps,
) -> Result<Graph> {
    let space = MapSpace::new(domains, target.len(), caps.exponential_vertices)?;
    let mut vertices = Vec::with_capacity(space.total);
    let mut adj = Vec::with_capacity(space.total);
    let mut edges = 0usize;
    for idx in 0..space.total {
        let f = space.decode(idx);
        vertices.push(Vertex::Tuple(
            f.iter().map(|&t| target.vertex(t as usize).clone()).collect(),
        ));
        // g(y) must be adjacent to f(x) for every neighbor x of y
        let cands: Vec<Vec<u32>> = (0..source.len())
            .map(|y| {
                let nbr_images: Vec<u32> = source
                    .neighbors(y)
                    .iter()
                    .map(|&x| f[x as usize])
                    .collect();
                let mut c = target.common_neighbors(&nbr_images);
                c.retain(|&t| space.slot[y][t as usize] != u32::MAX);
                c
            })
            .collect();
        let mut list = Vec::new();
        for_each_product(&cands, &mut |g| list.push(space.encode(g) as u32));
        edges += list.len();
        check_cap("exponential graph adjacencies", caps.level_edges * 2, edges)?;
        adj.push(list);
    }
    Ok(Graph::from_parts(vertices, adj))
}

pub(crate) fn for_each_product(cands: &[Vec<u32>], f: &mut dyn FnMut(&[u32])) {
    if cands.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut cur: Vec<u32> = cands.iter().map(|c| c[0]).collect();
    let mut pos = vec![0usize; cands.len()];
    loop {
        f(&cur);
        let mut i = cands.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < cands[i].len() {
                cur[i] = cands[i][pos[i]];
                break;
            }
            pos[i] = 0;
            cur[i] = cands[i][0];
        }
    }
}

/// The exponential graph `exp(G, H)`: all vertex maps, `f ~ g` iff
/// `(f × g)(E(G)) ⊆ E(H)`. Looped vertices are exactly the homomorphisms.
pub fn exponential(g: &Graph, h: &Graph, caps: &Caps) -> Result<Graph> {
    let domains = vec![(0..h.len() as u32).collect(); g.len()];
    exponential_over(g, h, domains, caps)
}

/// `Y^X` for bigraphs: the induced subgraph on color-respecting maps.
pub fn exponential_bigraph(x: &Bigraph, y: &Bigraph, caps: &Caps) -> Result<Graph> {
    let parts = [y.part(0), y.part(1)];
    let domains = (0..x.len())
        .map(|i| parts[x.color(i) as usize].clone())
        .collect();
    exponential_over(x.graph(), y.graph(), domains, caps)
}

fn search_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
    }
    order
}

fn homs_with_domains(
    source: &Graph,
    target: &Graph,
    domains: &[Vec<u32>],
    cap: usize,
) -> Result<Vec<Vec<u32>>> {
    let order = search_order(source);
    let mut pos_in_order = vec![0usize; source.len()];
    for (k, &v) in order.iter().enumerate() {
        pos_in_order[v] = k;
    }
    let mut out = Vec::new();
    let mut map = vec![u32::MAX; source.len()];
    fn rec(
        k: usize,
        order: &[usize],
        pos_in_order: &[usize],
        source: &Graph,
        target: &Graph,
        domains: &[Vec<u32>],
        map: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        cap: usize,
    ) -> Result<()> {
        if k == order.len() {
            out.push(map.clone());
            return check_cap("homomorphisms", cap, out.len());
        }
        let v = order[k];
        'cand: for &c in &domains[v] {
            for &w in source.neighbors(v) {
                let w = w as usize;
                if w == v {
                    if !target.is_looped(c as usize) {
                        continue 'cand;
                    }
                } else if pos_in_order[w] < k && !target.has_edge(c as usize, map[w] as usize) {
                    continue 'cand;
                }
            }
            map[v] = c;
            rec(k + 1, order, pos_in_order, source, target, domains, map, out, cap)?;
        }
        map[v] = u32::MAX;
        Ok(())
    }
    rec(
        0,
        &order,
        &pos_in_order,
        source,
        target,
        domains,
        &mut map,
        &mut out,
        cap,
    )?;
    out.sort();
    Ok(out)
}

/// All graph homomorphisms `G → H`, sorted lexicographically.
pub fn graph_homs(g: &Graph, h: &Graph, caps: &Caps) -> Result<Vec<Vec<u32>>> {
    let domains = vec![(0..h.len() as u32).collect::<Vec<_>>(); g.len()];
    homs_with_domains(g, h, &domains, caps.exponential_vertices)
}

/// All bigraph homomorphisms `X → Y`, sorted lexicographically.
pub fn bigraph_homs(x: &Bigraph, y: &Bigraph, caps: &Caps) -> Result<Vec<Vec<u32>>> {
    let parts = [y.part(0), y.part(1)];
    let domains: Vec<Vec<u32>> = (0..x.len())
        .map(|i| parts[x.color(i) as usize].clone())
        .collect();
    homs_with_domains(x.graph(), y.graph(), &domains, caps.exponential_vertices)
}

/// Are two bigraph homomorphisms `X → Y` in the same component of the
/// reflexive part of `Y^X`?
pub fn times_homotopic(
    x: &Bigraph,
    y: &Bigraph,
    f: &GraphHom,
    g: &GraphHom,
    caps: &Caps,
) -> Result<bool> {
    for h in [f, g] {
        if !x.is_hom_to(y, h.map()) {
            return Err(Error::NotHomomorphism("expected bigraph homomorphisms".into()));
        }
    }
    if f == g {
        return Ok(true);
    }
    let homs = bigraph_homs(x, y, caps)?;
    let members: HashSet<&[u32]> = homs.iter().map(|h| h.as_slice()).collect();
    let parts = [y.part(0), y.part(1)];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([f.map().to_vec()]);
    let mut queue = VecDeque::from([f.map().to_vec()]);
    while let Some(h) = queue.pop_front() {
        let cands: Vec<Vec<u32>> = (0..x.len())
            .map(|v| {
                let imgs: Vec<u32> = x
                    .graph()
                    .neighbors(v)
                    .iter()
                    .map(|&w| h[w as usize])
                    .collect();
                let mut c = y.graph().common_neighbors(&imgs);
                let part = &parts[x.color(v) as usize];
                c.retain(|t| part.binary_search(t).is_ok());
                c
            })
            .collect();
        let mut found = false;
        for_each_product(&cands, &mut |k| {
            if members.contains(k) && !seen.contains(k) {
                if k == g.map() {
                    found = true;
                }
                seen.insert(k.to_vec());
                queue.push_back(k.to_vec());
            }
        });
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{interval_bigraph, is_isomorphic, standard_graph, StandardKind};

    fn k(n: usize) -> Graph {
        standard_graph(StandardKind::Complete, n).unwrap()
    }

    fn c(n: usize) -> Graph {
        standard_graph(StandardKind::Cycle, n).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn k2_times_k2_is_two_disjoint_edges() {
        let p = product(&k(2), &k(2));
        let e: Vec<(String, String)> = p
            .edges()
            .iter()
            .map(|&(a, b)| {
                (
                    p.vertex(a as usize).to_string(),
                    p.vertex(b as usize).to_string(),
                )
            })
            .collect();
        assert_eq!(
            e,
            vec![
                ("(0,0)".to_string(), "(1,1)".to_string()),
                ("(0,1)".to_string(), "(1,0)".to_string())
            ]
        );
    }

    #[test]
    fn k2_times_c5_is_c10() {
        assert!(is_isomorphic(&product(&k(2), &c(5)), &c(10), &caps())
            .unwrap()
            .is_some());
    }

    #[test]
    fn unit_of_product() {
        let one = standard_graph(StandardKind::OneLoopedVertex, 0).unwrap();
        let g = c(5);
        assert!(is_isomorphic(&product(&one, &g), &g, &caps())
            .unwrap()
            .is_some());
        let i2 = standard_graph(StandardKind::Interval, 2).unwrap();
        assert!(is_isomorphic(&product(&one, &i2), &i2, &caps())
            .unwrap()
            .is_some());
    }

    #[test]
    fn kronecker_cover_of_k3_is_hexagon() {
        let (x, alpha) = kronecker_cover(&k(3));
        assert!(is_isomorphic(x.graph(), &c(6), &caps()).unwrap().is_some());
        for i in 0..x.len() {
            assert_eq!(alpha.apply(alpha.apply(i)), i);
            assert_ne!(x.color(i), x.color(alpha.apply(i)));
        }
    }

    #[test]
    fn kronecker_cover_of_point_is_k2() {
        let one = standard_graph(StandardKind::OneLoopedVertex, 0).unwrap();
        let (x, alpha) = kronecker_cover(&one);
        assert_eq!(x.len(), 2);
        assert_eq!(x.graph().edge_count(), 1);
        assert_eq!(alpha.map(), &[1, 0]);
    }

    #[test]
    fn quotient_recovers_base() {
        let (x, alpha) = kronecker_cover(&k(3));
        let q = quotient_by_involution(&x, &alpha);
        assert!(is_isomorphic(&q, &k(3), &caps()).unwrap().is_some());
    }

    #[test]
    fn quotient_of_interval_by_reflection() {
        let l = interval_bigraph(-1, 2).unwrap();
        let a = OddInvolution::from_fn(&l, |v| Vertex::Int(1 - v.as_int().unwrap())).unwrap();
        let q = quotient_by_involution(&l, &a);
        // orbits {-1,2} (label 2) and {0,1} (label 0)
        assert_eq!(q.vertices(), &[Vertex::Int(0), Vertex::Int(2)]);
        assert_eq!(q.edges(), vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn cover_of_quotient_round_trip() {
        let (x, alpha) = kronecker_cover(&c(5));
        let q = quotient_by_involution(&x, &alpha);
        let (back, _) = kronecker_cover(&q);
        assert!(crate::graph::is_isomorphic_bigraph(&back, &x, &caps())
            .unwrap()
            .is_some());
    }

    #[test]
    fn exponential_k2_k2() {
        let e = exponential(&k(2), &k(2), &caps()).unwrap();
        assert_eq!(e.len(), 4);
        let looped: Vec<String> = (0..4)
            .filter(|&i| e.is_looped(i))
            .map(|i| e.vertex(i).to_string())
            .collect();
        assert_eq!(looped, vec!["(0,1)", "(1,0)"]);
    }

    #[test]
    fn k2_to_k2_bigraph_exponential_is_point() {
        let k2 = interval_bigraph(0, 1).unwrap();
        let e = exponential_bigraph(&k2, &k2, &caps()).unwrap();
        let one = standard_graph(StandardKind::OneLoopedVertex, 0).unwrap();
        assert!(is_isomorphic(&e, &one, &caps()).unwrap().is_some());
    }

    #[test]
    fn exponential_from_k2_unfolds_to_edge_pairs() {
        let (x, _) = kronecker_cover(&k(3));
        let k2 = interval_bigraph(0, 1).unwrap();
        let e = exponential_bigraph(&k2, &x, &caps()).unwrap();
        assert_eq!(e.len(), 9);
        let looped = (0..e.len()).filter(|&i| e.is_looped(i)).count();
        assert_eq!(looped, x.graph().edge_count());
    }

    #[test]
    fn exponential_cap_reports_bound() {
        let small = Caps {
            exponential_vertices: 10,
            ..Caps::default()
        };
        match exponential(&k(3), &k(3), &small) {
            Err(Error::SizeCap { bound, .. }) => assert_eq!(bound, 10),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn times_homotopy_examples() {
        let k2 = interval_bigraph(0, 1).unwrap();
        let l = interval_bigraph(-1, 2).unwrap();
        let idx = |x: i64| l.graph().index_of(&Vertex::Int(x)).unwrap() as u32;
        let incl = GraphHom::new_bigraph(&k2, &l, vec![idx(0), idx(1)]).unwrap();
        let shifted = GraphHom::new_bigraph(&k2, &l, vec![idx(0), idx(-1)]).unwrap();
        let far = GraphHom::new_bigraph(&k2, &l, vec![idx(2), idx(1)]).unwrap();
        assert!(times_homotopic(&k2, &l, &incl, &incl, &caps()).unwrap());
        assert!(times_homotopic(&k2, &l, &incl, &shifted, &caps()).unwrap());
        assert!(times_homotopic(&k2, &l, &shifted, &far, &caps()).unwrap());

        // on K2 x C5 (a 10-cycle) the identity is rigid
        let (x, alpha) = kronecker_cover(&c(5));
        let twist = |v: &Vertex| {
            let p = v.components().unwrap();
            let i = p[0].as_int().unwrap();
            let j = p[1].as_int().unwrap();
            Vertex::pair(Vertex::Int(1 - i), Vertex::Int((j + 1) % 5))
        };
        let twist = GraphHom::from_fn(x.graph(), x.graph(), twist).unwrap();
        let rotation = twist.then(&alpha.as_hom());
        let id = GraphHom::identity(x.len());
        assert!(x.is_hom_to(&x, rotation.map()));
        assert!(!times_homotopic(&x, &x, &id, &rotation, &caps()).unwrap());
    }
}
