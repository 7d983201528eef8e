use std::collections::{BTreeMap, VecDeque};

use super::{Bigraph, Graph};
use crate::error::{check_cap, Caps, Result};

/// A finite directed relation with vertex colors and an optional
/// involution that isomorphisms must commute with.
#[derive(Clone, Debug)]
pub(crate) struct Structure {
    pub out: Vec<Vec<u32>>,
    pub inn: Vec<Vec<u32>>,
    pub color: Vec<u64>,
    pub partner: Option<Vec<u32>>,
}

impl Structure {
    pub fn undirected(adj: Vec<Vec<u32>>, color: Vec<u64>) -> Structure {
        Structure {
            inn: adj.clone(),
            out: adj,
            color,
            partner: None,
        }
    }

    fn len(&self) -> usize {
        self.out.len()
    }
}

/// Joint color refinement of two structures; returns refined colors.
fn refine(a: &Structure, b: &Structure) -> (Vec<u32>, Vec<u32>) {
    let n = a.len();
    let mut col: Vec<u32> = {
        let mut keys: BTreeMap<u64, u32> = BTreeMap::new();
        for &c in a.color.iter().chain(&b.color) {
            let k = keys.len() as u32;
            keys.entry(c).or_insert(k);
        }
        a.color.iter().chain(&b.color).map(|c| keys[c]).collect()
    };
    let mut classes = 0;
    loop {
        let sig = |s: &Structure, off: usize, v: usize, col: &[u32]| {
            let mut o: Vec<u32> = s.out[v].iter().map(|&w| col[off + w as usize]).collect();
            let mut i: Vec<u32> = s.inn[v].iter().map(|&w| col[off + w as usize]).collect();
            o.sort_unstable();
            i.sort_unstable();
            let p = s
                .partner
                .as_ref()
                .map(|p| col[off + p[v] as usize])
                .unwrap_or(u32::MAX);
            (col[off + v], p, o, i)
        };
        let sigs: Vec<_> = (0..n)
            .map(|v| sig(a, 0, v, &col))
            .chain((0..b.len()).map(|v| sig(b, n, v, &col)))
            .collect();
        let mut keys = BTreeMap::new();
        for s in &sigs {
            let k = keys.len() as u32;
            keys.entry(s.clone()).or_insert(k);
        }
        let next: Vec<u32> = sigs.iter().map(|s| keys[s]).collect();
        col = next;
        if keys.len() == classes {
            break;
        }
        classes = keys.len();
    }
    let cb = col.split_off(n);
    (col, cb)
}

/// Exact isomorphism search; the returned map sends vertex `i` of `a` to `map[i]` of `b`.
pub(crate) fn find_iso(a: &Structure, b: &Structure) -> Option<Vec<u32>> {
    let n = a.len();
    if n != b.len() || a.partner.is_some() != b.partner.is_some() {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return None;
    }
    let sorted = |s: &Structure| -> Vec<Vec<u32>> {
        s.out
            .iter()
            .map(|l| {
                let mut l = l.clone();
                l.sort_unstable();
                l
            })
            .collect()
    };
    let (oa, ob) = (sorted(a), sorted(b));

    // search order: BFS over the undirected relation, smallest class first
    let mut class_size = BTreeMap::new();
    for &c in &ca {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (class_size[&ca[v]], v));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in a.out[u].iter().chain(&a.inn[u]) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    q.push_back(w as usize);
                }
            }
        }
    }
    let mut by_class: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (v, &c) in cb.iter().enumerate() {
        by_class.entry(c).or_default().push(v as u32);
    }

    struct St<'s> {
        a: &'s Structure,
        b: &'s Structure,
        oa: Vec<Vec<u32>>,
        ob: Vec<Vec<u32>>,
        map: Vec<u32>,
        used: Vec<bool>,
        assigned: Vec<usize>,
    }

    impl St<'_> {
        fn consistent(&self, x: usize, y: usize) -> bool {
            for &z in &self.assigned {
                let w = self.map[z] as usize;
                if self.oa[x].binary_search(&(z as u32)).is_ok()
                    != self.ob[y].binary_search(&(w as u32)).is_ok()
                    || self.oa[z].binary_search(&(x as u32)).is_ok()
                        != self.ob[w].binary_search(&(y as u32)).is_ok()
                {
                    return false;
                }
            }
            let xl = self.oa[x].binary_search(&(x as u32)).is_ok();
            let yl = self.ob[y].binary_search(&(y as u32)).is_ok();
            xl == yl
        }

        /// Assigns `x ↦ y` (and its partner pair); returns how many were pushed.
        fn assign(&mut self, x: usize, y: usize) -> Option<usize> {
            if self.used[y] || !self.consistent(x, y) {
                return None;
            }
            self.map[x] = y as u32;
            self.used[y] = true;
            self.assigned.push(x);
            let (Some(pa), Some(pb)) = (&self.a.partner, &self.b.partner) else {
                return Some(1);
            };
            let (px, py) = (pa[x] as usize, pb[y] as usize);
            if px == x || py == y {
                return if px == x && py == y {
                    Some(1)
                } else {
                    self.undo(1);
                    None
                };
            }
            if self.map[px] != u32::MAX {
                return if self.map[px] as usize == py {
                    Some(1)
                } else {
                    self.undo(1);
                    None
                };
            }
            if self.used[py] || !self.consistent(px, py) {
                self.undo(1);
                return None;
            }
            self.map[px] = py as u32;
            self.used[py] = true;
            self.assigned.push(px);
            Some(2)
        }

        fn undo(&mut self, k: usize) {
            for _ in 0..k {
                let x = self.assigned.pop().unwrap();
                self.used[self.map[x] as usize] = false;
                self.map[x] = u32::MAX;
            }
        }
    }

    fn rec(
        st: &mut St,
        k: usize,
        order: &[usize],
        ca: &[u32],
        by_class: &BTreeMap<u32, Vec<u32>>,
    ) -> bool {
        let Some(&x) = order[k..].iter().find(|&&x| st.map[x] == u32::MAX) else {
            return true;
        };
        let k = k + order[k..].iter().position(|&v| v == x).unwrap();
        for &y in &by_class[&ca[x]] {
            if let Some(pushed) = st.assign(x, y as usize) {
                if rec(st, k + 1, order, ca, by_class) {
                    return true;
                }
                st.undo(pushed);
            }
        }
        false
    }

    let mut st = St {
        a,
        b,
        oa,
        ob,
        map: vec![u32::MAX; n],
        used: vec![false; n],
        assigned: Vec::new(),
    };
    rec(&mut st, 0, &order, &ca, &by_class).then_some(st.map)
}

fn graph_structure(g: &Graph, colors: Option<&[u8]>) -> Structure {
    let adj = (0..g.len()).map(|i| g.neighbors(i).to_vec()).collect();
    let color = (0..g.len())
        .map(|i| {
            let c = colors.map(|c| c[i] as u64 + 1).unwrap_or(0);
            (c << 1) | g.is_looped(i) as u64
        })
        .collect();
    Structure::undirected(adj, color)
}

/// Graph isomorphism by backtracking; `Some(map)` sends vertex `i` of `a` to `map[i]` of `b`.
pub fn is_isomorphic(a: &Graph, b: &Graph, caps: &Caps) -> Result<Option<Vec<u32>>> {
    check_cap("isomorphism search vertices", caps.iso_vertices, a.len().max(b.len()))?;
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    Ok(find_iso(&graph_structure(a, None), &graph_structure(b, None)))
}

/// Isomorphism of bigraphs, preserving colors.
pub fn is_isomorphic_bigraph(a: &Bigraph, b: &Bigraph, caps: &Caps) -> Result<Option<Vec<u32>>> {
    check_cap("isomorphism search vertices", caps.iso_vertices, a.len().max(b.len()))?;
    if a.len() != b.len() || a.graph().edge_count() != b.graph().edge_count() {
        return Ok(None);
    }
    Ok(find_iso(
        &graph_structure(a.graph(), Some(a.colors())),
        &graph_structure(b.graph(), Some(b.colors())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::{interval_bigraph, kronecker_cover, product, standard_graph, StandardKind, Vertex};
    use proptest::prelude::*;

    fn c(n: usize) -> Graph {
        standard_graph(StandardKind::Cycle, n).unwrap()
    }

    #[test]
    fn hexagon_is_cover_of_triangle() {
        let (x, _) = kronecker_cover(&standard_graph(StandardKind::Complete, 3).unwrap());
        let m = is_isomorphic(&c(6), x.graph(), &Caps::default()).unwrap().unwrap();
        assert!(c(6).is_hom_to(x.graph(), &m));
    }

    #[test]
    fn sizes_differ() {
        assert!(is_isomorphic(&c(5), &c(6), &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn two_triangles_vs_hexagon() {
        let disjoint = Graph::new(
            (0..6usize).map(Vertex::from),
            [(0usize, 1usize), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
                .into_iter()
                .map(|(a, b)| (Vertex::from(a), Vertex::from(b))),
        )
        .unwrap();
        assert!(is_isomorphic(&disjoint, &c(6), &Caps::default()).unwrap().is_none());
        let one = standard_graph(StandardKind::OneLoopedVertex, 0).unwrap();
        assert!(is_isomorphic(&product(&c(3), &one), &c(3), &Caps::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn bigraph_colors_matter() {
        let a = interval_bigraph(0, 2).unwrap();
        let b = interval_bigraph(1, 3).unwrap();
        let c = interval_bigraph(2, 4).unwrap();
        assert!(is_isomorphic(a.graph(), b.graph(), &Caps::default()).unwrap().is_some());
        assert!(is_isomorphic_bigraph(&a, &b, &Caps::default()).unwrap().is_none());
        assert!(is_isomorphic_bigraph(&a, &c, &Caps::default()).unwrap().is_some());
        let e1 = interval_bigraph(0, 1).unwrap();
        let e2 = interval_bigraph(1, 2).unwrap();
        assert!(is_isomorphic_bigraph(&e1, &e2, &Caps::default()).unwrap().is_some());
    }

    #[test]
    fn cap_refuses() {
        let caps = Caps {
            iso_vertices: 4,
            ..Caps::default()
        };
        assert!(matches!(
            is_isomorphic(&c(5), &c(5), &caps),
            Err(Error::SizeCap { .. })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..14).prop_map(move |es| {
                Graph::new(
                    (0..n).map(Vertex::from),
                    es.into_iter().map(|(a, b)| (Vertex::from(a), Vertex::from(b))),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn product_commutes(g in arb_graph(), h in arb_graph()) {
            let gh = product(&g, &h);
            let hg = product(&h, &g);
            let m = is_isomorphic(&gh, &hg, &Caps::default()).unwrap();
            prop_assert!(m.is_some());
            prop_assert!(gh.is_hom_to(&hg, &m.unwrap()));
        }
    }
}
