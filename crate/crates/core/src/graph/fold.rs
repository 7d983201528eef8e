use super::{Bigraph, Graph, Vertex};

/// Graphs and bigraphs share the fold machinery; bigraph witnesses must
/// carry the same color as the vertex they absorb.
pub trait Foldable: Clone {
    fn base(&self) -> &Graph;
    fn same_side(&self, v: usize, w: usize) -> bool;
    fn remove(&self, v: usize) -> Self;
}

impl Foldable for Graph {
    fn base(&self) -> &Graph {
        self
    }

    fn same_side(&self, _: usize, _: usize) -> bool {
        true
    }

    fn remove(&self, v: usize) -> Self {
        self.without_vertex(v)
    }
}

impl Foldable for Bigraph {
    fn base(&self) -> &Graph {
        self.graph()
    }

    fn same_side(&self, v: usize, w: usize) -> bool {
        self.color(v) == self.color(w)
    }

    fn remove(&self, v: usize) -> Self {
        self.without_vertex(v)
    }
}

/// Removal log of a fold reduction: `(v, w)` with `N(v) ⊆ N(w)` at the time of removal.
pub type FoldLog = Vec<(Vertex, Vertex)>;

fn subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn first_witness<X: Foldable>(x: &X, v: usize) -> Option<usize> {
    let g = x.base();
    (0..g.len()).find(|&w| w != v && x.same_side(v, w) && subset(g.neighbors(v), g.neighbors(w)))
}

/// All dismantlable pairs `(v, w)`, ordered by `v` then `w` (vertex indices).
pub fn find_dismantlable<X: Foldable>(x: &X) -> Vec<(usize, usize)> {
    let g = x.base();
    let mut out = Vec::new();
    for v in 0..g.len() {
        for w in 0..g.len() {
            if w != v && x.same_side(v, w) && subset(g.neighbors(v), g.neighbors(w)) {
                out.push((v, w));
            }
        }
    }
    out
}

/// Deletes the smallest dismantlable vertex until none is left.
pub fn fold_reduce<X: Foldable>(x: &X) -> (X, FoldLog) {
    let mut cur = x.clone();
    let mut log = Vec::new();
    'outer: loop {
        for v in 0..cur.base().len() {
            if let Some(w) = first_witness(&cur, v) {
                let g = cur.base();
                log.push((g.vertex(v).clone(), g.vertex(w).clone()));
                cur = cur.remove(v);
                continue 'outer;
            }
        }
        return (cur, log);
    }
}
