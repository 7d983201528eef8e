use super::{Bigraph, Graph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// `K_n`: loopless complete graph.
    Complete,
    /// `C_n`, `n >= 3`.
    Cycle,
    /// `I_n`: reflexive path on `0..=n`.
    Interval,
    /// `𝟏`: a single looped vertex (`n` ignored).
    OneLoopedVertex,
}

pub fn standard_graph(kind: StandardKind, n: usize) -> Result<Graph> {
    let v = |i: usize| Vertex::Int(i as i64);
    match kind {
        StandardKind::Complete => {
            let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (v(i), v(j))));
            Graph::new((0..n).map(v), edges)
        }
        StandardKind::Cycle => {
            if n < 3 {
                return Err(Error::invalid(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::new((0..n).map(v), (0..n).map(|i| (v(i), v((i + 1) % n))))
        }
        StandardKind::Interval => {
            let edges = (0..=n)
                .map(|i| (v(i), v(i)))
                .chain((0..n).map(|i| (v(i), v(i + 1))));
            Graph::new((0..=n).map(v), edges)
        }
        StandardKind::OneLoopedVertex => Graph::new([v(0)], [(v(0), v(0))]),
    }
}

/// The bigraph `L_{a,b}`: integers `a..=b`, edges `|x - y| = 1`, colored by parity.
pub fn interval_bigraph(a: i64, b: i64) -> Result<Bigraph> {
    if a > b {
        return Err(Error::invalid(format!("interval needs a <= b, got {a} > {b}")));
    }
    let g = Graph::new(
        (a..=b).map(Vertex::Int),
        (a..b).map(|x| (Vertex::Int(x), Vertex::Int(x + 1))),
    )?;
    let colors = (a..=b).map(|x| x.rem_euclid(2) as u8).collect();
    Bigraph::new(g, colors)
}
