//! Finite graphs (loops allowed), bigraphs, homomorphisms and the graph-level
//! constructions: products, Kronecker covers, exponentials and folds.

mod fold;
pub mod io;
pub(crate) mod iso;
mod ops;
mod standard;
mod vertex;

use std::collections::HashMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};

pub use fold::{find_dismantlable, fold_reduce, FoldLog, Foldable};
pub use iso::{is_isomorphic, is_isomorphic_bigraph};
pub use ops::{
    bigraph_homs, exponential, exponential_bigraph, graph_homs, kronecker_cover, product,
    product_bigraph, quotient_by_involution, times_homotopic,
};
pub use standard::{interval_bigraph, standard_graph, StandardKind};
pub use vertex::Vertex;

/// A finite graph: a vertex list together with a symmetric edge relation.
///
/// Vertices are kept sorted; every other structure in the crate refers to
/// vertices by their position in that order.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, u32>,
    adj: Vec<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from declared vertices and unordered edges. Duplicate
    /// vertices and edges are merged; `(v, v)` is a loop.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        vs.sort();
        vs.dedup();
        let index: HashMap<Vertex, u32> = vs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let mut adj = vec![Vec::new(); vs.len()];
        for (a, b) in edges {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            adj[ia as usize].push(ib);
            if ia != ib {
                adj[ib as usize].push(ia);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph {
            vertices: vs,
            index,
            adj,
        })
    }

    /// Builds a graph from already sorted, unique vertices and symmetric
    /// adjacency lists.
    pub(crate) fn from_parts(vertices: Vec<Vertex>, mut adj: Vec<Vec<u32>>) -> Graph {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let g = Graph {
            vertices,
            index,
            adj,
        };
        debug_assert!(g.is_symmetric());
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    pub(crate) fn require(&self, v: &Vertex) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    /// Sorted neighbor indices; contains `i` itself when `i` is looped.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn is_looped(&self, i: usize) -> bool {
        self.has_edge(i, i)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.is_looped(i))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Edges as index pairs `(i, j)` with `i <= j`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i as u32 <= j {
                    out.push((i as u32, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .enumerate()
            .map(|(i, l)| l.iter().filter(|&&j| i as u32 <= j).count())
            .sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(i, l)| l.iter().all(|&j| self.has_edge(j as usize, i)))
    }

    /// Vertices adjacent to every vertex of `set`; all vertices when `set` is empty.
    pub fn common_neighbors(&self, set: &[u32]) -> Vec<u32> {
        let Some((&first, rest)) = set.split_first() else {
            return (0..self.len() as u32).collect();
        };
        let mut acc: Vec<u32> = self.adj[first as usize].clone();
        for &s in rest {
            let other = &self.adj[s as usize];
            acc.retain(|x| other.binary_search(x).is_ok());
        }
        acc
    }

    /// Induced subgraph on the given vertex indices (any order, duplicates ignored).
    pub fn induced(&self, keep: &[u32]) -> Graph {
        let mut keep: Vec<u32> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut pos = vec![u32::MAX; self.len()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i as usize] = k as u32;
        }
        let vertices = keep
            .iter()
            .map(|&i| self.vertices[i as usize].clone())
            .collect();
        let adj = keep
            .iter()
            .map(|&i| {
                self.adj[i as usize]
                    .iter()
                    .filter_map(|&j| {
                        let p = pos[j as usize];
                        (p != u32::MAX).then_some(p)
                    })
                    .collect()
            })
            .collect();
        Graph::from_parts(vertices, adj)
    }

    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<u32> = (0..self.len() as u32).filter(|&i| i as usize != v).collect();
        self.induced(&keep)
    }

    /// The maximal reflexive subgraph, with the original index of each kept vertex.
    pub fn reflexive_part(&self) -> (Graph, Vec<u32>) {
        let keep: Vec<u32> = (0..self.len() as u32)
            .filter(|&i| self.is_looped(i as usize))
            .collect();
        (self.induced(&keep), keep)
    }

    /// Connected components: `(count, component id per vertex)`, ids in order
    /// of smallest member.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let mut comp = vec![u32::MAX; self.len()];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..self.len() {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    /// Is `map` (indexed by vertices of `self`) a graph homomorphism into `target`?
    pub fn is_hom_to(&self, target: &Graph, map: &[u32]) -> bool {
        map.len() == self.len()
            && map.iter().all(|&m| (m as usize) < target.len())
            && self.edges().iter().all(|&(a, b)| {
                target.has_edge(map[a as usize] as usize, map[b as usize] as usize)
            })
    }

    /// Adjacency as a lookup from vertex labels; convenient in tests.
    pub fn adjacent(&self, a: &Vertex, b: &Vertex) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge(i, j),
            _ => false,
        }
    }
}

/// A graph with a proper 2-coloring `ε: X → K₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigraph {
    graph: Graph,
    colors: Vec<u8>,
}

impl Bigraph {
    pub fn new(graph: Graph, colors: Vec<u8>) -> Result<Bigraph> {
        if colors.len() != graph.len() {
            return Err(Error::invalid("coloring length differs from vertex count"));
        }
        if let Some(c) = colors.iter().find(|&&c| c > 1) {
            return Err(Error::ImproperColoring(format!("color {c} is not 0 or 1")));
        }
        for (a, b) in graph.edges() {
            if colors[a as usize] == colors[b as usize] {
                return Err(Error::ImproperColoring(format!(
                    "edge {} {} joins equal colors",
                    graph.vertex(a as usize),
                    graph.vertex(b as usize)
                )));
            }
        }
        Ok(Bigraph { graph, colors })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn color(&self, i: usize) -> u8 {
        self.colors[i]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// `V_c(X)`: indices of vertices of color `c`.
    pub fn part(&self, c: u8) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.colors[i as usize] == c)
            .collect()
    }

    pub fn without_vertex(&self, v: usize) -> Bigraph {
        let graph = self.graph.without_vertex(v);
        let colors = self
            .colors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, &c)| c)
            .collect();
        Bigraph { graph, colors }
    }

    pub fn induced(&self, keep: &[u32]) -> Bigraph {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let colors = keep.iter().map(|&i| self.colors[i as usize]).collect();
        Bigraph {
            graph: self.graph.induced(&keep),
            colors,
        }
    }

    /// Is `map` a bigraph homomorphism (edge- and color-preserving) into `target`?
    pub fn is_hom_to(&self, target: &Bigraph, map: &[u32]) -> bool {
        self.graph.is_hom_to(&target.graph, map)
            && map
                .iter()
                .enumerate()
                .all(|(i, &m)| self.colors[i] == target.colors[m as usize])
    }
}

/// A vertex map between two graphs, stored by vertex index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphHom {
    map: Vec<u32>,
}

impl GraphHom {
    pub fn new(source: &Graph, target: &Graph, map: Vec<u32>) -> Result<GraphHom> {
        if !source.is_hom_to(target, &map) {
            return Err(Error::NotHomomorphism("edge not preserved".into()));
        }
        Ok(GraphHom { map })
    }

    pub fn new_bigraph(source: &Bigraph, target: &Bigraph, map: Vec<u32>) -> Result<GraphHom> {
        if !source.graph.is_hom_to(&target.graph, &map) {
            return Err(Error::NotHomomorphism("edge not preserved".into()));
        }
        if !source.is_hom_to(target, &map) {
            return Err(Error::NotHomomorphism("coloring not preserved".into()));
        }
        Ok(GraphHom { map })
    }

    /// Builds a homomorphism from a vertex-label function.
    pub fn from_fn(
        source: &Graph,
        target: &Graph,
        f: impl Fn(&Vertex) -> Vertex,
    ) -> Result<GraphHom> {
        let map = source
            .vertices()
            .iter()
            .map(|v| target.require(&f(v)).map(|i| i as u32))
            .collect::<Result<Vec<_>>>()?;
        GraphHom::new(source, target, map)
    }

    pub fn identity(n: usize) -> GraphHom {
        GraphHom {
            map: (0..n as u32).collect(),
        }
    }

    pub(crate) fn unchecked(map: Vec<u32>) -> GraphHom {
        GraphHom { map }
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphHom) -> GraphHom {
        GraphHom {
            map: self.map.iter().map(|&m| other.map[m as usize]).collect(),
        }
    }
}

/// A color-flipping involutive automorphism of a bigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddInvolution {
    map: Vec<u32>,
}

impl OddInvolution {
    pub fn new(x: &Bigraph, map: Vec<u32>) -> Result<OddInvolution> {
        if !x.graph.is_hom_to(&x.graph, &map) {
            return Err(Error::NotHomomorphism("involution does not preserve edges".into()));
        }
        for (i, &m) in map.iter().enumerate() {
            if x.color(i) == x.color(m as usize) {
                return Err(Error::invalid(format!(
                    "involution keeps the color of {}",
                    x.graph.vertex(i)
                )));
            }
            if map[m as usize] as usize != i {
                return Err(Error::invalid(format!(
                    "map is not an involution at {}",
                    x.graph.vertex(i)
                )));
            }
        }
        Ok(OddInvolution { map })
    }

    pub fn from_fn(x: &Bigraph, f: impl Fn(&Vertex) -> Vertex) -> Result<OddInvolution> {
        let map = x
            .graph
            .vertices()
            .iter()
            .map(|v| x.graph.require(&f(v)).map(|i| i as u32))
            .collect::<Result<Vec<_>>>()?;
        OddInvolution::new(x, map)
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn as_hom(&self) -> GraphHom {
        GraphHom::unchecked(self.map.clone())
    }
}
