//! Posets and simplicial complexes built from graphs: box complexes, Hom
//! complexes, neighborhood and clique complexes, order complexes.

mod build;
pub mod io;

use std::collections::{HashMap, HashSet};

use crate::error::{check_cap, Caps, Error, Result};
use crate::graph::iso::{find_iso, Structure};
use crate::graph::{Bigraph, Graph};

pub use build::{
    box_complex, box_complex_bigraph, clique_complex, face_poset, hom_complex,
    hom_complex_bigraph, neighborhood_complex, order_complex, product_poset,
};

/// A finite poset. Elements are stored in a linear extension: every strict
/// lower bound of `x` has a smaller index than `x`.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    below: Vec<Vec<u32>>,
    above: Vec<Vec<u32>>,
    lower_covers: Vec<Vec<u32>>,
    upper_covers: Vec<Vec<u32>>,
    blocks: Option<Vec<Vec<Vec<u32>>>>,
    index: HashMap<String, u32>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.below == other.below
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from labels and full strict down-sets (any element order).
    pub fn from_below(labels: Vec<String>, below: Vec<Vec<u32>>) -> Result<Poset> {
        Poset::assemble(labels, below, None)
    }

    /// Builds a poset from cover (or any generating) relations `a < b` by
    /// transitive closure.
    pub fn from_relations(labels: Vec<String>, less: &[(u32, u32)]) -> Result<Poset> {
        let n = labels.len();
        let mut down: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in less {
            if a as usize >= n || b as usize >= n {
                return Err(Error::invalid("relation mentions an undeclared element"));
            }
            down[b as usize].push(a);
        }
        // closure by DFS; a cycle shows up as an element below itself
        let mut below = Vec::with_capacity(n);
        for x in 0..n {
            let mut seen = vec![false; n];
            let mut stack: Vec<u32> = down[x].clone();
            while let Some(y) = stack.pop() {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.extend(&down[y as usize]);
                }
            }
            if seen[x] {
                return Err(Error::invalid(format!(
                    "relation is not antisymmetric at `{}`",
                    labels[x]
                )));
            }
            below.push((0..n as u32).filter(|&y| seen[y as usize]).collect());
        }
        Poset::assemble(labels, below, None)
    }

    /// Poset of tuples of nonempty sets ordered by blockwise inclusion. The
    /// element list must be closed under shrinking blocks to nonempty subsets.
    pub(crate) fn from_set_tuples(
        tuples: Vec<Vec<Vec<u32>>>,
        labels: Vec<String>,
        relation_cap: usize,
    ) -> Result<Poset> {
        let lookup: HashMap<&[Vec<u32>], u32> = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i as u32))
            .collect();
        let mut below = Vec::with_capacity(tuples.len());
        let mut total = 0usize;
        for t in &tuples {
            let mut list = Vec::new();
            let sizes: Vec<usize> = t.iter().map(|b| b.len()).collect();
            if let Some(&big) = sizes.iter().find(|&&s| s > 62) {
                return Err(Error::SizeCap {
                    what: "block size of a poset element",
                    bound: 62,
                    counted: big,
                });
            }
            let mut masks: Vec<u64> = sizes.iter().map(|_| 1).collect();
            let full: Vec<u64> = sizes.iter().map(|&s| (1u64 << s) - 1).collect();
            let mut sub: Vec<Vec<u32>> = vec![Vec::new(); t.len()];
            loop {
                if masks != full {
                    for (k, b) in t.iter().enumerate() {
                        sub[k].clear();
                        sub[k].extend(
                            b.iter()
                                .enumerate()
                                .filter(|(i, _)| masks[k] >> i & 1 == 1)
                                .map(|(_, &v)| v),
                        );
                    }
                    match lookup.get(sub.as_slice()) {
                        Some(&j) => list.push(j),
                        None => {
                            return Err(Error::invalid("set-tuple family is not down-closed"))
                        }
                    }
                }
                // next mask combination
                let mut k = 0;
                loop {
                    if k == t.len() {
                        break;
                    }
                    if masks[k] < full[k] {
                        masks[k] += 1;
                        break;
                    }
                    masks[k] = 1;
                    k += 1;
                }
                if k == t.len() {
                    break;
                }
            }
            total += list.len();
            check_cap("poset relations", relation_cap, total)?;
            list.sort_unstable();
            below.push(list);
        }
        Poset::assemble(labels, below, Some(tuples))
    }

    fn assemble(
        labels: Vec<String>,
        below: Vec<Vec<u32>>,
        blocks: Option<Vec<Vec<Vec<u32>>>>,
    ) -> Result<Poset> {
        let n = labels.len();
        if below.len() != n {
            return Err(Error::invalid("label and relation counts differ"));
        }
        // linear extension: strictly smaller elements have strictly smaller down-sets
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| {
            below[a as usize]
                .len()
                .cmp(&below[b as usize].len())
                .then_with(|| match &blocks {
                    Some(bl) => bl[a as usize].cmp(&bl[b as usize]),
                    None => labels[a as usize].cmp(&labels[b as usize]),
                })
        });
        let mut rank = vec![0u32; n];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new as u32;
        }
        let new_below: Vec<Vec<u32>> = order
            .iter()
            .map(|&o| {
                let mut l: Vec<u32> = below[o as usize].iter().map(|&y| rank[y as usize]).collect();
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        let labels: Vec<String> = order.iter().map(|&o| labels[o as usize].clone()).collect();
        let blocks = blocks.map(|b| order.iter().map(|&o| b[o as usize].clone()).collect());
        let mut above = vec![Vec::new(); n];
        for (x, l) in new_below.iter().enumerate() {
            for &y in l {
                above[y as usize].push(x as u32);
            }
        }
        let index: HashMap<String, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        if index.len() != n {
            return Err(Error::invalid("duplicate poset element labels"));
        }
        let mut p = Poset {
            labels,
            below: new_below,
            above,
            lower_covers: Vec::new(),
            upper_covers: Vec::new(),
            blocks,
            index,
        };
        p.check_axioms()?;
        p.compute_covers();
        Ok(p)
    }

    fn compute_covers(&mut self) {
        let n = self.len();
        let mut stamp = vec![u32::MAX; n];
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for x in 0..n {
            // largest candidates first; anything below a chosen cover is not a cover
            for &c in self.below[x].iter().rev() {
                if stamp[c as usize] == x as u32 {
                    continue;
                }
                lower[x].push(c);
                upper[c as usize].push(x as u32);
                for &d in &self.below[c as usize] {
                    stamp[d as usize] = x as u32;
                }
            }
            lower[x].sort_unstable();
        }
        self.lower_covers = lower;
        self.upper_covers = upper;
    }

    /// Irreflexivity, transitivity and antisymmetry of the stored strict order.
    pub fn check_axioms(&self) -> Result<()> {
        for x in 0..self.len() {
            for &y in &self.below[x] {
                if y as usize >= x {
                    return Err(Error::invalid(format!(
                        "order is not antisymmetric at `{}`",
                        self.labels[x]
                    )));
                }
                if !self.below[y as usize]
                    .iter()
                    .all(|z| self.below[x].binary_search(z).is_ok())
                {
                    return Err(Error::invalid(format!(
                        "order is not transitive at `{}`",
                        self.labels[x]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).map(|&i| i as usize)
    }

    /// Strict down-set of `x`, sorted.
    pub fn below(&self, x: usize) -> &[u32] {
        &self.below[x]
    }

    /// Strict up-set of `x`, sorted.
    pub fn above(&self, x: usize) -> &[u32] {
        &self.above[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[u32] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[u32] {
        &self.upper_covers[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.below[b].binary_search(&(a as u32)).is_ok()
    }

    pub fn covers(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = (0..self.len())
            .flat_map(|x| self.lower_covers[x].iter().map(move |&c| (c, x as u32)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of comparable pairs `a < b`.
    pub fn relation_count(&self) -> usize {
        self.below.iter().map(Vec::len).sum()
    }

    /// Set-tuple data of each element, for posets built from graphs.
    pub fn blocks(&self, x: usize) -> Option<&[Vec<u32>]> {
        self.blocks.as_ref().map(|b| b[x].as_slice())
    }

    pub fn minimal_elements(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&x| self.below[x as usize].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&x| self.above[x as usize].is_empty())
            .collect()
    }

    /// Induced subposet; returns it with the original index of each kept element
    /// (in the subposet's order).
    pub fn induced(&self, keep: &[u32]) -> (Poset, Vec<u32>) {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut pos = vec![u32::MAX; self.len()];
        for (k, &x) in keep.iter().enumerate() {
            pos[x as usize] = k as u32;
        }
        let below = keep
            .iter()
            .map(|&x| {
                self.below[x as usize]
                    .iter()
                    .filter_map(|&y| (pos[y as usize] != u32::MAX).then_some(pos[y as usize]))
                    .collect()
            })
            .collect();
        let labels = keep.iter().map(|&x| self.labels[x as usize].clone()).collect();
        let blocks = self
            .blocks
            .as_ref()
            .map(|b| keep.iter().map(|&x| b[x as usize].clone()).collect());
        let sub = Poset::assemble(labels, below, blocks).expect("subposets are posets");
        let back = sub
            .labels
            .iter()
            .map(|l| keep[pos[self.index[l] as usize] as usize])
            .collect();
        (sub, back)
    }

    /// Closed down-set `P_{≤x}` as sorted indices.
    pub fn down_set(&self, x: usize) -> Vec<u32> {
        let mut v = self.below[x].clone();
        v.push(x as u32);
        v
    }

    /// Closed up-set `P_{≥x}` as sorted indices.
    pub fn up_set(&self, x: usize) -> Vec<u32> {
        let mut v = vec![x as u32];
        v.extend(&self.above[x]);
        v
    }

    /// The opposite order.
    pub fn opposite(&self) -> Poset {
        Poset::assemble(self.labels.clone(), self.above.clone(), self.blocks.clone())
            .expect("opposite of a poset")
    }
}

/// Poset isomorphism by backtracking, optionally commuting with Z₂-actions.
/// `Some(map)` sends element `i` of `p` to `map[i]` of `q`.
pub fn is_isomorphic_poset(
    p: &Poset,
    q: &Poset,
    actions: Option<(&InvolutionAction, &InvolutionAction)>,
    caps: &Caps,
) -> Result<Option<Vec<u32>>> {
    check_cap("isomorphism search elements", caps.iso_vertices, p.len().max(q.len()))?;
    if p.len() != q.len() || p.relation_count() != q.relation_count() {
        return Ok(None);
    }
    let structure = |x: &Poset, a: Option<&InvolutionAction>| Structure {
        out: x.upper_covers.clone(),
        inn: x.lower_covers.clone(),
        color: (0..x.len())
            .map(|i| ((x.below[i].len() as u64) << 32) | x.above[i].len() as u64)
            .collect(),
        partner: a.map(|a| a.map.clone()),
    };
    let (pa, qa) = match actions {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    Ok(find_iso(&structure(p, pa), &structure(q, qa)))
}

/// An order-preserving map between posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    map: Vec<u32>,
}

impl PosetMap {
    pub fn new(source: &Poset, target: &Poset, map: Vec<u32>) -> Result<PosetMap> {
        if map.len() != source.len() || map.iter().any(|&m| m as usize >= target.len()) {
            return Err(Error::invalid("poset map has the wrong shape"));
        }
        for x in 0..source.len() {
            for &y in source.below(x) {
                if !target.leq(map[y as usize] as usize, map[x] as usize) {
                    return Err(Error::invalid(format!(
                        "map is not order preserving at `{}` <= `{}`",
                        source.label(y as usize),
                        source.label(x)
                    )));
                }
            }
        }
        Ok(PosetMap { map })
    }

    pub fn identity(n: usize) -> PosetMap {
        PosetMap {
            map: (0..n as u32).collect(),
        }
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// `p⁻¹(Q_{≤y})` as sorted source indices.
    pub fn fiber_below(&self, target: &Poset, y: usize) -> Vec<u32> {
        (0..self.map.len() as u32)
            .filter(|&x| target.leq(self.map[x as usize] as usize, y))
            .collect()
    }
}

/// A finite abstract simplicial complex stored by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    facets: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    /// Builds a complex from arbitrary generating simplices; non-maximal ones are dropped.
    pub fn new(labels: Vec<String>, simplices: Vec<Vec<u32>>) -> Result<SimplicialComplex> {
        let mut simplices: Vec<Vec<u32>> = simplices
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if simplices
            .iter()
            .flatten()
            .any(|&v| v as usize >= labels.len())
        {
            return Err(Error::invalid("simplex mentions an undeclared vertex"));
        }
        simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        simplices.dedup();
        let mut facets: Vec<Vec<u32>> = Vec::new();
        for s in simplices {
            let contained = facets
                .iter()
                .any(|f| s.iter().all(|v| f.binary_search(v).is_ok()));
            if !contained {
                facets.push(s);
            }
        }
        Ok(SimplicialComplex::from_facets(labels, facets))
    }

    /// Builds a complex whose generating simplices are already pairwise non-nested.
    pub(crate) fn from_facets(labels: Vec<String>, mut facets: Vec<Vec<u32>>) -> SimplicialComplex {
        for f in &mut facets {
            f.sort_unstable();
        }
        facets.sort();
        SimplicialComplex { labels, facets }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// Faces of dimension `0..=max_dim`, grouped by dimension, each list sorted.
    pub fn faces(&self, max_dim: usize, cap: usize) -> Result<Vec<Vec<Vec<u32>>>> {
        let mut sets: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); max_dim + 1];
        let mut total = 0usize;
        let mut buf = Vec::new();
        for f in &self.facets {
            for k in 1..=f.len().min(max_dim + 1) {
                let set = &mut sets[k - 1];
                combinations(f, k, &mut buf, 0, &mut |c| {
                    if set.insert(c.to_vec()) {
                        total += 1;
                    }
                });
                check_cap("simplices", cap, total)?;
            }
        }
        Ok(sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<Vec<u32>> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect())
    }

    /// Number of faces per dimension.
    pub fn f_vector(&self, cap: usize) -> Result<Vec<usize>> {
        let d = match self.dim() {
            Some(d) => d,
            None => return Ok(Vec::new()),
        };
        Ok(self.faces(d, cap)?.iter().map(Vec::len).collect())
    }

    /// Vertices that lie in some simplex.
    pub fn used_vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.facets.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub(crate) fn combinations(
    items: &[u32],
    k: usize,
    buf: &mut Vec<u32>,
    start: usize,
    f: &mut dyn FnMut(&[u32]),
) {
    if buf.len() == k {
        f(buf);
        return;
    }
    let need = k - buf.len();
    for i in start..=items.len().saturating_sub(need) {
        if items.len() < need {
            break;
        }
        buf.push(items[i]);
        combinations(items, k, buf, i + 1, f);
        buf.pop();
    }
}

/// A Z₂-action given by an involutive automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionAction {
    map: Vec<u32>,
}

impl InvolutionAction {
    fn involutive(map: &[u32]) -> Result<()> {
        let n = map.len();
        if map
            .iter()
            .enumerate()
            .any(|(i, &m)| m as usize >= n || map[m as usize] as usize != i)
        {
            return Err(Error::invalid("action does not square to the identity"));
        }
        Ok(())
    }

    pub fn on_poset(p: &Poset, map: Vec<u32>) -> Result<InvolutionAction> {
        if map.len() != p.len() {
            return Err(Error::invalid("action has the wrong length"));
        }
        Self::involutive(&map)?;
        for x in 0..p.len() {
            let mut img: Vec<u32> = p.below(x).iter().map(|&y| map[y as usize]).collect();
            img.sort_unstable();
            if img != p.below(map[x] as usize) {
                return Err(Error::invalid(format!(
                    "action is not an order automorphism at `{}`",
                    p.label(x)
                )));
            }
        }
        Ok(InvolutionAction { map })
    }

    pub fn on_complex(k: &SimplicialComplex, map: Vec<u32>) -> Result<InvolutionAction> {
        if map.len() != k.vertex_count() {
            return Err(Error::invalid("action has the wrong length"));
        }
        Self::involutive(&map)?;
        let facets: HashSet<&[u32]> = k.facets().iter().map(|f| f.as_slice()).collect();
        for f in k.facets() {
            let mut img: Vec<u32> = f.iter().map(|&v| map[v as usize]).collect();
            img.sort_unstable();
            if !facets.contains(img.as_slice()) {
                return Err(Error::invalid("action does not permute facets"));
            }
        }
        Ok(InvolutionAction { map })
    }

    pub fn on_graph(g: &Graph, map: Vec<u32>) -> Result<InvolutionAction> {
        if map.len() != g.len() {
            return Err(Error::invalid("action has the wrong length"));
        }
        Self::involutive(&map)?;
        if !g.is_hom_to(g, &map) {
            return Err(Error::NotHomomorphism("action is not a graph automorphism".into()));
        }
        Ok(InvolutionAction { map })
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        (0..self.map.len() as u32)
            .filter(|&x| self.map[x as usize] == x)
            .collect()
    }
}

/// A multi-homomorphism: each source vertex goes to a nonempty finite set of
/// target vertices with all cross products of adjacent vertices adjacent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiHom {
    sets: Vec<Vec<u32>>,
}

impl MultiHom {
    pub fn new(source: &Graph, target: &Graph, sets: Vec<Vec<u32>>) -> Result<MultiHom> {
        let sets: Vec<Vec<u32>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if sets.len() != source.len() {
            return Err(Error::invalid("multihom needs one set per source vertex"));
        }
        if sets
            .iter()
            .any(|s| s.is_empty() || s.iter().any(|&t| t as usize >= target.len()))
        {
            return Err(Error::invalid("multihom sets must be nonempty target subsets"));
        }
        for (a, b) in source.edges() {
            for &u in &sets[a as usize] {
                for &v in &sets[b as usize] {
                    if !target.has_edge(u as usize, v as usize) {
                        return Err(Error::NotHomomorphism(format!(
                            "{} ~ {} but {} !~ {}",
                            source.vertex(a as usize),
                            source.vertex(b as usize),
                            target.vertex(u as usize),
                            target.vertex(v as usize)
                        )));
                    }
                }
            }
        }
        Ok(MultiHom { sets })
    }

    /// 2-colored multi-homomorphism of bigraphs.
    pub fn new_bigraph(source: &Bigraph, target: &Bigraph, sets: Vec<Vec<u32>>) -> Result<MultiHom> {
        let m = MultiHom::new(source.graph(), target.graph(), sets)?;
        for (v, s) in m.sets.iter().enumerate() {
            if s.iter().any(|&t| target.color(t as usize) != source.color(v)) {
                return Err(Error::ImproperColoring(format!(
                    "image of {} leaves its color class",
                    source.graph().vertex(v)
                )));
            }
        }
        Ok(m)
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn image(&self, v: usize) -> &[u32] {
        &self.sets[v]
    }

    /// `(τ * η)(v) = ⋃_{w ∈ η(v)} τ(w)` with `self = η`.
    pub fn then(&self, tau: &MultiHom) -> MultiHom {
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let mut u: Vec<u32> = s.iter().flat_map(|&w| tau.sets[w as usize].clone()).collect();
                u.sort_unstable();
                u.dedup();
                u
            })
            .collect();
        MultiHom { sets }
    }

    /// Pointwise inclusion.
    pub fn le(&self, other: &MultiHom) -> bool {
        self.sets.len() == other.sets.len()
            && self
                .sets
                .iter()
                .zip(&other.sets)
                .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }
}

#[cfg(test)]
mod tests;
