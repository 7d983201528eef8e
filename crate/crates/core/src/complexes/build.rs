use std::collections::{HashMap, VecDeque};

use super::{InvolutionAction, Poset, SimplicialComplex};
use crate::error::{check_cap, Caps, Error, Result};
use crate::graph::{Bigraph, Graph, OddInvolution};

fn set_label(g: &Graph, s: &[u32]) -> String {
    let inner: Vec<String> = s.iter().map(|&v| g.vertex(v as usize).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn tuple_label(g: &Graph, t: &[Vec<u32>]) -> String {
    let inner: Vec<String> = t.iter().map(|s| set_label(g, s)).collect();
    format!("({})", inner.join(","))
}

fn nonempty_subsets(items: &[u32], f: &mut dyn FnMut(Vec<u32>) -> Result<()>) -> Result<()> {
    if items.len() >= 63 {
        return Err(Error::SizeCap {
            what: "subsets of a vertex set",
            bound: 62,
            counted: items.len(),
        });
    }
    for mask in 1u64..(1u64 << items.len()) {
        f(items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect())?;
    }
    Ok(())
}

/// Pairs `(σ, τ)` with `σ ⊆ left`, `τ ⊆ CN(σ)`, both nonempty.
fn box_pairs(g: &Graph, left: &[u32], caps: &Caps) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut out = Vec::new();
    fn grow(
        g: &Graph,
        left: &[u32],
        start: usize,
        sigma: &mut Vec<u32>,
        cn: Vec<u32>,
        out: &mut Vec<Vec<Vec<u32>>>,
        caps: &Caps,
    ) -> Result<()> {
        for i in start..left.len() {
            let v = left[i];
            let next: Vec<u32> = cn
                .iter()
                .copied()
                .filter(|t| g.neighbors(v as usize).binary_search(t).is_ok())
                .collect();
            if next.is_empty() {
                continue;
            }
            sigma.push(v);
            let extra = (1usize << next.len().min(62)) - 1;
            check_cap("poset elements", caps.poset_elements, out.len() + extra)?;
            nonempty_subsets(&next, &mut |tau| {
                out.push(vec![sigma.clone(), tau]);
                Ok(())
            })?;
            grow(g, left, i + 1, sigma, next, out, caps)?;
            sigma.pop();
        }
        Ok(())
    }
    grow(
        g,
        left,
        0,
        &mut Vec::new(),
        (0..g.len() as u32).collect(),
        &mut out,
        caps,
    )?;
    Ok(out)
}

fn set_poset(g: &Graph, tuples: Vec<Vec<Vec<u32>>>, caps: &Caps) -> Result<Poset> {
    check_cap("poset elements", caps.poset_elements, tuples.len())?;
    let labels = tuples.iter().map(|t| tuple_label(g, t)).collect();
    Poset::from_set_tuples(tuples, labels, caps.complex_faces)
}

fn block_index(p: &Poset) -> HashMap<Vec<Vec<u32>>, u32> {
    (0..p.len())
        .map(|i| (p.blocks(i).unwrap().to_vec(), i as u32))
        .collect()
}

/// The box complex `B(G)` with the swap `(σ, τ) ↦ (τ, σ)`.
pub fn box_complex(g: &Graph, caps: &Caps) -> Result<(Poset, InvolutionAction)> {
    let all: Vec<u32> = (0..g.len() as u32).collect();
    let p = set_poset(g, box_pairs(g, &all, caps)?, caps)?;
    let idx = block_index(&p);
    let swap = (0..p.len())
        .map(|i| {
            let b = p.blocks(i).unwrap();
            idx[&vec![b[1].clone(), b[0].clone()]]
        })
        .collect();
    let action = InvolutionAction::on_poset(&p, swap)?;
    Ok((p, action))
}

/// `B_{/K₂}(X)`: pairs `σ ⊆ V₀`, `τ ⊆ V₁` with `σ × τ ⊆ E(X)`. With an odd
/// involution the action `(σ, τ) ↦ (α(τ), α(σ))` is attached.
pub fn box_complex_bigraph(
    x: &Bigraph,
    alpha: Option<&OddInvolution>,
    caps: &Caps,
) -> Result<(Poset, Option<InvolutionAction>)> {
    let p = set_poset(x.graph(), box_pairs(x.graph(), &x.part(0), caps)?, caps)?;
    let Some(alpha) = alpha else {
        return Ok((p, None));
    };
    let idx = block_index(&p);
    let img = |s: &[u32]| -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|&t| alpha.apply(t as usize) as u32).collect();
        v.sort_unstable();
        v
    };
    let map = (0..p.len())
        .map(|i| {
            let b = p.blocks(i).unwrap();
            idx[&vec![img(&b[1]), img(&b[0])]]
        })
        .collect();
    let action = InvolutionAction::on_poset(&p, map)?;
    Ok((p, Some(action)))
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    q.push_back(w as usize);
                }
            }
        }
    }
    order
}

fn multihoms(
    t: &Graph,
    g: &Graph,
    domains: &[Vec<u32>],
    caps: &Caps,
) -> Result<Vec<Vec<Vec<u32>>>> {
    let order = bfs_order(t);
    let mut pos = vec![0usize; t.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    struct Ctx<'a> {
        t: &'a Graph,
        g: &'a Graph,
        domains: &'a [Vec<u32>],
        order: Vec<usize>,
        pos: Vec<usize>,
        cur: Vec<Vec<u32>>,
        out: Vec<Vec<Vec<u32>>>,
        cap: usize,
    }
    fn subsets(
        c: &mut Ctx,
        k: usize,
        v: usize,
        cand: &[u32],
        start: usize,
        looped: bool,
    ) -> Result<()> {
        for i in start..cand.len() {
            let u = cand[i];
            if looped
                && !c.cur[v]
                    .iter()
                    .all(|&w| c.g.has_edge(u as usize, w as usize))
            {
                continue;
            }
            c.cur[v].push(u);
            rec(c, k + 1)?;
            subsets(c, k, v, cand, i + 1, looped)?;
            c.cur[v].pop();
        }
        Ok(())
    }
    fn rec(c: &mut Ctx, k: usize) -> Result<()> {
        if k == c.order.len() {
            c.out.push(c.cur.clone());
            return check_cap("multihomomorphisms", c.cap, c.out.len());
        }
        let v = c.order[k];
        let looped = c.t.is_looped(v);
        let mut cand: Vec<u32> = c.domains[v].clone();
        for &w in c.t.neighbors(v) {
            let w = w as usize;
            if w != v && c.pos[w] < k {
                for &u in &c.cur[w] {
                    let nb = c.g.neighbors(u as usize);
                    cand.retain(|x| nb.binary_search(x).is_ok());
                }
            }
        }
        if looped {
            cand.retain(|&x| c.g.is_looped(x as usize));
        }
        subsets(c, k, v, &cand, 0, looped)
    }
    fn start(c: &mut Ctx) -> Result<()> {
        if c.order.is_empty() {
            c.out.push(Vec::new());
            return Ok(());
        }
        rec(c, 0)
    }
    let mut ctx = Ctx {
        t,
        g,
        domains,
        order,
        pos,
        cur: vec![Vec::new(); t.len()],
        out: Vec::new(),
        cap: caps.poset_elements,
    };
    start(&mut ctx)?;
    Ok(ctx.out)
}

/// `Hom(T, G)`: multi-homomorphisms ordered by pointwise inclusion.
pub fn hom_complex(t: &Graph, g: &Graph, caps: &Caps) -> Result<Poset> {
    let domains = vec![(0..g.len() as u32).collect::<Vec<_>>(); t.len()];
    set_poset(g, multihoms(t, g, &domains, caps)?, caps)
}

/// `Hom_{/K₂}(X, Y)`: 2-colored multi-homomorphisms.
pub fn hom_complex_bigraph(x: &Bigraph, y: &Bigraph, caps: &Caps) -> Result<Poset> {
    let parts = [y.part(0), y.part(1)];
    let domains: Vec<Vec<u32>> = (0..x.len())
        .map(|v| parts[x.color(v) as usize].clone())
        .collect();
    set_poset(y.graph(), multihoms(x.graph(), y.graph(), &domains, caps)?, caps)
}

fn vertex_labels(g: &Graph) -> Vec<String> {
    g.vertices().iter().map(|v| v.to_string()).collect()
}

/// `N(G)`: vertex sets with a common neighbor; facets are the maximal neighborhoods.
pub fn neighborhood_complex(g: &Graph) -> SimplicialComplex {
    let sets = (0..g.len()).map(|v| g.neighbors(v).to_vec()).collect();
    SimplicialComplex::new(vertex_labels(g), sets).expect("neighborhoods are vertex sets")
}

fn maximal_cliques(g: &Graph) -> Vec<Vec<u32>> {
    let nb: Vec<Vec<u32>> = (0..g.len())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| w as usize != v)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    fn bk(nb: &[Vec<u32>], r: &mut Vec<u32>, p: Vec<u32>, x: Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .max_by_key(|&&u| {
                p.iter()
                    .filter(|w| nb[u as usize].binary_search(w).is_ok())
                    .count()
            })
            .copied()
            .unwrap();
        let cands: Vec<u32> = p
            .iter()
            .copied()
            .filter(|w| nb[pivot as usize].binary_search(w).is_err())
            .collect();
        let mut p = p;
        let mut x = x;
        for v in cands {
            let n = &nb[v as usize];
            let p2 = p.iter().copied().filter(|w| n.binary_search(w).is_ok()).collect();
            let x2 = x.iter().copied().filter(|w| n.binary_search(w).is_ok()).collect();
            r.push(v);
            bk(nb, r, p2, x2, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
            x.sort_unstable();
        }
    }
    if g.is_empty() {
        return out;
    }
    bk(&nb, &mut Vec::new(), (0..g.len() as u32).collect(), Vec::new(), &mut out);
    out
}

/// `C(G)`: cliques of the maximal reflexive subgraph.
pub fn clique_complex(g: &Graph) -> SimplicialComplex {
    let (r, _) = g.reflexive_part();
    SimplicialComplex::from_facets(vertex_labels(&r), maximal_cliques(&r))
}

/// The order complex: chains of `P`, generated by maximal chains.
pub fn order_complex(p: &Poset, caps: &Caps) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    let mut chain = Vec::new();
    fn up(
        p: &Poset,
        x: u32,
        chain: &mut Vec<u32>,
        facets: &mut Vec<Vec<u32>>,
        cap: usize,
    ) -> Result<()> {
        chain.push(x);
        let covers = p.upper_covers(x as usize);
        if covers.is_empty() {
            facets.push(chain.clone());
            check_cap("maximal chains", cap, facets.len())?;
        }
        for &y in covers {
            up(p, y, chain, facets, cap)?;
        }
        chain.pop();
        Ok(())
    }
    for m in p.minimal_elements() {
        up(p, m, &mut chain, &mut facets, caps.complex_faces)?;
    }
    Ok(SimplicialComplex::from_facets(p.labels().to_vec(), facets))
}

/// Nonempty faces ordered by inclusion.
pub fn face_poset(k: &SimplicialComplex, caps: &Caps) -> Result<Poset> {
    let dim = match k.dim() {
        Some(d) => d,
        None => return Poset::from_below(Vec::new(), Vec::new()),
    };
    let faces: Vec<Vec<Vec<u32>>> = k
        .faces(dim, caps.complex_faces)?
        .into_iter()
        .flatten()
        .map(|f| vec![f])
        .collect();
    check_cap("poset elements", caps.poset_elements, faces.len())?;
    let labels = faces
        .iter()
        .map(|f| {
            let inner: Vec<&str> = f[0].iter().map(|&v| k.labels()[v as usize].as_str()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    Poset::from_set_tuples(faces, labels, caps.complex_faces)
}

/// Componentwise order on `P × Q`.
pub fn product_poset(p: &Poset, q: &Poset, caps: &Caps) -> Result<Poset> {
    let n = p.len().saturating_mul(q.len());
    check_cap("poset elements", caps.poset_elements, n)?;
    let nq = q.len();
    let mut labels = Vec::with_capacity(n);
    let mut below = Vec::with_capacity(n);
    let mut total = 0usize;
    for a in 0..p.len() {
        for b in 0..nq {
            labels.push(format!("({},{})", p.label(a), q.label(b)));
            let mut l = Vec::new();
            for &c in &p.down_set(a) {
                for &d in &q.down_set(b) {
                    if (c as usize, d as usize) != (a, b) {
                        l.push(c * nq as u32 + d);
                    }
                }
            }
            total += l.len();
            check_cap("poset relations", caps.complex_faces, total)?;
            below.push(l);
        }
    }
    Poset::from_below(labels, below)
}
