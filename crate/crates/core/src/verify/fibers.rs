use std::collections::HashMap;

use crate::complexes::{clique_complex, face_poset, InvolutionAction, Poset, PosetMap};
use crate::error::{check_cap, Caps, Error, Result};
use crate::graph::{product, Bigraph, OddInvolution};
use crate::loop_spaces::{connector, endpoint_maps, level_involution, path_hom_level, Level};

/// The truncated map `C(X^{L_{-2n,2n+1}}) → C(X^{K₂} × X^{K₂})`,
/// `σ ↦ (e₋, e₊)(σ)`, on face posets.
#[derive(Clone, Debug)]
pub struct EndpointFiberMap {
    pub level: usize,
    pub source: Poset,
    pub target: Poset,
    pub map: PosetMap,
    /// Reflection action on the source and exchange action on the target.
    pub actions: Option<(InvolutionAction, InvolutionAction)>,
    base: Level,
    top: Level,
    /// Product vertex `a·|X^{K₂}| + b` of each level vertex.
    ends: Vec<u32>,
}

impl EndpointFiberMap {
    pub fn actions(&self) -> Option<(&InvolutionAction, &InvolutionAction)> {
        self.actions.as_ref().map(|(a, b)| (a, b))
    }

    /// Level vertices whose endpoint pair lies in target face `y`.
    fn fiber_vertices(&self, ends: &[u32], y: usize) -> Vec<bool> {
        let block = &self.target.blocks(y).expect("face poset")[0];
        ends.iter().map(|e| block.binary_search(e).is_ok()).collect()
    }
}

fn face_lookup(p: &Poset) -> HashMap<Vec<u32>, u32> {
    (0..p.len())
        .map(|i| (p.blocks(i).expect("face poset")[0].clone(), i as u32))
        .collect()
}

fn face_action(p: &Poset, idx: &HashMap<Vec<u32>, u32>, vmap: &[u32]) -> Result<InvolutionAction> {
    let map = (0..p.len())
        .map(|i| {
            let mut img: Vec<u32> = p.blocks(i).unwrap()[0].iter().map(|&v| vmap[v as usize]).collect();
            img.sort_unstable();
            idx.get(&img)
                .copied()
                .ok_or_else(|| Error::invalid("involution does not preserve faces"))
        })
        .collect::<Result<Vec<u32>>>()?;
    InvolutionAction::on_poset(p, map)
}

pub fn endpoint_fiber_map(
    x: &Bigraph,
    alpha: Option<&OddInvolution>,
    n: usize,
    caps: &Caps,
) -> Result<EndpointFiberMap> {
    let base = path_hom_level(x, 0, caps)?;
    let top = path_hom_level(x, n, caps)?;
    let (minus, plus) = endpoint_maps(&top, &base)?;
    let nb = base.len() as u32;
    let ends: Vec<u32> = minus.iter().zip(&plus).map(|(&a, &b)| a * nb + b).collect();
    let mut edges = top.len();
    for i in 0..top.len() {
        edges += top.neighbors(i).len() / 2;
        check_cap("simplices", caps.complex_faces, edges)?;
    }
    let g0 = base.to_graph(caps)?;
    let gt = product(&g0, &g0);
    let gs = top.to_graph(caps)?;
    if !gs.is_reflexive() || !gt.is_reflexive() {
        return Err(Error::invalid("level graphs must be reflexive"));
    }
    let source = face_poset(&clique_complex(&gs), caps)?;
    let target = face_poset(&clique_complex(&gt), caps)?;
    let tidx = face_lookup(&target);
    let map = (0..source.len())
        .map(|i| {
            let mut img: Vec<u32> = source.blocks(i).unwrap()[0]
                .iter()
                .map(|&v| ends[v as usize])
                .collect();
            img.sort_unstable();
            img.dedup();
            tidx.get(&img)
                .copied()
                .ok_or_else(|| Error::invalid("endpoint image is not a face"))
        })
        .collect::<Result<Vec<u32>>>()?;
    let map = PosetMap::new(&source, &target, map)?;
    let actions = match alpha {
        None => None,
        Some(alpha) => {
            let sv = level_involution(&top, alpha)?;
            let bv = level_involution(&base, alpha)?;
            let tv: Vec<u32> = (0..nb * nb)
                .map(|p| bv[(p % nb) as usize] * nb + bv[(p / nb) as usize])
                .collect();
            let sa = face_action(&source, &face_lookup(&source), &sv)?;
            let ta = face_action(&target, &tidx, &tv)?;
            Some((sa, ta))
        }
    };
    Ok(EndpointFiberMap {
        level: n,
        source,
        target,
        map,
        actions,
        base,
        top,
        ends,
    })
}

/// Outcome of the π₀ zig-zag test through level `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagReport {
    pub pairs: usize,
    pub vertices_checked: usize,
    pub violations: Vec<String>,
}

fn restricted_components(adj: &[Vec<u32>], keep: &[bool]) -> Vec<u32> {
    let mut comp = vec![u32::MAX; keep.len()];
    let mut next = 0;
    for s in 0..keep.len() {
        if !keep[s] || comp[s] != u32::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                let w = w as usize;
                if keep[w] && comp[w] == u32::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// For every pair `σ < σ′` of target faces, with `A_k(σ)` the level-`k`
/// vertices over `σ`, `s` the connector and `u(γ) = p ++ γ ++ q` for a fixed
/// `(p, q) ∈ σ`: checks `u(γ) ≈ s(γ)` in `A_{n+1}(σ′)` for `γ ∈ A_n(σ′)` and
/// in `A_{n+1}(σ)` for `γ ∈ A_n(σ)`, where `≈` is "same component".
pub fn zigzag_pi0(fm: &EndpointFiberMap, x: &Bigraph, caps: &Caps) -> Result<ZigzagReport> {
    let next = path_hom_level(x, fm.level + 1, caps)?;
    let (minus, plus) = endpoint_maps(&next, &fm.base)?;
    let nb = fm.base.len() as u32;
    let next_ends: Vec<u32> = minus.iter().zip(&plus).map(|(&a, &b)| a * nb + b).collect();
    let adj = next.adjacency(caps)?;
    let s = connector(&fm.top, &next)?;
    let target = &fm.target;
    let mut comps: Vec<Option<Vec<u32>>> = vec![None; target.len()];
    let mut comp_of = |y: usize| -> Vec<u32> {
        comps[y]
            .get_or_insert_with(|| restricted_components(&adj, &fm.fiber_vertices(&next_ends, y)))
            .clone()
    };
    let mut report = ZigzagReport {
        pairs: 0,
        vertices_checked: 0,
        violations: Vec::new(),
    };
    for y2 in 0..target.len() {
        let c2 = comp_of(y2);
        let over2 = fm.fiber_vertices(&fm.ends, y2);
        for &y in target.below(y2) {
            let y = y as usize;
            report.pairs += 1;
            let c1 = comp_of(y);
            let over1 = fm.fiber_vertices(&fm.ends, y);
            let p = target.blocks(y).unwrap()[0][0];
            let (pre, post) = (fm.base.row((p / nb) as usize), fm.base.row((p % nb) as usize));
            for g in 0..fm.top.len() {
                if !over2[g] {
                    continue;
                }
                let mut row = pre.to_vec();
                row.extend_from_slice(fm.top.row(g));
                row.extend_from_slice(post);
                let Some(u) = next.find(&row) else {
                    report.violations.push(format!(
                        "{} < {}: u(γ{g}) is not a homomorphism",
                        target.label(y),
                        target.label(y2)
                    ));
                    continue;
                };
                let sg = s[g] as usize;
                report.vertices_checked += 1;
                if c2[u] != c2[sg] {
                    report.violations.push(format!(
                        "{} < {}: u(γ{g}) and s(γ{g}) lie in different components over the larger face",
                        target.label(y),
                        target.label(y2)
                    ));
                }
                if over1[g] && c1[u] != c1[sg] {
                    report.violations.push(format!(
                        "{}: u(γ{g}) and s(γ{g}) lie in different components",
                        target.label(y)
                    ));
                }
            }
        }
    }
    Ok(report)
}
