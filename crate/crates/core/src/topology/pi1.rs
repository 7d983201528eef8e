use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::snf::{invariant_factors, IntegerMatrix};
use crate::complexes::SimplicialComplex;
use crate::error::{Caps, Error, Result};

/// A letter is a generator index with exponent ±1.
pub type Letter = (u32, i8);

/// A finite group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "gen {g}")?;
        }
        for r in &self.relators {
            let w: Vec<String> = r
                .iter()
                .map(|&(g, e)| {
                    let name = &self.generators[g as usize];
                    if e < 0 {
                        format!("-{name}")
                    } else {
                        name.clone()
                    }
                })
                .collect();
            writeln!(f, "rel {}", w.join(" "))?;
        }
        Ok(())
    }
}

fn free_reduce(w: &mut Vec<Letter>) {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        match out.last() {
            Some(&(g, e)) if g == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    // cyclic reduction
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[start].0 == out[end - 1].0 && out[start].1 == -out[end - 1].1 {
        start += 1;
        end -= 1;
    }
    *w = out[start..end].to_vec();
}

fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

impl GroupPresentation {
    /// Elementary Tietze moves: drop trivial relators, eliminate generators
    /// killed by length-1 relators, substitute away length-2 relators `g^ε h^δ`.
    pub fn simplify(&mut self) {
        let n = self.generators.len();
        let mut subst: Vec<Option<Vec<Letter>>> = vec![None; n];
        loop {
            for r in &mut self.relators {
                free_reduce(r);
            }
            self.relators.retain(|r| !r.is_empty());
            self.relators.sort();
            self.relators.dedup();
            let pick = self
                .relators
                .iter()
                .position(|r| r.len() == 1 || (r.len() == 2 && r[0].0 != r[1].0));
            let Some(i) = pick else {
                break;
            };
            let r = self.relators.remove(i);
            // r = g^ε · rest, so g = (rest)^{-ε}
            let (g, e) = r[0];
            let rest = &r[1..];
            let image: Vec<Letter> = if e > 0 { invert(rest) } else { rest.to_vec() };
            subst[g as usize] = Some(image.clone());
            for rel in &mut self.relators {
                let mut next = Vec::with_capacity(rel.len());
                for &(h, f) in rel.iter() {
                    if h == g {
                        if f > 0 {
                            next.extend_from_slice(&image);
                        } else {
                            next.extend(invert(&image));
                        }
                    } else {
                        next.push((h, f));
                    }
                }
                *rel = next;
            }
        }
        // renumber the surviving generators
        let keep: Vec<usize> = (0..n).filter(|&g| subst[g].is_none()).collect();
        let mut renum = vec![u32::MAX; n];
        for (k, &g) in keep.iter().enumerate() {
            renum[g] = k as u32;
        }
        self.generators = keep.iter().map(|&g| self.generators[g].clone()).collect();
        for r in &mut self.relators {
            for l in r.iter_mut() {
                l.0 = renum[l.0 as usize];
            }
        }
        self.relators.sort();
    }
}

/// Edge-path presentation of `π₁(K, base)` from a BFS spanning tree of the
/// base component, simplified by elementary Tietze moves.
pub fn edge_path_presentation(
    k: &SimplicialComplex,
    base: usize,
    caps: &Caps,
) -> Result<GroupPresentation> {
    if base >= k.vertex_count() {
        return Err(Error::invalid(format!("base vertex {base} is not a vertex")));
    }
    let faces = k.faces(2, caps.complex_faces)?;
    let verts: Vec<u32> = faces[0].iter().map(|f| f[0]).collect();
    if verts.binary_search(&(base as u32)).is_err() {
        return Err(Error::invalid(format!(
            "base vertex `{}` lies in no simplex",
            k.labels()[base]
        )));
    }
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for e in &faces[1] {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let mut seen: HashMap<u32, ()> = HashMap::from([(base as u32, ())]);
    let mut tree: HashMap<(u32, u32), ()> = HashMap::new();
    let mut q = VecDeque::from([base as u32]);
    while let Some(u) = q.pop_front() {
        let mut nb = adj.get(&u).cloned().unwrap_or_default();
        nb.sort_unstable();
        for w in nb {
            if seen.insert(w, ()).is_none() {
                tree.insert((u.min(w), u.max(w)), ());
                q.push_back(w);
            }
        }
    }
    let mut gens = Vec::new();
    let mut gen_of: HashMap<(u32, u32), u32> = HashMap::new();
    for e in &faces[1] {
        let key = (e[0], e[1]);
        if seen.contains_key(&e[0]) && !tree.contains_key(&key) {
            gen_of.insert(key, gens.len() as u32);
            gens.push(format!("x{}", gens.len()));
        }
    }
    let letter = |a: u32, b: u32| -> Option<Letter> {
        let (key, e) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
        gen_of.get(&key).map(|&g| (g, e))
    };
    let mut relators = Vec::new();
    for t in faces.get(2).into_iter().flatten() {
        if !seen.contains_key(&t[0]) {
            continue;
        }
        let w: Vec<Letter> = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
            .iter()
            .filter_map(|&(a, b)| letter(a, b))
            .collect();
        relators.push(w);
    }
    let mut p = GroupPresentation {
        generators: gens,
        relators,
    };
    p.simplify();
    Ok(p)
}

/// Abelianization via the Smith normal form of the relator exponent matrix.
pub fn abelianization(p: &GroupPresentation) -> AbelianGroup {
    let n = p.generators.len();
    if p.relators.is_empty() || n == 0 {
        return AbelianGroup {
            rank: n,
            torsion: Vec::new(),
        };
    }
    let mut m = IntegerMatrix::zeros(p.relators.len(), n);
    for (i, r) in p.relators.iter().enumerate() {
        for &(g, e) in r {
            let v = m.get(i, g as usize) + BigInt::from(e);
            m.set(i, g as usize, v);
        }
    }
    let f = invariant_factors(&m);
    AbelianGroup {
        rank: n - f.len(),
        torsion: f.into_iter().filter(|d| !d.is_one()).collect(),
    }
}
