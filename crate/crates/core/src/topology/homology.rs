use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::snf::{invariant_factors, IntegerMatrix};
use crate::complexes::{Poset, SimplicialComplex};
use crate::error::{check_cap, Caps, Result};

/// Integral homology in dimensions `0..=max_dim`. `betti` is reduced; H₀ is
/// reported unreduced through `components`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
    pub components: usize,
}

impl HomologySummary {
    pub fn max_dim(&self) -> usize {
        self.betti.len().saturating_sub(1)
    }

    /// Rank of unreduced `H_k`.
    pub fn rank(&self, k: usize) -> usize {
        if k == 0 {
            self.components
        } else {
            self.betti[k]
        }
    }

    /// Same groups in every dimension both summaries cover.
    pub fn agrees_with(&self, other: &HomologySummary) -> bool {
        let d = self.betti.len().min(other.betti.len());
        self.components == other.components
            && self.betti[..d] == other.betti[..d]
            && self.torsion[..d] == other.torsion[..d]
    }

    /// One line per dimension: `H_k: Z^b + Z/d ...`.
    pub fn report(&self) -> String {
        self.to_string()
    }

    pub fn group(&self, k: usize) -> String {
        let rank = self.rank(k);
        let mut parts = Vec::new();
        match rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion[k].iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.betti.len() {
            writeln!(f, "H_{k}: {}", self.group(k))?;
        }
        Ok(())
    }
}

type SparseCol = Vec<(u32, i64)>;

/// Rank and nontrivial invariant factors of a sparse integer matrix.
fn sparse_invariants(mut cols: Vec<SparseCol>, nrows: usize) -> (usize, Vec<BigInt>) {
    let mut row_index: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &(r, _) in c {
            row_index[r as usize].push(j as u32);
        }
    }
    let mut col_alive = vec![true; cols.len()];
    let mut row_alive = vec![true; nrows];
    let mut rank = 0usize;
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| (cols[j].len(), j));
    let mut overflow = false;
    let mut progress = true;
    while progress && !overflow {
        progress = false;
        for &c in &order {
            if !col_alive[c] || cols[c].is_empty() {
                continue;
            }
            let pivot = cols[c]
                .iter()
                .filter(|&&(r, v)| row_alive[r as usize] && v.abs() == 1)
                .min_by_key(|&&(r, _)| (row_index[r as usize].len(), r))
                .copied();
            let Some((r, arc)) = pivot else {
                continue;
            };
            let mut others: Vec<u32> = row_index[r as usize].clone();
            others.sort_unstable();
            others.dedup();
            let pivot_col = cols[c].clone();
            let mut updates = Vec::new();
            for &j in &others {
                let j = j as usize;
                if j == c || !col_alive[j] {
                    continue;
                }
                let Ok(pos) = cols[j].binary_search_by_key(&r, |&(row, _)| row) else {
                    continue;
                };
                let q = cols[j][pos].1 * arc;
                match axpy(&cols[j], &pivot_col, q) {
                    Some(new) => updates.push((j, new)),
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                break;
            }
            for (j, new) in updates {
                for &(row, _) in &new {
                    row_index[row as usize].push(j as u32);
                }
                cols[j] = new;
            }
            col_alive[c] = false;
            row_alive[r as usize] = false;
            row_index[r as usize].clear();
            rank += 1;
            progress = true;
        }
    }
    // dense remainder
    let rest_cols: Vec<usize> = (0..cols.len())
        .filter(|&j| col_alive[j] && cols[j].iter().any(|&(r, _)| row_alive[r as usize]))
        .collect();
    if rest_cols.is_empty() {
        return (rank, Vec::new());
    }
    let mut rows: Vec<u32> = rest_cols
        .iter()
        .flat_map(|&j| cols[j].iter().map(|&(r, _)| r))
        .filter(|&r| row_alive[r as usize])
        .collect();
    rows.sort_unstable();
    rows.dedup();
    let mut m = IntegerMatrix::zeros(rows.len(), rest_cols.len());
    for (k, &j) in rest_cols.iter().enumerate() {
        for &(r, v) in &cols[j] {
            if let Ok(i) = rows.binary_search(&r) {
                m.set(i, k, BigInt::from(v));
            }
        }
    }
    let factors = invariant_factors(&m);
    rank += factors.len();
    let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
    (rank, torsion)
}

/// `a - q * b` on sorted sparse columns; `None` on overflow.
fn axpy(a: &SparseCol, b: &SparseCol, q: i64) -> Option<SparseCol> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i]);
            i += 1;
        } else if rb < ra {
            out.push((rb, b[j].1.checked_mul(q)?.checked_neg()?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(b[j].1.checked_mul(q)?)?;
            if v != 0 {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Homology from face lists `faces[d]` (sorted, each face sorted), `d ≤ max_dim + 1`.
pub(crate) fn homology_of_faces(faces: &[Vec<Vec<u32>>], max_dim: usize) -> HomologySummary {
    let count = |d: usize| faces.get(d).map_or(0, Vec::len);
    let components = components_of(faces);
    // rank and torsion of ∂_d : C_d → C_{d-1}, d = 1..=max_dim+1
    let mut rank = vec![0usize; max_dim + 3];
    let mut tors = vec![Vec::new(); max_dim + 3];
    rank[0] = usize::from(count(0) > 0);
    for d in 1..=max_dim + 1 {
        if count(d) == 0 || count(d - 1) == 0 {
            continue;
        }
        let lower: HashMap<&[u32], u32> = faces[d - 1]
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i as u32))
            .collect();
        let mut buf = Vec::with_capacity(d);
        let cols: Vec<SparseCol> = faces[d]
            .iter()
            .map(|f| {
                let mut col: SparseCol = (0..f.len())
                    .map(|i| {
                        buf.clear();
                        buf.extend(f.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v));
                        let row = lower[buf.as_slice()];
                        (row, if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        let (r, t) = sparse_invariants(cols, count(d - 1));
        rank[d] = r;
        tors[d] = t;
    }
    let betti = (0..=max_dim)
        .map(|k| count(k) - rank[k] - rank[k + 1])
        .collect();
    let torsion = (0..=max_dim).map(|k| tors[k + 1].clone()).collect();
    HomologySummary {
        betti,
        torsion,
        components,
    }
}

fn components_of(faces: &[Vec<Vec<u32>>]) -> usize {
    let Some(verts) = faces.first() else {
        return 0;
    };
    let ids: Vec<u32> = verts.iter().map(|f| f[0]).collect();
    let pos = |v: u32| ids.binary_search(&v).unwrap();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut count = ids.len();
    if let Some(edges) = faces.get(1) {
        for e in edges {
            let (a, b) = (find(&mut parent, pos(e[0])), find(&mut parent, pos(e[1])));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

/// Elementary collapses on face lists, smallest free face first. Every face
/// in `faces[d]` must have all its boundary faces in `faces[d - 1]`.
pub(crate) fn collapse_faces(faces: &mut [Vec<Vec<u32>>]) {
    let top = faces.len();
    if top < 2 {
        return;
    }
    let index: Vec<HashMap<Vec<u32>, u32>> = faces
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect())
        .collect();
    let mut alive: Vec<Vec<bool>> = faces.iter().map(|l| vec![true; l.len()]).collect();
    let mut cofaces: Vec<Vec<Vec<u32>>> = faces.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    let boundary = |d: usize, f: &[u32]| -> Vec<u32> {
        (0..f.len())
            .map(|i| {
                let b: Vec<u32> = f.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                index[d - 1][&b]
            })
            .collect::<Vec<u32>>()
    };
    let mut bd: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top];
    for d in 1..top {
        bd[d] = faces[d].iter().map(|f| boundary(d, f)).collect();
        for (j, b) in bd[d].iter().enumerate() {
            for &i in b {
                cofaces[d - 1][i as usize].push(j as u32);
            }
        }
    }
    let mut live_cofaces: Vec<Vec<usize>> = cofaces
        .iter()
        .map(|l| l.iter().map(Vec::len).collect())
        .collect();
    let mut queue: BTreeSet<(usize, u32)> = BTreeSet::new();
    for d in 0..top - 1 {
        for i in 0..faces[d].len() {
            if live_cofaces[d][i] == 1 {
                queue.insert((d, i as u32));
            }
        }
    }
    while let Some((d, i)) = queue.pop_first() {
        let i = i as usize;
        if !alive[d][i] || live_cofaces[d][i] != 1 {
            continue;
        }
        let t = *cofaces[d][i]
            .iter()
            .find(|&&t| alive[d + 1][t as usize])
            .unwrap() as usize;
        alive[d][i] = false;
        alive[d + 1][t] = false;
        for &b in &bd[d + 1][t] {
            let b = b as usize;
            live_cofaces[d][b] -= 1;
            if alive[d][b] && live_cofaces[d][b] == 1 {
                queue.insert((d, b as u32));
            }
        }
        if d > 0 {
            for &b in &bd[d][i] {
                let b = b as usize;
                live_cofaces[d - 1][b] -= 1;
                if alive[d - 1][b] && live_cofaces[d - 1][b] == 1 {
                    queue.insert((d - 1, b as u32));
                }
            }
        }
    }
    for d in 0..top {
        let mut k = 0;
        faces[d].retain(|_| {
            k += 1;
            alive[d][k - 1]
        });
    }
}

/// Reduced integral homology of `K` in dimensions `0..=max_dim`.
pub fn homology(k: &SimplicialComplex, max_dim: usize, caps: &Caps) -> Result<HomologySummary> {
    let faces = k.faces(max_dim + 1, caps.complex_faces)?;
    Ok(homology_of_faces(&faces, max_dim))
}

/// Same groups as [`homology`], computed after elementary collapses.
pub fn homology_collapsed(
    k: &SimplicialComplex,
    max_dim: usize,
    caps: &Caps,
) -> Result<HomologySummary> {
    let mut faces = k.faces(max_dim + 1, caps.complex_faces)?;
    collapse_faces(&mut faces);
    Ok(homology_of_faces(&faces, max_dim))
}

/// Chains of `P` with at most `max_len` elements, grouped by length.
pub fn chains(p: &Poset, max_len: usize, cap: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_len];
    let mut total = 0usize;
    let mut chain = Vec::new();
    fn grow(
        p: &Poset,
        chain: &mut Vec<u32>,
        max_len: usize,
        out: &mut [Vec<Vec<u32>>],
        total: &mut usize,
        cap: usize,
    ) -> Result<()> {
        out[chain.len() - 1].push(chain.clone());
        *total += 1;
        check_cap("chains", cap, *total)?;
        if chain.len() == max_len {
            return Ok(());
        }
        let last = *chain.last().unwrap() as usize;
        for &y in p.above(last) {
            chain.push(y);
            grow(p, chain, max_len, out, total, cap)?;
            chain.pop();
        }
        Ok(())
    }
    if max_len == 0 {
        return Ok(out);
    }
    for x in 0..p.len() as u32 {
        chain.push(x);
        grow(p, &mut chain, max_len, &mut out, &mut total, cap)?;
        chain.pop();
    }
    for l in &mut out {
        l.sort();
    }
    Ok(out)
}

/// Homology of the order complex of `P`, computed on its Stong core.
pub fn poset_homology(p: &Poset, max_dim: usize, caps: &Caps) -> Result<HomologySummary> {
    let (core, _) = super::stong_core(p);
    let mut faces = chains(&core, max_dim + 2, caps.complex_faces)?;
    collapse_faces(&mut faces);
    Ok(homology_of_faces(&faces, max_dim))
}
