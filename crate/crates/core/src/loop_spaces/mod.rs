//! Truncated loop-space towers: homs from long intervals or cycles, with
//! extension connectors, endpoint maps and stabilization reports.

mod tower;

use std::collections::VecDeque;

use crate::error::{check_cap, Caps, Error, Result};
use crate::graph::{exponential_bigraph, interval_bigraph, Bigraph, Graph, OddInvolution, Vertex};
use crate::topology::{collapse_faces, homology_of_faces, HomologySummary};

pub use tower::{stabilize, LevelSummary, StabilizationReport, StepSummary, Tower, TowerSource, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelKind {
    Path,
    Omega,
    FreeLoop,
    TwistedLoop,
    CycleHom,
}

/// One level of a tower. Vertices are value sequences stored row by row in
/// lexicographic order; every vertex is looped.
///
/// Interval levels have positions `-2n ..= 2n + 1`; cycle levels have
/// positions `0 .. m`.
#[derive(Clone, Debug)]
pub struct Level {
    kind: LevelKind,
    index: usize,
    lo: i64,
    width: usize,
    cyclic: bool,
    target: Graph,
    rows: Vec<u32>,
    classes: Option<Vec<Vec<usize>>>,
}

impl Level {
    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    /// `n` for interval levels, `m` for cycle levels.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Position of the first value in each row.
    pub fn first_position(&self) -> i64 {
        self.lo
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.rows.len() / self.width
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.chunks(self.width.max(1))
    }

    pub fn find(&self, row: &[u32]) -> Option<usize> {
        if row.len() != self.width {
            return None;
        }
        let (mut a, mut b) = (0usize, self.len());
        while a < b {
            let mid = (a + b) / 2;
            match self.row(mid).cmp(row) {
                std::cmp::Ordering::Less => a = mid + 1,
                std::cmp::Ordering::Greater => b = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// The vertex label: a tuple of target labels.
    pub fn label(&self, i: usize) -> Vertex {
        Vertex::Tuple(
            self.row(i)
                .iter()
                .map(|&v| self.target.vertex(v as usize).clone())
                .collect(),
        )
    }

    fn site_neighbors(&self, k: usize) -> Vec<usize> {
        let w = self.width;
        let mut out = Vec::with_capacity(2);
        if k > 0 {
            out.push(k - 1);
        } else if self.cyclic {
            out.push(w - 1);
        }
        if k + 1 < w {
            out.push(k + 1);
        } else if self.cyclic {
            out.push(0);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Rows `γ'` with `γ(i) ~ γ'(j)` for every site edge `{i, j}`, in order.
    pub fn neighbors(&self, i: usize) -> Vec<u32> {
        let g = self.row(i);
        let cands: Vec<Vec<u32>> = (0..self.width)
            .map(|k| {
                let vals: Vec<u32> = self.site_neighbors(k).iter().map(|&s| g[s]).collect();
                self.target.common_neighbors(&vals)
            })
            .collect();
        let mut out = Vec::new();
        self.descend(0, 0, self.len(), &cands, &mut out);
        out
    }

    fn descend(&self, k: usize, a: usize, b: usize, cands: &[Vec<u32>], out: &mut Vec<u32>) {
        if a >= b {
            return;
        }
        if k == self.width {
            out.extend(a as u32..b as u32);
            return;
        }
        let col = |i: usize| self.rows[i * self.width + k];
        for &c in &cands[k] {
            let lo = a + partition(b - a, |t| col(a + t) < c);
            let hi = lo + partition(b - lo, |t| col(lo + t) <= c);
            self.descend(k + 1, lo, hi, cands, out);
        }
    }

    /// Full adjacency lists, bounded by `caps.level_edges`.
    pub fn adjacency(&self, caps: &Caps) -> Result<Vec<Vec<u32>>> {
        let mut total = 0usize;
        (0..self.len())
            .map(|i| {
                let nb = self.neighbors(i);
                total += nb.len();
                check_cap("level adjacencies", caps.level_edges * 2, total)?;
                Ok(nb)
            })
            .collect()
    }

    pub fn to_graph(&self, caps: &Caps) -> Result<Graph> {
        let adj = self.adjacency(caps)?;
        let vertices = (0..self.len()).map(|i| self.label(i)).collect();
        Ok(Graph::from_parts(vertices, adj))
    }

    /// Components by breadth-first search over the full adjacency.
    pub fn components_full(&self) -> (usize, Vec<u32>) {
        let n = self.len();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w as usize);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    /// Components through moves that change one class of tied positions.
    /// Only available when the positions form a bipartite site graph.
    pub fn components_single_site(&self) -> Option<(usize, Vec<u32>)> {
        let classes = self.classes.as_ref()?;
        let n = self.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        let mut buf = vec![0u32; self.width];
        for i in 0..n {
            let g = self.row(i);
            for class in classes {
                let mut cand: Option<Vec<u32>> = None;
                for &s in class {
                    let vals: Vec<u32> = self
                        .site_neighbors(s)
                        .into_iter()
                        .filter(|t| !class.contains(t))
                        .map(|t| g[t])
                        .collect();
                    let c = self.target.common_neighbors(&vals);
                    cand = Some(match cand {
                        None => c,
                        Some(prev) => prev.into_iter().filter(|x| c.binary_search(x).is_ok()).collect(),
                    });
                }
                for c in cand.unwrap_or_default() {
                    if c <= g[class[0]] {
                        continue;
                    }
                    buf.copy_from_slice(g);
                    for &s in class {
                        buf[s] = c;
                    }
                    if let Some(j) = self.find(&buf) {
                        union(&mut parent, i as u32, j as u32);
                    }
                }
            }
        }
        Some(number_roots(&mut parent))
    }

    /// Components, using single-site moves when they are known to suffice.
    pub fn components(&self) -> (usize, Vec<u32>) {
        self.components_single_site()
            .unwrap_or_else(|| self.components_full())
    }

    /// Homology of the clique complex of the subgraph induced on `members`,
    /// dimensions `0..=dim`, after deleting dominated vertices. `None` when
    /// the faces exceed `face_cap`.
    pub fn component_homology(
        &self,
        adjacency: &[Vec<u32>],
        members: &[u32],
        dim: usize,
        face_cap: usize,
    ) -> Option<HomologySummary> {
        let local = |v: &u32| members.binary_search(v).ok().map(|p| p as u32);
        let nb: Vec<Vec<u32>> = members
            .iter()
            .map(|&v| adjacency[v as usize].iter().filter_map(local).collect())
            .collect();
        let keep = strong_core(&nb);
        let pos = |v: &u32| keep.binary_search(v).ok().map(|p| p as u32);
        let nb: Vec<Vec<u32>> = keep
            .iter()
            .map(|&v| nb[v as usize].iter().filter_map(pos).collect())
            .collect();
        let mut faces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dim + 2];
        let mut count = 0usize;
        let mut stack: Vec<u32> = Vec::new();
        fn grow(
            nb: &[Vec<u32>],
            stack: &mut Vec<u32>,
            cands: Vec<u32>,
            faces: &mut Vec<Vec<Vec<u32>>>,
            count: &mut usize,
            cap: usize,
        ) -> bool {
            faces[stack.len() - 1].push(stack.clone());
            *count += 1;
            if *count > cap {
                return false;
            }
            if stack.len() == faces.len() {
                return true;
            }
            for (k, &c) in cands.iter().enumerate() {
                let next: Vec<u32> = cands[k + 1..]
                    .iter()
                    .copied()
                    .filter(|x| nb[c as usize].binary_search(x).is_ok())
                    .collect();
                stack.push(c);
                let ok = grow(nb, stack, next, faces, count, cap);
                stack.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        for v in 0..nb.len() as u32 {
            let cands: Vec<u32> = nb[v as usize].iter().copied().filter(|&w| w > v).collect();
            stack.push(v);
            let ok = grow(&nb, &mut stack, cands, &mut faces, &mut count, face_cap);
            stack.pop();
            if !ok {
                return None;
            }
        }
        for l in faces.iter_mut() {
            l.sort();
        }
        collapse_faces(&mut faces);
        Some(homology_of_faces(&faces, dim))
    }
}

/// Survivors of repeatedly deleting a vertex whose closed neighborhood lies
/// in that of another vertex. `nb` holds open neighborhoods, sorted.
fn strong_core(nb: &[Vec<u32>]) -> Vec<u32> {
    let n = nb.len();
    let mut alive = vec![true; n];
    let mut queue: std::collections::BTreeSet<u32> = (0..n as u32).collect();
    let closed = |v: usize, alive: &[bool]| -> Vec<u32> {
        let mut c: Vec<u32> = nb[v]
            .iter()
            .copied()
            .filter(|&w| alive[w as usize] && w as usize != v)
            .collect();
        c.push(v as u32);
        c.sort_unstable();
        c
    };
    while let Some(v) = queue.pop_first() {
        let v = v as usize;
        if !alive[v] {
            continue;
        }
        let cv = closed(v, &alive);
        let dominated = cv.iter().any(|&w| {
            w as usize != v && {
                let cw = closed(w as usize, &alive);
                cv.iter().all(|x| cw.binary_search(x).is_ok())
            }
        });
        if dominated {
            alive[v] = false;
            queue.extend(cv.iter().copied().filter(|&w| w as usize != v));
        }
    }
    (0..n as u32).filter(|&v| alive[v as usize]).collect()
}

fn partition(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut a, mut b) = (0usize, len);
    while a < b {
        let mid = (a + b) / 2;
        if pred(mid) {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    a
}

fn find_root(parent: &mut [u32], x: u32) -> u32 {
    let mut r = x;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut y = x;
    while parent[y as usize] != r {
        let next = parent[y as usize];
        parent[y as usize] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find_root(parent, a), find_root(parent, b));
    if ra != rb {
        parent[ra.max(rb) as usize] = ra.min(rb);
    }
}

/// Component ids numbered by smallest member.
fn number_roots(parent: &mut [u32]) -> (usize, Vec<u32>) {
    let mut id = vec![u32::MAX; parent.len()];
    let mut comp = vec![0u32; parent.len()];
    let mut count = 0u32;
    for i in 0..parent.len() {
        let r = find_root(parent, i as u32) as usize;
        if id[r] == u32::MAX {
            id[r] = count;
            count += 1;
        }
        comp[i] = id[r];
    }
    (count as usize, comp)
}

/// Depth-first enumeration of walks `row[k] ~ row[k+1]`, in lexicographic order.
fn enumerate_rows(
    target: &Graph,
    width: usize,
    first: &[u32],
    forced: &dyn Fn(usize, &[u32]) -> Option<u32>,
    cyclic: bool,
    cap: usize,
) -> Result<Vec<u32>> {
    let mut rows = Vec::new();
    let mut row = vec![0u32; width];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        target: &Graph,
        width: usize,
        first: &[u32],
        forced: &dyn Fn(usize, &[u32]) -> Option<u32>,
        cyclic: bool,
        row: &mut Vec<u32>,
        rows: &mut Vec<u32>,
        cap: usize,
    ) -> Result<()> {
        if k == width {
            rows.extend_from_slice(row);
            return check_cap("loop-space level vertices", cap, rows.len() / width);
        }
        let choices: Vec<u32> = if k == 0 {
            first.to_vec()
        } else {
            target.neighbors(row[k - 1] as usize).to_vec()
        };
        let fixed = forced(k, row);
        for c in choices {
            if fixed.is_some_and(|f| f != c) {
                continue;
            }
            if cyclic && k + 1 == width && !target.has_edge(c as usize, row[0] as usize) {
                continue;
            }
            row[k] = c;
            rec(k + 1, target, width, first, forced, cyclic, row, rows, cap)?;
        }
        Ok(())
    }
    if width > 0 {
        rec(0, target, width, first, forced, cyclic, &mut row, &mut rows, cap)?;
    }
    Ok(rows)
}

fn interval_level(
    kind: LevelKind,
    x: &Bigraph,
    n: usize,
    forced: &dyn Fn(usize, &[u32]) -> Option<u32>,
    classes: Option<Vec<Vec<usize>>>,
    caps: &Caps,
) -> Result<Level> {
    let width = 4 * n + 2;
    let rows = enumerate_rows(x.graph(), width, &x.part(0), forced, false, caps.exponential_vertices)?;
    Ok(Level {
        kind,
        index: n,
        lo: -2 * n as i64,
        width,
        cyclic: false,
        target: x.graph().clone(),
        rows,
        classes,
    })
}

fn singletons(width: usize) -> Vec<Vec<usize>> {
    (0..width).map(|k| vec![k]).collect()
}

/// The full exponential `X^{L_{-2n,2n+1}}` with all color-respecting maps as vertices.
pub fn path_level(x: &Bigraph, n: usize, caps: &Caps) -> Result<Graph> {
    let l = interval_bigraph(-2 * n as i64, 2 * n as i64 + 1)?;
    exponential_bigraph(&l, x, caps)
}

/// The looped part of [`path_level`]: bigraph homs `L_{-2n,2n+1} → X`.
pub fn path_hom_level(x: &Bigraph, n: usize, caps: &Caps) -> Result<Level> {
    interval_level(LevelKind::Path, x, n, &|_, _| None, Some(singletons(4 * n + 2)), caps)
}

/// Checks a basepoint `K₂ → X` given as `(x(0), x(1))`.
pub fn check_basepoint(x: &Bigraph, base: (u32, u32)) -> Result<()> {
    let (a, b) = (base.0 as usize, base.1 as usize);
    if a >= x.len() || b >= x.len() {
        return Err(Error::invalid("basepoint vertex out of range"));
    }
    if x.color(a) != 0 || x.color(b) != 1 {
        return Err(Error::ImproperColoring(
            "basepoint must send 0 to color 0 and 1 to color 1".into(),
        ));
    }
    if !x.graph().has_edge(a, b) {
        return Err(Error::NotHomomorphism("basepoint values are not adjacent".into()));
    }
    Ok(())
}

/// Homs with `(γ(-2n), γ(-2n+1)) = (γ(2n), γ(2n+1)) = (x(0), x(1))`.
pub fn omega_level(x: &Bigraph, base: (u32, u32), n: usize, caps: &Caps) -> Result<Level> {
    check_basepoint(x, base)?;
    let w = 4 * n + 2;
    let forced = move |k: usize, _: &[u32]| match k {
        0 => Some(base.0),
        1 => Some(base.1),
        k if k == w - 2 => Some(base.0),
        k if k == w - 1 => Some(base.1),
        _ => None,
    };
    interval_level(LevelKind::Omega, x, n, &forced, Some(singletons(w)), caps)
}

/// Homs with `(γ(-2n), γ(-2n+1)) = (γ(2n), γ(2n+1))`.
pub fn free_loop_level(x: &Bigraph, n: usize, caps: &Caps) -> Result<Level> {
    let w = 4 * n + 2;
    let forced = move |k: usize, row: &[u32]| match k {
        k if k == w - 2 && k > 0 => Some(row[0]),
        k if k == w - 1 && k > 1 => Some(row[1]),
        _ => None,
    };
    let classes = if n == 0 {
        singletons(2)
    } else {
        let mut c = vec![vec![0, w - 2], vec![1, w - 1]];
        c.extend((2..w - 2).map(|k| vec![k]));
        c
    };
    interval_level(LevelKind::FreeLoop, x, n, &forced, Some(classes), caps)
}

/// Homs with `(γ(2n), γ(2n+1)) = (α γ(-2n+1), α γ(-2n))`.
pub fn twisted_loop_level(
    x: &Bigraph,
    alpha: &OddInvolution,
    n: usize,
    caps: &Caps,
) -> Result<Level> {
    if alpha.map().len() != x.len() {
        return Err(Error::invalid("involution does not match the bigraph"));
    }
    let w = 4 * n + 2;
    let a = alpha.map().to_vec();
    let forced = move |k: usize, row: &[u32]| {
        if k == w - 2 && k > 0 {
            Some(a[row[1] as usize])
        } else if k == w - 1 {
            Some(a[row[0] as usize])
        } else {
            None
        }
    };
    interval_level(LevelKind::TwistedLoop, x, n, &forced, None, caps)
}

/// Graph homs `C_m → G` (positions `0..m`), adjacent when every cycle edge
/// is carried to an edge.
pub fn cycle_hom_level(g: &Graph, m: usize, caps: &Caps) -> Result<Level> {
    if m < 3 {
        return Err(Error::invalid(format!("cycle length must be at least 3, got {m}")));
    }
    let all: Vec<u32> = (0..g.len() as u32).collect();
    let rows = enumerate_rows(g, m, &all, &|_, _| None, true, caps.exponential_vertices)?;
    Ok(Level {
        kind: LevelKind::CycleHom,
        index: m,
        lo: 0,
        width: m,
        cyclic: true,
        target: g.clone(),
        rows,
        classes: (m % 2 == 0).then(|| singletons(m)),
    })
}

/// The connector row: interval levels repeat both end pairs, cycle levels
/// precompose with `C_{m+2} → C_m`, `m ↦ 0`, `m+1 ↦ m-1`.
pub fn extend_row(level: &Level, row: &[u32]) -> Vec<u32> {
    let w = row.len();
    if level.cyclic {
        let mut out = row.to_vec();
        out.push(row[0]);
        out.push(row[w - 1]);
        out
    } else {
        let mut out = Vec::with_capacity(w + 4);
        out.extend_from_slice(&row[..2]);
        out.extend_from_slice(row);
        out.extend_from_slice(&row[w - 2..]);
        out
    }
}

/// The connector `from → to` as an index map.
pub fn connector(from: &Level, to: &Level) -> Result<Vec<u32>> {
    if from.kind != to.kind || from.cyclic != to.cyclic || to.width != from.width + 4 - 2 * from.cyclic as usize {
        return Err(Error::invalid("connector needs consecutive levels of one tower"));
    }
    (0..from.len())
        .map(|i| {
            let r = extend_row(from, from.row(i));
            to.find(&r)
                .map(|j| j as u32)
                .ok_or_else(|| Error::NotHomomorphism("extended row missing from next level".into()))
        })
        .collect()
}

/// Endpoint restrictions `γ ↦ (γ(-2n), γ(-2n+1))` and `γ ↦ (γ(2n), γ(2n+1))`
/// into the rows of a width-2 level.
pub fn endpoint_maps(level: &Level, base: &Level) -> Result<(Vec<u32>, Vec<u32>)> {
    if level.cyclic || base.width != 2 {
        return Err(Error::invalid("endpoint maps need an interval level and a level-0 target"));
    }
    let w = level.width;
    let look = |r: &[u32]| {
        base.find(r)
            .map(|j| j as u32)
            .ok_or_else(|| Error::NotHomomorphism("endpoint pair missing from level 0".into()))
    };
    let mut minus = Vec::with_capacity(level.len());
    let mut plus = Vec::with_capacity(level.len());
    for i in 0..level.len() {
        let r = level.row(i);
        minus.push(look(&r[..2])?);
        plus.push(look(&r[w - 2..])?);
    }
    Ok((minus, plus))
}

/// The action `γ ↦ α ∘ γ ∘ (i ↦ 1 - i)` on an interval level.
pub fn level_involution(level: &Level, alpha: &OddInvolution) -> Result<Vec<u32>> {
    if level.cyclic {
        return Err(Error::invalid("the reflection action is defined on interval levels"));
    }
    let a = alpha.map();
    if a.len() != level.target.len() {
        return Err(Error::invalid("involution does not match the level target"));
    }
    (0..level.len())
        .map(|i| {
            let r: Vec<u32> = level.row(i).iter().rev().map(|&v| a[v as usize]).collect();
            level
                .find(&r)
                .map(|j| j as u32)
                .ok_or_else(|| Error::invalid("level is not closed under the involution"))
        })
        .collect()
}
