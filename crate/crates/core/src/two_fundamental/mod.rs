//! Based loops, the two moves generating the 2-fundamental group, parity,
//! the lift to the Kronecker cover and the map `Φ` into Ω levels.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Caps, Error, Result};
use crate::graph::{kronecker_cover, Bigraph, Graph, Vertex};
use crate::loop_spaces::{check_basepoint, omega_level, Level};

/// A closed walk `v₀ ~ v₁ ~ ⋯ ~ v_n` with `v₀ = v_n`, stored as vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasedLoop {
    values: Vec<u32>,
}

impl BasedLoop {
    pub fn new(g: &Graph, values: Vec<u32>) -> Result<BasedLoop> {
        let (Some(&first), Some(&last)) = (values.first(), values.last()) else {
            return Err(Error::invalid("a loop needs at least one value"));
        };
        if values.iter().any(|&v| v as usize >= g.len()) {
            return Err(Error::invalid("loop value out of range"));
        }
        if first != last {
            return Err(Error::invalid("loop must start and end at its base"));
        }
        if let Some(p) = values
            .windows(2)
            .position(|w| !g.has_edge(w[0] as usize, w[1] as usize))
        {
            return Err(Error::NotHomomorphism(format!(
                "{} and {} are not adjacent",
                g.vertex(values[p] as usize),
                g.vertex(values[p + 1] as usize)
            )));
        }
        Ok(BasedLoop { values })
    }

    pub fn trivial(base: u32) -> BasedLoop {
        BasedLoop { values: vec![base] }
    }

    pub fn base(&self) -> u32 {
        self.values[0]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.values.len() == 1
    }

    pub fn parity(&self) -> u8 {
        (self.len() % 2) as u8
    }
}

/// `l(γ) mod 2`.
pub fn parity(gamma: &BasedLoop) -> u8 {
    gamma.parity()
}

/// Inserts the spur `γ(x), u, γ(x)` at position `x`.
pub fn move1_insert(g: &Graph, gamma: &BasedLoop, x: usize, u: u32) -> Result<BasedLoop> {
    if x > gamma.len() {
        return Err(Error::invalid(format!("position {x} beyond loop length {}", gamma.len())));
    }
    let at = gamma.values[x];
    if !g.has_edge(at as usize, u as usize) {
        return Err(Error::NotHomomorphism(format!(
            "{} is not adjacent to {}",
            vertex_label(g, u),
            vertex_label(g, at)
        )));
    }
    let mut values = Vec::with_capacity(gamma.values.len() + 2);
    values.extend_from_slice(&gamma.values[..=x]);
    values.push(u);
    values.extend_from_slice(&gamma.values[x..]);
    Ok(BasedLoop { values })
}

/// Removes the spur at `x`, which needs `γ(x) = γ(x+2)`.
pub fn move1_delete(gamma: &BasedLoop, x: usize) -> Result<BasedLoop> {
    if x + 2 > gamma.len() || gamma.values[x] != gamma.values[x + 2] {
        return Err(Error::invalid(format!("no spur at position {x}")));
    }
    let mut values = gamma.values.clone();
    values.drain(x + 1..x + 3);
    Ok(BasedLoop { values })
}

/// Which pairs of `L_n` count as edges in move (2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Move2Convention {
    /// `{i, i+1}` only: `γ(i) ~ γ'(i±1)`.
    #[default]
    Loopless,
    /// Also `{i, i}`: additionally `γ(i) ~ γ'(i)`.
    Reflexive,
}

/// Cross condition `(γ × γ')(E(L_n)) ⊆ E(G)`.
pub fn move2_adjacent(
    g: &Graph,
    gamma: &BasedLoop,
    other: &BasedLoop,
    convention: Move2Convention,
) -> Result<bool> {
    if gamma.len() != other.len() {
        return Err(Error::invalid("move (2) needs loops of equal length"));
    }
    let (a, b) = (&gamma.values, &other.values);
    let adj = |p: u32, q: u32| g.has_edge(p as usize, q as usize);
    let cross = (0..a.len() - 1).all(|i| adj(a[i], b[i + 1]) && adj(b[i], a[i + 1]));
    let diagonal = convention == Move2Convention::Loopless || (0..a.len()).all(|i| adj(a[i], b[i]));
    Ok(cross && diagonal)
}

pub(crate) fn move2_neighbors(g: &Graph, gamma: &BasedLoop, convention: Move2Convention) -> Vec<BasedLoop> {
    let a = &gamma.values;
    let n = a.len();
    let cands: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                return vec![a[0]];
            }
            let mut set = vec![a[i - 1], a[i + 1]];
            if convention == Move2Convention::Reflexive {
                set.push(a[i]);
            }
            g.common_neighbors(&set)
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        g: &Graph,
        a: &[u32],
        cands: &[Vec<u32>],
        cur: &mut Vec<u32>,
        convention: Move2Convention,
        out: &mut Vec<BasedLoop>,
    ) {
        let k = cur.len();
        if k == a.len() {
            if cur.as_slice() != a {
                out.push(BasedLoop { values: cur.clone() });
            }
            return;
        }
        for &c in &cands[k] {
            if k > 0 && !g.has_edge(cur[k - 1] as usize, c as usize) {
                continue;
            }
            if convention == Move2Convention::Reflexive && !g.has_edge(a[k] as usize, c as usize) {
                continue;
            }
            if k > 0 && !g.has_edge(c as usize, a[k - 1] as usize) {
                continue;
            }
            cur.push(c);
            rec(g, a, cands, cur, convention, out);
            cur.pop();
        }
    }
    rec(g, a, &cands, &mut cur, convention, &mut out);
    out
}

/// One step of an equivalence witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopMove {
    Insert { x: usize, u: u32 },
    Delete { x: usize },
    Move2(Vec<u32>),
}

impl LoopMove {
    pub fn render(&self, g: &Graph) -> String {
        match self {
            LoopMove::Insert { x, u } => format!("m1+ {x} {}", vertex_label(g, *u)),
            LoopMove::Delete { x } => format!("m1- {x}"),
            LoopMove::Move2(vals) => {
                let vs: Vec<String> = vals.iter().map(|&v| vertex_label(g, v)).collect();
                format!("m2 {}", vs.join(" "))
            }
        }
    }

    pub fn parse(g: &Graph, line: &str) -> Result<LoopMove> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let pos = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad position `{t}`")))
        };
        let vert = |t: &str| -> Result<u32> {
            let v: Vertex = t.parse()?;
            g.index_of(&v)
                .map(|i| i as u32)
                .ok_or_else(|| Error::UnknownVertex(t.to_string()))
        };
        match toks.as_slice() {
            ["m1+", x, u] => Ok(LoopMove::Insert { x: pos(x)?, u: vert(u)? }),
            ["m1-", x] => Ok(LoopMove::Delete { x: pos(x)? }),
            ["m2", rest @ ..] if !rest.is_empty() => {
                Ok(LoopMove::Move2(rest.iter().map(|t| vert(t)).collect::<Result<_>>()?))
            }
            _ => Err(Error::invalid(format!("bad move line `{line}`"))),
        }
    }
}

fn vertex_label(g: &Graph, v: u32) -> String {
    g.vertex(v as usize).to_string()
}

/// Applies a witness, validating every intermediate loop.
pub fn replay(
    g: &Graph,
    start: &BasedLoop,
    moves: &[LoopMove],
    convention: Move2Convention,
) -> Result<BasedLoop> {
    let mut cur = start.clone();
    for m in moves {
        cur = match m {
            LoopMove::Insert { x, u } => move1_insert(g, &cur, *x, *u)?,
            LoopMove::Delete { x } => move1_delete(&cur, *x)?,
            LoopMove::Move2(vals) => {
                let next = BasedLoop::new(g, vals.clone())?;
                if next.base() != cur.base() || !move2_adjacent(g, &cur, &next, convention)? {
                    return Err(Error::invalid("move (2) step fails the cross condition"));
                }
                next
            }
        };
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopEquivalence {
    /// A witness turning the first loop into the second.
    Equivalent(Vec<LoopMove>),
    /// The parities differ.
    NotEquivalent,
    /// Search exhausted its bounds without meeting the target.
    Unknown { explored: usize, frontier: usize },
}

/// Breadth-first search over loops of length `≤ max_len` joined by the two
/// moves. A semidecision: `Unknown` is never a negative answer.
pub fn equivalent_loops(
    g: &Graph,
    a: &BasedLoop,
    b: &BasedLoop,
    max_len: usize,
    max_states: usize,
    convention: Move2Convention,
) -> Result<LoopEquivalence> {
    if a.base() != b.base() {
        return Err(Error::invalid("loops have different bases"));
    }
    if a.parity() != b.parity() {
        return Ok(LoopEquivalence::NotEquivalent);
    }
    if a.len() > max_len || b.len() > max_len {
        return Err(Error::invalid("loop longer than the search bound"));
    }
    let mut parent: HashMap<BasedLoop, Option<(BasedLoop, LoopMove)>> = HashMap::new();
    parent.insert(a.clone(), None);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(cur) = queue.pop_front() {
        if &cur == b {
            let mut moves = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, m))) = parent.get(&at).cloned() {
                moves.push(m);
                at = prev;
            }
            moves.reverse();
            return Ok(LoopEquivalence::Equivalent(moves));
        }
        let mut next: Vec<(BasedLoop, LoopMove)> = Vec::new();
        for x in 0..cur.len().saturating_sub(1) {
            if cur.values[x] == cur.values[x + 2] {
                next.push((move1_delete(&cur, x)?, LoopMove::Delete { x }));
            }
        }
        if cur.len() + 2 <= max_len {
            for x in 0..=cur.len() {
                for &u in g.neighbors(cur.values[x] as usize) {
                    next.push((move1_insert(g, &cur, x, u)?, LoopMove::Insert { x, u }));
                }
            }
        }
        for l in move2_neighbors(g, &cur, convention) {
            let m = LoopMove::Move2(l.values.clone());
            next.push((l, m));
        }
        for (l, m) in next {
            if !parent.contains_key(&l) {
                if parent.len() >= max_states {
                    return Ok(LoopEquivalence::Unknown {
                        explored: parent.len(),
                        frontier: queue.len(),
                    });
                }
                parent.insert(l.clone(), Some((cur.clone(), m)));
                queue.push_back(l);
            }
        }
    }
    Ok(LoopEquivalence::Unknown {
        explored: parent.len(),
        frontier: 0,
    })
}

/// `γ ↦ ((i mod 2, γ(i)))_i`, a loop in `K₂ × G` at `(0, v)`. The cover's
/// vertex `(c, w)` has index `c·|G| + w`.
pub fn lift_to_cover(g: &Graph, gamma: &BasedLoop) -> Result<BasedLoop> {
    if gamma.parity() != 0 {
        return Err(Error::invalid("only even loops lift to the cover"));
    }
    let n = g.len() as u32;
    Ok(BasedLoop {
        values: gamma
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32 % 2) * n + v)
            .collect(),
    })
}

/// `Φ(γ)` at level `n` with `γ(0)` placed at position `start`: positions
/// `start..=start + l(γ)` carry `γ`, the rest alternate `x(0), x(1)` by parity.
pub fn phi_at(
    x: &Bigraph,
    base: (u32, u32),
    gamma: &BasedLoop,
    n: usize,
    start: i64,
) -> Result<Vec<u32>> {
    check_basepoint(x, base)?;
    if gamma.parity() != 0 {
        return Err(Error::invalid("Φ needs an even loop"));
    }
    if gamma.base() != base.0 {
        return Err(Error::invalid("loop is not based at x(0)"));
    }
    let lo = -2 * n as i64;
    let hi = 2 * n as i64 + 1;
    let end = start + gamma.len() as i64;
    let fits = gamma.is_trivial() || (start.rem_euclid(2) == 0 && start >= lo + 2 && end <= hi - 1);
    if !fits {
        return Err(Error::invalid(format!(
            "loop of length {} placed at {start} does not fit level {n}",
            gamma.len()
        )));
    }
    Ok((lo..=hi)
        .map(|k| {
            if !gamma.is_trivial() && (start..=end).contains(&k) {
                gamma.values[(k - start) as usize]
            } else if k.rem_euclid(2) == 0 {
                base.0
            } else {
                base.1
            }
        })
        .collect())
}

/// `Φ(γ)` with `γ(0)` at position 0.
pub fn phi(x: &Bigraph, base: (u32, u32), gamma: &BasedLoop, n: usize) -> Result<Vec<u32>> {
    phi_at(x, base, gamma, n, 0)
}

/// Rows of the level-`n` Ω graph from `Φ(γ)` to `Φ(γ')`, where `γ'` inserts
/// the spur `u` at `x`. The spur padding after `γ` is pushed back to `x` one
/// position at a time; each step changes one value.
pub fn move1_walk(
    x: &Bigraph,
    base: (u32, u32),
    gamma: &BasedLoop,
    at: usize,
    u: u32,
    n: usize,
    start: i64,
) -> Result<Vec<Vec<u32>>> {
    let g = x.graph();
    let target = move1_insert(g, gamma, at, u)?;
    let end = phi_at(x, base, &target, n, start)?;
    let mut row = phi_at(x, base, gamma, n, start)?;
    let offset = (start + 2 * n as i64) as usize;
    let mut walk = vec![row.clone()];
    let push = |row: &[u32], walk: &mut Vec<Vec<u32>>| {
        if walk.last().map(Vec::as_slice) != Some(row) {
            walk.push(row.to_vec());
        }
    };
    // spur at p + 1 moves to p by setting position p + 2 to γ(p)
    for p in (at..gamma.len()).rev() {
        row[offset + p + 2] = gamma.values[p];
        push(&row, &mut walk);
    }
    row[offset + at + 1] = u;
    push(&row, &mut walk);
    if row != end {
        return Err(Error::invalid("spur walk did not reach Φ(γ')"));
    }
    Ok(walk)
}

/// The π₀ census of even loops through `Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub level: usize,
    pub neighbor: u32,
    pub loops: usize,
    /// Components of the Ω level hit by some loop.
    pub components_hit: usize,
    pub level_components: usize,
    /// Shortest loop per hit component, keyed by component id.
    pub representatives: BTreeMap<u32, BasedLoop>,
}

/// Even closed walks at `v` of length at most `max_len`, shortest first.
pub fn even_loops(g: &Graph, v: u32, max_len: usize, cap: usize) -> Result<Vec<BasedLoop>> {
    let mut out = vec![BasedLoop::trivial(v)];
    let mut walk = vec![v];
    fn rec(
        g: &Graph,
        v: u32,
        max_len: usize,
        walk: &mut Vec<u32>,
        out: &mut Vec<BasedLoop>,
        cap: usize,
    ) -> Result<()> {
        let len = walk.len() - 1;
        if len > 0 && len % 2 == 0 && *walk.last().unwrap() == v {
            out.push(BasedLoop { values: walk.clone() });
            crate::error::check_cap("even loops", cap, out.len())?;
        }
        if len == max_len {
            return Ok(());
        }
        let last = *walk.last().unwrap();
        for &w in g.neighbors(last as usize) {
            walk.push(w);
            rec(g, v, max_len, walk, out, cap)?;
            walk.pop();
        }
        Ok(())
    }
    rec(g, v, max_len, &mut walk, &mut out, cap)?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.values.cmp(&b.values)));
    Ok(out)
}

/// Smallest level holding every even loop of length `≤ max_len` left-aligned.
pub fn census_level(max_len: usize) -> usize {
    (max_len + 2).div_ceil(4).max(1)
}

/// Lifts every even loop at `v` of length `≤ max_len` to `K₂ × G`, maps it
/// through `Φ` (placed at `-2n + 2`) into the Ω level `n` over the basepoint
/// `x = ((0,v), (1,w))` with `w` the smallest neighbor of `v`, and counts the
/// components hit.
pub fn pi2_even_classes(
    g: &Graph,
    v: u32,
    max_len: usize,
    level: usize,
    caps: &Caps,
) -> Result<ClassCensus> {
    if level < census_level(max_len) {
        return Err(Error::invalid(format!(
            "level {level} cannot hold loops of length {max_len}; need {}",
            census_level(max_len)
        )));
    }
    let (x, base, omega) = census_omega(g, v, level, caps)?;
    let (count, comp) = omega.components();
    let loops = even_loops(g, v, max_len, caps.exponential_vertices)?;
    let start = -2 * level as i64 + 2;
    let mut representatives = BTreeMap::new();
    for l in &loops {
        let lifted = lift_to_cover(g, l)?;
        let row = phi_at(&x, base, &lifted, level, start)?;
        let idx = omega
            .find(&row)
            .ok_or_else(|| Error::invalid("Φ(γ) is not a vertex of the Ω level"))?;
        representatives.entry(comp[idx]).or_insert_with(|| l.clone());
    }
    Ok(ClassCensus {
        level,
        neighbor: base.1 - g.len() as u32,
        loops: loops.len(),
        components_hit: representatives.len(),
        level_components: count,
        representatives,
    })
}

/// The Ω level and basepoint used by [`pi2_even_classes`].
pub fn census_omega(g: &Graph, v: u32, level: usize, caps: &Caps) -> Result<(Bigraph, (u32, u32), Level)> {
    if v as usize >= g.len() {
        return Err(Error::invalid("basepoint out of range"));
    }
    let Some(&w) = g.neighbors(v as usize).first() else {
        return Err(Error::invalid(format!("{} is isolated", g.vertex(v as usize))));
    };
    let (x, _) = kronecker_cover(g);
    let base = (v, g.len() as u32 + w);
    let omega = omega_level(&x, base, level, caps)?;
    Ok((x, base, omega))
}

/// `loop <graph> <v0> ... <vn>`.
pub fn format_loop(name: &str, g: &Graph, gamma: &BasedLoop) -> String {
    let vs: Vec<String> = gamma.values.iter().map(|&v| vertex_label(g, v)).collect();
    format!("loop {name} {}", vs.join(" "))
}

pub fn parse_loop(g: &Graph, line: &str) -> Result<(String, BasedLoop)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 3 || toks[0] != "loop" {
        return Err(Error::invalid(format!("bad loop line `{line}`")));
    }
    let values = toks[2..]
        .iter()
        .map(|t| {
            let v: Vertex = t.parse()?;
            g.index_of(&v)
                .map(|i| i as u32)
                .ok_or_else(|| Error::UnknownVertex(t.to_string()))
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok((toks[1].to_string(), BasedLoop::new(g, values)?))
}

impl fmt::Display for LoopEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopEquivalence::Equivalent(m) => write!(f, "equivalent ({} moves)", m.len()),
            LoopEquivalence::NotEquivalent => write!(f, "not-equivalent (parity)"),
            LoopEquivalence::Unknown { explored, frontier } => {
                write!(f, "unknown (explored={explored}, frontier={frontier})")
            }
        }
    }
}

#[cfg(test)]
mod tests;
