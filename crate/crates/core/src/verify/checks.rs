use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::fibers::{endpoint_fiber_map, zigzag_pi0};
use super::{Budgets, CheckResult, Claim, Outcome};
use crate::complexes::{
    box_complex, box_complex_bigraph, clique_complex, face_poset, neighborhood_complex,
};
use crate::error::{Caps, Result};
use crate::graph::{exponential_bigraph, find_dismantlable, interval_bigraph, kronecker_cover};
use crate::graph::{Bigraph, Graph, OddInvolution};
use crate::loop_spaces::{stabilize, TowerSource, Verdict};
use crate::topology::{
    abelianization, edge_path_presentation, homology, homotopy_equivalent_certificate,
    poset_homology, quillen_b_check, GroupPresentation, HomologySummary, Status,
};
use crate::two_fundamental::{
    census_level, even_loops, format_loop, move1_delete, move2_neighbors, pi2_even_classes,
    BasedLoop, Move2Convention,
};

fn table(lhs: &str, a: &HomologySummary, rhs: &str, b: &HomologySummary) -> Vec<String> {
    let d = a.betti.len().min(b.betti.len());
    let mut out = vec![format!("dim | {lhs} | {rhs}")];
    out.extend((0..d).map(|k| format!("H_{k} | {} | {}", a.group(k), b.group(k))));
    out
}

/// Pass when the two homology tables agree in every common dimension, fail
/// on the first differing group.
pub fn compare_homology(
    claim: Claim,
    instance: &str,
    lhs: (&str, &HomologySummary),
    rhs: (&str, &HomologySummary),
) -> CheckResult {
    let (a, b) = (lhs.1, rhs.1);
    let mut ev = table(lhs.0, a, rhs.0, b);
    let d = a.betti.len().min(b.betti.len());
    let status = match (0..d).find(|&k| a.group(k) != b.group(k)) {
        Some(k) => {
            ev.push(format!("mismatch: H_{k} {} vs {}", a.group(k), b.group(k)));
            Outcome::Fail
        }
        None => {
            ev.push(format!(
                "homology agrees through dimension {}: consistent with a homotopy equivalence",
                d.saturating_sub(1)
            ));
            Outcome::Pass
        }
    };
    CheckResult::new(claim, instance, status, ev)
}

/// `B_{/K₂}(K₂ × G) → B(G)`, `(σ, τ) ↦ ({v : (0,v) ∈ σ}, {v : (1,v) ∈ τ})`,
/// checked to be a bijection that preserves and reflects order and
/// intertwines the actions.
pub fn check_box_iso(g: &Graph, instance: &str, caps: &Caps) -> Result<CheckResult> {
    let fail = |ev: Vec<String>| Ok(CheckResult::new(Claim::BoxIso, instance, Outcome::Fail, ev));
    let (b, swap) = box_complex(g, caps)?;
    let (x, alpha) = kronecker_cover(g);
    let (bx, act) = box_complex_bigraph(&x, Some(&alpha), caps)?;
    let act = act.expect("involution attached");
    let n = g.len() as u32;
    let index: HashMap<Vec<Vec<u32>>, u32> = (0..b.len())
        .map(|i| (b.blocks(i).unwrap().to_vec(), i as u32))
        .collect();
    let mut map = Vec::with_capacity(bx.len());
    for e in 0..bx.len() {
        let blocks = bx.blocks(e).unwrap();
        let key = vec![
            blocks[0].clone(),
            blocks[1].iter().map(|&t| t - n).collect::<Vec<u32>>(),
        ];
        match index.get(&key) {
            Some(&j) => map.push(j as usize),
            None => return fail(vec![format!("{} has no image", bx.label(e))]),
        }
    }
    if bx.len() != b.len() {
        return fail(vec![format!("sizes differ: {} vs {}", bx.len(), b.len())]);
    }
    let mut hit = vec![false; b.len()];
    for &j in &map {
        if std::mem::replace(&mut hit[j], true) {
            return fail(vec![format!("{} is hit twice", b.label(j))]);
        }
    }
    for i in 0..bx.len() {
        for j in 0..bx.len() {
            if bx.leq(i, j) != b.leq(map[i], map[j]) {
                return fail(vec![format!(
                    "order differs at {} <= {}",
                    bx.label(i),
                    bx.label(j)
                )]);
            }
        }
        if map[act.apply(i)] != swap.apply(map[i]) {
            return fail(vec![format!("not equivariant at {}", bx.label(i))]);
        }
    }
    let mut ev = vec![
        format!("elements: {}", b.len()),
        format!("relations: {}", b.relation_count()),
        "the explicit map is an isomorphism of posets commuting with the involutions".into(),
    ];
    ev.extend((0..bx.len()).map(|i| format!("witness {} -> {}", bx.label(i), b.label(map[i]))));
    Ok(CheckResult::new(Claim::BoxIso, instance, Outcome::Pass, ev))
}

/// Homology of the order complex of `B(G)` against `N(G)`.
pub fn check_babson_kozlov(g: &Graph, instance: &str, budgets: &Budgets) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let (b, _) = box_complex(g, caps)?;
    let hb = poset_homology(&b, budgets.max_dim, caps)?;
    let hn = homology(&neighborhood_complex(g), budgets.max_dim, caps)?;
    Ok(compare_homology(Claim::BabsonKozlov, instance, ("B(G)", &hb), ("N(G)", &hn)))
}

/// `C(X^{K₂})` against `B_{/K₂}(X)`: homology, then a Stong-core certificate.
pub fn check_clique_box(x: &Bigraph, instance: &str, budgets: &Budgets) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let k2 = interval_bigraph(0, 1)?;
    let c = clique_complex(&exponential_bigraph(&k2, x, caps)?);
    let hc = homology(&c, budgets.max_dim, caps)?;
    let (bx, _) = box_complex_bigraph(x, None, caps)?;
    let hb = poset_homology(&bx, budgets.max_dim, caps)?;
    let mut r = compare_homology(Claim::CliqueBox, instance, ("C(X^K2)", &hc), ("B(X)", &hb));
    if r.status == Outcome::Pass {
        let cert = face_poset(&c, caps)
            .and_then(|fc| homotopy_equivalent_certificate(&fc, &bx, budgets.max_dim, caps));
        match cert {
            Ok(v) => {
                r.evidence.push(format!("core certificate: {}", v.status));
                r.evidence.extend(v.evidence);
            }
            Err(e) if e.is_budget() => r.evidence.push(format!("core certificate skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

/// `B_{/K₂}(X ∖ v)` against `B_{/K₂}(X)` for every dismantlable `v`.
pub fn check_fold_invariance(x: &Bigraph, instance: &str, budgets: &Budgets) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let whole = poset_homology(&box_complex_bigraph(x, None, caps)?.0, budgets.max_dim, caps)?;
    let mut pairs = find_dismantlable(x);
    pairs.sort_unstable();
    pairs.dedup_by_key(|p| p.0);
    let mut ev = vec![format!("dismantlable vertices: {}", pairs.len())];
    if pairs.is_empty() {
        ev.push("no dismantlable vertex: vacuous".into());
    }
    for &(v, w) in &pairs {
        let smaller = x.without_vertex(v);
        let h = poset_homology(&box_complex_bigraph(&smaller, None, caps)?.0, budgets.max_dim, caps)?;
        let label = x.graph().vertex(v);
        let d = h.betti.len().min(whole.betti.len());
        if let Some(k) = (0..d).find(|&k| h.group(k) != whole.group(k)) {
            ev.push(format!(
                "deleting {label} (dominated by {}): H_{k} {} vs {}",
                x.graph().vertex(w),
                h.group(k),
                whole.group(k)
            ));
            return Ok(CheckResult::new(Claim::FoldInvariance, instance, Outcome::Fail, ev));
        }
        ev.push(format!(
            "deleting {label} (dominated by {}): homology unchanged",
            x.graph().vertex(w)
        ));
    }
    ev.push(format!("B(X) homology: {}", groups(&whole)));
    Ok(CheckResult::new(Claim::FoldInvariance, instance, Outcome::Pass, ev))
}

fn groups(h: &HomologySummary) -> String {
    let g: Vec<String> = (0..h.betti.len()).map(|k| h.group(k)).collect();
    format!("[{}]", g.join(", "))
}

/// What an edge-path presentation decides about the order of its group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(u64),
    Infinite,
    Undecided,
}

impl GroupOrder {
    pub fn of(p: &GroupPresentation) -> GroupOrder {
        if p.generators.is_empty() {
            return GroupOrder::Finite(1);
        }
        let ab = abelianization(p);
        if ab.rank > 0 {
            return GroupOrder::Infinite;
        }
        if p.generators.len() == 1 {
            let order = ab
                .torsion
                .iter()
                .try_fold(1u64, |acc, d| d.to_u64().and_then(|d| acc.checked_mul(d)));
            if let Some(k) = order {
                return GroupOrder::Finite(k);
            }
        }
        GroupOrder::Undecided
    }
}

/// Classes of the relation generated by move (1) and move (2) among even
/// loops of length at most the census bound.
pub fn move_census(g: &Graph, loops: &[BasedLoop], conv: Move2Convention) -> usize {
    let index: HashMap<&[u32], usize> = loops.iter().enumerate().map(|(i, l)| (l.values(), i)).collect();
    let mut parent: Vec<usize> = (0..loops.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for (i, l) in loops.iter().enumerate() {
        let v = l.values();
        for x in 1..v.len().saturating_sub(1) {
            if v[x - 1] == v[x + 1] {
                if let Ok(shorter) = move1_delete(l, x) {
                    if let Some(&j) = index.get(shorter.values()) {
                        union(&mut parent, i, j);
                    }
                }
            }
        }
        for m in move2_neighbors(g, l, conv) {
            if let Some(&j) = index.get(m.values()) {
                union(&mut parent, i, j);
            }
        }
    }
    (0..loops.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Even-loop classes through `Φ`, the Ω tower over `K₂ × G`, and the
/// edge-path group of `N(G)` at `v`.
pub fn check_loop_classes(g: &Graph, v: u32, instance: &str, budgets: &Budgets) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let unknown = |ev| Ok(CheckResult::new(Claim::LoopClasses, instance, Outcome::Unknown, ev));
    let Some(&w) = g.neighbors(v as usize).first() else {
        return unknown(vec![format!("basepoint {} is isolated", g.vertex(v as usize))]);
    };
    let mut ev = vec![format!("basepoint {}", g.vertex(v as usize))];

    let pres = edge_path_presentation(&neighborhood_complex(g), v as usize, caps)?;
    let order = GroupOrder::of(&pres);
    ev.push(format!(
        "pi1(N(G)): generators={} relators={} abelianization={} order={}",
        pres.generators.len(),
        pres.relators.len(),
        abelianization(&pres),
        match order {
            GroupOrder::Finite(k) => k.to_string(),
            GroupOrder::Infinite => "infinite".into(),
            GroupOrder::Undecided => "undecided".into(),
        }
    ));

    let mut len = budgets.census_len;
    let mut census = pi2_even_classes(g, v, len, census_level(len), caps)?;
    while order == GroupOrder::Infinite
        && census.level_components <= 1
        && len + 4 <= budgets.census_max_len
    {
        match pi2_even_classes(g, v, len + 4, census_level(len + 4), caps) {
            Ok(c) => {
                ev.push(format!("census at length {len} sees one class; lengthening"));
                census = c;
                len += 4;
            }
            Err(e) if e.is_budget() => {
                ev.push(format!("census lengthening stopped: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    ev.push(format!(
        "census: loops<={len} count={} level={} components-hit={} level-components={}",
        census.loops, census.level, census.components_hit, census.level_components
    ));
    for l in census.representatives.values() {
        ev.push(format!("representative {}", format_loop(instance, g, l)));
    }
    let loops = even_loops(g, v, len, caps.exponential_vertices)?;
    for (name, conv) in [
        ("loopless", Move2Convention::Loopless),
        ("reflexive", Move2Convention::Reflexive),
    ] {
        ev.push(format!(
            "move classes among census loops ({name} move 2): {}",
            move_census(g, &loops, conv)
        ));
    }

    let (x, _) = kronecker_cover(g);
    let base = (v, g.len() as u32 + w);
    let report = stabilize(
        &TowerSource::Omega { x, base },
        budgets.omega_levels,
        budgets.window,
        0,
        caps,
    )?;
    ev.extend(report.to_string().lines().map(|l| format!("omega {l}")));
    let counts: Vec<usize> = report.levels.iter().map(|l| l.components).collect();
    let census_ok = census.components_hit == census.level_components;
    if !census_ok {
        ev.push("census does not reach every component of its level".into());
    }
    let most = counts.iter().copied().chain([census.level_components]).max().unwrap_or(0);
    let status = match order {
        GroupOrder::Finite(k) => {
            if most > k as usize {
                ev.push(format!(
                    "a level has {most} components but the group has order {k}; connectors are injective on components"
                ));
                Outcome::Fail
            } else if census_ok
                && census.level_components == k as usize
                && matches!(report.verdict, Verdict::Stable { components, .. } if components == k as usize)
            {
                ev.push(format!("all three sides give {k} class(es)"));
                Outcome::Pass
            } else {
                Outcome::Unknown
            }
        }
        GroupOrder::Infinite => {
            let grows = most > counts.first().copied().unwrap_or(0);
            if census_ok && grows {
                ev.push("census and tower agree and keep growing: consistent with an infinite group".into());
                Outcome::Pass
            } else {
                ev.push("no growth seen within budget".into());
                Outcome::Unknown
            }
        }
        GroupOrder::Undecided => Outcome::Unknown,
    };
    Ok(CheckResult::new(Claim::LoopClasses, instance, status, ev))
}

/// Number of closed walks of length `m` in `g`: `tr(A^m)`.
pub fn hom_count_oracle(g: &Graph, m: usize) -> u128 {
    let n = g.len();
    let a: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j) as u128).collect())
        .collect();
    let mut p: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u128).collect()).collect();
    for _ in 0..m {
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| p[i][k] * a[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    (0..n).map(|i| p[i][i]).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BoxShape {
    TwoPoints,
    Circle,
}

fn box_shape(h: &HomologySummary) -> Option<BoxShape> {
    let higher = |from: usize| h.betti[from..].iter().all(|&b| b == 0) && h.torsion.iter().all(Vec::is_empty);
    match h.components {
        2 if higher(1) => Some(BoxShape::TwoPoints),
        1 if h.betti.len() > 1 && h.betti[1] == 1 && higher(2) => Some(BoxShape::Circle),
        _ => None,
    }
}

fn is_circle(h: &HomologySummary) -> bool {
    h.components == 1 && h.betti.get(1) == Some(&1) && h.torsion.iter().all(Vec::is_empty)
}

fn is_acyclic(h: &HomologySummary) -> bool {
    h.components == 1 && h.betti[1..].iter().all(|&b| b == 0) && h.torsion.iter().all(Vec::is_empty)
}

/// Even and odd cycle towers of `G` against the free and twisted loop
/// spaces of `B(G)`, for `B(G)` with the homology of two points or a circle.
pub fn check_cycle_towers(g: &Graph, instance: &str, budgets: &Budgets) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let (b, _) = box_complex(g, caps)?;
    let hb = poset_homology(&b, 2, caps)?;
    let mut ev = vec![format!("B(G) homology: {}", groups(&hb))];
    let Some(shape) = box_shape(&hb) else {
        ev.push("loop spaces of this homotopy type are not tabulated".into());
        return Ok(CheckResult::new(Claim::CycleTowers, instance, Outcome::Unknown, ev));
    };
    let mut failed = false;
    let mut passed_any = false;
    let mut open = false;
    for odd in [false, true] {
        let tag = if odd { "odd" } else { "even" };
        let max_level = budgets.cycle_levels - odd as usize;
        let report = stabilize(
            &TowerSource::Cycle { g: g.clone(), odd },
            max_level,
            budgets.window,
            1,
            caps,
        )?;
        ev.extend(report.to_string().lines().map(|l| format!("{tag} {l}")));
        for l in &report.levels {
            let m = 2 * l.index + odd as usize;
            let want = hom_count_oracle(g, m);
            if want != l.vertices as u128 {
                ev.push(format!("{tag} C_{m}: {} homs, closed-walk count {want}", l.vertices));
                failed = true;
            }
        }
        let last = report.levels.last().map_or(0, |l| l.components);
        match (shape, odd) {
            (BoxShape::TwoPoints, true) => {
                if report.levels.iter().all(|l| l.vertices == 0) {
                    ev.push(format!("{tag}: every level is empty, as for twisted loops on two points"));
                    passed_any = true;
                } else {
                    ev.push(format!("{tag}: nonempty level over a two-point box complex"));
                    failed = true;
                }
                continue;
            }
            _ => {}
        }
        let stab = report.stabilized_components();
        ev.push(format!("{tag}: stabilized components {}", stab.len()));
        if stab.is_empty() {
            open = true;
        }
        for &(n, c) in &stab {
            let h = report.level(n).unwrap().homology[c].as_ref().expect("known homology");
            let ok = match shape {
                BoxShape::Circle => is_circle(h),
                BoxShape::TwoPoints => is_acyclic(h),
            };
            if !ok {
                ev.push(format!("{tag}: level {n} component {c} has homology {}", groups(h)));
                failed = true;
            }
        }
        if shape == BoxShape::TwoPoints && last != 2 {
            ev.push(format!("{tag}: last level has {last} components, expected 2"));
            open = true;
        }
        if !stab.is_empty() {
            passed_any = true;
        }
    }
    let status = if failed {
        Outcome::Fail
    } else if passed_any && !open {
        ev.push(match shape {
            BoxShape::Circle => "every stabilized component has the homology of a circle".into(),
            BoxShape::TwoPoints => "stabilized components are acyclic; the odd tower is empty".into(),
        });
        Outcome::Pass
    } else {
        Outcome::Unknown
    };
    Ok(CheckResult::new(Claim::CycleTowers, instance, status, ev))
}

/// Fiber inclusions of the truncated endpoint map, plus the π₀ zig-zag
/// through the next level.
pub fn check_endpoint_fibers(
    x: &Bigraph,
    alpha: Option<&OddInvolution>,
    instance: &str,
    budgets: &Budgets,
) -> Result<CheckResult> {
    let caps = &budgets.caps;
    let n = budgets.fiber_level;
    let fm = endpoint_fiber_map(x, alpha, n, caps)?;
    let mut ev = vec![format!(
        "level {n}: source faces {}, target faces {}",
        fm.source.len(),
        fm.target.len()
    )];
    let plain = quillen_b_check(&fm.source, &fm.target, &fm.map, None, false, budgets.max_dim, caps)?;
    ev.push(format!("fiber inclusions: {}", plain.status));
    ev.extend(plain.evidence.iter().take(20).map(|e| format!("  {e}")));
    let fixed = match fm.actions() {
        Some(actions) => {
            let v = quillen_b_check(&fm.source, &fm.target, &fm.map, Some(actions), true, budgets.max_dim, caps)?;
            ev.push(format!("fixed-point fiber inclusions: {}", v.status));
            ev.extend(v.evidence.iter().take(20).map(|e| format!("  {e}")));
            Some(v.status)
        }
        None => {
            ev.push("no odd involution attached".into());
            None
        }
    };
    if plain.status == Status::Certified && fixed != Some(Status::Refuted) {
        return Ok(CheckResult::new(Claim::EndpointFibers, instance, Outcome::Pass, ev));
    }
    let zz = zigzag_pi0(&fm, x, caps)?;
    ev.push(format!(
        "zig-zag through level {}: pairs={} vertices={} violations={}",
        n + 1,
        zz.pairs,
        zz.vertices_checked,
        zz.violations.len()
    ));
    ev.extend(zz.violations.iter().take(20).map(|e| format!("  {e}")));
    let status = if zz.violations.is_empty() {
        ev.push("truncated fibers differ; the zig-zag that identifies them in the colimit holds on components".into());
        Outcome::Unknown
    } else {
        Outcome::Fail
    };
    Ok(CheckResult::new(Claim::EndpointFibers, instance, status, ev))
}
