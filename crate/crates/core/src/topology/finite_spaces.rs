use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::homology::{poset_homology, HomologySummary};
use crate::complexes::{is_isomorphic_poset, InvolutionAction, Poset, PosetMap};
use crate::error::{Caps, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Certified,
    Refuted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        })
    }
}

/// Three-valued answer with human-readable evidence lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisVerdict {
    pub status: Status,
    pub evidence: Vec<String>,
}

impl HypothesisVerdict {
    fn new(status: Status, evidence: Vec<String>) -> HypothesisVerdict {
        HypothesisVerdict { status, evidence }
    }
}

struct CoreState<'p> {
    p: &'p Poset,
    alive: Vec<bool>,
    lower: Vec<Vec<u32>>,
    upper: Vec<Vec<u32>>,
    stamp: Vec<u32>,
    tick: u32,
}

impl<'p> CoreState<'p> {
    fn new(p: &'p Poset, alive: Vec<bool>) -> CoreState<'p> {
        let n = p.len();
        let mut s = CoreState {
            p,
            alive,
            lower: vec![Vec::new(); n],
            upper: vec![Vec::new(); n],
            stamp: vec![0; n],
            tick: 0,
        };
        for x in 0..n {
            if s.alive[x] {
                s.lower[x] = s.maximal_below(x);
                s.upper[x] = s.minimal_above(x);
            }
        }
        s
    }

    fn maximal_below(&mut self, x: usize) -> Vec<u32> {
        self.tick += 1;
        let mut out = Vec::new();
        for &c in self.p.below(x).iter().rev() {
            if !self.alive[c as usize] || self.stamp[c as usize] == self.tick {
                continue;
            }
            out.push(c);
            for &d in self.p.below(c as usize) {
                self.stamp[d as usize] = self.tick;
            }
        }
        out
    }

    fn minimal_above(&mut self, x: usize) -> Vec<u32> {
        self.tick += 1;
        let mut out = Vec::new();
        for &c in self.p.above(x) {
            if !self.alive[c as usize] || self.stamp[c as usize] == self.tick {
                continue;
            }
            out.push(c);
            for &d in self.p.above(c as usize) {
                self.stamp[d as usize] = self.tick;
            }
        }
        out
    }

    fn is_beat(&self, x: usize) -> bool {
        self.alive[x] && (self.lower[x].len() == 1 || self.upper[x].len() == 1)
    }

    /// Removes beat points accepted by `allowed`, smallest index first.
    fn reduce(&mut self, allowed: &dyn Fn(usize) -> bool) -> Vec<u32> {
        let mut queue: BTreeSet<u32> = (0..self.p.len())
            .filter(|&x| allowed(x) && self.is_beat(x))
            .map(|x| x as u32)
            .collect();
        let mut log = Vec::new();
        while let Some(x) = queue.pop_first() {
            let x = x as usize;
            if !self.is_beat(x) {
                continue;
            }
            self.alive[x] = false;
            log.push(x as u32);
            let ups = std::mem::take(&mut self.upper[x]);
            let downs = std::mem::take(&mut self.lower[x]);
            for &z in &ups {
                self.lower[z as usize] = self.maximal_below(z as usize);
            }
            for &y in &downs {
                self.upper[y as usize] = self.minimal_above(y as usize);
            }
            for &w in ups.iter().chain(&downs) {
                if allowed(w as usize) && self.is_beat(w as usize) {
                    queue.insert(w);
                }
            }
        }
        log
    }
}

/// Removes beat points (elements with a unique lower cover or a unique upper
/// cover), smallest index first, until none remain. The log lists removed labels.
pub fn stong_core(p: &Poset) -> (Poset, Vec<String>) {
    let mut st = CoreState::new(p, vec![true; p.len()]);
    let log = st.reduce(&|_| true);
    let keep: Vec<u32> = (0..p.len() as u32).filter(|&x| st.alive[x as usize]).collect();
    let (core, _) = p.induced(&keep);
    let labels = log.iter().map(|&x| p.label(x as usize).to_string()).collect();
    (core, labels)
}

/// Can `big` be reduced onto `small ⊆ big` by beat-point removals outside `small`?
/// Both are index sets of `p`; success means the inclusion is a homotopy equivalence.
fn retracts_onto(p: &Poset, big: &[u32], small: &[u32]) -> bool {
    let mut alive = vec![false; p.len()];
    for &x in big {
        alive[x as usize] = true;
    }
    let mut inner = vec![false; p.len()];
    for &x in small {
        inner[x as usize] = true;
    }
    let mut st = CoreState::new(p, alive);
    st.reduce(&|x| !inner[x]);
    big.iter().all(|&x| inner[x as usize] || !st.alive[x as usize])
}

fn is_point(core: &Poset) -> bool {
    core.len() == 1
}

/// Certified if the Stong cores are isomorphic, refuted if order-complex
/// homology differs in some dimension `≤ max_dim`, otherwise unknown.
pub fn homotopy_equivalent_certificate(
    p: &Poset,
    q: &Poset,
    max_dim: usize,
    caps: &Caps,
) -> Result<HypothesisVerdict> {
    let (cp, _) = stong_core(p);
    let (cq, _) = stong_core(q);
    let mut evidence = vec![format!("core sizes {} and {}", cp.len(), cq.len())];
    match is_isomorphic_poset(&cp, &cq, None, caps) {
        Ok(Some(_)) => {
            evidence.push("cores are isomorphic".into());
            return Ok(HypothesisVerdict::new(Status::Certified, evidence));
        }
        Ok(None) => evidence.push("cores are not isomorphic".into()),
        Err(e) if e.is_budget() => evidence.push(format!("core isomorphism skipped: {e}")),
        Err(e) => return Err(e),
    }
    let hp = poset_homology(&cp, max_dim, caps)?;
    let hq = poset_homology(&cq, max_dim, caps)?;
    if let Some(w) = homology_mismatch(&hp, &hq) {
        evidence.push(w);
        return Ok(HypothesisVerdict::new(Status::Refuted, evidence));
    }
    evidence.push(format!("homology agrees through dimension {max_dim}"));
    Ok(HypothesisVerdict::new(Status::Unknown, evidence))
}

fn homology_mismatch(a: &HomologySummary, b: &HomologySummary) -> Option<String> {
    let d = a.betti.len().min(b.betti.len());
    (0..d)
        .find(|&k| a.group(k) != b.group(k))
        .map(|k| format!("H_{k}: {} vs {}", a.group(k), b.group(k)))
}

/// Fibers `p⁻¹(Q_{≤y}) ↪ p⁻¹(Q_{≤y′})` for all `y < y′`. With
/// `fixed_point_mode`, the map is first restricted to the fixed subposets of
/// the attached actions.
pub fn quillen_b_check(
    source: &Poset,
    target: &Poset,
    p: &PosetMap,
    actions: Option<(&InvolutionAction, &InvolutionAction)>,
    fixed_point_mode: bool,
    max_dim: usize,
    caps: &Caps,
) -> Result<HypothesisVerdict> {
    if fixed_point_mode {
        let (sa, ta) = actions.ok_or_else(|| {
            Error::invalid("fixed-point mode needs actions on source and target")
        })?;
        for x in 0..source.len() {
            if ta.apply(p.apply(x)) != p.apply(sa.apply(x)) {
                return Err(Error::invalid(format!(
                    "map is not equivariant at `{}`",
                    source.label(x)
                )));
            }
        }
        let (sp, sback) = source.induced(&sa.fixed_points());
        let (tp, tback) = target.induced(&ta.fixed_points());
        let tpos: HashMap<u32, u32> = tback.iter().enumerate().map(|(i, &t)| (t, i as u32)).collect();
        let map = sback.iter().map(|&x| tpos[&(p.apply(x as usize) as u32)]).collect();
        let fp = PosetMap::new(&sp, &tp, map)?;
        let mut v = quillen_b_check(&sp, &tp, &fp, None, false, max_dim, caps)?;
        v.evidence.insert(
            0,
            format!("fixed points: {} source, {} target", sp.len(), tp.len()),
        );
        return Ok(v);
    }
    let mut fibers: Vec<Vec<u32>> = Vec::with_capacity(target.len());
    for y in 0..target.len() {
        fibers.push(p.fiber_below(target, y));
    }
    let mut homology_cache: HashMap<Vec<u32>, HomologySummary> = HashMap::new();
    let mut contractible_cache: HashMap<Vec<u32>, bool> = HashMap::new();
    let mut evidence = Vec::new();
    let (mut certified, mut refuted, mut unknown) = (0usize, 0usize, 0usize);
    for y2 in 0..target.len() {
        for &y in target.below(y2) {
            let (small, big) = (&fibers[y as usize], &fibers[y2]);
            let pair = format!("{} <= {}", target.label(y as usize), target.label(y2));
            if small == big {
                certified += 1;
                continue;
            }
            if retracts_onto(source, big, small) {
                certified += 1;
                continue;
            }
            let mut contractible = |f: &Vec<u32>| -> bool {
                *contractible_cache.entry(f.clone()).or_insert_with(|| {
                    !f.is_empty() && is_point(&stong_core(&source.induced(f).0).0)
                })
            };
            if contractible(small) && contractible(big) {
                certified += 1;
                continue;
            }
            let mut hom = |f: &Vec<u32>| -> Result<HomologySummary> {
                if let Some(h) = homology_cache.get(f) {
                    return Ok(h.clone());
                }
                let h = poset_homology(&source.induced(f).0, max_dim, caps)?;
                homology_cache.insert(f.clone(), h.clone());
                Ok(h)
            };
            let (hs, hb) = (hom(small)?, hom(big)?);
            match homology_mismatch(&hs, &hb) {
                Some(w) => {
                    refuted += 1;
                    evidence.push(format!("refuted {pair}: {w}"));
                }
                None => {
                    unknown += 1;
                    evidence.push(format!("unknown {pair}: fiber homology agrees"));
                }
            }
        }
    }
    evidence.insert(
        0,
        format!("pairs: {certified} certified, {refuted} refuted, {unknown} unknown"),
    );
    let status = if refuted > 0 {
        Status::Refuted
    } else if unknown > 0 {
        Status::Unknown
    } else {
        Status::Certified
    };
    Ok(HypothesisVerdict::new(status, evidence))
}

/// Does `f` restrict to an isomorphism `Z_{≤z} → X_{≤f(z)}` for every `z`?
pub fn cor_quillen_condition2_check(z: &Poset, x: &Poset, f: &PosetMap) -> bool {
    (0..z.len()).all(|e| {
        let down = z.down_set(e);
        let mut img: Vec<u32> = down.iter().map(|&a| f.apply(a as usize) as u32).collect();
        img.sort_unstable();
        if img != x.down_set(f.apply(e)) {
            return false;
        }
        down.iter().all(|&a| {
            down.iter().all(|&b| {
                z.leq(a as usize, b as usize) == x.leq(f.apply(a as usize), f.apply(b as usize))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{box_complex, face_poset, SimplicialComplex};
    use crate::graph::{standard_graph, StandardKind};
    use proptest::prelude::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn poset(n: usize, rel: &[(u32, u32)]) -> Poset {
        Poset::from_relations((0..n).map(|i| format!("p{i}")).collect(), rel).unwrap()
    }

    fn circle_faces() -> Poset {
        let tri = SimplicialComplex::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        face_poset(&tri, &caps()).unwrap()
    }

    #[test]
    fn cone_collapses_to_point() {
        let p = poset(4, &[(0, 3), (1, 3), (2, 3), (0, 1)]);
        let (core, log) = stong_core(&p);
        assert_eq!(core.len(), 1);
        assert_eq!(log.len(), 3);
    }

    #[test]
    fn box_of_k3_core_is_a_circle() {
        let k3 = standard_graph(StandardKind::Complete, 3).unwrap();
        let (b, _) = box_complex(&k3, &caps()).unwrap();
        let (core, _) = stong_core(&b);
        assert_eq!(core.len(), b.len());
        assert_eq!(
            poset_homology(&core, 2, &caps()).unwrap(),
            poset_homology(&b, 2, &caps()).unwrap()
        );
        let (again, log) = stong_core(&core);
        assert_eq!(again, core);
        assert!(log.is_empty());
    }

    #[test]
    fn certificates() {
        let k3 = standard_graph(StandardKind::Complete, 3).unwrap();
        let (b, _) = box_complex(&k3, &caps()).unwrap();
        let v = homotopy_equivalent_certificate(&b, &circle_faces(), 2, &caps()).unwrap();
        assert_ne!(v.status, Status::Refuted);
        let pt = poset(1, &[]);
        let k2 = standard_graph(StandardKind::Complete, 2).unwrap();
        let (bk2, _) = box_complex(&k2, &caps()).unwrap();
        let v = homotopy_equivalent_certificate(&pt, &bk2, 2, &caps()).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert!(v.evidence.iter().any(|e| e.contains("H_0: Z vs Z^2")));
        let v = homotopy_equivalent_certificate(&b, &b, 2, &caps()).unwrap();
        assert_eq!(v.status, Status::Certified);
    }

    #[test]
    fn quillen_identity_and_constant() {
        let c = circle_faces();
        let id = PosetMap::identity(c.len());
        assert_eq!(
            quillen_b_check(&c, &c, &id, None, false, 2, &caps()).unwrap().status,
            Status::Certified
        );
        let pt = poset(1, &[]);
        let to_pt = PosetMap::new(&c, &pt, vec![0; c.len()]).unwrap();
        assert_eq!(
            quillen_b_check(&c, &pt, &to_pt, None, false, 2, &caps()).unwrap().status,
            Status::Certified
        );
    }

    #[test]
    fn quillen_refutes_circle_to_interval() {
        // circle → 2-chain sending one vertex to the bottom: fibers are a point and a circle
        let c = circle_faces();
        let chain = poset(2, &[(0, 1)]);
        let a = c.index_of("{a}").unwrap();
        let map = (0..c.len()).map(|x| if x == a { 0 } else { 1 }).collect();
        let m = PosetMap::new(&c, &chain, map).unwrap();
        let v = quillen_b_check(&c, &chain, &m, None, false, 2, &caps()).unwrap();
        assert_eq!(v.status, Status::Refuted);
    }

    #[test]
    fn quillen_fixed_point_mode_needs_actions() {
        let c = circle_faces();
        let id = PosetMap::identity(c.len());
        assert!(quillen_b_check(&c, &c, &id, None, true, 2, &caps()).is_err());
        let k3 = standard_graph(StandardKind::Complete, 3).unwrap();
        let (b, swap) = box_complex(&k3, &caps()).unwrap();
        let id = PosetMap::identity(b.len());
        let v = quillen_b_check(&b, &b, &id, Some((&swap, &swap)), true, 2, &caps()).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.evidence[0].starts_with("fixed points: 0 source"));
    }

    #[test]
    fn condition_two() {
        let ch = poset(3, &[(0, 1), (1, 2)]);
        assert!(cor_quillen_condition2_check(&ch, &ch, &PosetMap::identity(3)));
        let (sub, back) = ch.induced(&[0, 1]);
        let incl = PosetMap::new(&sub, &ch, back).unwrap();
        assert!(cor_quillen_condition2_check(&sub, &ch, &incl));
        let pt = poset(1, &[]);
        let collapse = PosetMap::new(&ch, &pt, vec![0, 0, 0]).unwrap();
        assert!(!cor_quillen_condition2_check(&ch, &pt, &collapse));
    }

    fn arb_poset() -> impl Strategy<Value = Poset> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec((0..n as u32, 0..n as u32), 0..14).prop_map(move |es| {
                // orient from smaller to larger index to stay acyclic
                let rel: Vec<(u32, u32)> = es
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                poset(n, &rel)
            })
        })
    }

    proptest! {
        #[test]
        fn core_preserves_homology(p in arb_poset()) {
            let (core, _) = stong_core(&p);
            let h_core = poset_homology(&core, 3, &caps()).unwrap();
            let oc = crate::complexes::order_complex(&p, &caps()).unwrap();
            let h = crate::topology::homology(&oc, 3, &caps()).unwrap();
            prop_assert_eq!(h_core, h);
            let (again, log) = stong_core(&core);
            prop_assert!(log.is_empty());
            prop_assert_eq!(again.len(), core.len());
        }
    }
}
