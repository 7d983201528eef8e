//! Executable checks of the box-complex, loop-space and 2-fundamental-group
//! equivalences on a pinned corpus of small graphs.
//!
//! Every check returns a three-valued [`Outcome`]. A pass on homology alone
//! is recorded as consistency; `fail` always carries an exact mismatch.

mod checks;
mod corpus;
mod fibers;
#[cfg(test)]
mod tests;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Caps, Error, Result};

pub use checks::{
    check_babson_kozlov, check_box_iso, check_clique_box, check_cycle_towers,
    check_fold_invariance, check_loop_classes, check_endpoint_fibers, compare_homology,
    hom_count_oracle, move_census, GroupOrder,
};
pub use corpus::{load_manifest, parse_manifest, reflection_involution, Instance};
pub use fibers::{endpoint_fiber_map, zigzag_pi0, EndpointFiberMap, ZigzagReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    BoxIso,
    BabsonKozlov,
    CliqueBox,
    FoldInvariance,
    LoopClasses,
    CycleTowers,
    EndpointFibers,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::BoxIso,
        Claim::BabsonKozlov,
        Claim::CliqueBox,
        Claim::FoldInvariance,
        Claim::LoopClasses,
        Claim::CycleTowers,
        Claim::EndpointFibers,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::BoxIso => "box-iso",
            Claim::BabsonKozlov => "babson-kozlov",
            Claim::CliqueBox => "clique-box",
            Claim::FoldInvariance => "fold-invariance",
            Claim::LoopClasses => "loop-classes",
            Claim::CycleTowers => "cycle-towers",
            Claim::EndpointFibers => "endpoint-fibers",
        }
    }

    /// Claims about a plain graph `G`; the rest take a bigraph.
    pub fn on_graphs(self) -> bool {
        matches!(
            self,
            Claim::BoxIso | Claim::BabsonKozlov | Claim::LoopClasses | Claim::CycleTowers
        )
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Claim> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::invalid(format!("unknown claim `{s}`")))
    }
}

/// `all` or a comma-separated list of claim ids.
pub fn parse_claims(text: &str) -> Result<Vec<Claim>> {
    if text.trim() == "all" {
        return Ok(Claim::ALL.to_vec());
    }
    let mut out = text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<Claim>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub claim: Claim,
    pub instance: String,
    pub status: Outcome,
    pub evidence: Vec<String>,
}

impl CheckResult {
    pub fn new(claim: Claim, instance: &str, status: Outcome, evidence: Vec<String>) -> CheckResult {
        CheckResult {
            claim,
            instance: instance.to_string(),
            status,
            evidence,
        }
    }

    pub fn evidence_file(&self) -> String {
        format!("{}__{}.txt", self.claim.id(), self.instance)
    }

    /// The evidence file body.
    pub fn render_evidence(&self) -> String {
        let mut out = format!(
            "claim {}\ninstance {}\nstatus {}\n",
            self.claim, self.instance, self.status
        );
        for e in &self.evidence {
            out.push_str(e);
            out.push('\n');
        }
        out
    }
}

/// Size bounds and tower depths for the suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub caps: Caps,
    /// Homology is compared in dimensions `0..=max_dim`.
    pub max_dim: usize,
    /// Longest even loop in the class census.
    pub census_len: usize,
    /// Census length limit when lengthening in search of a second class.
    pub census_max_len: usize,
    /// Last Ω level built.
    pub omega_levels: usize,
    pub window: usize,
    /// Last cycle-tower index for the even tower; the odd tower stops one lower.
    pub cycle_levels: usize,
    /// Level of the truncated endpoint map.
    pub fiber_level: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            caps: Caps {
                complex_faces: 400_000,
                poset_elements: 100_000,
                exponential_vertices: 400_000,
                ..Caps::default()
            },
            max_dim: 3,
            census_len: 6,
            census_max_len: 10,
            omega_levels: 2,
            window: 2,
            cycle_levels: 6,
            fiber_level: 1,
        }
    }
}

impl fmt::Display for Budgets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.caps;
        write!(
            f,
            "max-dim={} census-len={} census-max-len={} omega-levels={} window={} cycle-levels={} fiber-level={} \
             cap-exponential={} cap-poset={} cap-faces={} cap-iso={} cap-edges={}",
            self.max_dim,
            self.census_len,
            self.census_max_len,
            self.omega_levels,
            self.window,
            self.cycle_levels,
            self.fiber_level,
            c.exponential_vertices,
            c.poset_elements,
            c.complex_faces,
            c.iso_vertices,
            c.level_edges
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    /// `CHECK <id> <instance> <status> <evidence-file>` per check, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!(
                "CHECK {} {} {} {}\n",
                r.claim,
                r.instance,
                r.status,
                r.evidence_file()
            ));
        }
        let (p, f, u) = self.counts();
        out.push_str(&format!("SUMMARY pass={p} fail={f} unknown={u}\n"));
        out
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |o| self.results.iter().filter(|r| r.status == o).count();
        (count(Outcome::Pass), count(Outcome::Fail), count(Outcome::Unknown))
    }

    pub fn any_fail(&self) -> bool {
        self.results.iter().any(|r| r.status == Outcome::Fail)
    }

    pub fn write_evidence(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for r in &self.results {
            std::fs::write(dir.join(r.evidence_file()), r.render_evidence())?;
        }
        Ok(())
    }
}

/// Turns a budget error into an `unknown` result.
fn guarded(claim: Claim, instance: &str, r: Result<CheckResult>) -> Result<CheckResult> {
    match r {
        Err(e) if e.is_budget() => Ok(CheckResult::new(
            claim,
            instance,
            Outcome::Unknown,
            vec![format!("budget exhausted: {e}")],
        )),
        other => other,
    }
}

/// Runs one claim on one instance. Graph instances feed bigraph claims
/// through their Kronecker cover.
pub fn run_check(claim: Claim, instance: &Instance, budgets: &Budgets) -> Result<CheckResult> {
    let name = instance.check_name(claim);
    let r = match (claim, instance) {
        (Claim::BoxIso, Instance::Graph { graph, .. }) => {
            check_box_iso(graph, &name, &budgets.caps)
        }
        (Claim::BabsonKozlov, Instance::Graph { graph, .. }) => {
            check_babson_kozlov(graph, &name, budgets)
        }
        (Claim::LoopClasses, Instance::Graph { graph, .. }) => {
            check_loop_classes(graph, 0, &name, budgets)
        }
        (Claim::CycleTowers, Instance::Graph { graph, .. }) => {
            check_cycle_towers(graph, &name, budgets)
        }
        (c, Instance::Graph { .. }) | (c, Instance::Bigraph { .. }) if c.on_graphs() => {
            return Err(Error::invalid(format!("claim {c} needs a plain graph")));
        }
        _ => {
            let (x, alpha) = instance.bigraph();
            match claim {
                Claim::CliqueBox => check_clique_box(&x, &name, budgets),
                Claim::FoldInvariance => check_fold_invariance(&x, &name, budgets),
                _ => check_endpoint_fibers(&x, alpha.as_ref(), &name, budgets),
            }
        }
    };
    guarded(claim, &name, r)
}

/// Runs `claims` over `corpus` on up to `jobs` threads. The report is ordered
/// by claim, then instance name, whatever the scheduling.
pub fn run_suite(
    corpus: &[Instance],
    claims: &[Claim],
    budgets: &Budgets,
    jobs: usize,
) -> Result<SuiteReport> {
    let mut work = Vec::new();
    for &c in claims {
        for inst in corpus {
            if inst.supports(c) {
                work.push((c, inst));
            }
        }
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<CheckResult>>>> = Mutex::new(vec![None; work.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1).min(work.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(c, inst)) = work.get(i) else { break };
                let r = run_check(c, inst, budgets);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let mut results = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| a.claim.cmp(&b.claim).then_with(|| a.instance.cmp(&b.instance)));
    Ok(SuiteReport { results })
}
