use std::fmt;

use super::{
    connector, cycle_hom_level, free_loop_level, omega_level, path_hom_level, twisted_loop_level,
    Level,
};
use crate::error::{Caps, Error, Result};
use crate::graph::{Bigraph, Graph, GraphHom, OddInvolution};
use crate::topology::HomologySummary;

/// What a tower is built from. Interval towers are indexed by `n`; cycle
/// towers by `r`, with level `r` holding homs from `C_{2r}` or `C_{2r+1}`.
#[derive(Clone, Debug)]
pub enum TowerSource {
    Path { x: Bigraph },
    Omega { x: Bigraph, base: (u32, u32) },
    FreeLoop { x: Bigraph },
    TwistedLoop { x: Bigraph, alpha: OddInvolution },
    Cycle { g: Graph, odd: bool },
}

impl TowerSource {
    pub fn name(&self) -> &'static str {
        match self {
            TowerSource::Path { .. } => "path",
            TowerSource::Omega { .. } => "omega",
            TowerSource::FreeLoop { .. } => "free",
            TowerSource::TwistedLoop { .. } => "twisted",
            TowerSource::Cycle { odd: false, .. } => "cycle-even",
            TowerSource::Cycle { odd: true, .. } => "cycle-odd",
        }
    }

    pub fn first_level(&self) -> usize {
        match self {
            TowerSource::Cycle { odd: false, .. } => 2,
            TowerSource::Cycle { odd: true, .. } => 1,
            _ => 0,
        }
    }

    pub fn level(&self, n: usize, caps: &Caps) -> Result<Level> {
        if n < self.first_level() {
            return Err(Error::invalid(format!(
                "{} towers start at level {}",
                self.name(),
                self.first_level()
            )));
        }
        match self {
            TowerSource::Path { x } => path_hom_level(x, n, caps),
            TowerSource::Omega { x, base } => omega_level(x, *base, n, caps),
            TowerSource::FreeLoop { x } => free_loop_level(x, n, caps),
            TowerSource::TwistedLoop { x, alpha } => twisted_loop_level(x, alpha, n, caps),
            TowerSource::Cycle { g, odd } => cycle_hom_level(g, 2 * n + usize::from(*odd), caps),
        }
    }
}

/// Consecutive levels with their connectors.
#[derive(Clone, Debug)]
pub struct Tower {
    first: usize,
    levels: Vec<Level>,
    connectors: Vec<Vec<u32>>,
}

impl Tower {
    pub fn build(source: &TowerSource, max_level: usize, caps: &Caps) -> Result<Tower> {
        let first = source.first_level();
        let mut levels: Vec<Level> = Vec::new();
        let mut connectors = Vec::new();
        for n in first..=max_level.max(first) {
            let level = source.level(n, caps)?;
            if let Some(prev) = levels.last() {
                connectors.push(connector(prev, &level)?);
            }
            levels.push(level);
        }
        Ok(Tower {
            first,
            levels,
            connectors,
        })
    }

    pub fn first_level(&self) -> usize {
        self.first
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&Level> {
        n.checked_sub(self.first).and_then(|k| self.levels.get(k))
    }

    /// The connector from level `n` to level `n + 1`.
    pub fn connector(&self, n: usize) -> Option<&[u32]> {
        n.checked_sub(self.first)
            .and_then(|k| self.connectors.get(k))
            .map(Vec::as_slice)
    }

    pub fn connector_hom(&self, n: usize) -> Option<GraphHom> {
        self.connector(n).map(|m| GraphHom::unchecked(m.to_vec()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSummary {
    pub index: usize,
    pub vertices: usize,
    pub components: usize,
    pub component_sizes: Vec<usize>,
    /// Per component; `None` when not computed within the face cap.
    pub homology: Vec<Option<HomologySummary>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSummary {
    pub from: usize,
    /// Induced map on components.
    pub pi0: Vec<u32>,
    pub injective: bool,
    pub surjective: bool,
    /// `None` when some homology is unknown or not requested.
    pub homology_equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable { level: usize, components: usize },
    NotStable { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub tower: &'static str,
    pub window: usize,
    pub dim: usize,
    pub levels: Vec<LevelSummary>,
    pub steps: Vec<StepSummary>,
    pub verdict: Verdict,
}

impl StabilizationReport {
    pub fn level(&self, n: usize) -> Option<&LevelSummary> {
        self.levels.iter().find(|l| l.index == n)
    }

    /// Components `(level, id)` whose images over the next `window` steps
    /// are hit only by them and carry the same known homology.
    pub fn stabilized_components(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, lvl) in self.levels.iter().enumerate() {
            if k + self.window >= self.levels.len() {
                break;
            }
            'comp: for c in 0..lvl.components {
                let h0 = &lvl.homology[c];
                if self.dim > 0 && h0.is_none() {
                    continue;
                }
                let mut cur = c;
                for j in 0..self.window {
                    let step = &self.steps[k + j];
                    let img = step.pi0[cur];
                    if step.pi0.iter().filter(|&&t| t == img).count() != 1 {
                        continue 'comp;
                    }
                    cur = img as usize;
                    if self.dim > 0 {
                        match (&self.levels[k + j + 1].homology[cur], h0) {
                            (Some(a), Some(b)) if a.agrees_with(b) => {}
                            _ => continue 'comp,
                        }
                    }
                }
                out.push((lvl.index, c));
            }
        }
        out
    }
}

fn homology_cell(h: &Option<HomologySummary>) -> String {
    match h {
        None => "?".into(),
        Some(h) => {
            let groups: Vec<String> = (0..h.betti.len()).map(|k| h.group(k)).collect();
            format!("[{}]", groups.join(", "))
        }
    }
}

impl fmt::Display for StabilizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tower {} window={} dim={}", self.tower, self.window, self.dim)?;
        for l in &self.levels {
            write!(f, "level {}: components={}; vertices={}", l.index, l.components, l.vertices)?;
            if self.dim > 0 {
                for (i, h) in l.homology.iter().enumerate() {
                    write!(f, "; H(comp {i})={}", homology_cell(h))?;
                }
            }
            writeln!(f)?;
        }
        match &self.verdict {
            Verdict::Stable { level, components } => {
                writeln!(f, "verdict: stable@{level}, components={components}")
            }
            Verdict::NotStable { budget } => writeln!(f, "verdict: not-stable(budget={budget})"),
        }
    }
}

fn summarize(level: &Level, n: usize, dim: usize, caps: &Caps) -> Result<(LevelSummary, Vec<u32>)> {
    let (count, comp) = level.components();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c as usize].push(v as u32);
    }
    let mut homology = vec![None; count];
    if dim > 0 {
        match level.adjacency(caps) {
            Ok(adj) => {
                for (c, m) in members.iter().enumerate() {
                    homology[c] = level.component_homology(&adj, m, dim, caps.complex_faces);
                }
            }
            Err(e) if e.is_budget() => {}
            Err(e) => return Err(e),
        }
    }
    Ok((
        LevelSummary {
            index: n,
            vertices: level.len(),
            components: count,
            component_sizes: members.iter().map(Vec::len).collect(),
            homology,
        },
        comp,
    ))
}

/// Builds levels `first..=max_level` until `window` consecutive connectors
/// induce bijections on components with equal per-component homology up to
/// `dim`. A level exceeding a cap ends the run with a budget verdict.
pub fn stabilize(
    source: &TowerSource,
    max_level: usize,
    window: usize,
    dim: usize,
    caps: &Caps,
) -> Result<StabilizationReport> {
    if window == 0 {
        return Err(Error::invalid("stabilization window must be positive"));
    }
    let first = source.first_level();
    let mut levels = Vec::new();
    let mut steps = Vec::new();
    let mut prev: Option<(Level, Vec<u32>)> = None;
    let mut run = 0usize;
    let mut built = None;
    let mut verdict = None;
    for n in first..=max_level.max(first) {
        let level = match source.level(n, caps) {
            Ok(l) => l,
            Err(e) if e.is_budget() => break,
            Err(e) => return Err(e),
        };
        let (summary, comp) = summarize(&level, n, dim, caps)?;
        if let Some((p, pcomp)) = &prev {
            let map = connector(p, &level)?;
            let pcount = levels.last().map_or(0, |l: &LevelSummary| l.components);
            let mut pi0 = vec![u32::MAX; pcount];
            for (v, &t) in map.iter().enumerate() {
                pi0[pcomp[v] as usize] = comp[t as usize];
            }
            let mut hit = vec![0usize; summary.components];
            for &t in &pi0 {
                hit[t as usize] += 1;
            }
            let injective = hit.iter().all(|&h| h <= 1);
            let surjective = hit.iter().all(|&h| h >= 1);
            let homology_equal = if dim == 0 {
                None
            } else {
                let prev_h = &levels.last().unwrap().homology;
                let mut all = Some(true);
                for (c, &t) in pi0.iter().enumerate() {
                    match (&prev_h[c], &summary.homology[t as usize]) {
                        (Some(a), Some(b)) => {
                            if !a.agrees_with(b) {
                                all = Some(false);
                                break;
                            }
                        }
                        _ => all = None,
                    }
                }
                all
            };
            let good = injective && surjective && (dim == 0 || homology_equal == Some(true));
            run = if good { run + 1 } else { 0 };
            steps.push(StepSummary {
                from: n - 1,
                pi0,
                injective,
                surjective,
                homology_equal,
            });
        }
        let components = summary.components;
        levels.push(summary);
        built = Some(n);
        if run >= window {
            verdict = Some(Verdict::Stable {
                level: n - window,
                components,
            });
            break;
        }
        prev = Some((level, comp));
    }
    let verdict = verdict.unwrap_or(Verdict::NotStable {
        budget: built.unwrap_or(first),
    });
    Ok(StabilizationReport {
        tower: source.name(),
        window,
        dim,
        levels,
        steps,
        verdict,
    })
}
