use std::path::Path;

use super::Claim;
use crate::error::{Error, Result};
use crate::graph::io::parse_graph;
use crate::graph::{kronecker_cover, Bigraph, Graph, OddInvolution, Vertex};

/// A corpus entry: a plain graph, or a bigraph with an optional odd involution.
#[derive(Clone, Debug)]
pub enum Instance {
    Graph {
        name: String,
        graph: Graph,
    },
    Bigraph {
        name: String,
        graph: Bigraph,
        involution: Option<OddInvolution>,
    },
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Graph { name, .. } | Instance::Bigraph { name, .. } => name,
        }
    }

    pub fn supports(&self, claim: Claim) -> bool {
        !claim.on_graphs() || matches!(self, Instance::Graph { .. })
    }

    /// Bigraph claims on a graph `G` run on `K₂ × G`, named `k2x<name>`.
    pub fn check_name(&self, claim: Claim) -> String {
        match self {
            Instance::Graph { name, .. } if !claim.on_graphs() => format!("k2x{name}"),
            _ => self.name().to_string(),
        }
    }

    pub fn bigraph(&self) -> (Bigraph, Option<OddInvolution>) {
        match self {
            Instance::Graph { graph, .. } => {
                let (x, a) = kronecker_cover(graph);
                (x, Some(a))
            }
            Instance::Bigraph {
                graph, involution, ..
            } => (graph.clone(), involution.clone()),
        }
    }
}

/// `x ↦ a + b - x` on a bigraph whose vertices are the integers `a..=b`,
/// when that map is an odd involution.
pub fn reflection_involution(x: &Bigraph) -> Option<OddInvolution> {
    let ints: Vec<i64> = x
        .graph()
        .vertices()
        .iter()
        .map(Vertex::as_int)
        .collect::<Option<_>>()?;
    let (a, b) = (*ints.iter().min()?, *ints.iter().max()?);
    if (b - a + 1) as usize != ints.len() {
        return None;
    }
    OddInvolution::from_fn(x, |v| Vertex::Int(a + b - v.as_int().unwrap_or(0))).ok()
}

/// One graph-file path per line, relative to `base`. Blank lines and `#`
/// comments are skipped.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let path = raw.split('#').next().unwrap_or("").trim();
        if path.is_empty() {
            continue;
        }
        if path.split_whitespace().count() != 1 {
            return Err(Error::Parse {
                line,
                msg: format!("expected one path, got `{path}`"),
            });
        }
        let full = base.join(path);
        let text = std::fs::read_to_string(&full).map_err(|e| Error::Parse {
            line,
            msg: format!("cannot read `{}`: {e}", full.display()),
        })?;
        let file = parse_graph(&text).map_err(|e| Error::Parse {
            line,
            msg: format!("`{path}`: {e}"),
        })?;
        out.push(match file.colors {
            None => Instance::Graph {
                name: file.name,
                graph: file.graph,
            },
            Some(_) => {
                let graph = file.bigraph()?;
                let involution = reflection_involution(&graph);
                Instance::Bigraph {
                    name: file.name,
                    graph,
                    involution,
                }
            }
        });
    }
    let mut names: Vec<&str> = out.iter().map(Instance::name).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("duplicate corpus name `{}`", w[0])));
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<Vec<Instance>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read manifest `{}`: {e}", path.display()),
    })?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}
