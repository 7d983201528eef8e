//! Line-based graph files.
//!
//! ```text
//! graph c5
//! v 0
//! v 1
//! e 0 1
//! ```
//!
//! `v <id> c=0|1` colors a vertex; a file is a bigraph when every vertex is colored.

use std::fmt::Write as _;

use super::{Bigraph, Graph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub name: String,
    pub graph: Graph,
    pub colors: Option<Vec<u8>>,
}

impl GraphFile {
    pub fn bigraph(&self) -> Result<Bigraph> {
        match &self.colors {
            Some(c) => Bigraph::new(self.graph.clone(), c.clone()),
            None => Err(Error::ImproperColoring(format!(
                "graph `{}` has uncolored vertices",
                self.name
            ))),
        }
    }
}

fn parse_vertex(tok: &str, line: usize) -> Result<Vertex> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad vertex id `{tok}`"),
    })
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut name = None;
    let mut vertices: Vec<(Vertex, Option<u8>)> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let err = |msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        match toks[0] {
            "graph" if toks.len() == 2 => {
                if name.is_some() {
                    return Err(err("duplicate `graph` header"));
                }
                name = Some(toks[1].to_string());
            }
            "v" if toks.len() == 2 || toks.len() == 3 => {
                let v = parse_vertex(toks[1], line)?;
                let c = match toks.get(2) {
                    None => None,
                    Some(&"c=0") => Some(0),
                    Some(&"c=1") => Some(1),
                    Some(other) => return Err(err(&format!("bad color `{other}`"))),
                };
                vertices.push((v, c));
            }
            "e" if toks.len() == 3 => {
                edges.push((parse_vertex(toks[1], line)?, parse_vertex(toks[2], line)?));
            }
            _ => return Err(err(&format!("unrecognised line `{body}`"))),
        }
    }
    let name = name.ok_or(Error::Parse {
        line: 0,
        msg: "missing `graph <name>` header".into(),
    })?;
    let colored = vertices.iter().filter(|(_, c)| c.is_some()).count();
    let mut color_of: Vec<(Vertex, Option<u8>)> = vertices.clone();
    color_of.sort();
    color_of.dedup();
    if color_of.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::ImproperColoring("vertex declared with two colors".into()));
    }
    let graph = Graph::new(vertices.into_iter().map(|(v, _)| v), edges)?;
    let colors = if colored == 0 {
        None
    } else if colored == color_of.len() {
        let colors: Vec<u8> = color_of.iter().map(|(_, c)| c.unwrap()).collect();
        Bigraph::new(graph.clone(), colors.clone())?;
        Some(colors)
    } else {
        return Err(Error::ImproperColoring(
            "either every vertex or no vertex carries `c=`".into(),
        ));
    };
    Ok(GraphFile {
        name,
        graph,
        colors,
    })
}

fn write(name: &str, g: &Graph, colors: Option<&[u8]>) -> String {
    let mut out = format!("graph {name}\n");
    for (i, v) in g.vertices().iter().enumerate() {
        match colors {
            Some(c) => writeln!(out, "v {v} c={}", c[i]).unwrap(),
            None => writeln!(out, "v {v}").unwrap(),
        }
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {} {}", g.vertex(a as usize), g.vertex(b as usize)).unwrap();
    }
    out
}

pub fn write_graph(name: &str, g: &Graph) -> String {
    write(name, g, None)
}

pub fn write_bigraph(name: &str, x: &Bigraph) -> String {
    write(name, x.graph(), Some(x.colors()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{interval_bigraph, kronecker_cover, standard_graph, StandardKind};

    #[test]
    fn round_trip_plain() {
        let g = standard_graph(StandardKind::Interval, 3).unwrap();
        let text = write_graph("i3", &g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.name, "i3");
        assert_eq!(back.graph, g);
        assert!(back.colors.is_none());
        assert_eq!(write_graph("i3", &back.graph), text);
    }

    #[test]
    fn round_trip_bigraph() {
        let (x, _) = kronecker_cover(&standard_graph(StandardKind::Cycle, 5).unwrap());
        let text = write_bigraph("k2c5", &x);
        let back = parse_graph(&text).unwrap().bigraph().unwrap();
        assert_eq!(back, x);
        assert_eq!(write_bigraph("k2c5", &back), text);
    }

    #[test]
    fn golden_interval() {
        let l = interval_bigraph(-1, 1).unwrap();
        assert_eq!(
            write_bigraph("l", &l),
            "graph l\nv -1 c=1\nv 0 c=0\nv 1 c=1\ne -1 0\ne 0 1\n"
        );
    }

    #[test]
    fn rejects_bad_coloring() {
        let text = "graph bad\nv a c=0\nv b c=0\ne a b\n";
        assert!(matches!(parse_graph(text), Err(Error::ImproperColoring(_))));
        let partial = "graph bad\nv a c=0\nv b\n";
        assert!(matches!(parse_graph(partial), Err(Error::ImproperColoring(_))));
    }

    #[test]
    fn comments_and_errors() {
        let text = "# hi\ngraph t # trailing\nv x\ne x x\n";
        let g = parse_graph(text).unwrap();
        assert!(g.graph.is_looped(0));
        assert!(matches!(
            parse_graph("graph t\nv x\ne x y\n"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(parse_graph("v x\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_graph("graph t\nq\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
