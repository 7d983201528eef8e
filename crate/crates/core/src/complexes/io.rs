//! Text formats: `el <id>` / `cov <a> <b>` for posets and `facet <v>...` for complexes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Poset, SimplicialComplex};
use crate::error::{Error, Result};

pub fn write_poset(p: &Poset) -> String {
    let mut out = String::new();
    let mut labels: Vec<&str> = p.labels().iter().map(String::as_str).collect();
    labels.sort_unstable();
    for l in labels {
        writeln!(out, "el {l}").unwrap();
    }
    let mut covers: Vec<(&str, &str)> = p
        .covers()
        .into_iter()
        .map(|(a, b)| (p.label(a as usize), p.label(b as usize)))
        .collect();
    covers.sort_unstable();
    for (a, b) in covers {
        writeln!(out, "cov {a} {b}").unwrap();
    }
    out
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (i + 1, body.split_whitespace().collect()))
    })
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut labels: Vec<String> = Vec::new();
    let mut raw_covers = Vec::new();
    for (line, toks) in lines(text) {
        match toks.as_slice() {
            ["el", id] => labels.push(id.to_string()),
            ["cov", a, b] => raw_covers.push((line, a.to_string(), b.to_string())),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unrecognised line `{}`", toks.join(" ")),
                })
            }
        }
    }
    let index: std::collections::HashMap<&str, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    if index.len() != labels.len() {
        return Err(Error::invalid("duplicate `el` declaration"));
    }
    let mut rel = Vec::new();
    for (line, a, b) in &raw_covers {
        let find = |s: &str| {
            index.get(s).copied().ok_or_else(|| Error::Parse {
                line: *line,
                msg: format!("undeclared element `{s}`"),
            })
        };
        rel.push((find(a)?, find(b)?));
    }
    Poset::from_relations(labels, &rel)
}

pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut facets: Vec<Vec<&str>> = k
        .facets()
        .iter()
        .map(|f| {
            let mut v: Vec<&str> = f.iter().map(|&x| k.labels()[x as usize].as_str()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    facets.sort_unstable();
    let mut out = String::new();
    for f in facets {
        writeln!(out, "facet {}", f.join(" ")).unwrap();
    }
    out
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut raw = Vec::new();
    for (line, toks) in lines(text) {
        match toks.split_first() {
            Some((&"facet", vs)) if !vs.is_empty() => raw.push(vs.to_vec()),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unrecognised line `{}`", toks.join(" ")),
                })
            }
        }
    }
    let labels: Vec<String> = raw
        .iter()
        .flatten()
        .map(|s| s.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let simplices = raw
        .iter()
        .map(|f| {
            f.iter()
                .map(|s| labels.binary_search_by(|l| l.as_str().cmp(s)).unwrap() as u32)
                .collect()
        })
        .collect();
    SimplicialComplex::new(labels, simplices)
}
