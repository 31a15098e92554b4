//! Edge-list text format.
//!
//! One edge per line as `u v`, or `u v w` for weighted hosts, where `w` is
//! `p/q`, an integer or a decimal. A line holding a single token declares an
//! isolated name (needed for the one-vertex graph). Blank lines and lines
//! starting with `#` are ignored. Names receive ids in natural order, so
//! `v2` precedes `v10`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::error::GraphError;
use crate::graph::{Graph, WeightedGraph};
use crate::scalar::{format_rational, int, parse_rational_or_decimal, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("no vertices in input")]
    Empty,
    #[error("{0}")]
    Graph(String),
}

#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub names: Vec<String>,
    pub graph: Graph,
}

#[derive(Debug, Clone)]
pub struct NamedWeighted {
    pub names: Vec<String>,
    pub graph: WeightedGraph<Rational>,
}

impl NamedGraph {
    pub fn id_of(&self, name: &str) -> Option<usize> {
        id_of(&self.names, name)
    }
}

impl NamedWeighted {
    pub fn id_of(&self, name: &str) -> Option<usize> {
        id_of(&self.names, name)
    }
}

fn id_of(names: &[String], name: &str) -> Option<usize> {
    names.binary_search_by(|probe| natural_cmp(probe, name)).ok()
}

/// Compares strings chunk by chunk, digit runs by numeric value. Ties fall
/// back to plain byte order so distinct strings never compare equal.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, xa), (db, xb)) in ca.iter().zip(cb.iter()) {
        let ord = if *da && *db {
            let (ta, tb) = (xa.trim_start_matches('0'), xb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            xa.cmp(xb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

struct RawEdge<'a> {
    line: usize,
    u: &'a str,
    v: &'a str,
    weight: Option<Rational>,
}

struct Raw<'a> {
    names: Vec<String>,
    edges: Vec<RawEdge<'a>>,
}

fn scan(text: &str) -> Result<Raw<'_>, ParseError> {
    let mut names: HashSet<&str> = HashSet::new();
    let mut edges = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let fail = |message: String| ParseError::Line { line: number, message };
        match tokens.as_slice() {
            [single] => {
                names.insert(single);
            }
            [u, v] | [u, v, _] => {
                let weight = match tokens.get(2) {
                    Some(w) => Some(parse_rational_or_decimal(w).map_err(|e| fail(e.to_string()))?),
                    None => None,
                };
                if u == v {
                    return Err(fail(format!("self-loop on `{u}`")));
                }
                names.insert(u);
                names.insert(v);
                edges.push(RawEdge {
                    line: number,
                    u,
                    v,
                    weight,
                });
            }
            _ => return Err(fail(format!("expected `u v [weight]`, found {} tokens", tokens.len()))),
        }
    }
    if names.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut names: Vec<String> = names.into_iter().map(str::to_string).collect();
    names.sort_by(|a, b| natural_cmp(a, b));
    Ok(Raw { names, edges })
}

fn resolved(raw: &Raw<'_>) -> Result<Vec<(usize, usize, Option<Rational>)>, ParseError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        let u = id_of(&raw.names, e.u).expect("scanned name");
        let v = id_of(&raw.names, e.v).expect("scanned name");
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::Line {
                line: e.line,
                message: format!("duplicate edge `{} {}`", e.u, e.v),
            });
        }
        out.push((u, v, e.weight));
    }
    Ok(out)
}

/// Parses an unweighted simple connected graph.
pub fn parse_edge_list(text: &str) -> Result<NamedGraph, ParseError> {
    let raw = scan(text)?;
    if let Some(e) = raw.edges.iter().find(|e| e.weight.is_some()) {
        return Err(ParseError::Line {
            line: e.line,
            message: "weights are only accepted in host files".into(),
        });
    }
    let edges: Vec<(usize, usize)> = resolved(&raw)?.into_iter().map(|(u, v, _)| (u, v)).collect();
    let graph = Graph::from_edges(raw.names.len(), &edges).map_err(|e| match e {
        GraphError::Disconnected { unreached } => ParseError::Graph(format!(
            "graph is disconnected: `{}` not reachable from `{}`",
            raw.names[unreached], raw.names[0]
        )),
        other => ParseError::Graph(other.to_string()),
    })?;
    Ok(NamedGraph {
        names: raw.names,
        graph,
    })
}

/// Parses a weighted host; a missing weight means 1.
pub fn parse_weighted_edge_list(text: &str) -> Result<NamedWeighted, ParseError> {
    let raw = scan(text)?;
    let mut graph = WeightedGraph::new(raw.names.len());
    for (u, v, w) in resolved(&raw)? {
        graph.add_edge(u, v, w.unwrap_or(int(1)));
    }
    Ok(NamedWeighted {
        names: raw.names,
        graph,
    })
}

/// Name of node `id`: a real vertex name, or `@id` for an added node.
pub fn node_name(names: &[String], id: usize) -> String {
    names.get(id).cloned().unwrap_or_else(|| format!("@{id}"))
}

pub fn write_edge_list(names: &[String], g: &Graph) -> String {
    let mut out = String::new();
    if g.n() == 1 {
        writeln!(out, "{}", names[0]).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", names[u], names[v]).unwrap();
    }
    out
}

/// Weighted edge list, one line per edge in input order.
pub fn write_weighted(names: &[String], host: &WeightedGraph<Rational>) -> String {
    let mut out = String::new();
    if host.edges().is_empty() {
        for id in 0..host.node_count() {
            writeln!(out, "{}", node_name(names, id)).unwrap();
        }
    }
    for (u, v, w) in host.edges() {
        writeln!(out, "{} {} {}", node_name(names, *u), node_name(names, *v), format_rational(w)).unwrap();
    }
    out
}

/// Undirected DOT with weights as edge labels. Nodes are listed in id
/// order, edges sorted by endpoint ids.
pub fn to_dot(names: &[String], host: &WeightedGraph<Rational>) -> String {
    let mut out = String::from("graph G {\n");
    for id in 0..host.node_count() {
        writeln!(out, "  \"{}\";", node_name(names, id)).unwrap();
    }
    let mut edges: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (u, v, w) in host.edges() {
        edges.insert(((*u).min(*v), (*u).max(*v)), *w);
    }
    for ((u, v), w) in edges {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [label=\"{}\"];",
            node_name(names, u),
            node_name(names, v),
            format_rational(&w)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Default names `v0 .. v{n-1}`, which natural order keeps in id order.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}
