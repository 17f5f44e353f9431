//! Text formats.
//!
//! * `.hg` hypergraphs: a header line `n m`, then exactly `m` lines
//!   `s v1 … vs` (edge size followed by 1-based vertex ids). Lines starting
//!   with `#` are comments; blank lines are ignored.
//! * `.col.json` colorings: `{"k": 3, "colors": {"1": 2, "2": null}}`.
//!   Multicolorings add `"phases"` and map each vertex to `[phase, color]`
//!   pairs.
//! * DIMACS edge lists: `p edge N M` followed by `M` lines `e i j`, 1-based.
//! * Triple maps: JSON sidecar naming the `(edge, vertex, color)` triple
//!   behind each DIMACS vertex of an exported conflict graph. Edge numbers
//!   are 1-based positions in the `.hg` file.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::conflict::ConflictGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::{edge_defect, Hypergraph, MulticolorAssignment, PartialColoring};

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines<'a>(
    text: &'a str,
    comment: impl Fn(&str) -> bool + 'a,
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !comment(l))
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{token}'")))
}

pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text, |l| l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header 'n m'"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::parse(hline, "header must be 'n m'"));
    }
    let n: u32 = parse_num(hline, tokens[0], "vertex count")?;
    let m: usize = parse_num(hline, tokens[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (line, body) in lines {
        last = line;
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than the declared {m} edges")));
        }
        let mut tokens = body.split_whitespace();
        let size: usize = parse_num(line, tokens.next().unwrap_or(""), "edge size")?;
        let edge = tokens
            .map(|t| parse_num(line, t, "vertex id"))
            .collect::<Result<Vec<u32>>>()?;
        if edge.len() != size {
            return Err(Error::parse(
                line,
                format!("edge declares {size} vertices but lists {}", edge.len()),
            ));
        }
        if let Some(msg) = edge_defect(n, &edge) {
            return Err(Error::parse(line, msg));
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(Error::parse(
            last,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Hypergraph::new(n, edges)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", h.n(), h.m());
    for edge in h.edges() {
        let _ = write!(out, "{}", edge.len());
        for v in edge {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    k: u32,
    colors: BTreeMap<u32, Option<u32>>,
}

#[derive(Serialize, Deserialize)]
struct MulticolorFile {
    k: u32,
    phases: u32,
    colors: BTreeMap<u32, Vec<[u32; 2]>>,
}

fn check_keys<V>(map: &BTreeMap<u32, V>, n: u32) -> std::result::Result<(), String> {
    if map.len() != n as usize || map.keys().copied().ne(1..=n) {
        return Err(format!("vertex keys must be exactly 1..={n}"));
    }
    Ok(())
}

pub fn write_coloring(f: &PartialColoring) -> String {
    let file = ColoringFile {
        k: f.k(),
        colors: (1..=f.n()).zip(f.colors().iter().copied()).collect(),
    };
    serde_json::to_string(&file).expect("coloring serializes") + "\n"
}

/// Reads a single-color coloring that must cover exactly vertices `1..=n`.
pub fn read_coloring(text: &str, n: u32) -> Result<PartialColoring> {
    let file: ColoringFile = serde_json::from_str(text)?;
    check_keys(&file.colors, n).map_err(Error::InvalidColoring)?;
    PartialColoring::new(file.k, file.colors.into_values().collect())
}

pub fn write_multicoloring(a: &MulticolorAssignment) -> String {
    let file = MulticolorFile {
        k: a.k(),
        phases: a.phases(),
        colors: (1..=a.n())
            .map(|v| (v, a.pairs(v).map(|(p, c)| [p, c]).collect()))
            .collect(),
    };
    serde_json::to_string(&file).expect("multicoloring serializes") + "\n"
}

pub fn read_multicoloring(text: &str, n: u32) -> Result<MulticolorAssignment> {
    let file: MulticolorFile = serde_json::from_str(text)?;
    check_keys(&file.colors, n).map_err(Error::InvalidAssignment)?;
    let mut a = MulticolorAssignment::new(n, file.k, file.phases);
    for (v, pairs) in file.colors {
        for [p, c] in pairs {
            a.assign(v, p, c)?;
        }
    }
    Ok(a)
}

/// Either kind of coloring file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringDocument {
    Single(PartialColoring),
    Multi(MulticolorAssignment),
}

/// Reads a `.col.json` file of either kind; files with a `phases` field are
/// multicolorings.
pub fn read_coloring_document(text: &str, n: u32) -> Result<ColoringDocument> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("phases").is_some() {
        read_multicoloring(text, n).map(ColoringDocument::Multi)
    } else {
        read_coloring(text, n).map(ColoringDocument::Single)
    }
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Reads a DIMACS edge list. Repeated edges (in either orientation) merge,
/// but the number of `e` lines must match the header.
pub fn read_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last = 1;
    for (line, body) in content_lines(text, |l| l.starts_with('c')) {
        last = line;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            ["p", _format, n, m] => {
                if header.is_some() {
                    return Err(Error::parse(line, "second problem line"));
                }
                header = Some((parse_num(line, n, "vertex count")?, parse_num(line, m, "edge count")?));
            }
            ["e", u, v] => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge before problem line"))?;
                let u: usize = parse_num(line, u, "vertex id")?;
                let v: usize = parse_num(line, v, "vertex id")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(Error::parse(line, format!("vertex {x} outside [1, {n}]")));
                    }
                }
                if u == v {
                    return Err(Error::parse(line, format!("self-loop at {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(Error::parse(line, format!("unrecognized line '{body}'"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(last, "missing problem line 'p edge N M'"))?;
    if edges.len() != m {
        return Err(Error::parse(
            last,
            format!("problem line declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleEntry {
    /// 1-based DIMACS vertex id.
    pub index: usize,
    /// 1-based hyperedge position.
    pub edge: usize,
    pub vertex: u32,
    pub color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleMap {
    pub k: u32,
    pub triples: Vec<TripleEntry>,
}

impl TripleMap {
    pub fn of(g: &ConflictGraph) -> Self {
        TripleMap {
            k: g.k(),
            triples: g
                .triples()
                .iter()
                .enumerate()
                .map(|(i, t)| TripleEntry {
                    index: i + 1,
                    edge: t.edge + 1,
                    vertex: t.vertex,
                    color: t.color,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("triple map serializes") + "\n"
    }
}
