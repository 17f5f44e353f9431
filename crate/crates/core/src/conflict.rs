//! The conflict graph `G_k` of conflict-free `k`-coloring a hypergraph, and
//! the translations between its independent sets and partial colorings.
//!
//! Vertices of `G_k` are triples `(e, v, c)` with `v ∈ e` and `1 ≤ c ≤ k`.
//! Two distinct triples `(e, v, c)` and `(g, u, d)` are adjacent when
//!
//! * VERTEX: `v = u` and `c ≠ d`,
//! * EDGE: `e = g`,
//! * COLOR: `c = d`, `u ≠ v`, and `u ∈ e` or `v ∈ g`.
//!
//! The COLOR family requires `u ≠ v`. Allowing `u = v` would connect two
//! triples that name the same vertex as the unique witness of two different
//! edges with the same color, and such pairs must be able to coexist in the
//! independent set induced by a conflict-free coloring.

use std::collections::HashMap;

use bitflags::bitflags;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, IndependentSet};
use crate::hypergraph::{unique_color_witnesses, Color, Hypergraph, PartialColoring, Vertex};

bitflags! {
    /// The edge families that justify an adjacency in `G_k`.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct Families: u8 {
        const VERTEX = 0b001;
        const EDGE = 0b010;
        const COLOR = 0b100;
    }
}

/// A vertex `(e, v, c)` of the conflict graph. `edge` is a 0-based index into
/// the source hypergraph's edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub edge: usize,
    pub vertex: Vertex,
    pub color: Color,
}

impl Triple {
    pub fn new(edge: usize, vertex: Vertex, color: Color) -> Self {
        Triple { edge, vertex, color }
    }
}

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    source: Hypergraph,
    k: u32,
    triples: Vec<Triple>,
    /// First triple index of each hyperedge's block.
    offsets: Vec<usize>,
    graph: Graph,
    /// `tags[i][j]` labels the edge `(i, graph.neighbors(i)[j])`.
    tags: Vec<Vec<Families>>,
}

/// Family predicates for two triples of `h`, evaluated straight from the
/// definition.
fn families_between(h: &Hypergraph, a: Triple, b: Triple) -> Families {
    let mut f = Families::empty();
    if a.vertex == b.vertex && a.color != b.color {
        f |= Families::VERTEX;
    }
    if a.edge == b.edge {
        f |= Families::EDGE;
    }
    if a.color == b.color
        && a.vertex != b.vertex
        && (h.edge(a.edge).contains(&b.vertex) || h.edge(b.edge).contains(&a.vertex))
    {
        f |= Families::COLOR;
    }
    f
}

/// Builds `G_k` for `h`.
///
/// Triples are numbered edge by edge, then by the vertex's position within
/// the edge, then by color. Each family is generated from a grouping that
/// only visits pairs that can satisfy it.
pub fn build_conflict_graph(h: &Hypergraph, k: u32) -> Result<ConflictGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("palette size k must be at least 1".into()));
    }
    let ku = k as usize;
    let mut triples = Vec::with_capacity(ku * h.total_size());
    let mut offsets = Vec::with_capacity(h.m());
    for (e, edge) in h.edges().iter().enumerate() {
        offsets.push(triples.len());
        for &v in edge {
            triples.extend((1..=k).map(|c| Triple::new(e, v, c)));
        }
    }

    // (vertex, color) -> triple indices; (vertex) -> triple indices
    let n = h.n() as usize;
    let mut by_vertex_color: Vec<Vec<usize>> = vec![Vec::new(); n * ku];
    for (i, t) in triples.iter().enumerate() {
        by_vertex_color[(t.vertex as usize - 1) * ku + (t.color as usize - 1)].push(i);
    }

    let mut pairs: Vec<(usize, usize, Families)> = Vec::new();
    let mut push = |i: usize, j: usize, f: Families| {
        if i < j {
            pairs.push((i, j, f));
        } else {
            pairs.push((j, i, f));
        }
    };

    for (e, edge) in h.edges().iter().enumerate() {
        let start = offsets[e];
        let end = start + edge.len() * ku;
        for i in start..end {
            for j in i + 1..end {
                push(i, j, Families::EDGE);
            }
        }
    }
    for v in 0..n {
        let groups = &by_vertex_color[v * ku..(v + 1) * ku];
        for (c, a) in groups.iter().enumerate() {
            for b in &groups[c + 1..] {
                for &i in a {
                    for &j in b {
                        push(i, j, Families::VERTEX);
                    }
                }
            }
        }
    }
    for (i, t) in triples.iter().enumerate() {
        for &u in h.edge(t.edge) {
            if u == t.vertex {
                continue;
            }
            for &j in &by_vertex_color[(u as usize - 1) * ku + (t.color as usize - 1)] {
                push(i, j, Families::COLOR);
            }
        }
    }

    pairs.sort_unstable_by_key(|&(i, j, _)| (i, j));
    let mut merged: Vec<(usize, usize, Families)> = Vec::with_capacity(pairs.len());
    for (i, j, f) in pairs {
        match merged.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 |= f,
            _ => merged.push((i, j, f)),
        }
    }

    let graph = Graph::from_edges(triples.len(), merged.iter().map(|&(i, j, _)| (i, j)))?;
    let mut tagged: Vec<Vec<(usize, Families)>> = vec![Vec::new(); triples.len()];
    for &(i, j, f) in &merged {
        tagged[i].push((j, f));
        tagged[j].push((i, f));
    }
    let tags = tagged
        .into_iter()
        .map(|mut row| {
            row.sort_unstable_by_key(|&(j, _)| j);
            row.into_iter().map(|(_, f)| f).collect()
        })
        .collect();

    Ok(ConflictGraph {
        source: h.clone(),
        k,
        triples,
        offsets,
        graph,
        tags,
    })
}

impl ConflictGraph {
    pub fn source(&self) -> &Hypergraph {
        &self.source
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn triple(&self, i: usize) -> Triple {
        self.triples[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.triples.len()
    }

    /// Index of `t` in the vertex list, if `t` is a valid triple.
    pub fn index_of(&self, t: Triple) -> Option<usize> {
        if t.edge >= self.source.m() || t.color == 0 || t.color > self.k {
            return None;
        }
        let pos = self.source.edge(t.edge).iter().position(|&v| v == t.vertex)?;
        Some(self.offsets[t.edge] + pos * self.k as usize + (t.color as usize - 1))
    }

    /// Stored family tags of the pair `(i, j)`; empty when non-adjacent.
    pub fn families(&self, i: usize, j: usize) -> Families {
        match self.graph.neighbors(i).binary_search(&j) {
            Ok(pos) => self.tags[i][pos],
            Err(_) => Families::empty(),
        }
    }

    /// Families whose predicate the pair satisfies, evaluated from the
    /// definition rather than the stored adjacency.
    pub fn classify_pair(&self, a: Triple, b: Triple) -> Result<Families> {
        if a == b {
            return Err(Error::InvalidPair(format!("{a:?} paired with itself")));
        }
        for t in [a, b] {
            if self.index_of(t).is_none() {
                return Err(Error::InvalidPair(format!("{t:?} is not a vertex of G_{}", self.k)));
            }
        }
        Ok(families_between(&self.source, a, b))
    }

    /// The independent set `I_f`: one triple `(e, v, f(v))` per edge `e` that
    /// is happy under `f`, choosing the witness `v` with the smallest id.
    /// Unhappy edges contribute nothing.
    pub fn coloring_to_independent_set(&self, f: &PartialColoring) -> Result<IndependentSet> {
        if f.k() != self.k {
            return Err(Error::InvalidParameter(format!(
                "coloring uses palette size {}, conflict graph has k = {}",
                f.k(),
                self.k
            )));
        }
        if f.n() != self.source.n() {
            return Err(Error::InvalidColoring(format!(
                "coloring covers {} vertices, hypergraph has {}",
                f.n(),
                self.source.n()
            )));
        }
        let members = self
            .source
            .edges()
            .iter()
            .enumerate()
            .filter_map(|(e, edge)| {
                let v = unique_color_witnesses(edge, f).into_iter().min()?;
                let c = f.get(v)?;
                self.index_of(Triple::new(e, v, c))
            })
            .collect();
        IndependentSet::verified(&self.graph, members)
    }

    /// The partial coloring `f_I`: `v` gets `c` when some `(·, v, c)` is in the
    /// set, and stays uncolored otherwise.
    pub fn independent_set_to_coloring(&self, s: &IndependentSet) -> Result<PartialColoring> {
        let members = s.members();
        if !crate::solvers::verify_independent(&self.graph, members)
            .map_err(|e| Error::ContractViolation(e.to_string()))?
        {
            return Err(Error::ContractViolation(
                "set is not independent in this conflict graph".into(),
            ));
        }
        let mut f = PartialColoring::uncolored(self.source.n(), self.k);
        for &i in members {
            let t = self.triples[i];
            match f.get(t.vertex) {
                Some(c) if c != t.color => {
                    return Err(Error::ContractViolation(format!(
                        "vertex {} would receive colors {c} and {}",
                        t.vertex, t.color
                    )))
                }
                _ => f.set(t.vertex, Some(t.color))?,
            }
        }
        Ok(f)
    }

    /// Edges named by some triple of `s`; each of them is happy under the
    /// coloring induced by `s`.
    pub fn witnessed_edges(&self, s: &IndependentSet) -> Vec<usize> {
        let mut edges: Vec<usize> = s.members().iter().map(|&i| self.triples[i].edge).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Number of adjacent pairs carrying each family tag.
    pub fn family_counts(&self) -> HashMap<&'static str, usize> {
        let mut counts = HashMap::from([("vertex", 0), ("edge", 0), ("color", 0)]);
        for (i, j) in self.graph.edges() {
            let f = self.families(i, j);
            for (name, flag) in [
                ("vertex", Families::VERTEX),
                ("edge", Families::EDGE),
                ("color", Families::COLOR),
            ] {
                if f.contains(flag) {
                    *counts.get_mut(name).unwrap() += 1;
                }
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: u32, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_pair_edge_k2_is_k4() {
        let g = build_conflict_graph(&hg(2, &[&[1, 2]]), 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.graph().edge_count(), 6);
    }

    #[test]
    fn disjoint_edges_k1() {
        let h = hg(4, &[&[1, 2], &[3, 4]]);
        let g = build_conflict_graph(&h, 1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.graph().edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert_eq!(g.families(0, 1), Families::EDGE | Families::COLOR);
    }

    #[test]
    fn no_edges_no_vertices() {
        let g = build_conflict_graph(&hg(5, &[]), 3).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.graph().edge_count(), 0);
    }

    #[test]
    fn zero_palette_rejected() {
        assert!(matches!(
            build_conflict_graph(&hg(2, &[&[1, 2]]), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let h = hg(4, &[&[1, 2], &[1, 3], &[4, 2]]);
        let g = build_conflict_graph(&h, 2).unwrap();
        let t = Triple::new;
        assert_eq!(g.classify_pair(t(0, 1, 1), t(1, 1, 2)).unwrap(), Families::VERTEX);
        assert_eq!(
            g.classify_pair(t(0, 1, 1), t(0, 1, 2)).unwrap(),
            Families::VERTEX | Families::EDGE
        );
        // vertices 3 and 4 never share an edge with each other's triple edge
        assert_eq!(g.classify_pair(t(1, 3, 1), t(2, 4, 1)).unwrap(), Families::empty());
        assert!(matches!(
            g.classify_pair(t(0, 1, 1), t(0, 1, 1)),
            Err(Error::InvalidPair(_))
        ));
        assert!(matches!(
            g.classify_pair(t(0, 1, 1), t(0, 3, 1)),
            Err(Error::InvalidPair(_))
        ));
        assert!(g.classify_pair(t(0, 1, 1), t(0, 2, 3)).is_err());
    }

    #[test]
    fn same_witness_same_color_in_two_edges_is_not_adjacent() {
        // e = {a, b1, b2}, g = {a, c1, c2}: a is the unique witness of both edges
        let h = hg(5, &[&[1, 2, 3], &[1, 4, 5]]);
        let g = build_conflict_graph(&h, 2).unwrap();
        let f = PartialColoring::new(2, vec![Some(1), Some(2), Some(2), Some(2), Some(2)]).unwrap();
        let s = g.coloring_to_independent_set(&f).unwrap();
        assert_eq!(s.len(), 2);
        let a = g.index_of(Triple::new(0, 1, 1)).unwrap();
        let b = g.index_of(Triple::new(1, 1, 1)).unwrap();
        assert!(!g.graph().adjacent(a, b));
    }

    #[test]
    fn coloring_to_set_tie_break() {
        let h = hg(2, &[&[1, 2]]);
        let g = build_conflict_graph(&h, 2).unwrap();
        let f = PartialColoring::new(2, vec![Some(1), Some(2)]).unwrap();
        let s = g.coloring_to_independent_set(&f).unwrap();
        assert_eq!(s.members().len(), 1);
        assert_eq!(g.triple(s.members()[0]), Triple::new(0, 1, 1));

        let none = g.coloring_to_independent_set(&PartialColoring::uncolored(2, 2)).unwrap();
        assert!(none.is_empty());

        let wrong_k = PartialColoring::new(3, vec![Some(1), Some(2)]).unwrap();
        assert!(matches!(
            g.coloring_to_independent_set(&wrong_k),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn set_to_coloring() {
        let h = hg(2, &[&[1, 2]]);
        let g = build_conflict_graph(&h, 2).unwrap();
        let empty = IndependentSet::verified(g.graph(), vec![]).unwrap();
        assert_eq!(
            g.independent_set_to_coloring(&empty).unwrap(),
            PartialColoring::uncolored(2, 2)
        );

        let i = g.index_of(Triple::new(0, 1, 1)).unwrap();
        let s = IndependentSet::verified(g.graph(), vec![i]).unwrap();
        let f = g.independent_set_to_coloring(&s).unwrap();
        assert_eq!(f.colors(), &[Some(1), None]);
        assert_eq!(crate::hypergraph::happy_edges(&h, &f).unwrap(), vec![0]);
    }

    #[test]
    fn set_from_another_graph_is_rejected() {
        // {0, 1} is independent in the empty graph but adjacent in K4
        let other = Graph::empty(4);
        let s = IndependentSet::verified(&other, vec![0, 1]).unwrap();
        let g = build_conflict_graph(&hg(2, &[&[1, 2]]), 2).unwrap();
        assert!(matches!(
            g.independent_set_to_coloring(&s),
            Err(Error::ContractViolation(_))
        ));
        let far = IndependentSet::verified(&Graph::empty(10), vec![9]).unwrap();
        assert!(matches!(
            g.independent_set_to_coloring(&far),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn family_counts_cover_every_edge() {
        let h = hg(3, &[&[1, 2], &[2, 3]]);
        let g = build_conflict_graph(&h, 2).unwrap();
        let counts = g.family_counts();
        assert!(counts["edge"] > 0 && counts["vertex"] > 0 && counts["color"] > 0);
        for (i, j) in g.graph().edges() {
            assert!(!g.families(i, j).is_empty());
        }
    }
}
