//! Hypergraphs, partial colorings and multicolorings, plus the happy-edge
//! semantics shared by every other module.
//!
//! Vertices are identified by `1..=n`; edges by their position in the edge
//! list. Two edges with the same vertex set are still two distinct edges.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Vertex identifier, 1-based.
pub type Vertex = u32;
/// Color identifier, 1-based. `None` in a coloring stands for "uncolored".
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    edges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    /// Builds a hypergraph, rejecting empty edges, out-of-range vertices and
    /// vertices repeated within one edge.
    pub fn new(n: u32, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        for (i, edge) in edges.iter().enumerate() {
            if let Some(msg) = edge_defect(n, edge) {
                return Err(Error::InvalidParameter(format!("edge {}: {msg}", i + 1)));
            }
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[Vertex] {
        &self.edges[e]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Sum of edge sizes.
    pub fn total_size(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Sub-hypergraph on the same vertex set keeping only the listed edges,
    /// in the order given.
    pub fn restrict(&self, keep: &[usize]) -> Hypergraph {
        Hypergraph {
            n: self.n,
            edges: keep.iter().map(|&e| self.edges[e].clone()).collect(),
        }
    }
}

/// Returns a description of what is wrong with `edge`, if anything.
pub(crate) fn edge_defect(n: u32, edge: &[Vertex]) -> Option<String> {
    if edge.is_empty() {
        return Some("empty edge".into());
    }
    if let Some(&v) = edge.iter().find(|&&v| v == 0 || v > n) {
        return Some(format!("vertex {v} outside [1, {n}]"));
    }
    let mut sorted = edge.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Some(format!("vertex {} repeated", w[0]));
    }
    None
}

/// A map `V -> {1..k} ∪ {⊥}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    k: u32,
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    /// All vertices uncolored.
    pub fn uncolored(n: u32, k: u32) -> Self {
        PartialColoring {
            k,
            colors: vec![None; n as usize],
        }
    }

    /// `colors[i]` is the color of vertex `i + 1`.
    pub fn new(k: u32, colors: Vec<Option<Color>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColoring("palette size must be at least 1".into()));
        }
        if let Some((i, c)) = colors
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.filter(|&c| c == 0 || c > k).map(|c| (i, c)))
        {
            return Err(Error::InvalidColoring(format!(
                "vertex {} has color {c} outside [1, {k}]",
                i + 1
            )));
        }
        Ok(PartialColoring { k, colors })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of vertices covered.
    pub fn n(&self) -> u32 {
        self.colors.len() as u32
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.colors[v as usize - 1]
    }

    pub fn set(&mut self, v: Vertex, c: Option<Color>) -> Result<()> {
        if v == 0 || v > self.n() {
            return Err(Error::InvalidColoring(format!("vertex {v} outside [1, {}]", self.n())));
        }
        if let Some(c) = c {
            if c == 0 || c > self.k {
                return Err(Error::InvalidColoring(format!(
                    "color {c} outside [1, {}]",
                    self.k
                )));
            }
        }
        self.colors[v as usize - 1] = c;
        Ok(())
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }
}

/// Vertices of `edge` whose color is held by no other vertex of the edge.
/// Uncolored vertices are never witnesses.
pub fn unique_color_witnesses(edge: &[Vertex], f: &PartialColoring) -> Vec<Vertex> {
    edge.iter()
        .copied()
        .filter(|&v| match f.get(v) {
            None => false,
            Some(c) => edge.iter().all(|&u| u == v || f.get(u) != Some(c)),
        })
        .collect()
}

fn check_cover(h: &Hypergraph, f: &PartialColoring) -> Result<()> {
    if f.n() != h.n() {
        return Err(Error::InvalidColoring(format!(
            "coloring covers {} vertices, hypergraph has {}",
            f.n(),
            h.n()
        )));
    }
    Ok(())
}

/// Indices of the edges that have a vertex with a real color no other vertex
/// of the edge shares.
pub fn happy_edges(h: &Hypergraph, f: &PartialColoring) -> Result<Vec<usize>> {
    check_cover(h, f)?;
    let mut buf = Vec::new();
    Ok(h.edges
        .iter()
        .enumerate()
        .filter(|(_, edge)| edge_is_happy(edge, f, &mut buf))
        .map(|(e, _)| e)
        .collect())
}

fn edge_is_happy(edge: &[Vertex], f: &PartialColoring, buf: &mut Vec<Color>) -> bool {
    buf.clear();
    buf.extend(edge.iter().filter_map(|&v| f.get(v)));
    buf.sort_unstable();
    // a color is unique iff it differs from both sorted neighbours
    (0..buf.len()).any(|i| {
        (i == 0 || buf[i - 1] != buf[i]) && (i + 1 == buf.len() || buf[i + 1] != buf[i])
    })
}

pub fn is_conflict_free(h: &Hypergraph, f: &PartialColoring) -> Result<bool> {
    Ok(happy_edges(h, f)?.len() == h.m())
}

/// Largest edge size allowed for base size `k` at slack `eps`: `⌊(1+ε)k⌋`.
pub fn max_edge_size(k: usize, eps: f64) -> usize {
    ((1.0 + eps) * k as f64 + 1e-9).floor() as usize
}

/// Largest `k ≥ 1` with `k ≤ |e| ≤ (1+ε)k` for every edge, if any exists.
///
/// The upper bound only loosens as `k` grows, so a witness exists iff the
/// smallest edge size is one, and that size is returned. A hypergraph
/// without edges is almost uniform with `k = 1`.
pub fn is_almost_uniform(h: &Hypergraph, eps: f64) -> Option<usize> {
    let Some(min) = h.edges.iter().map(Vec::len).min() else {
        return Some(1);
    };
    let max = h.edges.iter().map(Vec::len).max().unwrap_or(min);
    (max <= max_edge_size(min, eps)).then_some(min)
}

/// A map from vertices to sets of `(phase, color)` pairs, with at most one
/// color per phase on each vertex. Each phase has its own palette `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticolorAssignment {
    k: u32,
    phases: u32,
    colors: Vec<BTreeMap<u32, Color>>,
}

impl MulticolorAssignment {
    pub fn new(n: u32, k: u32, phases: u32) -> Self {
        MulticolorAssignment {
            k,
            phases,
            colors: vec![BTreeMap::new(); n as usize],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn phases(&self) -> u32 {
        self.phases
    }

    pub fn n(&self) -> u32 {
        self.colors.len() as u32
    }

    pub(crate) fn set_phases(&mut self, phases: u32) {
        self.phases = phases;
    }

    /// Gives `v` color `color` of palette `phase`. Fails if `v` already holds
    /// a color of that phase, or if the pair lies outside the declared palettes.
    pub fn assign(&mut self, v: Vertex, phase: u32, color: Color) -> Result<()> {
        if v == 0 || v > self.n() {
            return Err(Error::InvalidAssignment(format!("vertex {v} outside [1, {}]", self.n())));
        }
        if phase == 0 || phase > self.phases {
            return Err(Error::InvalidAssignment(format!(
                "phase {phase} outside [1, {}]",
                self.phases
            )));
        }
        if color == 0 || color > self.k {
            return Err(Error::InvalidAssignment(format!(
                "color {color} outside [1, {}]",
                self.k
            )));
        }
        let held = &mut self.colors[v as usize - 1];
        if let Some(prev) = held.get(&phase) {
            return Err(Error::InvalidAssignment(format!(
                "vertex {v} already holds color {prev} in phase {phase}"
            )));
        }
        held.insert(phase, color);
        Ok(())
    }

    /// `(phase, color)` pairs held by `v`, ordered by phase.
    pub fn pairs(&self, v: Vertex) -> impl Iterator<Item = (u32, Color)> + '_ {
        self.colors[v as usize - 1].iter().map(|(&p, &c)| (p, c))
    }

    pub fn holds(&self, v: Vertex, phase: u32, color: Color) -> bool {
        self.colors[v as usize - 1].get(&phase) == Some(&color)
    }

    /// Number of distinct `(phase, color)` pairs in use.
    pub fn colors_used(&self) -> usize {
        let mut all: Vec<(u32, Color)> = self
            .colors
            .iter()
            .flat_map(|m| m.iter().map(|(&p, &c)| (p, c)))
            .collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    /// Integer label of a `(phase, color)` pair: `k·(phase − 1) + color`.
    pub fn flatten(&self, phase: u32, color: Color) -> u32 {
        self.k * (phase - 1) + color
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coloring(k: u32, colors: &[Option<u32>]) -> PartialColoring {
        PartialColoring::new(k, colors.to_vec()).unwrap()
    }

    /// Happiness straight from the definition, quantifying over all pairs.
    fn happy_by_definition(edge: &[Vertex], f: &PartialColoring) -> bool {
        edge.iter().any(|&v| {
            f.get(v).is_some() && !edge.iter().any(|&u| u != v && f.get(u) == f.get(v))
        })
    }

    #[test]
    fn two_distinct_colors_make_edge_happy() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(happy_edges(&h, &coloring(2, &[Some(1), Some(2)])).unwrap(), vec![0]);
    }

    #[test]
    fn shared_color_is_not_happy() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        assert!(happy_edges(&h, &coloring(1, &[Some(1), Some(1)])).unwrap().is_empty());
    }

    #[test]
    fn uncolored_partner_does_not_spoil_happiness() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let f = coloring(1, &[Some(1), None]);
        assert!(happy_by_definition(h.edge(0), &f));
        assert_eq!(happy_edges(&h, &f).unwrap(), vec![0]);
    }

    #[test]
    fn all_uncolored_edge_is_never_happy() {
        let h = Hypergraph::new(3, vec![vec![1, 2, 3], vec![2]]).unwrap();
        assert!(happy_edges(&h, &PartialColoring::uncolored(3, 2)).unwrap().is_empty());
    }

    #[test]
    fn coloring_size_mismatch_is_rejected() {
        let h = Hypergraph::new(3, vec![vec![1, 2, 3]]).unwrap();
        let f = coloring(1, &[Some(1), None]);
        assert!(matches!(happy_edges(&h, &f), Err(Error::InvalidColoring(_))));
        assert!(matches!(is_conflict_free(&h, &f), Err(Error::InvalidColoring(_))));
    }

    #[test]
    fn conflict_free_examples() {
        let empty = Hypergraph::new(3, vec![]).unwrap();
        assert!(is_conflict_free(&empty, &PartialColoring::uncolored(3, 1)).unwrap());

        let h = Hypergraph::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert!(is_conflict_free(&h, &coloring(2, &[Some(1), Some(2), Some(2)])).unwrap());

        let h = Hypergraph::new(3, vec![vec![1, 2], vec![2, 3]]).unwrap();
        let f = coloring(1, &[Some(1), Some(1), Some(1)]);
        for e in h.edges() {
            assert!(!happy_by_definition(e, &f));
        }
        assert!(!is_conflict_free(&h, &f).unwrap());
    }

    #[test]
    fn almost_uniform_examples() {
        // brute-force scan over every candidate k up to the largest edge
        fn scan(sizes: &[usize], eps: f64) -> Option<usize> {
            let max = *sizes.iter().max().unwrap();
            (1..=max).rev().find(|&k| {
                sizes.iter().all(|&s| k <= s && (s as f64) <= (1.0 + eps) * k as f64 + 1e-9)
            })
        }
        let make = |sizes: &[usize]| {
            let n = *sizes.iter().max().unwrap() as u32;
            Hypergraph::new(n, sizes.iter().map(|&s| (1..=s as u32).collect()).collect()).unwrap()
        };

        assert_eq!(scan(&[4, 5], 0.25), Some(4));
        assert_eq!(is_almost_uniform(&make(&[4, 5]), 0.25), Some(4));
        assert_eq!(scan(&[2, 4], 0.5), None);
        assert_eq!(is_almost_uniform(&make(&[2, 4]), 0.5), None);
        for eps in [0.01, 0.5, 1.0] {
            assert_eq!(scan(&[3, 3, 3], eps), Some(3));
            assert_eq!(is_almost_uniform(&make(&[3, 3, 3]), eps), Some(3));
        }
        for sizes in [&[1, 2][..], &[5, 6, 7], &[2, 3, 3], &[6, 9], &[4]] {
            for eps in [0.1, 0.25, 0.5, 0.75, 1.0] {
                assert_eq!(is_almost_uniform(&make(sizes), eps), scan(sizes, eps), "{sizes:?} {eps}");
            }
        }
        assert_eq!(is_almost_uniform(&Hypergraph::new(2, vec![]).unwrap(), 0.5), Some(1));
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(Hypergraph::new(2, vec![vec![]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![1, 3]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![2, 2]]).is_err());
        // duplicate edges are fine
        assert!(Hypergraph::new(2, vec![vec![1, 2], vec![2, 1]]).is_ok());
    }

    #[test]
    fn multicolor_assign_rules() {
        let mut a = MulticolorAssignment::new(2, 3, 2);
        a.assign(1, 1, 3).unwrap();
        a.assign(1, 2, 1).unwrap();
        assert!(matches!(a.assign(1, 1, 2), Err(Error::InvalidAssignment(_))));
        assert!(a.assign(2, 3, 1).is_err());
        assert!(a.assign(2, 1, 4).is_err());
        assert_eq!(a.colors_used(), 2);
        assert_eq!(a.flatten(2, 1), 4);
        assert_eq!(a.pairs(1).collect::<Vec<_>>(), vec![(1, 3), (2, 1)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (Hypergraph, PartialColoring)> {
            (1u32..8, 1u32..4).prop_flat_map(|(n, k)| {
                let edge = proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=n as usize);
                let edges = proptest::collection::vec(edge, 0..6);
                let colors = proptest::collection::vec(proptest::option::of(1..=k), n as usize);
                (edges, colors).prop_map(move |(edges, colors)| {
                    (
                        Hypergraph::new(n, edges).unwrap(),
                        PartialColoring::new(k, colors).unwrap(),
                    )
                })
            })
        }

        proptest! {
            #[test]
            fn matches_definition((h, f) in instance()) {
                let fast = happy_edges(&h, &f).unwrap();
                let slow: Vec<usize> = (0..h.m()).filter(|&e| happy_by_definition(h.edge(e), &f)).collect();
                prop_assert_eq!(fast, slow);
            }

            #[test]
            fn deleting_edges_keeps_status((h, f) in instance(), mask in any::<u8>()) {
                let happy = happy_edges(&h, &f).unwrap();
                let keep: Vec<usize> = (0..h.m()).filter(|e| mask >> e & 1 == 1).collect();
                let sub = h.restrict(&keep);
                let sub_happy = happy_edges(&sub, &f).unwrap();
                for (i, &e) in keep.iter().enumerate() {
                    prop_assert_eq!(sub_happy.contains(&i), happy.contains(&e));
                }
            }
        }
    }
}
