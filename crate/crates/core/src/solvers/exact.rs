use crate::error::{Error, Result};
use crate::graph::{Bitset, Graph, IndependentSet};

use super::{MaxIsSolver, SolveStats};

/// Default vertex cap of the exact solver.
pub const DEFAULT_CAP: usize = 64;

/// Branch-and-bound maximum independent set.
///
/// Branches on a maximum-degree candidate (take it, or drop it) and prunes
/// with a greedy clique cover of the remaining candidates. The returned set
/// is the lexicographically smallest maximum independent set: once `α` is
/// known, vertices are fixed in index order, keeping each one whenever the
/// rest can still be completed to size `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    cap: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver { cap: DEFAULT_CAP }
    }
}

impl ExactSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(cap: usize) -> Self {
        ExactSolver { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_cap(&self, g: &Graph) -> Result<()> {
        if g.n() > self.cap {
            return Err(Error::SizeLimit {
                vertices: g.n(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// The independence number `α(g)`.
    pub fn alpha(&self, g: &Graph) -> Result<usize> {
        self.check_cap(g)?;
        let mut search = Search::new(g, 0, usize::MAX);
        search.run(Bitset::full(g.n()), 0);
        Ok(search.best)
    }
}

impl MaxIsSolver for ExactSolver {
    fn name(&self) -> &str {
        "exact"
    }

    fn guarantee(&self) -> Option<f64> {
        Some(1.0)
    }

    fn solve_with_stats(&self, g: &Graph) -> Result<(IndependentSet, SolveStats)> {
        self.check_cap(g)?;
        let mut search = Search::new(g, 0, usize::MAX);
        search.run(Bitset::full(g.n()), 0);
        let alpha = search.best;
        let mut nodes = search.nodes;

        let mut chosen = Vec::with_capacity(alpha);
        let mut candidates = Bitset::full(g.n());
        let mut need = alpha;
        for v in 0..g.n() {
            if need == 0 {
                break;
            }
            if !candidates.contains(v) {
                continue;
            }
            let mut rest = candidates.clone();
            rest.difference_with(g.row(v));
            rest.remove(v);
            let completes = need == 1 || {
                let mut probe = Search::new(g, need - 2, need - 1);
                let found = probe.run(rest.clone(), 0);
                nodes += probe.nodes;
                found
            };
            if completes {
                chosen.push(v);
                candidates = rest;
                need -= 1;
            } else {
                candidates.remove(v);
            }
        }
        debug_assert_eq!(need, 0);
        Ok((IndependentSet::verified(g, chosen)?, SolveStats { nodes }))
    }
}

/// Depth-first search that stops as soon as a set of size `target` is seen.
/// `best` starts at the size that must be beaten.
struct Search<'a> {
    g: &'a Graph,
    best: usize,
    target: usize,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, best: usize, target: usize) -> Self {
        Search {
            g,
            best,
            target,
            nodes: 0,
        }
    }

    /// Returns true once a set of size at least `target` has been found.
    fn run(&mut self, mut p: Bitset, size: usize) -> bool {
        self.nodes += 1;
        if size + self.clique_cover(&p) <= self.best {
            return false;
        }
        let pick = p
            .iter()
            .map(|v| (self.g.row(v).intersection_count(&p), v))
            .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
        let Some((degree, v)) = pick else {
            return self.record(size);
        };
        if degree == 0 {
            return self.record(size + p.count());
        }

        let mut with = p.clone();
        with.difference_with(self.g.row(v));
        with.remove(v);
        if self.run(with, size + 1) {
            return true;
        }
        p.remove(v);
        self.run(p, size)
    }

    fn record(&mut self, size: usize) -> bool {
        if size > self.best {
            self.best = size;
        }
        self.best >= self.target
    }

    /// Number of cliques in a greedy clique partition of `p`; an upper bound
    /// on the independence number of the subgraph induced by `p`.
    fn clique_cover(&self, p: &Bitset) -> usize {
        let mut rest = p.clone();
        let mut cliques = 0;
        while let Some(v) = rest.first() {
            cliques += 1;
            rest.remove(v);
            let mut extend = rest.clone();
            extend.intersect_with(self.g.row(v));
            while let Some(w) = extend.first() {
                rest.remove(w);
                extend.remove(w);
                extend.intersect_with(self.g.row(w));
            }
        }
        cliques
    }
}
