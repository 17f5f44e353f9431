//! Maximum independent set solvers behind one trait, the verifiers every
//! solver output is checked with, and empirical approximation-ratio reports.

mod exact;
mod greedy;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, IndependentSet};

pub use exact::{ExactSolver, DEFAULT_CAP};
pub use greedy::GreedySolver;

/// Work counters reported alongside a solution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Search-tree nodes visited (branch-and-bound) or vertices picked (greedy).
    pub nodes: u64,
}

/// A MaxIS solver. `guarantee` is the approximation factor `λ` the solver
/// promises, i.e. `|output| ≥ α(G)/λ`, when it promises one.
pub trait MaxIsSolver: Send + Sync {
    fn name(&self) -> &str;

    fn guarantee(&self) -> Option<f64>;

    /// Seed driving any randomized choices; `None` for fully deterministic solvers.
    fn seed(&self) -> Option<u64> {
        None
    }

    fn solve_with_stats(&self, g: &Graph) -> Result<(IndependentSet, SolveStats)>;

    fn solve(&self, g: &Graph) -> Result<IndependentSet> {
        self.solve_with_stats(g).map(|(s, _)| s)
    }
}

/// Looks a solver up by its command-line name: `exact` or `greedy`.
pub fn solver_by_name(name: &str, cap: usize, seed: Option<u64>) -> Result<Box<dyn MaxIsSolver>> {
    match name {
        "exact" => Ok(Box::new(ExactSolver::with_cap(cap))),
        "greedy" => Ok(Box::new(GreedySolver { seed })),
        other => Err(Error::InvalidParameter(format!(
            "unknown solver '{other}' (expected 'exact' or 'greedy')"
        ))),
    }
}

fn check_members(g: &Graph, s: &[usize]) -> Result<()> {
    match s.iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(Error::InvalidSet(format!(
            "vertex {v} is not in a graph with {} vertices",
            g.n()
        ))),
        None => Ok(()),
    }
}

/// True iff no two members of `s` are adjacent.
pub fn verify_independent(g: &Graph, s: &[usize]) -> Result<bool> {
    check_members(g, s)?;
    Ok(s.iter()
        .enumerate()
        .all(|(i, &u)| s[i + 1..].iter().all(|&v| !g.adjacent(u, v))))
}

/// True iff `s` is independent and every other vertex has a neighbour in it.
pub fn verify_maximal(g: &Graph, s: &[usize]) -> Result<bool> {
    if !verify_independent(g, s)? {
        return Ok(false);
    }
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    Ok((0..g.n()).all(|v| inside[v] || g.neighbors(v).iter().any(|&u| inside[u])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub instance: String,
    pub solver: String,
    pub vertices: usize,
    pub edges: usize,
    pub size: usize,
    /// Independence number, when the exact oracle ran.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<usize>,
    /// `α / |output|`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
    pub nodes: u64,
}

/// Empirical approximation ratio `α/|s|`. An empty output on an empty graph
/// counts as optimal.
pub fn approximation_ratio(alpha: usize, size: usize) -> f64 {
    match (alpha, size) {
        (0, _) => 1.0,
        (_, 0) => f64::INFINITY,
        (a, s) => a as f64 / s as f64,
    }
}

/// Runs `solver` on `g` and compares its output with the exact oracle.
pub fn measure_lambda(
    instance: &str,
    g: &Graph,
    solver: &dyn MaxIsSolver,
    oracle: &ExactSolver,
) -> Result<SolverReport> {
    let alpha = oracle.alpha(g)?;
    let start = Instant::now();
    let (s, stats) = solver.solve_with_stats(g)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if !verify_independent(g, s.members())? {
        return Err(Error::ContractViolation(format!(
            "{} returned a dependent set",
            solver.name()
        )));
    }
    Ok(SolverReport {
        instance: instance.to_string(),
        solver: solver.name().to_string(),
        vertices: g.n(),
        edges: g.edge_count(),
        size: s.len(),
        alpha: Some(alpha),
        ratio: Some(approximation_ratio(alpha, s.len())),
        elapsed_ms: Some(elapsed),
        nodes: stats.nodes,
    })
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::graph::Graph;

    pub fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Independence number by checking every subset, via the recurrence
    /// `indep[S] = indep[S - low] && N(low) ∩ S = ∅`.
    pub fn brute_force_alpha(g: &Graph) -> usize {
        let n = g.n();
        assert!(n <= 22);
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        let mut indep = vec![false; 1 << n];
        indep[0] = true;
        let mut best = 0;
        for s in 1usize..1 << n {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            indep[s] = indep[rest] && adj[low] & rest as u32 == 0;
            if indep[s] {
                best = best.max(s.count_ones() as usize);
            }
        }
        best
    }
}
