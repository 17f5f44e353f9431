//! Conflict-free multicoloring through repeated MaxIS approximation.
//!
//! Phase `i` builds the conflict graph of the edges that are still unhappy,
//! asks the configured solver for an independent set, turns it into a
//! partial coloring that uses palette `i`, and drops every edge that coloring
//! makes happy. With a solver that is a `λ`-approximation on an instance that
//! admits a conflict-free `k`-coloring, each phase keeps at most a
//! `(1 − 1/λ)` fraction of the edges, so `⌈λ·ln m⌉ + 1` phases suffice.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::conflict::{build_conflict_graph, ConflictGraph};
use crate::error::{Error, Result};
use crate::graph::IndependentSet;
use crate::hypergraph::{happy_edges, Hypergraph, MulticolorAssignment, PartialColoring};
use crate::solvers::{verify_independent, MaxIsSolver};

/// Number of phases `⌈λ·ln m⌉ + 1` for `m` edges; zero when there are no
/// edges.
pub fn phase_count(m: usize, lambda: f64) -> usize {
    if m == 0 {
        return 0;
    }
    (lambda * (m as f64).ln()).ceil() as usize + 1
}

pub struct ReductionConfig<'s> {
    /// Palette size per phase.
    pub k: u32,
    /// Approximation factor the solver is promised to meet.
    pub lambda: f64,
    pub solver: &'s dyn MaxIsSolver,
    /// Replaces the computed phase budget when set.
    pub max_phases: Option<usize>,
    /// Remove edges that are happy under all palettes so far, not just the
    /// current one.
    pub aggressive_removal: bool,
}

impl<'s> ReductionConfig<'s> {
    pub fn new(k: u32, lambda: f64, solver: &'s dyn MaxIsSolver) -> Self {
        ReductionConfig {
            k,
            lambda,
            solver,
            max_phases: None,
            aggressive_removal: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(self.lambda >= 1.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {} must be a finite number ≥ 1",
                self.lambda
            )));
        }
        Ok(())
    }

    /// The phase budget for an instance with `m` edges.
    pub fn budget(&self, m: usize) -> usize {
        self.max_phases.unwrap_or_else(|| phase_count(m, self.lambda))
    }
}

/// Input to a phase: its 1-based index and the edges still unhappy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseState {
    pub index: u32,
    pub surviving: Vec<usize>,
}

impl PhaseState {
    pub fn initial(h: &Hypergraph) -> Self {
        PhaseState {
            index: 1,
            surviving: (0..h.m()).collect(),
        }
    }
}

/// Everything one phase produced.
#[derive(Debug, Clone)]
pub struct PhaseResult {
    pub index: u32,
    /// Edge indices of `h` the phase started with.
    pub surviving: Vec<usize>,
    /// Conflict graph over the surviving edges; its edge indices refer to
    /// positions in `surviving`.
    pub conflict_graph: ConflictGraph,
    pub independent_set: IndependentSet,
    /// Coloring induced by the independent set, palette of this phase only.
    pub coloring: PartialColoring,
    /// Edge indices of `h` made happy and removed, ascending.
    pub removed: Vec<usize>,
    pub next: PhaseState,
    pub elapsed_ms: f64,
}

/// Runs phase `state.index`: colors vertices in `assignment` with that phase's
/// palette and reports which edges leave.
pub fn run_phase(
    h: &Hypergraph,
    state: &PhaseState,
    cfg: &ReductionConfig,
    assignment: &mut MulticolorAssignment,
) -> Result<PhaseResult> {
    if state.surviving.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "phase {} has no surviving edges",
            state.index
        )));
    }
    let start = Instant::now();
    let sub = h.restrict(&state.surviving);
    let cg = build_conflict_graph(&sub, cfg.k)?;
    let set = cfg.solver.solve(cg.graph())?;
    let independent = verify_independent(cg.graph(), set.members()).map_err(|e| {
        Error::ContractViolation(format!("{} output: {e}", cfg.solver.name()))
    })?;
    if !independent {
        return Err(Error::ContractViolation(format!(
            "{} returned a set that is not independent",
            cfg.solver.name()
        )));
    }
    let coloring = cg.independent_set_to_coloring(&set)?;
    for v in h.vertices() {
        if let Some(c) = coloring.get(v) {
            assignment.assign(v, state.index, c)?;
        }
    }

    let happy_local = if cfg.aggressive_removal {
        (0..sub.m())
            .filter(|&e| edge_is_multi_happy(sub.edge(e), assignment))
            .collect()
    } else {
        happy_edges(&sub, &coloring)?
    };
    if happy_local.len() < set.len() {
        return Err(Error::ContractViolation(format!(
            "phase {}: {} edges happy for an independent set of size {}",
            state.index,
            happy_local.len(),
            set.len()
        )));
    }
    let removed: Vec<usize> = happy_local.iter().map(|&e| state.surviving[e]).collect();
    let mut keep = vec![true; sub.m()];
    for &e in &happy_local {
        keep[e] = false;
    }
    let next = PhaseState {
        index: state.index + 1,
        surviving: state
            .surviving
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect(),
    };

    Ok(PhaseResult {
        index: state.index,
        surviving: state.surviving.clone(),
        conflict_graph: cg,
        independent_set: set,
        coloring,
        removed,
        next,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One line of the phase log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: u32,
    /// `|E_i|`
    pub edges: usize,
    pub conflict_vertices: usize,
    pub conflict_edges: usize,
    pub solver: String,
    pub independent_set: usize,
    pub edges_removed: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl PhaseRecord {
    fn of(result: &PhaseResult, solver: &str) -> Self {
        PhaseRecord {
            phase: result.index,
            edges: result.surviving.len(),
            conflict_vertices: result.conflict_graph.vertex_count(),
            conflict_edges: result.conflict_graph.graph().edge_count(),
            solver: solver.to_string(),
            independent_set: result.independent_set.len(),
            edges_removed: result.removed.len(),
            elapsed_ms: Some(result.elapsed_ms),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Every edge is happy.
    Colored,
    /// Edges were left after the phase budget ran out: the solver missed its
    /// promised factor or the instance has no conflict-free `k`-coloring.
    PromiseViolation { surviving: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct ReductionRun {
    pub assignment: MulticolorAssignment,
    pub log: Vec<PhaseRecord>,
    /// Phase budget the run was allowed.
    pub budget: usize,
    pub outcome: Outcome,
}

impl ReductionRun {
    pub fn is_colored(&self) -> bool {
        self.outcome == Outcome::Colored
    }

    /// True iff every phase kept at most a `(1 − 1/λ)` fraction of its edges.
    pub fn decay_holds(&self, lambda: f64) -> bool {
        self.log.iter().all(|r| {
            let after = (r.edges - r.edges_removed) as f64;
            after <= (1.0 - 1.0 / lambda) * r.edges as f64 + 1e-9
        })
    }
}

pub fn conflict_free_multicolor(h: &Hypergraph, cfg: &ReductionConfig) -> Result<ReductionRun> {
    conflict_free_multicolor_observed(h, cfg, |_| {})
}

/// Like [`conflict_free_multicolor`], handing each finished phase to
/// `observe` before the next one starts.
pub fn conflict_free_multicolor_observed(
    h: &Hypergraph,
    cfg: &ReductionConfig,
    mut observe: impl FnMut(&PhaseResult),
) -> Result<ReductionRun> {
    cfg.validate()?;
    let budget = cfg.budget(h.m());
    let mut assignment = MulticolorAssignment::new(h.n(), cfg.k, budget as u32);
    let mut state = PhaseState::initial(h);
    let mut log = Vec::new();
    while !state.surviving.is_empty() && (state.index as usize) <= budget {
        let result = run_phase(h, &state, cfg, &mut assignment)?;
        observe(&result);
        log.push(PhaseRecord::of(&result, cfg.solver.name()));
        state = result.next;
    }
    assignment.set_phases(log.len() as u32);
    let outcome = if state.surviving.is_empty() {
        Outcome::Colored
    } else {
        Outcome::PromiseViolation {
            surviving: state.surviving,
        }
    };
    Ok(ReductionRun {
        assignment,
        log,
        budget,
        outcome,
    })
}

fn edge_is_multi_happy(edge: &[u32], a: &MulticolorAssignment) -> bool {
    edge.iter().any(|&v| {
        a.pairs(v)
            .any(|(p, c)| edge.iter().all(|&u| u == v || !a.holds(u, p, c)))
    })
}

/// True iff every edge has a vertex holding a `(phase, color)` pair that no
/// other vertex of the edge holds.
pub fn verify_multicoloring(h: &Hypergraph, a: &MulticolorAssignment) -> Result<bool> {
    if a.n() != h.n() {
        return Err(Error::InvalidAssignment(format!(
            "assignment covers {} vertices, hypergraph has {}",
            a.n(),
            h.n()
        )));
    }
    for v in h.vertices() {
        if let Some((p, c)) = a
            .pairs(v)
            .find(|&(p, c)| p == 0 || p > a.phases() || c == 0 || c > a.k())
        {
            return Err(Error::InvalidAssignment(format!(
                "vertex {v} holds ({p}, {c}) outside the phase palettes"
            )));
        }
    }
    Ok(h.edges().iter().all(|e| edge_is_multi_happy(e, a)))
}
