//! Conflict-free hypergraph multicoloring through maximum independent set
//! approximation.
//!
//! The pieces, bottom up:
//!
//! * [`hypergraph`]: hypergraphs, partial colorings, multicolorings and
//!   happy edges.
//! * [`conflict`]: the conflict graph `G_k` whose independent sets are
//!   partial conflict-free colorings, with both translations.
//! * [`solvers`]: exact and greedy MaxIS solvers and their verifiers.
//! * [`reduction`]: the phase loop that colors a hypergraph with one fresh
//!   palette per phase.
//! * [`slocal`]: a sequential-local executor with the locality-1 MIS rule.
//! * [`generate`] and [`io`]: seeded instances and file formats.

pub mod conflict;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod reduction;
pub mod slocal;
pub mod solvers;

pub use conflict::{build_conflict_graph, ConflictGraph, Families, Triple};
pub use error::{Error, Result};
pub use generate::{generate_planted, random_hypergraph, GeneratorSpec};
pub use graph::{Graph, IndependentSet};
pub use hypergraph::{
    happy_edges, is_almost_uniform, is_conflict_free, Hypergraph, MulticolorAssignment,
    PartialColoring,
};
pub use reduction::{
    conflict_free_multicolor, phase_count, verify_multicoloring, Outcome, ReductionConfig,
    ReductionRun,
};
pub use solvers::{ExactSolver, GreedySolver, MaxIsSolver, SolverReport};
