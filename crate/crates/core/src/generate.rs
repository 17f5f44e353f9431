//! Seeded instance generators.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    max_edge_size, unique_color_witnesses, Hypergraph, PartialColoring, Vertex,
};

/// Attempts per edge before the generator gives up.
pub const EDGE_RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: u32,
    pub m: usize,
    pub k: u32,
    pub eps: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.k == 0 {
            return Err(Error::InvalidParameter("n, m and k must all be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidParameter(format!("eps = {} outside (0, 1]", self.eps)));
        }
        Ok(())
    }
}

/// Generates an almost-uniform hypergraph together with a total conflict-free
/// `k`-coloring of it.
///
/// Every vertex gets a uniform color in `1..=k`; then each edge draws a size
/// uniform in `[k, ⌊(1+ε)k⌋]` (capped at `n`) and a uniform vertex subset of
/// that size, redrawing both until some vertex of the edge has a unique color.
pub fn generate_planted(spec: &GeneratorSpec) -> Result<(Hypergraph, PartialColoring)> {
    spec.validate()?;
    if spec.n < spec.k {
        return Err(Error::Generation(format!(
            "n = {} is smaller than the base edge size k = {}",
            spec.n, spec.k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let colors = (0..spec.n).map(|_| Some(rng.gen_range(1..=spec.k))).collect();
    let f = PartialColoring::new(spec.k, colors)?;

    let lo = spec.k as usize;
    let hi = max_edge_size(lo, spec.eps).min(spec.n as usize);
    let mut edges = Vec::with_capacity(spec.m);
    for i in 0..spec.m {
        let edge = (0..EDGE_RETRY_BUDGET)
            .map(|_| {
                let size = rng.gen_range(lo..=hi);
                sample_edge(&mut rng, spec.n, size)
            })
            .find(|edge| !unique_color_witnesses(edge, &f).is_empty())
            .ok_or_else(|| {
                Error::Generation(format!(
                    "edge {} found no uniquely colored vertex in {EDGE_RETRY_BUDGET} attempts",
                    i + 1
                ))
            })?;
        edges.push(edge);
    }
    Ok((Hypergraph::new(spec.n, edges)?, f))
}

/// A hypergraph with `m` edges whose sizes are uniform in `1..=max_size`
/// (capped at `n`). No coloring guarantee.
pub fn random_hypergraph(n: u32, m: usize, max_size: usize, seed: u64) -> Result<Hypergraph> {
    if n == 0 && m > 0 {
        return Err(Error::InvalidParameter("edges need at least one vertex".into()));
    }
    if max_size == 0 && m > 0 {
        return Err(Error::InvalidParameter("max_size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = max_size.min(n as usize);
    let edges = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=hi);
            sample_edge(&mut rng, n, size)
        })
        .collect();
    Hypergraph::new(n, edges)
}

fn sample_edge(rng: &mut ChaCha8Rng, n: u32, size: usize) -> Vec<Vertex> {
    let mut edge: Vec<Vertex> = index::sample(rng, n as usize, size)
        .into_iter()
        .map(|i| i as Vertex + 1)
        .collect();
    edge.sort_unstable();
    edge
}
