use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Graph, IndependentSet};

use super::{MaxIsSolver, SolveStats};

/// Minimum-degree greedy: repeatedly take a vertex of smallest residual
/// degree and delete its closed neighbourhood. Ties go to the smaller vertex
/// index, or to the earlier position in a seeded random permutation when a
/// seed is set. The output is always a maximal independent set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedySolver {
    pub seed: Option<u64>,
}

impl MaxIsSolver for GreedySolver {
    fn name(&self) -> &str {
        "greedy"
    }

    fn guarantee(&self) -> Option<f64> {
        None
    }

    fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn solve_with_stats(&self, g: &Graph) -> Result<(IndependentSet, SolveStats)> {
        let n = g.n();
        let mut rank: Vec<usize> = (0..n).collect();
        if let Some(seed) = self.seed {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for (pos, v) in order.into_iter().enumerate() {
                rank[v] = pos;
            }
        }

        let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut alive = vec![true; n];
        let mut queue: BTreeSet<(usize, usize, usize)> =
            (0..n).map(|v| (degree[v], rank[v], v)).collect();
        let mut chosen = Vec::new();

        while let Some((_, _, v)) = queue.pop_first() {
            chosen.push(v);
            alive[v] = false;
            let removed: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
            for &w in &removed {
                alive[w] = false;
                queue.remove(&(degree[w], rank[w], w));
            }
            for &w in &removed {
                for &x in g.neighbors(w) {
                    if alive[x] {
                        queue.remove(&(degree[x], rank[x], x));
                        degree[x] -= 1;
                        queue.insert((degree[x], rank[x], x));
                    }
                }
            }
        }

        let nodes = chosen.len() as u64;
        Ok((IndependentSet::verified(g, chosen)?, SolveStats { nodes }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testing::*;
    use crate::solvers::verify_maximal;
    use proptest::prelude::*;

    #[test]
    fn edgeless_graph() {
        let s = GreedySolver::default().solve(&Graph::empty(4)).unwrap();
        assert_eq!(s.members(), &[0, 1, 2, 3]);
    }

    #[test]
    fn clique_gives_one_vertex() {
        assert_eq!(GreedySolver::default().solve(&complete(4)).unwrap().len(), 1);
        assert_eq!(GreedySolver { seed: Some(9) }.solve(&complete(4)).unwrap().len(), 1);
    }

    #[test]
    fn star_gives_leaves() {
        let g = star(4);
        let s = GreedySolver::default().solve(&g).unwrap();
        assert_eq!(s.members(), &[1, 2, 3, 4]);
        assert!(verify_maximal(&g, s.members()).unwrap());
    }

    #[test]
    fn seed_only_breaks_ties() {
        // every vertex of a 6-cycle has degree 2, so the seed picks the start
        let cycle = Graph::from_edges(6, (0..6).map(|v| (v, (v + 1) % 6))).unwrap();
        let a = GreedySolver { seed: Some(1) }.solve(&cycle).unwrap();
        let b = GreedySolver { seed: Some(1) }.solve(&cycle).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        // the star never depends on the seed: the centre always has max degree
        for seed in 0..10 {
            let s = GreedySolver { seed: Some(seed) }.solve(&star(5)).unwrap();
            assert_eq!(s.members(), &[1, 2, 3, 4, 5]);
        }
    }

    proptest! {
        #[test]
        fn output_is_maximal(
            n in 0usize..25,
            edges in proptest::collection::vec((0usize..25, 0usize..25), 0..80),
            seed in proptest::option::of(any::<u64>()),
        ) {
            let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let s = GreedySolver { seed }.solve(&g).unwrap();
            prop_assert!(verify_maximal(&g, s.members()).unwrap());
            prop_assert!(s.len() <= brute_force_alpha_capped(&g));
        }
    }

    fn brute_force_alpha_capped(g: &Graph) -> usize {
        if g.n() <= 18 {
            brute_force_alpha(g)
        } else {
            g.n()
        }
    }
}
