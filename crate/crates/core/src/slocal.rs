//! Sequential-local (SLOCAL) execution.
//!
//! Vertices are processed one at a time in a given order. The rule deciding a
//! vertex's state only ever receives a [`View`]: a snapshot of the ball of
//! radius `r` around it, holding the topology inside the ball and the states
//! already written by processed vertices. Nothing else is reachable from the
//! rule, so locality holds by construction. Each state is written exactly
//! once.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct SlocalSchedule<'g> {
    graph: &'g Graph,
    order: Vec<usize>,
    radius: usize,
}

impl<'g> SlocalSchedule<'g> {
    /// `order` must be a permutation of the graph's vertices.
    pub fn new(graph: &'g Graph, order: Vec<usize>, radius: usize) -> Result<Self> {
        let mut seen = vec![false; graph.n()];
        for &v in &order {
            if v >= graph.n() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!(
                    "processing order is not a permutation of 0..{}",
                    graph.n()
                )));
            }
        }
        if order.len() != graph.n() {
            return Err(Error::InvalidParameter(format!(
                "processing order lists {} of {} vertices",
                order.len(),
                graph.n()
            )));
        }
        Ok(SlocalSchedule { graph, order, radius })
    }

    pub fn identity(graph: &'g Graph, radius: usize) -> Self {
        SlocalSchedule {
            graph,
            order: (0..graph.n()).collect(),
            radius,
        }
    }

    pub fn random(graph: &'g Graph, radius: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..graph.n()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        SlocalSchedule { graph, order, radius }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

/// What a vertex sees when it is processed.
#[derive(Debug, Clone)]
pub struct View<S> {
    center: usize,
    /// Ball members, sorted, with their distance from the center.
    members: Vec<(usize, usize)>,
    /// Adjacency restricted to the ball, parallel to `members`.
    adjacency: Vec<Vec<usize>>,
    /// States of processed ball members, parallel to `members`.
    states: Vec<Option<S>>,
}

impl<S> View<S> {
    pub fn center(&self) -> usize {
        self.center
    }

    fn slot(&self, v: usize) -> Option<usize> {
        self.members.binary_search_by_key(&v, |&(u, _)| u).ok()
    }

    /// Vertices in the ball, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&(v, _)| v)
    }

    pub fn distance(&self, v: usize) -> Option<usize> {
        self.slot(v).map(|i| self.members[i].1)
    }

    /// Neighbours of `v` that lie in the ball; empty for vertices outside it.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        match self.slot(v) {
            Some(i) => &self.adjacency[i],
            None => &[],
        }
    }

    /// State of `v`, if `v` is in the ball and already processed.
    pub fn state(&self, v: usize) -> Option<&S> {
        self.slot(v).and_then(|i| self.states[i].as_ref())
    }
}

/// A rule computing a vertex's state from its view.
pub trait LocalRule {
    type State: Clone;

    /// Smallest view radius the rule is correct with.
    fn radius(&self) -> usize;

    fn decide(&self, view: &View<Self::State>) -> Self::State;
}

/// Runs `rule` over `schedule`, returning the state of every vertex.
pub fn run_slocal<R: LocalRule>(schedule: &SlocalSchedule, rule: &R) -> Result<Vec<R::State>> {
    if schedule.radius < rule.radius() {
        return Err(Error::InvalidParameter(format!(
            "rule needs radius {}, schedule grants {}",
            rule.radius(),
            schedule.radius
        )));
    }
    let g = schedule.graph;
    let mut states: Vec<Option<R::State>> = vec![None; g.n()];
    for &v in &schedule.order {
        let view = snapshot(g, v, schedule.radius, &states);
        let decided = rule.decide(&view);
        debug_assert!(states[v].is_none());
        states[v] = Some(decided);
    }
    Ok(states.into_iter().map(|s| s.expect("every vertex processed")).collect())
}

fn snapshot<S: Clone>(g: &Graph, center: usize, radius: usize, states: &[Option<S>]) -> View<S> {
    let mut members = vec![(center, 0)];
    let mut queue = VecDeque::from([(center, 0)]);
    let mut found = HashSet::from([center]);
    while let Some((v, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if found.insert(u) {
                members.push((u, d + 1));
                queue.push_back((u, d + 1));
            }
        }
    }
    members.sort_unstable();
    let inside = |u: &usize| members.binary_search_by_key(u, |&(w, _)| w).is_ok();
    let adjacency = members
        .iter()
        .map(|&(v, _)| g.neighbors(v).iter().copied().filter(|u| inside(u)).collect())
        .collect();
    let states = members.iter().map(|&(v, _)| states[v].clone()).collect();
    View {
        center,
        members,
        adjacency,
        states,
    }
}

/// Every vertex takes the same state; needs no neighbourhood at all.
#[derive(Debug, Clone)]
pub struct ConstantRule<S>(pub S);

impl<S: Clone> LocalRule for ConstantRule<S> {
    type State = S;

    fn radius(&self) -> usize {
        0
    }

    fn decide(&self, _view: &View<S>) -> S {
        self.0.clone()
    }
}

/// Locality-1 maximal independent set: join unless a processed neighbour
/// already joined.
#[derive(Debug, Clone, Copy, Default)]
pub struct MisRule;

impl LocalRule for MisRule {
    type State = bool;

    fn radius(&self) -> usize {
        1
    }

    fn decide(&self, view: &View<bool>) -> bool {
        !view
            .neighbors(view.center())
            .iter()
            .any(|&u| view.state(u) == Some(&true))
    }
}

/// Members of the independent set the MIS rule builds under `schedule`.
pub fn slocal_mis(schedule: &SlocalSchedule) -> Result<Vec<usize>> {
    let joined = run_slocal(schedule, &MisRule)?;
    Ok(joined
        .into_iter()
        .enumerate()
        .filter(|&(_, j)| j)
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{verify_independent, verify_maximal};
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn constant_rule_radius_zero() {
        let g = path3();
        let out = run_slocal(&SlocalSchedule::identity(&g, 0), &ConstantRule(7u8)).unwrap();
        assert_eq!(out, vec![7, 7, 7]);
    }

    #[test]
    fn mis_on_path() {
        let g = path3();
        let a = SlocalSchedule::new(&g, vec![0, 1, 2], 1).unwrap();
        assert_eq!(slocal_mis(&a).unwrap(), vec![0, 2]);
        let b = SlocalSchedule::new(&g, vec![1, 0, 2], 1).unwrap();
        assert_eq!(slocal_mis(&b).unwrap(), vec![1]);
    }

    #[test]
    fn single_and_isolated_vertices_join() {
        let one = Graph::empty(1);
        assert_eq!(slocal_mis(&SlocalSchedule::identity(&one, 1)).unwrap(), vec![0]);
        let iso = Graph::empty(5);
        assert_eq!(slocal_mis(&SlocalSchedule::random(&iso, 1, 3)).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn schedule_validation() {
        let g = path3();
        assert!(SlocalSchedule::new(&g, vec![0, 1], 1).is_err());
        assert!(SlocalSchedule::new(&g, vec![0, 1, 1], 1).is_err());
        assert!(SlocalSchedule::new(&g, vec![0, 1, 3], 1).is_err());
        let too_small = SlocalSchedule::identity(&g, 0);
        assert!(matches!(run_slocal(&too_small, &MisRule), Err(Error::InvalidParameter(_))));
    }

    /// Records the view each vertex received.
    struct Spy;

    impl LocalRule for Spy {
        type State = (Vec<usize>, Vec<usize>);

        fn radius(&self) -> usize {
            0
        }

        fn decide(&self, view: &View<Self::State>) -> Self::State {
            let processed = view.vertices().filter(|&v| view.state(v).is_some()).collect();
            (view.vertices().collect(), processed)
        }
    }

    #[test]
    fn views_are_bounded_balls() {
        // path 0-1-2-3-4
        let g = Graph::from_edges(5, (0..4).map(|v| (v, v + 1))).unwrap();
        let out = run_slocal(&SlocalSchedule::new(&g, vec![2, 0, 4, 1, 3], 1).unwrap(), &Spy).unwrap();
        assert_eq!(out[2], (vec![1, 2, 3], vec![]));
        assert_eq!(out[1], (vec![0, 1, 2], vec![0, 2]));
        let wide = run_slocal(&SlocalSchedule::identity(&g, 2), &Spy).unwrap();
        assert_eq!(wide[0].0, vec![0, 1, 2]);
        assert_eq!(wide[4].1, vec![2, 3]);
    }

    fn graph_and_order() -> impl Strategy<Value = (Graph, Vec<usize>, Vec<usize>)> {
        (1usize..20).prop_flat_map(|n| {
            let edges = proptest::collection::vec((0..n, 0..n), 0..3 * n);
            let order = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let relabel = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (edges, order, relabel).prop_map(move |(edges, order, relabel)| {
                let edges = edges.into_iter().filter(|(u, v)| u != v);
                (Graph::from_edges(n, edges).unwrap(), order, relabel)
            })
        })
    }

    proptest! {
        #[test]
        fn mis_is_maximal_for_any_order((g, order, _) in graph_and_order()) {
            let s = slocal_mis(&SlocalSchedule::new(&g, order, 1).unwrap()).unwrap();
            prop_assert!(verify_independent(&g, &s).unwrap());
            prop_assert!(verify_maximal(&g, &s).unwrap());
        }

        #[test]
        fn relabeling_commutes((g, order, pi) in graph_and_order()) {
            let h = Graph::from_edges(g.n(), g.edges().map(|(u, v)| (pi[u], pi[v]))).unwrap();
            let h_order: Vec<usize> = order.iter().map(|&v| pi[v]).collect();
            let out_g = run_slocal(&SlocalSchedule::new(&g, order, 1).unwrap(), &MisRule).unwrap();
            let out_h = run_slocal(&SlocalSchedule::new(&h, h_order, 1).unwrap(), &MisRule).unwrap();
            for v in 0..g.n() {
                prop_assert_eq!(out_g[v], out_h[pi[v]]);
            }
        }
    }
}
