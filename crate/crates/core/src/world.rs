//! Live-edge world sampling, Monte-Carlo spread and exact spread.
//!
//! IC: edge `e` is live in round `r` iff `uniform(r, e) < p_e`.
//! LT: node `v` draws `uniform(r, v)` once and picks the in-edge whose
//! prefix-sum interval (over its full in-edge list, in id order) contains
//! the draw; no edge is picked when the draw lands past the total mass or on
//! an inactive edge.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csr::{Csr, Successors};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Model, NodeId, ProbGraph};
use crate::rng::{MasterSeed, RoundSeed};

const NONE: u32 = u32::MAX;

/// Default cap on uncertain edges for [`exact_spread`].
pub const DEFAULT_EXACT_CAP: usize = 25;

/// Live in-edge chosen by `v` under LT in the given round.
pub fn lt_choice(g: &ProbGraph, round: RoundSeed, v: NodeId) -> Option<EdgeId> {
    let draw = round.uniform(v.0 as u64);
    let mut acc = 0.0;
    for &e in g.in_edge_ids(v) {
        acc += g.edge(e).p;
        if draw < acc {
            return g.is_edge_active(e).then_some(e);
        }
    }
    None
}

/// IC liveness of an active edge in the given round.
#[inline]
pub fn ic_live(g: &ProbGraph, round: RoundSeed, e: EdgeId) -> bool {
    round.uniform(e.0 as u64) < g.edge(e).p
}

/// One deterministic live-edge instantiation of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWorld {
    round_seed: RoundSeed,
    live: Vec<EdgeId>,
    adj: Csr,
}

impl SampledWorld {
    /// Builds a world over `n` nodes from explicit live edges. Mostly useful
    /// for tests and for feeding hand-made graphs to the dominator code.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> SampledWorld {
        SampledWorld {
            round_seed: RoundSeed(0),
            live: (0..edges.len() as u32).map(EdgeId).collect(),
            adj: Csr::from_pairs(n, edges),
        }
    }

    pub fn round_seed(&self) -> RoundSeed {
        self.round_seed
    }

    /// Live edges of the parent graph, in id order.
    pub fn live_edges(&self) -> &[EdgeId] {
        &self.live
    }

    pub fn live_edge_count(&self) -> usize {
        self.live.len()
    }

    pub fn adjacency(&self) -> &Csr {
        &self.adj
    }

    /// Live in-degree of every node.
    pub fn in_degrees(&self) -> Vec<u32> {
        self.adj.in_degrees()
    }

    /// Live edges as `(src, dst)` pairs aligned with `live_edges()`.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        let mut pairs = vec![(0, 0); self.live.len()];
        for u in 0..self.adj.node_count() as u32 {
            for (&v, &slot) in self.adj.successors(u).iter().zip(self.adj.slot_indices(u)) {
                pairs[slot as usize] = (u, v);
            }
        }
        pairs
    }
}

impl Successors for SampledWorld {
    fn node_count(&self) -> usize {
        self.adj.node_count()
    }

    fn successors(&self, v: u32) -> &[u32] {
        self.adj.successors(v)
    }
}

/// Samples the full world of `g` for one round.
pub fn sample_world(g: &ProbGraph, round: RoundSeed) -> SampledWorld {
    let live: Vec<EdgeId> = match g.model() {
        Model::Ic => g.active_edges().filter(|&e| ic_live(g, round, e)).collect(),
        Model::Lt => {
            let mut chosen: Vec<EdgeId> = (0..g.n() as u32)
                .filter(|&v| g.is_node_alive(NodeId(v)))
                .filter_map(|v| lt_choice(g, round, NodeId(v)))
                .collect();
            chosen.sort_unstable();
            chosen
        }
    };
    let pairs: Vec<(u32, u32)> = live
        .iter()
        .map(|&e| (g.edge(e).src.0, g.edge(e).dst.0))
        .collect();
    SampledWorld {
        round_seed: round,
        adj: Csr::from_pairs(g.n(), &pairs),
        live,
    }
}

/// Nodes reachable from `s` via live edges, `s` included.
pub fn reachable_count<W: Successors>(w: &W, s: NodeId) -> usize {
    let mut seen = vec![false; w.node_count()];
    let mut stack = vec![s.0];
    seen[s.index()] = true;
    let mut count = 0;
    while let Some(u) = stack.pop() {
        count += 1;
        for &v in w.successors(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                stack.push(v);
            }
        }
    }
    count
}

/// Something to ignore while exploring a world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Exclude {
    Nothing,
    Node(NodeId),
    Edge(EdgeId),
}

/// Reachable part of a world, re-indexed densely in discovery order.
#[derive(Clone, Debug)]
pub(crate) struct LocalWorld {
    /// Local id -> node id of the parent graph. Local 0 is the root.
    pub nodes: Vec<NodeId>,
    pub adj: Csr,
    /// Parent edge id of each local edge, by insertion index.
    pub edges: Vec<EdgeId>,
    pub pairs: Vec<(u32, u32)>,
}

/// Scratch space for lazily exploring worlds; reusable across rounds.
pub(crate) struct Explorer {
    mark: Vec<u32>,
    local: Vec<u32>,
    lt_mark: Vec<u32>,
    lt_pick: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

impl Explorer {
    pub fn new(n: usize) -> Explorer {
        Explorer {
            mark: vec![0; n],
            local: vec![0; n],
            lt_mark: vec![0; n],
            lt_pick: vec![NONE; n],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    fn bump(&mut self) {
        if self.epoch == u32::MAX {
            self.mark.fill(0);
            self.lt_mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    #[inline]
    fn live(&mut self, g: &ProbGraph, round: RoundSeed, e: EdgeId) -> bool {
        match g.model() {
            Model::Ic => ic_live(g, round, e),
            Model::Lt => {
                let v = g.edge(e).dst.index();
                if self.lt_mark[v] != self.epoch {
                    self.lt_mark[v] = self.epoch;
                    self.lt_pick[v] = lt_choice(g, round, NodeId(v as u32)).map_or(NONE, |x| x.0);
                }
                self.lt_pick[v] == e.0
            }
        }
    }

    /// `sigma(s, g_round)` with one node or edge additionally removed.
    pub fn count_reachable(
        &mut self,
        g: &ProbGraph,
        round: RoundSeed,
        s: NodeId,
        exclude: Exclude,
    ) -> usize {
        self.bump();
        if exclude == Exclude::Node(s) {
            return 0;
        }
        let epoch = self.epoch;
        self.queue.clear();
        self.queue.push(s.0);
        self.mark[s.index()] = epoch;
        let mut head = 0;
        while head < self.queue.len() {
            let u = NodeId(self.queue[head]);
            head += 1;
            for &e in g.out_edge_ids(u) {
                if !g.is_edge_active(e) || exclude == Exclude::Edge(e) {
                    continue;
                }
                let v = g.edge(e).dst;
                if self.mark[v.index()] == epoch || exclude == Exclude::Node(v) {
                    continue;
                }
                if self.live(g, round, e) {
                    self.mark[v.index()] = epoch;
                    self.queue.push(v.0);
                }
            }
        }
        self.queue.len()
    }

    /// Materializes the part of the round's world reachable from `s`.
    pub fn local_world(&mut self, g: &ProbGraph, round: RoundSeed, s: NodeId) -> LocalWorld {
        self.bump();
        let epoch = self.epoch;
        let mut nodes = vec![s];
        self.mark[s.index()] = epoch;
        self.local[s.index()] = 0;
        let mut pairs = Vec::new();
        let mut edges = Vec::new();
        let mut head = 0;
        while head < nodes.len() {
            let u = nodes[head];
            let lu = head as u32;
            head += 1;
            for &e in g.out_edge_ids(u) {
                if !g.is_edge_active(e) || !self.live(g, round, e) {
                    continue;
                }
                let v = g.edge(e).dst;
                if self.mark[v.index()] != epoch {
                    self.mark[v.index()] = epoch;
                    self.local[v.index()] = nodes.len() as u32;
                    nodes.push(v);
                }
                pairs.push((lu, self.local[v.index()]));
                edges.push(e);
            }
        }
        LocalWorld {
            adj: Csr::from_pairs(nodes.len(), &pairs),
            nodes,
            edges,
            pairs,
        }
    }
}

/// Monte-Carlo estimate of the expected spread of a single seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub rounds: u64,
    pub per_round_counts: Vec<u32>,
}

impl SpreadEstimate {
    pub fn total(&self) -> u64 {
        self.per_round_counts.iter().map(|&c| c as u64).sum()
    }

    /// Sample variance of the per-round counts.
    pub fn variance(&self) -> f64 {
        let r = self.per_round_counts.len() as f64;
        if r < 2.0 {
            return 0.0;
        }
        let ss: f64 = self
            .per_round_counts
            .iter()
            .map(|&c| (c as f64 - self.mean).powi(2))
            .sum();
        ss / (r - 1.0)
    }
}

fn check_seed(g: &ProbGraph, s: NodeId) -> Result<()> {
    if s.index() >= g.n() {
        return Err(Error::NodeOutOfRange {
            node: s.0,
            n: g.n(),
        });
    }
    if !g.is_node_alive(s) {
        return Err(Error::InvalidArgument(format!("seed {s} is blocked")));
    }
    Ok(())
}

/// Mean reachable count over `rounds` worlds from `seed`'s stream.
pub fn mcs_spread(
    g: &ProbGraph,
    s: NodeId,
    rounds: u64,
    seed: MasterSeed,
) -> Result<SpreadEstimate> {
    if rounds == 0 {
        return Err(Error::ZeroRounds);
    }
    check_seed(g, s)?;
    let n = g.n();
    let per_round_counts: Vec<u32> = (0..rounds)
        .into_par_iter()
        .map_init(
            || Explorer::new(n),
            |ex, i| ex.count_reachable(g, seed.round(i), s, Exclude::Nothing) as u32,
        )
        .collect();
    let total: u64 = per_round_counts.iter().map(|&c| c as u64).sum();
    Ok(SpreadEstimate {
        mean: total as f64 / rounds as f64,
        rounds,
        per_round_counts,
    })
}

/// Number of uncertain edges that [`exact_spread`] would branch on.
pub fn uncertain_edge_count(g: &ProbGraph, s: NodeId) -> usize {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![s];
    seen[s.index()] = true;
    let mut k = 0;
    while let Some(u) = stack.pop() {
        for e in g.active_out_edges(u) {
            let edge = g.edge(e);
            if edge.p <= 0.0 {
                continue;
            }
            if edge.p < 1.0 {
                k += 1;
            }
            if !seen[edge.dst.index()] {
                seen[edge.dst.index()] = true;
                stack.push(edge.dst);
            }
        }
    }
    k
}

pub fn exact_spread(g: &ProbGraph, s: NodeId) -> Result<f64> {
    exact_spread_with_cap(g, s, DEFAULT_EXACT_CAP)
}

/// Exact expected spread by enumerating live-edge configurations.
///
/// Only uncertain edges whose state can still change reachability are
/// branched on: an edge into an already reached node is skipped, and
/// deterministic edges are followed without branching.
pub fn exact_spread_with_cap(g: &ProbGraph, s: NodeId, cap: usize) -> Result<f64> {
    check_seed(g, s)?;
    let k = uncertain_edge_count(g, s);
    if k > cap {
        return Err(Error::ExactInfeasible { uncertain: k, cap });
    }
    let mut st = ExactState {
        g,
        visited: vec![false; g.n()],
        visited_count: 0,
        queue: Vec::new(),
        lt_mass: vec![1.0; g.n()],
    };
    st.visit(s);
    Ok(st.expand(0))
}

struct ExactState<'a> {
    g: &'a ProbGraph,
    visited: Vec<bool>,
    visited_count: usize,
    queue: Vec<EdgeId>,
    /// LT: probability mass of `v`'s choice not yet ruled out.
    lt_mass: Vec<f64>,
}

impl ExactState<'_> {
    fn visit(&mut self, v: NodeId) {
        self.visited[v.index()] = true;
        self.visited_count += 1;
        let g = self.g;
        self.queue
            .extend(g.active_out_edges(v).filter(|&e| g.edge(e).p > 0.0));
    }

    fn unvisit(&mut self, v: NodeId, queue_len: usize) {
        self.visited[v.index()] = false;
        self.visited_count -= 1;
        self.queue.truncate(queue_len);
    }

    /// Expected final visited count, conditioned on the current state.
    fn expand(&mut self, mut pos: usize) -> f64 {
        let entry_len = self.queue.len();
        let mut forced: Vec<NodeId> = Vec::new();
        let result = loop {
            if pos == self.queue.len() {
                break self.visited_count as f64;
            }
            let e = self.queue[pos];
            let edge = *self.g.edge(e);
            let v = edge.dst;
            if self.visited[v.index()] {
                pos += 1;
                continue;
            }
            let q = match self.g.model() {
                Model::Ic => edge.p,
                Model::Lt => {
                    let mass = self.lt_mass[v.index()];
                    if mass <= 0.0 {
                        0.0
                    } else {
                        (edge.p / mass).min(1.0)
                    }
                }
            };
            if q >= 1.0 {
                self.visit(v);
                forced.push(v);
                pos += 1;
                continue;
            }
            if q <= 0.0 {
                pos += 1;
                continue;
            }
            let len = self.queue.len();
            self.visit(v);
            let live = self.expand(pos + 1);
            self.unvisit(v, len);

            let saved = self.lt_mass[v.index()];
            if self.g.model() == Model::Lt {
                self.lt_mass[v.index()] = saved - edge.p;
            }
            let dead = self.expand(pos + 1);
            self.lt_mass[v.index()] = saved;
            break q * live + (1.0 - q) * dead;
        };
        for v in forced {
            self.visited[v.index()] = false;
            self.visited_count -= 1;
        }
        self.queue.truncate(entry_len);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt_pair() -> ProbGraph {
        ProbGraph::new(3, [(0, 2, 0.3), (1, 2, 0.7)])
            .unwrap()
            .with_model(Model::Lt)
    }

    #[test]
    fn lt_in_edge_frequencies() {
        let g = lt_pair();
        let seed = MasterSeed(7);
        let draws = 100_000u64;
        let mut counts = [0usize; 3];
        for i in 0..draws {
            let w = sample_world(&g, seed.round(i));
            assert!(w.in_degrees().iter().all(|&d| d <= 1));
            match w.live_edges() {
                [EdgeId(0)] => counts[0] += 1,
                [EdgeId(1)] => counts[1] += 1,
                [] => counts[2] += 1,
                other => panic!("unexpected live set {other:?}"),
            }
        }
        let f = |c: usize| c as f64 / draws as f64;
        assert!((f(counts[0]) - 0.3).abs() < 0.01);
        assert!((f(counts[1]) - 0.7).abs() < 0.01);
        assert!(f(counts[2]) < 0.01);
    }

    #[test]
    fn reachable_count_without_edges_is_one() {
        let w = SampledWorld::from_edges(4, &[]);
        assert_eq!(reachable_count(&w, NodeId(2)), 1);
    }

    #[test]
    fn mcs_rejects_zero_rounds() {
        let g = lt_pair();
        assert!(matches!(
            mcs_spread(&g, NodeId(0), 0, MasterSeed(1)),
            Err(Error::ZeroRounds)
        ));
    }

    #[test]
    fn deterministic_graph_has_zero_variance() {
        let g = ProbGraph::new(5, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let est = mcs_spread(&g, NodeId(0), 1_000, MasterSeed(3)).unwrap();
        assert_eq!(est.mean, 4.0);
        assert_eq!(est.variance(), 0.0);
        assert_eq!(exact_spread(&g, NodeId(0)).unwrap(), 4.0);
    }

    #[test]
    fn lazy_and_full_worlds_agree() {
        let g = ProbGraph::new(
            6,
            [
                (0, 1, 0.5),
                (0, 2, 0.5),
                (1, 3, 0.5),
                (2, 3, 0.5),
                (3, 4, 0.5),
                (4, 5, 0.5),
                (5, 1, 0.5),
            ],
        )
        .unwrap();
        let mut ex = Explorer::new(6);
        for i in 0..200 {
            let r = MasterSeed(9).round(i);
            let full = sample_world(&g, r);
            assert_eq!(
                ex.count_reachable(&g, r, NodeId(0), Exclude::Nothing),
                reachable_count(&full, NodeId(0))
            );
            let local = ex.local_world(&g, r, NodeId(0));
            assert_eq!(local.nodes.len(), reachable_count(&full, NodeId(0)));
        }
    }

    #[test]
    fn exact_cap_is_enforced() {
        let edges: Vec<(u32, u32, f64)> = (0..30).map(|i| (i, i + 1, 0.5)).collect();
        let g = ProbGraph::new(31, edges).unwrap();
        assert!(matches!(
            exact_spread(&g, NodeId(0)),
            Err(Error::ExactInfeasible {
                uncertain: 30,
                cap: 25
            })
        ));
        // a chain only branches along the reached prefix, so a larger cap is cheap
        let e = exact_spread_with_cap(&g, NodeId(0), 30).unwrap();
        let expected: f64 = (0..=30).map(|k| 0.5f64.powi(k)).sum();
        assert!((e - expected).abs() < 1e-12);
    }
}
