//! Spread-decrease estimation for every candidate at once.
//!
//! Per sampled world, the number of nodes cut off by blocking `u` equals
//! the size of `u`'s subtree in the world's dominator tree. Summing those
//! sizes over `theta` worlds and dividing by `theta` estimates the decrease
//! in expected spread for every node in a single pass. Edges are handled by
//! splitting each live edge `(u, v)` into `u -> w_uv -> v` and counting only
//! original nodes below `w_uv`.
//!
//! Counts are accumulated as integers and divided once, so tables are exact
//! rationals up to the final division and do not depend on worker count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csr::{Csr, Successors};
use crate::dominator::{bfs_tree, build_lengauer_tarjan, DomTree};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Model, NodeId, ProbGraph};
use crate::rng::{MasterSeed, RoundSeed};
use crate::world::{Explorer, LocalWorld, SampledWorld};

/// Default number of sampled worlds.
pub const DEFAULT_THETA: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateKind {
    Node,
    Edge,
}

/// Estimated decrease in expected spread per candidate.
///
/// Indexed by node id (`Node`) or edge id (`Edge`) of the graph the table
/// was computed on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecreaseTable {
    pub kind: CandidateKind,
    pub theta: u64,
    /// Sum over worlds of the number of nodes cut off by each candidate.
    pub raw_counts: Vec<u64>,
    /// The seed, which has no entry.
    pub source: NodeId,
}

impl DecreaseTable {
    /// `raw_counts[c] / theta`; `None` for the seed in a node table.
    pub fn delta(&self, c: u32) -> Option<f64> {
        if self.kind == CandidateKind::Node && c == self.source.0 {
            return None;
        }
        self.raw_counts
            .get(c as usize)
            .map(|&r| r as f64 / self.theta as f64)
    }

    pub fn raw(&self, c: u32) -> u64 {
        self.raw_counts[c as usize]
    }

    /// Candidate with the largest count; ties go to the lowest id.
    pub fn argmax(&self, candidates: impl IntoIterator<Item = u32>) -> Option<u32> {
        let mut best: Option<(u32, u64)> = None;
        for c in candidates {
            let r = self.raw_counts[c as usize];
            match best {
                Some((b, br)) if r < br || (r == br && c > b) => {}
                _ => best = Some((c, r)),
            }
        }
        best.map(|(c, _)| c)
    }

    /// `candidate,delta` rows sorted by delta descending (ties by id).
    /// Candidates are written with their original labels; edges as `u->v`.
    pub fn to_csv(&self, g: &ProbGraph) -> String {
        let mut rows: Vec<(u32, u64)> = match self.kind {
            CandidateKind::Node => g
                .node_candidates()
                .into_iter()
                .filter(|&v| v != self.source)
                .map(|v| (v.0, self.raw_counts[v.index()]))
                .collect(),
            CandidateKind::Edge => g
                .edge_candidates()
                .into_iter()
                .map(|e| (e.0, self.raw_counts[e.index()]))
                .collect(),
        };
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut out = String::from("candidate,delta\n");
        for (c, r) in rows {
            let name = match self.kind {
                CandidateKind::Node => g.label(NodeId(c)).to_string(),
                CandidateKind::Edge => {
                    let e = g.edge(EdgeId(c));
                    format!("{}->{}", g.label(e.src), g.label(e.dst))
                }
            };
            let _ = writeln!(out, "{name},{:.6}", r as f64 / self.theta as f64);
        }
        out
    }
}

fn check(g: &ProbGraph, s: NodeId, theta: u64) -> Result<()> {
    if theta == 0 {
        return Err(Error::ZeroRounds);
    }
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

fn tree_for(model: Model, adj: &Csr) -> DomTree {
    match model {
        // every node of an LT world, split or not, has live in-degree <= 1
        Model::Lt => bfs_tree(adj, NodeId(0)),
        Model::Ic => build_lengauer_tarjan(adj, NodeId(0)),
    }
}

/// Adds one world's node contributions to `acc`.
pub(crate) fn accumulate_nodes(model: Model, world: &LocalWorld, acc: &mut [u64]) {
    let tree = tree_for(model, &world.adj);
    let sizes = tree.subtree_weights(|_| 1);
    for (local, &v) in world.nodes.iter().enumerate().skip(1) {
        acc[v.index()] += sizes[local] as u64;
    }
}

/// Split-edge transform of a local world: node ids `0..k` are the world's
/// nodes, `k + j` is the virtual node of local edge `j`.
fn split_edges(node_count: usize, pairs: &[(u32, u32)]) -> Csr {
    let k = node_count as u32;
    let mut split = Vec::with_capacity(2 * pairs.len());
    for (j, &(u, v)) in pairs.iter().enumerate() {
        split.push((u, k + j as u32));
        split.push((k + j as u32, v));
    }
    Csr::from_pairs(node_count + pairs.len(), &split)
}

pub(crate) fn accumulate_edges(model: Model, world: &LocalWorld, acc: &mut [u64]) {
    let k = world.nodes.len();
    let adj = split_edges(k, &world.pairs);
    let tree = tree_for(model, &adj);
    let counts = tree.subtree_weights(|v| (v.index() < k) as u32);
    for (j, &e) in world.edges.iter().enumerate() {
        acc[e.index()] += counts[k + j] as u64;
    }
}

fn run_pipeline(
    g: &ProbGraph,
    s: NodeId,
    theta: u64,
    seed: MasterSeed,
    len: usize,
    step: fn(Model, &LocalWorld, &mut [u64]),
) -> Vec<u64> {
    let n = g.n();
    let model = g.model();
    (0..theta)
        .into_par_iter()
        .fold(
            || (Explorer::new(n), vec![0u64; len]),
            |(mut ex, mut acc), i| {
                let world = ex.local_world(g, seed.round(i), s);
                step(model, &world, &mut acc);
                (ex, acc)
            },
        )
        .map(|(_, acc)| acc)
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Node decrease table over `theta` worlds of `seed`'s stream.
pub fn desc(g: &ProbGraph, s: NodeId, theta: u64, seed: MasterSeed) -> Result<DecreaseTable> {
    check(g, s, theta)?;
    let raw_counts = run_pipeline(g, s, theta, seed, g.n(), accumulate_nodes);
    Ok(DecreaseTable {
        kind: CandidateKind::Node,
        theta,
        raw_counts,
        source: s,
    })
}

/// Edge decrease table over `theta` worlds of `seed`'s stream.
pub fn desce(g: &ProbGraph, s: NodeId, theta: u64, seed: MasterSeed) -> Result<DecreaseTable> {
    check(g, s, theta)?;
    let raw_counts = run_pipeline(g, s, theta, seed, g.edge_count(), accumulate_edges);
    Ok(DecreaseTable {
        kind: CandidateKind::Edge,
        theta,
        raw_counts,
        source: s,
    })
}

/// Per-world node contributions for one round, as `(node, subtree size)`.
pub fn world_node_contributions(g: &ProbGraph, s: NodeId, round: RoundSeed) -> Vec<(NodeId, u32)> {
    let mut ex = Explorer::new(g.n());
    let world = ex.local_world(g, round, s);
    let tree = tree_for(g.model(), &world.adj);
    let sizes = tree.subtree_weights(|_| 1);
    world
        .nodes
        .iter()
        .enumerate()
        .skip(1)
        .map(|(l, &v)| (v, sizes[l]))
        .collect()
}

/// Edge-sampled graph of a world: original nodes keep their ids, live edge
/// `j` (in `live_edges()` order) becomes virtual node `n + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSampledWorld {
    original_nodes: usize,
    live_edges: Vec<EdgeId>,
    adj: Csr,
}

impl EdgeSampledWorld {
    pub fn original_node_count(&self) -> usize {
        self.original_nodes
    }

    pub fn virtual_node_count(&self) -> usize {
        self.live_edges.len()
    }

    pub fn is_virtual(&self, v: NodeId) -> bool {
        v.index() >= self.original_nodes
    }

    /// Virtual node standing for a parent-graph edge, if that edge is live.
    pub fn virtual_node(&self, e: EdgeId) -> Option<NodeId> {
        self.live_edges
            .binary_search(&e)
            .ok()
            .map(|j| NodeId((self.original_nodes + j) as u32))
    }

    /// Parent-graph edge represented by a virtual node.
    pub fn edge_of(&self, v: NodeId) -> Option<EdgeId> {
        v.index()
            .checked_sub(self.original_nodes)
            .and_then(|j| self.live_edges.get(j).copied())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.edge_count()
    }

    pub fn adjacency(&self) -> &Csr {
        &self.adj
    }
}

impl Successors for EdgeSampledWorld {
    fn node_count(&self) -> usize {
        self.adj.node_count()
    }

    fn successors(&self, v: u32) -> &[u32] {
        self.adj.successors(v)
    }
}

pub fn build_edge_world(w: &SampledWorld) -> EdgeSampledWorld {
    let n = w.node_count();
    EdgeSampledWorld {
        original_nodes: n,
        live_edges: w.live_edges().to_vec(),
        adj: split_edges(n, &w.edge_pairs()),
    }
}

/// `|R_e|` for every live edge of an edge-sampled world: original nodes in
/// the dominator subtree of the edge's virtual node.
pub fn edge_world_cut_sizes(world: &EdgeSampledWorld, s: NodeId) -> Vec<(EdgeId, u32)> {
    let tree = build_lengauer_tarjan(world, s);
    let k = world.original_nodes;
    let counts = tree.subtree_weights(|v| (v.index() < k) as u32);
    world
        .live_edges
        .iter()
        .enumerate()
        .map(|(j, &e)| (e, counts[k + j]))
        .collect()
}

/// Number of worlds sufficient for a relative error `eps` with probability
/// at least `1 - n^-l` when the decrease being estimated is at least
/// `opt_lower_bound`: `ceil(l (2 + eps) n ln n / (eps^2 opt))`.
pub fn chernoff_theta(l: f64, eps: f64, n: usize, opt_lower_bound: f64) -> Result<u64> {
    let positive = |x: f64| x > 0.0;
    if !positive(l) || !positive(eps) || n < 2 || !positive(opt_lower_bound) {
        return Err(Error::InvalidArgument(format!(
            "chernoff_theta needs l > 0, eps > 0, n >= 2, opt > 0 (got l={l}, eps={eps}, n={n}, opt={opt_lower_bound})"
        )));
    }
    let n = n as f64;
    Ok((l * (2.0 + eps) * n * n.ln() / (eps * eps * opt_lower_bound)).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::sample_world;

    fn chain() -> ProbGraph {
        ProbGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)])
            .unwrap()
            .with_seeds([NodeId(0)])
            .unwrap()
    }

    #[test]
    fn zero_theta_is_rejected() {
        let g = chain();
        assert!(matches!(
            desc(&g, NodeId(0), 0, MasterSeed(1)),
            Err(Error::ZeroRounds)
        ));
        assert!(matches!(
            desce(&g, NodeId(0), 0, MasterSeed(1)),
            Err(Error::ZeroRounds)
        ));
    }

    #[test]
    fn deterministic_chain() {
        let g = chain();
        let t = desc(&g, NodeId(0), 1, MasterSeed(1)).unwrap();
        assert_eq!(t.delta(0), None);
        assert_eq!(t.delta(1), Some(2.0));
        assert_eq!(t.delta(2), Some(1.0));
        assert_eq!(t.to_csv(&g), "candidate,delta\n1,2.000000\n2,1.000000\n");
        let e = desce(&g, NodeId(0), 1, MasterSeed(1)).unwrap();
        assert_eq!(e.raw_counts, vec![2, 1]);
    }

    #[test]
    fn argmax_breaks_ties_low() {
        let t = DecreaseTable {
            kind: CandidateKind::Node,
            theta: 1,
            raw_counts: vec![0, 5, 7, 7, 1],
            source: NodeId(0),
        };
        assert_eq!(t.argmax([4, 3, 2, 1]), Some(2));
        assert_eq!(t.argmax([]), None);
    }

    #[test]
    fn edge_world_shape() {
        let w = SampledWorld::from_edges(2, &[(0, 1)]);
        let ew = build_edge_world(&w);
        assert_eq!(ew.node_count(), 3);
        assert_eq!(ew.successors(0), &[2]);
        assert_eq!(ew.successors(2), &[1]);
        assert_eq!(ew.edge_of(NodeId(2)), Some(EdgeId(0)));
        assert_eq!(edge_world_cut_sizes(&ew, NodeId(0)), vec![(EdgeId(0), 1)]);
    }

    #[test]
    fn chernoff_formula() {
        // l=1, eps=0.1, n=1005, opt=1: 2.1 * 1005 * ln(1005) / 0.01
        assert_eq!(chernoff_theta(1.0, 0.1, 1005, 1.0).unwrap(), 1_458_935);
        assert_eq!(chernoff_theta(1.0, 0.25, 9, 1.0).unwrap(), 712);
        let a = chernoff_theta(2.0, 0.3, 500, 3.0).unwrap();
        let b = chernoff_theta(2.0, 0.3, 500, 6.0).unwrap();
        assert!(b == a / 2 || b == a.div_ceil(2));
        assert!(chernoff_theta(0.0, 0.1, 10, 1.0).is_err());
        assert!(chernoff_theta(1.0, 0.1, 1, 1.0).is_err());
        assert!(chernoff_theta(1.0, -0.1, 10, 1.0).is_err());
        assert!(chernoff_theta(1.0, 0.1, 10, 0.0).is_err());
    }

    #[test]
    fn full_world_edge_cuts_match_pipeline() {
        let g = ProbGraph::new(4, [(0, 1, 0.6), (0, 2, 0.6), (1, 3, 0.6), (2, 3, 0.6)])
            .unwrap()
            .with_seeds([NodeId(0)])
            .unwrap();
        let seed = MasterSeed(5);
        let table = desce(&g, NodeId(0), 64, seed).unwrap();
        let mut acc = vec![0u64; 4];
        for i in 0..64 {
            let ew = build_edge_world(&sample_world(&g, seed.round(i)));
            for (e, c) in edge_world_cut_sizes(&ew, NodeId(0)) {
                acc[e.index()] += c as u64;
            }
        }
        assert_eq!(table.raw_counts, acc);
    }
}
