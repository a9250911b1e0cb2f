//! Directed probabilistic graphs, seed unification and blocking.
//!
//! A [`ProbGraph`] is an immutable topology shared behind an `Arc` plus two
//! masks (alive nodes, alive edges). Blocking nodes or edges only flips mask
//! bits, so node and edge ids stay aligned across greedy rounds and a
//! decrease table computed on a blocked graph indexes the same candidates as
//! one computed on the original.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on LT in-probability sums.
pub const LT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub p: f64,
}

/// Diffusion model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Independent cascade.
    #[default]
    Ic,
    /// Linear threshold.
    Lt,
}

/// A broken graph invariant reported by [`ProbGraph::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    ProbabilityOutOfRange { edge: EdgeId, p: f64 },
    SelfLoop { node: NodeId },
    DuplicateEdge { src: NodeId, dst: NodeId },
    LtInSumExceeded { node: NodeId, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProbabilityOutOfRange { edge, p } => {
                write!(f, "probability out of range: edge #{} has p = {p}", edge.0)
            }
            Violation::SelfLoop { node } => write!(f, "self-loop on node {node}"),
            Violation::DuplicateEdge { src, dst } => write!(f, "duplicate edge {src} -> {dst}"),
            Violation::LtInSumExceeded { node, sum } => {
                write!(
                    f,
                    "LT in-sum exceeds 1: node {node} has incoming mass {sum}"
                )
            }
        }
    }
}

#[derive(Debug, PartialEq)]
struct Topology {
    n: usize,
    edges: Vec<Edge>,
    out_start: Vec<u32>,
    out_list: Vec<EdgeId>,
    in_start: Vec<u32>,
    in_list: Vec<EdgeId>,
    labels: Vec<u64>,
    lookup: HashMap<(u32, u32), EdgeId>,
}

impl Topology {
    fn build(n: usize, edges: Vec<Edge>, labels: Vec<u64>) -> Topology {
        let index = |key: fn(&Edge) -> NodeId| {
            let mut start = vec![0u32; n + 1];
            for e in &edges {
                start[key(e).index() + 1] += 1;
            }
            for i in 0..n {
                start[i + 1] += start[i];
            }
            let mut cursor = start.clone();
            let mut list = vec![EdgeId(0); edges.len()];
            for (i, e) in edges.iter().enumerate() {
                let v = key(e).index();
                list[cursor[v] as usize] = EdgeId(i as u32);
                cursor[v] += 1;
            }
            (start, list)
        };
        let (out_start, out_list) = index(|e| e.src);
        let (in_start, in_list) = index(|e| e.dst);
        let mut lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            lookup.entry((e.src.0, e.dst.0)).or_insert(EdgeId(i as u32));
        }
        Topology {
            n,
            edges,
            out_start,
            out_list,
            in_start,
            in_list,
            labels,
            lookup,
        }
    }
}

/// Directed graph with per-edge propagation probabilities and a seed set.
#[derive(Clone, Debug)]
pub struct ProbGraph {
    topo: Arc<Topology>,
    node_alive: Vec<bool>,
    edge_alive: Vec<bool>,
    seeds: Vec<NodeId>,
    model: Model,
    seed_offset: usize,
}

impl PartialEq for ProbGraph {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.topo, &other.topo) || self.topo == other.topo)
            && self.node_alive == other.node_alive
            && self.edge_alive == other.edge_alive
            && self.seeds == other.seeds
            && self.model == other.model
            && self.seed_offset == other.seed_offset
    }
}

impl ProbGraph {
    /// Builds an IC graph without seeds. Only node ranges are checked here;
    /// everything else is reported by [`validate`](Self::validate).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<ProbGraph> {
        let mut list = Vec::new();
        for (u, v, p) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            list.push(Edge {
                src: NodeId(u),
                dst: NodeId(v),
                p,
            });
        }
        let m = list.len();
        Ok(ProbGraph {
            topo: Arc::new(Topology::build(n, list, (0..n as u64).collect())),
            node_alive: vec![true; n],
            edge_alive: vec![true; m],
            seeds: Vec::new(),
            model: Model::Ic,
            seed_offset: 0,
        })
    }

    pub fn with_seeds(mut self, seeds: impl IntoIterator<Item = NodeId>) -> Result<ProbGraph> {
        let mut seeds: Vec<NodeId> = seeds.into_iter().collect();
        for &s in &seeds {
            if s.index() >= self.n() {
                return Err(Error::NodeOutOfRange {
                    node: s.0,
                    n: self.n(),
                });
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        self.seeds = seeds;
        Ok(self)
    }

    pub fn with_model(mut self, model: Model) -> ProbGraph {
        self.model = model;
        self
    }

    /// Attaches original dataset ids. `labels[i]` is the id of node `i`.
    pub fn with_labels(self, labels: Vec<u64>) -> Result<ProbGraph> {
        if labels.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "{} labels supplied for {} nodes",
                labels.len(),
                self.n()
            )));
        }
        let t = &self.topo;
        let topo = Topology::build(t.n, t.edges.clone(), labels);
        Ok(ProbGraph {
            topo: Arc::new(topo),
            ..self
        })
    }

    /// Returns a copy whose edge probabilities are replaced by `f`.
    pub fn with_probabilities(&self, mut f: impl FnMut(EdgeId, &Edge) -> f64) -> ProbGraph {
        let t = &self.topo;
        let edges = t
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge {
                p: f(EdgeId(i as u32), e),
                ..*e
            })
            .collect();
        ProbGraph {
            topo: Arc::new(Topology::build(t.n, edges, t.labels.clone())),
            ..self.clone()
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.topo.n
    }

    /// Number of edges in the topology, blocked ones included.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.topo.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.topo.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.topo.edges[e.index()]
    }

    pub fn labels(&self) -> &[u64] {
        &self.topo.labels
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.topo.labels[v.index()]
    }

    pub fn node_by_label(&self, label: u64) -> Option<NodeId> {
        self.topo
            .labels
            .iter()
            .position(|&l| l == label)
            .map(|i| NodeId(i as u32))
    }

    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Spread accounting offset introduced by seed unification: spread of
    /// the original seed set = spread of the unified seed + offset.
    pub fn seed_offset(&self) -> usize {
        self.seed_offset
    }

    /// The single seed of a unified graph.
    pub fn unified_seed(&self) -> Result<NodeId> {
        match self.seeds.as_slice() {
            [s] => Ok(*s),
            [] => Err(Error::NoSeeds),
            _ => Err(Error::InvalidArgument(
                "graph has several seeds; call unify_seeds first".into(),
            )),
        }
    }

    /// All out-edges of `v` in the topology (blocked ones included).
    #[inline]
    pub fn out_edge_ids(&self, v: NodeId) -> &[EdgeId] {
        let t = &self.topo;
        &t.out_list[t.out_start[v.index()] as usize..t.out_start[v.index() + 1] as usize]
    }

    /// All in-edges of `v` in the topology (blocked ones included).
    #[inline]
    pub fn in_edge_ids(&self, v: NodeId) -> &[EdgeId] {
        let t = &self.topo;
        &t.in_list[t.in_start[v.index()] as usize..t.in_start[v.index() + 1] as usize]
    }

    #[inline]
    pub fn is_node_alive(&self, v: NodeId) -> bool {
        self.node_alive[v.index()]
    }

    /// An edge is active when it is not blocked and both endpoints are alive.
    #[inline]
    pub fn is_edge_active(&self, e: EdgeId) -> bool {
        let edge = &self.topo.edges[e.index()];
        self.edge_alive[e.index()]
            && self.node_alive[edge.src.index()]
            && self.node_alive[edge.dst.index()]
    }

    pub fn active_out_edges(&self, v: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.out_edge_ids(v)
            .iter()
            .copied()
            .filter(move |&e| self.is_edge_active(e))
    }

    pub fn active_in_edges(&self, v: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_edge_ids(v)
            .iter()
            .copied()
            .filter(move |&e| self.is_edge_active(e))
    }

    pub fn active_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count() as u32)
            .map(EdgeId)
            .filter(move |&e| self.is_edge_active(e))
    }

    pub fn active_edge_count(&self) -> usize {
        self.active_edges().count()
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.active_out_edges(v).count()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.active_in_edges(v).count()
    }

    /// Distinct active out-neighbors of `v`, in adjacency order.
    pub fn out_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut seen = Vec::new();
        for e in self.active_out_edges(v) {
            let d = self.edge(e).dst;
            if !seen.contains(&d) {
                seen.push(d);
            }
        }
        seen
    }

    pub fn find_edge(&self, src: NodeId, dst: NodeId) -> Option<EdgeId> {
        self.topo.lookup.get(&(src.0, dst.0)).copied()
    }

    pub fn is_seed(&self, v: NodeId) -> bool {
        self.seeds.binary_search(&v).is_ok()
    }

    /// Alive non-seed nodes in id order.
    pub fn node_candidates(&self) -> Vec<NodeId> {
        (0..self.n() as u32)
            .map(NodeId)
            .filter(|&v| self.is_node_alive(v) && !self.is_seed(v))
            .collect()
    }

    /// Active edges in id order.
    pub fn edge_candidates(&self) -> Vec<EdgeId> {
        self.active_edges().collect()
    }

    /// Reports every invariant violation; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for (i, e) in self.edges().iter().enumerate() {
            let id = EdgeId(i as u32);
            if !(0.0..=1.0).contains(&e.p) {
                out.push(Violation::ProbabilityOutOfRange { edge: id, p: e.p });
            }
            if e.src == e.dst {
                out.push(Violation::SelfLoop { node: e.src });
            }
            if seen.insert((e.src, e.dst), id).is_some() {
                out.push(Violation::DuplicateEdge {
                    src: e.src,
                    dst: e.dst,
                });
            }
        }
        if self.model == Model::Lt {
            for v in 0..self.n() as u32 {
                let v = NodeId(v);
                let sum: f64 = self.active_in_edges(v).map(|e| self.edge(e).p).sum();
                if sum > 1.0 + LT_SUM_TOLERANCE {
                    out.push(Violation::LtInSumExceeded { node: v, sum });
                }
            }
        }
        out
    }

    /// Blocks nodes. The result keeps every id; blocked nodes and their
    /// incident edges become inactive.
    pub fn remove_nodes(&self, blockers: &[NodeId]) -> Result<ProbGraph> {
        let mut g = self.clone();
        for &b in blockers {
            if b.index() >= self.n() {
                return Err(Error::NodeOutOfRange {
                    node: b.0,
                    n: self.n(),
                });
            }
            if self.is_seed(b) {
                return Err(Error::BlockedSeed(b));
            }
            g.node_alive[b.index()] = false;
        }
        Ok(g)
    }

    pub fn remove_edges(&self, blockers: &[(NodeId, NodeId)]) -> Result<ProbGraph> {
        let ids = blockers
            .iter()
            .map(|&(src, dst)| {
                self.find_edge(src, dst)
                    .ok_or(Error::MissingEdge { src, dst })
            })
            .collect::<Result<Vec<_>>>()?;
        self.remove_edge_ids(&ids)
    }

    pub fn remove_edge_ids(&self, blockers: &[EdgeId]) -> Result<ProbGraph> {
        let mut g = self.clone();
        for &e in blockers {
            if e.index() >= self.edge_count() {
                return Err(Error::InvalidArgument(format!(
                    "edge id {} out of range",
                    e.0
                )));
            }
            g.edge_alive[e.index()] = false;
        }
        Ok(g)
    }

    /// Replaces the seed set with a single seed.
    ///
    /// The smallest seed id becomes the unified seed `s'`; the other seeds
    /// are masked out. For every non-seed `u` with seed in-edges
    /// `p_1..p_h`, those edges collapse into one `(s', u)` edge with
    /// probability `1 - prod(1 - p_i)` (IC) or `sum p_i` (LT), placed at the
    /// position of the first of them. Edges into seeds are dropped. The
    /// spread offset grows by `|seeds| - 1`.
    pub fn unify_seeds(&self) -> Result<ProbGraph> {
        let unified = *self.seeds.first().ok_or(Error::NoSeeds)?;
        // dst -> (position of first edge, accumulator, first p, edge count)
        let mut merged: BTreeMap<u32, (usize, f64, f64, usize)> = BTreeMap::new();
        for (i, e) in self.edges().iter().enumerate() {
            if !self.is_edge_active(EdgeId(i as u32)) || !self.is_seed(e.src) || self.is_seed(e.dst)
            {
                continue;
            }
            let slot = merged.entry(e.dst.0).or_insert((
                i,
                if self.model == Model::Ic { 1.0 } else { 0.0 },
                e.p,
                0,
            ));
            slot.3 += 1;
            match self.model {
                Model::Ic => slot.1 *= 1.0 - e.p,
                Model::Lt => slot.1 += e.p,
            }
        }
        let mut first_at: HashMap<usize, (u32, f64)> = HashMap::new();
        for (&dst, &(at, acc, first, count)) in &merged {
            let p = match self.model {
                _ if count == 1 => first,
                Model::Ic => 1.0 - acc,
                Model::Lt => {
                    if acc > 1.0 + LT_SUM_TOLERANCE {
                        return Err(Error::LtMergeOverflow {
                            node: NodeId(dst),
                            sum: acc,
                        });
                    }
                    acc.min(1.0)
                }
            };
            first_at.insert(at, (dst, p));
        }

        let mut edges = Vec::with_capacity(self.edge_count());
        for (i, e) in self.edges().iter().enumerate() {
            if !self.is_edge_active(EdgeId(i as u32)) || self.is_seed(e.dst) {
                continue;
            }
            if self.is_seed(e.src) {
                if let Some(&(dst, p)) = first_at.get(&i) {
                    edges.push(Edge {
                        src: unified,
                        dst: NodeId(dst),
                        p,
                    });
                }
                continue;
            }
            edges.push(*e);
        }
        let mut node_alive = self.node_alive.clone();
        for &s in &self.seeds[1..] {
            node_alive[s.index()] = false;
        }
        let m = edges.len();
        Ok(ProbGraph {
            topo: Arc::new(Topology::build(self.n(), edges, self.topo.labels.clone())),
            node_alive,
            edge_alive: vec![true; m],
            seeds: vec![unified],
            model: self.model,
            seed_offset: self.seed_offset + self.seeds.len() - 1,
        })
    }
}

/// Free-function form of [`ProbGraph::validate`].
pub fn validate(g: &ProbGraph) -> Vec<Violation> {
    g.validate()
}
