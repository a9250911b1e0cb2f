//! Influence minimization on probabilistic directed graphs.
//!
//! Given a seed set under the independent cascade (IC) or linear
//! threshold (LT) model, choose `b` nodes or edges to block so that the
//! expected spread of the seeds is as small as possible. The core tool is
//! a decrease estimator that samples live-edge worlds, builds a dominator
//! tree per world and reads every candidate's spread decrease off the
//! subtree sizes.
//!
//! ```
//! use imin::{advanced_greedy, toy_graph, CandidatePool, GreedyConfig, MasterSeed};
//!
//! let g = toy_graph().unify_seeds().unwrap();
//! let s = g.unified_seed().unwrap();
//! let cfg = GreedyConfig::new(2_000, MasterSeed(7));
//! let r = advanced_greedy(&g, s, 1, &CandidatePool::all_nodes(&g), &cfg).unwrap();
//! assert_eq!(g.label(imin::NodeId(r.blockers.members[0])), 5);
//! ```

pub mod bench;
pub mod csr;
pub mod decrease;
pub mod dominator;
pub mod error;
pub mod graph;
pub mod io;
pub mod minimizers;
pub mod rng;
pub mod synth;
pub mod world;

pub use csr::{Csr, Successors};
pub use decrease::{
    build_edge_world, chernoff_theta, desc, desce, CandidateKind, DecreaseTable, EdgeSampledWorld,
    DEFAULT_THETA,
};
pub use dominator::{brute_force_idom, build_lengauer_tarjan, build_lt, subtree_sizes, DomTree};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Model, NodeId, ProbGraph, Violation};
pub use minimizers::{
    advanced_greedy, baseline_greedy, exact_search, exact_search_with, greedy_replace,
    heuristic_outdegree, heuristic_random, Algorithm, BlockResult, BlockSet, CandidatePool,
    GreedyConfig, McsMode, SearchEval,
};
pub use rng::{MasterSeed, RoundSeed};
pub use world::{exact_spread, mcs_spread, sample_world, SampledWorld, SpreadEstimate};

const TOY_EDGES: &str = include_str!("../data/toy.edges");

/// The nine-node example graph, seeded at node 1. Node ids are the
/// labels minus one; use [`ProbGraph::node_by_label`] to look them up.
pub fn toy_graph() -> ProbGraph {
    let list = io::parse_edge_list(
        TOY_EDGES.as_bytes(),
        true,
        std::path::Path::new("toy.edges"),
    )
    .expect("bundled toy graph parses");
    let g = list.into_graph().expect("bundled toy graph is well formed");
    let s = g.node_by_label(1).expect("toy graph has node 1");
    g.with_seeds([s]).expect("seed in range")
}
