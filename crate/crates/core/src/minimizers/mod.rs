//! Blocker-selection algorithms.
//!
//! All spreads reported in a [`BlockResult`] are in the original seed
//! accounting, i.e. they include [`ProbGraph::seed_offset`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decrease::CandidateKind;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, ProbGraph};
use crate::rng::MasterSeed;

mod exact;
mod greedy;
mod heuristics;
mod replace;

pub use exact::{exact_search, exact_search_with, SearchEval, DEFAULT_SEARCH_CAP};
pub use greedy::{advanced_greedy, baseline_greedy};
pub use heuristics::{heuristic_outdegree, heuristic_random};
pub use replace::greedy_replace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Rand,
    Outdeg,
    Bg,
    Ag,
    Gr,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Rand => "rand",
            Algorithm::Outdeg => "outdeg",
            Algorithm::Bg => "bg",
            Algorithm::Ag => "ag",
            Algorithm::Gr => "gr",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Algorithm::Exact,
            "rand" => Algorithm::Rand,
            "outdeg" => Algorithm::Outdeg,
            "bg" => Algorithm::Bg,
            "ag" => Algorithm::Ag,
            "gr" => Algorithm::Gr,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown algorithm '{other}'"
                )))
            }
        })
    }
}

/// Chosen blockers: node ids or edge ids of the graph they were chosen on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSet {
    pub kind: CandidateKind,
    pub members: Vec<u32>,
    pub budget: usize,
}

impl BlockSet {
    pub fn new(kind: CandidateKind, budget: usize) -> BlockSet {
        BlockSet {
            kind,
            members: Vec::new(),
            budget,
        }
    }

    pub fn nodes(members: impl IntoIterator<Item = NodeId>, budget: usize) -> BlockSet {
        BlockSet {
            kind: CandidateKind::Node,
            members: members.into_iter().map(|v| v.0).collect(),
            budget,
        }
    }

    pub fn edges(members: impl IntoIterator<Item = EdgeId>, budget: usize) -> BlockSet {
        BlockSet {
            kind: CandidateKind::Edge,
            members: members.into_iter().map(|e| e.0).collect(),
            budget,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: u32) -> bool {
        self.members.contains(&c)
    }

    /// Members in ascending id order.
    pub fn sorted(&self) -> Vec<u32> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    /// `g` with the members blocked.
    pub fn apply(&self, g: &ProbGraph) -> Result<ProbGraph> {
        block(g, self.kind, &self.members)
    }
}

pub(crate) fn block(g: &ProbGraph, kind: CandidateKind, members: &[u32]) -> Result<ProbGraph> {
    match kind {
        CandidateKind::Node => {
            let v: Vec<NodeId> = members.iter().map(|&c| NodeId(c)).collect();
            g.remove_nodes(&v)
        }
        CandidateKind::Edge => {
            let e: Vec<EdgeId> = members.iter().map(|&c| EdgeId(c)).collect();
            g.remove_edge_ids(&e)
        }
    }
}

/// Explicit candidate set for greedy selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePool {
    pub kind: CandidateKind,
    pub members: Vec<u32>,
}

impl CandidatePool {
    /// Every alive non-seed node.
    pub fn all_nodes(g: &ProbGraph) -> CandidatePool {
        CandidatePool {
            kind: CandidateKind::Node,
            members: g.node_candidates().into_iter().map(|v| v.0).collect(),
        }
    }

    /// Every active edge.
    pub fn all_edges(g: &ProbGraph) -> CandidatePool {
        CandidatePool {
            kind: CandidateKind::Edge,
            members: g.edge_candidates().into_iter().map(|e| e.0).collect(),
        }
    }

    pub fn of_kind(g: &ProbGraph, kind: CandidateKind) -> CandidatePool {
        match kind {
            CandidateKind::Node => Self::all_nodes(g),
            CandidateKind::Edge => Self::all_edges(g),
        }
    }

    pub fn nodes(
        g: &ProbGraph,
        members: impl IntoIterator<Item = NodeId>,
    ) -> Result<CandidatePool> {
        let members: Vec<u32> = members.into_iter().map(|v| v.0).collect();
        for &m in &members {
            if g.is_seed(NodeId(m)) {
                return Err(Error::BlockedSeed(NodeId(m)));
            }
        }
        Ok(CandidatePool {
            kind: CandidateKind::Node,
            members,
        })
    }

    pub fn edges(members: impl IntoIterator<Item = EdgeId>) -> CandidatePool {
        CandidatePool {
            kind: CandidateKind::Edge,
            members: members.into_iter().map(|e| e.0).collect(),
        }
    }
}

/// How the baseline greedy draws its Monte-Carlo worlds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McsMode {
    /// One shared set of worlds per greedy round; every candidate and the
    /// unblocked baseline are simulated on the same worlds.
    #[default]
    Crn,
    /// Independent worlds for the baseline and for each candidate.
    Fresh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Greedy,
    Replace,
    Fill,
}

/// One committed choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub phase: Phase,
    pub candidate: u32,
    pub delta: f64,
    /// Integer decrease summed over worlds, when the estimator is exact
    /// integer arithmetic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<u64>,
    /// Full `(candidate, raw decrease)` table of the round, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(u32, u64)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockResult {
    pub algorithm: Algorithm,
    pub blockers: BlockSet,
    pub residual_spread: Option<f64>,
    pub rounds_used: u64,
    #[serde(skip)]
    pub wall_time_ms: f64,
    pub trace: Vec<RoundTrace>,
    pub warnings: Vec<String>,
    pub timed_out: bool,
}

impl BlockResult {
    pub(crate) fn empty(algorithm: Algorithm, kind: CandidateKind, budget: usize) -> BlockResult {
        BlockResult {
            algorithm,
            blockers: BlockSet::new(kind, budget),
            residual_spread: None,
            rounds_used: 0,
            wall_time_ms: 0.0,
            trace: Vec::new(),
            warnings: Vec::new(),
            timed_out: false,
        }
    }

    pub(crate) fn finish(mut self, started: Instant) -> BlockResult {
        self.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }
}

/// Settings shared by the sampling-based algorithms.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyConfig {
    /// Worlds per decrease computation (`theta`, or `r` for the baseline).
    pub theta: u64,
    pub seed: MasterSeed,
    pub mcs_mode: McsMode,
    /// Greedy-replace only: top up a short blocker set with greedy rounds.
    pub fill_budget: bool,
    /// Keep every round's full decrease table in the trace.
    pub record_tables: bool,
    pub deadline: Option<Instant>,
}

impl GreedyConfig {
    pub fn new(theta: u64, seed: MasterSeed) -> GreedyConfig {
        GreedyConfig {
            theta,
            seed,
            mcs_mode: McsMode::Crn,
            fill_budget: false,
            record_tables: false,
            deadline: None,
        }
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// World stream of greedy round `k`.
    pub(crate) fn round_stream(&self, k: usize) -> MasterSeed {
        self.seed.derive(k as u64)
    }
}
