use std::time::Instant;

use rand::seq::index::sample;

use super::{Algorithm, BlockResult, CandidatePool};
use crate::decrease::CandidateKind;
use crate::graph::{EdgeId, ProbGraph};
use crate::rng::MasterSeed;

/// `b` candidates drawn uniformly without replacement (seeds excluded).
pub fn heuristic_random(
    g: &ProbGraph,
    b: usize,
    kind: CandidateKind,
    seed: MasterSeed,
) -> BlockResult {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Rand, kind, b);
    let pool = CandidatePool::of_kind(g, kind).members;
    let k = b.min(pool.len());
    let mut rng = seed.rng();
    let mut picked: Vec<u32> = sample(&mut rng, pool.len(), k)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    result.blockers.members = picked;
    result.finish(started)
}

/// Top-`b` nodes by out-degree, or top-`b` edges by out-degree of their
/// head node. Ties go to the lowest id.
pub fn heuristic_outdegree(g: &ProbGraph, b: usize, kind: CandidateKind) -> BlockResult {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Outdeg, kind, b);
    let mut scored: Vec<(usize, u32)> = match kind {
        CandidateKind::Node => g
            .node_candidates()
            .into_iter()
            .map(|v| (g.out_degree(v), v.0))
            .collect(),
        CandidateKind::Edge => g
            .edge_candidates()
            .into_iter()
            .map(|e: EdgeId| (g.out_degree(g.edge(e).dst), e.0))
            .collect(),
    };
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    result.blockers.members = scored.into_iter().take(b).map(|(_, c)| c).collect();
    result.finish(started)
}
