use std::time::Instant;

use rayon::prelude::*;

use super::{block, Algorithm, BlockResult};
use crate::decrease::CandidateKind;
use crate::error::{Error, Result};
use crate::graph::{NodeId, ProbGraph};
use crate::rng::MasterSeed;
use crate::world::{exact_spread, Exclude, Explorer};

/// Default cap on the number of subsets [`exact_search`] may evaluate.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// How [`exact_search_with`] scores a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchEval {
    /// Exact expected spread (fails when the graph is too uncertain).
    Exact,
    /// Monte-Carlo mean over the same `rounds` worlds for every subset.
    Mcs { rounds: u64, seed: MasterSeed },
}

/// Candidates that can matter: blocking anything unreachable from `s`
/// leaves the spread unchanged.
fn reachable_pool(g: &ProbGraph, s: NodeId, kind: CandidateKind) -> Vec<u32> {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![s];
    seen[s.index()] = true;
    let mut edges = Vec::new();
    while let Some(u) = stack.pop() {
        for e in g.active_out_edges(u) {
            let edge = g.edge(e);
            if edge.p <= 0.0 {
                continue;
            }
            edges.push(e.0);
            if !seen[edge.dst.index()] && g.is_node_alive(edge.dst) {
                seen[edge.dst.index()] = true;
                stack.push(edge.dst);
            }
        }
    }
    match kind {
        CandidateKind::Node => g
            .node_candidates()
            .into_iter()
            .filter(|v| seen[v.index()])
            .map(|v| v.0)
            .collect(),
        CandidateKind::Edge => {
            edges.sort_unstable();
            edges
        }
    }
}

/// Optimal blockers by exhaustive search, scored with the exact spread
/// oracle. See [`exact_search_with`].
pub fn exact_search(
    g: &ProbGraph,
    s: NodeId,
    b: usize,
    kind: CandidateKind,
    cap: u128,
) -> Result<BlockResult> {
    exact_search_with(g, s, b, kind, cap, SearchEval::Exact)
}

/// Exhaustive search over every subset of size `min(b, |pool|)`, where the
/// pool holds the candidates reachable from `s`. The lexicographically
/// smallest optimum wins.
pub fn exact_search_with(
    g: &ProbGraph,
    s: NodeId,
    b: usize,
    kind: CandidateKind,
    cap: u128,
    eval: SearchEval,
) -> Result<BlockResult> {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Exact, kind, b);
    let pool = reachable_pool(g, s, kind);
    let k = b.min(pool.len());
    let subsets = binomial(pool.len(), k);
    if subsets > cap {
        return Err(Error::SearchInfeasible { subsets, cap });
    }
    let mut combos: Vec<Vec<u32>> = Vec::with_capacity(subsets as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        combos.push(idx.iter().map(|&i| pool[i]).collect());
        if !next_combination(&mut idx, pool.len()) {
            break;
        }
    }
    let values: Vec<f64> = match eval {
        SearchEval::Exact => combos
            .par_iter()
            .map(|c| exact_spread(&block(g, kind, c)?, s))
            .collect::<Result<_>>()?,
        SearchEval::Mcs { rounds, seed } => {
            if rounds == 0 {
                return Err(Error::ZeroRounds);
            }
            combos
                .par_iter()
                .map_init(
                    || Explorer::new(g.n()),
                    |ex, c| {
                        let blocked = block(g, kind, c)?;
                        let total: u64 = (0..rounds)
                            .map(|i| {
                                ex.count_reachable(&blocked, seed.round(i), s, Exclude::Nothing)
                                    as u64
                            })
                            .sum();
                        Ok(total as f64 / rounds as f64)
                    },
                )
                .collect::<Result<_>>()?
        }
    };
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - 1e-12 {
            best = i;
        }
    }
    result.rounds_used = subsets as u64;
    result.residual_spread = Some(values[best] + g.seed_offset() as f64);
    result.blockers.members = std::mem::take(&mut combos[best]);
    Ok(result.finish(started))
}
