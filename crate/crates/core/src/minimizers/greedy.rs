use std::time::Instant;

use rayon::prelude::*;

use super::{
    block, Algorithm, BlockResult, CandidatePool, GreedyConfig, McsMode, Phase, RoundTrace,
};
use crate::decrease::{desc, desce, CandidateKind, DecreaseTable};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, ProbGraph};
use crate::world::{Exclude, Explorer};

pub(crate) fn decrease_table(
    g: &ProbGraph,
    s: NodeId,
    kind: CandidateKind,
    cfg: &GreedyConfig,
    round: usize,
) -> Result<DecreaseTable> {
    match kind {
        CandidateKind::Node => desc(g, s, cfg.theta, cfg.round_stream(round)),
        CandidateKind::Edge => desce(g, s, cfg.theta, cfg.round_stream(round)),
    }
}

/// Runs greedy rounds over `pool`, extending `result.blockers` until it
/// holds `target` members. `round` numbers the world streams.
#[allow(clippy::too_many_arguments)]
pub(crate) fn greedy_rounds(
    g: &ProbGraph,
    s: NodeId,
    pool: &CandidatePool,
    target: usize,
    cfg: &GreedyConfig,
    round: &mut usize,
    phase: Phase,
    result: &mut BlockResult,
) -> Result<()> {
    let kind = pool.kind;
    while result.blockers.len() < target {
        if cfg.expired() {
            result.timed_out = true;
            return Ok(());
        }
        let current = block(g, kind, &result.blockers.members)?;
        let table = decrease_table(&current, s, kind, cfg, *round)?;
        *round += 1;
        result.rounds_used += cfg.theta;
        let remaining: Vec<u32> = pool
            .members
            .iter()
            .copied()
            .filter(|c| !result.blockers.contains(*c))
            .collect();
        let Some(x) = table.argmax(remaining.iter().copied()) else {
            result.warnings.push(format!(
                "candidate pool exhausted after {} blockers",
                result.blockers.len()
            ));
            return Ok(());
        };
        result.trace.push(RoundTrace {
            phase,
            candidate: x,
            delta: table.raw(x) as f64 / cfg.theta as f64,
            raw: Some(table.raw(x)),
            table: cfg
                .record_tables
                .then(|| remaining.iter().map(|&c| (c, table.raw(c))).collect()),
        });
        result.blockers.members.push(x);
    }
    Ok(())
}

/// Greedy selection driven by dominator-tree decrease tables: each round
/// recomputes the table on the graph with the committed blockers removed
/// and commits the best remaining pool member.
pub fn advanced_greedy(
    g: &ProbGraph,
    s: NodeId,
    b: usize,
    pool: &CandidatePool,
    cfg: &GreedyConfig,
) -> Result<BlockResult> {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Ag, pool.kind, b);
    if b == 0 {
        return Ok(result.finish(started));
    }
    if pool.members.is_empty() {
        return Err(Error::InvalidArgument("candidate pool is empty".into()));
    }
    let target = if b > pool.members.len() {
        result.warnings.push(format!(
            "budget {b} exceeds the {} candidates; blocking all of them",
            pool.members.len()
        ));
        pool.members.len()
    } else {
        b
    };
    let mut round = 0;
    greedy_rounds(
        g,
        s,
        pool,
        target,
        cfg,
        &mut round,
        Phase::Greedy,
        &mut result,
    )?;
    Ok(result.finish(started))
}

fn exclusion(kind: CandidateKind, c: u32) -> Exclude {
    match kind {
        CandidateKind::Node => Exclude::Node(NodeId(c)),
        CandidateKind::Edge => Exclude::Edge(EdgeId(c)),
    }
}

/// Greedy selection where every candidate's decrease is estimated by
/// Monte-Carlo simulation of the blocked graph.
pub fn baseline_greedy(
    g: &ProbGraph,
    s: NodeId,
    b: usize,
    kind: CandidateKind,
    cfg: &GreedyConfig,
) -> Result<BlockResult> {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Bg, kind, b);
    if b == 0 {
        return Ok(result.finish(started));
    }
    if cfg.theta == 0 {
        return Err(Error::ZeroRounds);
    }
    let candidates = CandidatePool::of_kind(g, kind).members;
    let target = if b > candidates.len() {
        result.warnings.push(format!(
            "budget {b} exceeds the {} candidates; blocking all of them",
            candidates.len()
        ));
        candidates.len()
    } else {
        b
    };
    let n = g.n();
    let r = cfg.theta;
    for round in 0..target {
        if cfg.expired() {
            result.timed_out = true;
            break;
        }
        let current = block(g, kind, &result.blockers.members)?;
        let stream = cfg.round_stream(round);
        let remaining: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|c| !result.blockers.contains(*c))
            .collect();

        let simulate =
            |ex: &mut Explorer, stream: crate::rng::MasterSeed, exclude: Exclude| -> u64 {
                (0..r)
                    .map(|i| ex.count_reachable(&current, stream.round(i), s, exclude) as u64)
                    .sum()
            };

        let (x, delta, raw, table) = match cfg.mcs_mode {
            McsMode::Crn => {
                let base = simulate(&mut Explorer::new(n), stream, Exclude::Nothing);
                let decreases: Vec<(u32, u64)> = remaining
                    .par_iter()
                    .map_init(
                        || Explorer::new(n),
                        |ex, &c| (c, base - simulate(ex, stream, exclusion(kind, c))),
                    )
                    .collect();
                let mut best = decreases[0];
                for &(c, d) in &decreases[1..] {
                    if d > best.1 {
                        best = (c, d);
                    }
                }
                (
                    best.0,
                    best.1 as f64 / r as f64,
                    Some(best.1),
                    cfg.record_tables.then_some(decreases),
                )
            }
            McsMode::Fresh => {
                let base = simulate(&mut Explorer::new(n), stream.derive(0), Exclude::Nothing)
                    as f64
                    / r as f64;
                let decreases: Vec<(u32, f64)> = remaining
                    .par_iter()
                    .map_init(
                        || Explorer::new(n),
                        |ex, &c| {
                            let sub = stream.derive(c as u64 + 1);
                            (
                                c,
                                base - simulate(ex, sub, exclusion(kind, c)) as f64 / r as f64,
                            )
                        },
                    )
                    .collect();
                let mut best = decreases[0];
                for &(c, d) in &decreases[1..] {
                    if d > best.1 {
                        best = (c, d);
                    }
                }
                (best.0, best.1, None, None)
            }
        };
        result.rounds_used += r * (remaining.len() as u64 + 1);
        result.trace.push(RoundTrace {
            phase: Phase::Greedy,
            candidate: x,
            delta,
            raw,
            table,
        });
        result.blockers.members.push(x);
    }
    Ok(result.finish(started))
}
