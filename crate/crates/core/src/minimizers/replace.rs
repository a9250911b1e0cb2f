use std::time::Instant;

use super::greedy::{decrease_table, greedy_rounds};
use super::{Algorithm, BlockResult, CandidatePool, GreedyConfig, Phase, RoundTrace};
use crate::decrease::CandidateKind;
use crate::error::Result;
use crate::graph::{NodeId, ProbGraph};

/// Greedy-replace node blocking.
///
/// Phase one greedily picks up to `b` blockers among the seed's
/// out-neighbors. Phase two revisits them in reverse insertion order:
/// each one is released, the decrease table is recomputed, and the best
/// node overall takes its place. The pass stops as soon as a released
/// blocker wins its own slot back.
pub fn greedy_replace(
    g: &ProbGraph,
    s: NodeId,
    b: usize,
    cfg: &GreedyConfig,
) -> Result<BlockResult> {
    let started = Instant::now();
    let mut result = BlockResult::empty(Algorithm::Gr, CandidateKind::Node, b);
    if b == 0 {
        return Ok(result.finish(started));
    }
    let out: Vec<u32> = g
        .out_neighbors(s)
        .into_iter()
        .filter(|&v| !g.is_seed(v))
        .map(|v| v.0)
        .collect();
    if out.is_empty() {
        result
            .warnings
            .push("seed has no out-neighbors; nothing to block".into());
        return Ok(result.finish(started));
    }

    let mut round = 0;
    let outer_pool = CandidatePool {
        kind: CandidateKind::Node,
        members: out.clone(),
    };
    greedy_rounds(
        g,
        s,
        &outer_pool,
        out.len().min(b),
        cfg,
        &mut round,
        Phase::Greedy,
        &mut result,
    )?;
    if result.timed_out {
        return Ok(result.finish(started));
    }

    let initial = result.blockers.members.clone();
    for &u in initial.iter().rev() {
        if cfg.expired() {
            result.timed_out = true;
            return Ok(result.finish(started));
        }
        let at = result
            .blockers
            .members
            .iter()
            .position(|&m| m == u)
            .expect("phase-one blocker is still committed");
        result.blockers.members.remove(at);
        let current = g.remove_nodes(
            &result
                .blockers
                .members
                .iter()
                .map(|&m| NodeId(m))
                .collect::<Vec<_>>(),
        )?;
        let table = decrease_table(&current, s, CandidateKind::Node, cfg, round)?;
        round += 1;
        result.rounds_used += cfg.theta;
        let candidates: Vec<u32> = current.node_candidates().into_iter().map(|v| v.0).collect();
        let x = table
            .argmax(candidates.iter().copied())
            .expect("released blocker is always a candidate");
        result.trace.push(RoundTrace {
            phase: Phase::Replace,
            candidate: x,
            delta: table.raw(x) as f64 / cfg.theta as f64,
            raw: Some(table.raw(x)),
            table: cfg
                .record_tables
                .then(|| candidates.iter().map(|&c| (c, table.raw(c))).collect()),
        });
        result.blockers.members.insert(at, x);
        if x == u {
            break;
        }
    }

    if cfg.fill_budget && result.blockers.len() < b {
        let pool = CandidatePool::all_nodes(g);
        let target = b.min(pool.members.len());
        greedy_rounds(
            g,
            s,
            &pool,
            target,
            cfg,
            &mut round,
            Phase::Fill,
            &mut result,
        )?;
    } else if result.blockers.len() < b {
        result.warnings.push(format!(
            "seed has {} out-neighbors; returning {} blockers for budget {b}",
            out.len(),
            result.blockers.len()
        ));
    }
    Ok(result.finish(started))
}
