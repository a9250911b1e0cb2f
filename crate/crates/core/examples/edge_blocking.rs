//! Edge blocking with advanced greedy versus the two heuristics on a
//! random trivalency graph.

use imin::bench::blocker_labels;
use imin::io::{assign_tr, random_seeds};
use imin::synth::random_graph;
use imin::*;

fn main() -> imin::Result<()> {
    let g = random_graph(2_000, 10_000, 0.0, 1.0, MasterSeed(1))?;
    let g = assign_tr(&g, MasterSeed(2));
    let seeds = random_seeds(&g, 10, MasterSeed(3))?;
    let g = g.with_seeds(seeds)?.unify_seeds()?;
    let s = g.unified_seed()?;
    let b = 20;
    let eval = |set: &BlockSet| -> imin::Result<f64> {
        Ok(mcs_spread(&set.apply(&g)?, s, 20_000, MasterSeed(99))?.mean + g.seed_offset() as f64)
    };

    println!(
        "base spread {:.3}",
        eval(&BlockSet::new(CandidateKind::Edge, 0))?
    );
    let cfg = GreedyConfig::new(5_000, MasterSeed(4));
    let ag = advanced_greedy(&g, s, b, &CandidatePool::all_edges(&g), &cfg)?;
    let od = heuristic_outdegree(&g, b, CandidateKind::Edge);
    let rd = heuristic_random(&g, b, CandidateKind::Edge, MasterSeed(5));
    for r in [&ag, &od, &rd] {
        println!(
            "{:<7} residual {:.3}  ({:.0} ms)",
            r.algorithm.to_string(),
            eval(&r.blockers)?,
            r.wall_time_ms
        );
    }
    println!(
        "first advanced-greedy edges: {:?}",
        &blocker_labels(&g, &ag.blockers)[..5]
    );
    Ok(())
}
