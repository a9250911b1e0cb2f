//! Greedy replace on the example graph, with the trace of every round.

use imin::minimizers::Phase;
use imin::{greedy_replace, toy_graph, GreedyConfig, MasterSeed, NodeId};

fn main() -> imin::Result<()> {
    let g = toy_graph().unify_seeds()?;
    let s = g.unified_seed()?;
    for b in 1..=3 {
        let mut cfg = GreedyConfig::new(10_000, MasterSeed(5));
        cfg.fill_budget = b == 3;
        let r = greedy_replace(&g, s, b, &cfg)?;
        println!("b = {b}");
        for t in &r.trace {
            let phase = match t.phase {
                Phase::Greedy => "greedy",
                Phase::Replace => "replace",
                Phase::Fill => "fill",
            };
            println!(
                "  {phase:<8} v{} (decrease {:.3})",
                g.label(NodeId(t.candidate)),
                t.delta
            );
        }
        let labels: Vec<u64> = r
            .blockers
            .members
            .iter()
            .map(|&c| g.label(NodeId(c)))
            .collect();
        let residual = imin::exact_spread(&r.blockers.apply(&g)?, s)?;
        println!("  blockers {labels:?}, residual spread {residual:.4}");
        for w in &r.warnings {
            println!("  note: {w}");
        }
    }
    Ok(())
}
