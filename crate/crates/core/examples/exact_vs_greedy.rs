//! Greedy replace against exhaustive search on small extracted subgraphs,
//! each seeded at its highest out-degree node.
//! Residuals of both blocker sets are scored on the same Monte-Carlo
//! worlds, or exactly when the subgraph is small enough.

use imin::bench::{extract_subgraph, ExtractTarget};
use imin::synth::random_graph;
use imin::world::{uncertain_edge_count, DEFAULT_EXACT_CAP};
use imin::*;

fn main() -> imin::Result<()> {
    let big = random_graph(3_000, 12_000, 0.1, 0.6, MasterSeed(1))?;
    for round in 0..3u64 {
        let sub = extract_subgraph(&big, ExtractTarget::Nodes(25), MasterSeed(10 + round))?;
        // seed the best-connected node so the blockers have work to do
        let hub = (0..sub.n() as u32)
            .map(NodeId)
            .max_by_key(|&v| (sub.out_degree(v), std::cmp::Reverse(v)))
            .expect("non-empty subgraph");
        let g = sub.with_seeds([hub])?.unify_seeds()?;
        let s = g.unified_seed()?;
        let exact_ok = uncertain_edge_count(&g, s) <= DEFAULT_EXACT_CAP;
        let eval = if exact_ok {
            SearchEval::Exact
        } else {
            SearchEval::Mcs {
                rounds: 2_000,
                seed: MasterSeed(7),
            }
        };
        let score = |set: &BlockSet| -> imin::Result<f64> {
            let h = set.apply(&g)?;
            let v = if exact_ok {
                exact_spread(&h, s)?
            } else {
                mcs_spread(&h, s, 2_000, MasterSeed(7))?.mean
            };
            Ok(v + g.seed_offset() as f64)
        };
        println!(
            "subgraph {round}: {} nodes, {} edges",
            g.n(),
            g.active_edge_count()
        );
        for b in 1..=3 {
            let gr = greedy_replace(&g, s, b, &GreedyConfig::new(5_000, MasterSeed(b as u64)))?;
            let ex = exact_search_with(&g, s, b, CandidateKind::Node, 5_000_000, eval)?;
            let ratio = score(&ex.blockers)? / score(&gr.blockers)?;
            println!(
                "  b = {b}: exact {:.4}, greedy replace {:.4}, ratio {:.2}%",
                score(&ex.blockers)?,
                score(&gr.blockers)?,
                100.0 * ratio
            );
        }
    }
    Ok(())
}
