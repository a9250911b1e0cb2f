//! Linear threshold model: weighted-cascade probabilities, worlds with at
//! most one live in-edge per node, and node blocking.

use imin::io::assign_wc;
use imin::synth::gnm_pairs;
use imin::*;

fn main() -> imin::Result<()> {
    let n = 500;
    let pairs = gnm_pairs(n, 3_000, MasterSeed(1))?;
    let g = ProbGraph::new(n, pairs.iter().map(|&(u, v)| (u, v, 0.0)))?;
    let g = assign_wc(&g)
        .with_model(Model::Lt)
        .with_seeds([NodeId(0), NodeId(1), NodeId(2)])?;
    assert!(g.validate().is_empty());
    let g = g.unify_seeds()?;
    let s = g.unified_seed()?;

    let w = sample_world(&g, MasterSeed(2).round(0));
    let max_in = w.in_degrees().into_iter().max().unwrap_or(0);
    println!(
        "one world: {} live edges, max live in-degree {max_in}",
        w.live_edge_count()
    );
    let tree = build_lt(&w, s)?;
    println!(
        "nodes reached in that world: {}",
        tree.len() + g.seed_offset()
    );

    let spread = |b: &BlockSet| -> imin::Result<f64> {
        Ok(mcs_spread(&b.apply(&g)?, s, 20_000, MasterSeed(3))?.mean + g.seed_offset() as f64)
    };
    println!(
        "base spread {:.3}",
        spread(&BlockSet::new(CandidateKind::Node, 0))?
    );
    let cfg = GreedyConfig::new(10_000, MasterSeed(4));
    for b in [1, 5, 10] {
        let r = advanced_greedy(&g, s, b, &CandidatePool::all_nodes(&g), &cfg)?;
        println!("b = {b:>2}: residual {:.3}", spread(&r.blockers)?);
    }
    Ok(())
}
