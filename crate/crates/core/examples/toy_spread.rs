//! Exact expected spreads on the nine-node example graph, before and
//! after blocking.

use imin::{exact_spread, toy_graph, NodeId, ProbGraph};

fn main() -> imin::Result<()> {
    let g = toy_graph().unify_seeds()?;
    let s = g.unified_seed()?;
    let id = |l: u64| g.node_by_label(l).unwrap();
    let spread =
        |h: &ProbGraph| -> imin::Result<f64> { Ok(exact_spread(h, s)? + h.seed_offset() as f64) };

    println!("base spread            {:.4}", spread(&g)?);
    for blockers in [
        vec![5],
        vec![2],
        vec![3],
        vec![2, 4],
        vec![2, 3],
        vec![2, 3, 4],
    ] {
        let nodes: Vec<NodeId> = blockers.iter().map(|&l| id(l)).collect();
        println!(
            "block nodes {:<10} {:.4}",
            format!("{blockers:?}"),
            spread(&g.remove_nodes(&nodes)?)?
        );
    }
    for (a, b) in [(5, 9), (5, 3), (5, 8)] {
        let h = g.remove_edges(&[(id(a), id(b))])?;
        println!("block edge ({a},{b})       {:.4}", spread(&h)?);
    }
    Ok(())
}
