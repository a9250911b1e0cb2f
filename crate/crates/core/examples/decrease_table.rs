//! Decrease tables for node and edge blocking on the example graph.

use imin::{desc, desce, toy_graph, MasterSeed};

fn main() -> imin::Result<()> {
    let g = toy_graph().unify_seeds()?;
    let s = g.unified_seed()?;
    let theta = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(100_000);

    println!("# nodes, theta = {theta}");
    print!("{}", desc(&g, s, theta, MasterSeed(1))?.to_csv(&g));
    println!("# edges, theta = {theta}");
    print!("{}", desce(&g, s, theta, MasterSeed(1))?.to_csv(&g));
    Ok(())
}
