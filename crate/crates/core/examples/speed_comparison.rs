//! Wall time of advanced greedy against the Monte-Carlo baseline on the
//! same worlds. Both must pick the same blockers.
//!
//! cargo run --release --example speed_comparison -- [nodes] [edges]

use std::time::Instant;

use imin::io::{assign_tr, random_seeds};
use imin::synth::random_graph;
use imin::*;

fn main() -> imin::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(10_000);
    let m = args.next().unwrap_or(100_000);
    let g = assign_tr(&random_graph(n, m, 0.0, 1.0, MasterSeed(1))?, MasterSeed(2));
    let seeds = random_seeds(&g, 10, MasterSeed(3))?;
    let g = g.with_seeds(seeds)?.unify_seeds()?;
    let s = g.unified_seed()?;
    let cfg = GreedyConfig::new(200, MasterSeed(4));

    let t = Instant::now();
    let ag = advanced_greedy(&g, s, 5, &CandidatePool::all_nodes(&g), &cfg)?;
    let ag_time = t.elapsed();
    let t = Instant::now();
    let bg = baseline_greedy(&g, s, 5, CandidateKind::Node, &cfg)?;
    let bg_time = t.elapsed();

    assert_eq!(ag.blockers, bg.blockers);
    println!("n = {n}, m = {m}, b = 5, theta = r = 200");
    println!("advanced greedy {ag_time:>10.2?}");
    println!("baseline greedy {bg_time:>10.2?}");
    println!(
        "speedup         {:>10.0}x",
        bg_time.as_secs_f64() / ag_time.as_secs_f64()
    );
    Ok(())
}
