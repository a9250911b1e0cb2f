//! Samples one live-edge world of the example graph and prints its
//! dominator tree together with the subtree sizes, which are the numbers
//! of nodes each node cuts off from the seed in that world.

use imin::{build_lengauer_tarjan, sample_world, subtree_sizes, toy_graph, MasterSeed, NodeId};

fn main() {
    let g = toy_graph();
    let s = g.seeds()[0];
    let seed = MasterSeed(
        std::env::args()
            .nth(1)
            .and_then(|a| a.parse().ok())
            .unwrap_or(3),
    );
    let world = sample_world(&g, seed.round(0));
    let label = |v: NodeId| g.label(v);

    println!("live edges:");
    for e in world.live_edges() {
        let edge = g.edge(*e);
        println!("  {} -> {}", label(edge.src), label(edge.dst));
    }
    let tree = build_lengauer_tarjan(&world, s);
    let sizes = subtree_sizes(&tree);
    println!("node  idom  subtree");
    for v in tree.nodes() {
        let idom = tree
            .idom(v)
            .map(|d| label(d).to_string())
            .unwrap_or_else(|| "-".into());
        println!("{:>4}  {:>4}  {:>7}", label(v), idom, sizes[v.index()]);
    }
}
