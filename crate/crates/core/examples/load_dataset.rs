//! Loads a SNAP-style edge list and prints its statistics under both
//! probability models.
//!
//! cargo run --example load_dataset -- path/to/edges.txt [--undirected]

use std::path::PathBuf;

use imin::io::{assign_tr, assign_wc, read_edge_list, stats};
use imin::{MasterSeed, Model};

fn main() -> imin::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy.edges")));
    let directed = args.next().as_deref() != Some("--undirected");
    let list = read_edge_list(&path, directed)?;
    println!(
        "{} ({})",
        path.display(),
        if directed { "directed" } else { "undirected" }
    );
    println!("self-loops dropped: {}", list.self_loops_dropped);
    let g = list.into_graph()?;
    let st = stats(&g);
    println!(
        "n = {}, m = {}, d_avg = {:.3}, d_max = {}",
        st.n, st.m, st.d_avg, st.d_max
    );

    let tr = assign_tr(&g, MasterSeed(0));
    let mean_p: f64 = tr.edges().iter().map(|e| e.p).sum::<f64>() / tr.edge_count().max(1) as f64;
    println!(
        "TR mean probability {mean_p:.4}; IC-valid: {}",
        tr.validate().is_empty()
    );
    let wc = assign_wc(&g).with_model(Model::Lt);
    println!("WC LT-valid: {}", wc.validate().is_empty());
    Ok(())
}
