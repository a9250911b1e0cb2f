//! Seeded random digraphs for tests, examples and benchmarks.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::ProbGraph;
use crate::rng::MasterSeed;

/// `m` distinct directed pairs without self-loops, drawn uniformly.
pub fn gnm_pairs(n: usize, m: usize, seed: MasterSeed) -> Result<Vec<(u32, u32)>> {
    let max = n.saturating_mul(n.saturating_sub(1));
    if m > max {
        return Err(Error::InvalidArgument(format!(
            "{m} edges do not fit in a simple digraph on {n} nodes"
        )));
    }
    let mut rng = seed.rng();
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v && seen.insert((u, v)) {
            out.push((u, v));
        }
    }
    Ok(out)
}

/// Every ordered pair `(u, v)`, `u != v`, independently with probability `density`.
pub fn gnp_pairs(n: usize, density: f64, seed: MasterSeed) -> Vec<(u32, u32)> {
    let mut rng = seed.rng();
    let mut out = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.random::<f64>() < density {
                out.push((u, v));
            }
        }
    }
    out
}

/// Graph over `pairs` whose probabilities come from `p`, called once per
/// edge in order.
pub fn with_probs(n: usize, pairs: &[(u32, u32)], mut p: impl FnMut() -> f64) -> Result<ProbGraph> {
    ProbGraph::new(n, pairs.iter().map(|&(u, v)| (u, v, p())))
}

/// G(n, m) digraph with probabilities uniform in `[lo, hi)`.
pub fn random_graph(n: usize, m: usize, lo: f64, hi: f64, seed: MasterSeed) -> Result<ProbGraph> {
    let pairs = gnm_pairs(n, m, seed.derive(0))?;
    let mut rng = seed.derive(1).rng();
    with_probs(n, &pairs, || rng.random_range(lo..hi))
}
