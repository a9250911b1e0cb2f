//! Brute-force oracles shared by the integration tests. They enumerate
//! the live-edge distribution directly and share no code with the
//! library's estimators.

#![allow(dead_code)]

use std::collections::VecDeque;

use imin::synth::gnp_pairs;
use imin::{EdgeId, MasterSeed, Model, NodeId, ProbGraph};
use rand::Rng;

/// Nodes reachable from `seeds` over the edges for which `live` holds.
fn reach(g: &ProbGraph, seeds: &[NodeId], live: &dyn Fn(EdgeId) -> bool) -> usize {
    reached(g, seeds, live).iter().filter(|&&r| r).count()
}

fn reached(g: &ProbGraph, seeds: &[NodeId], live: &dyn Fn(EdgeId) -> bool) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut q = VecDeque::new();
    for &s in seeds {
        if g.is_node_alive(s) && !seen[s.index()] {
            seen[s.index()] = true;
            q.push_back(s);
        }
    }
    while let Some(u) = q.pop_front() {
        for e in 0..g.edge_count() as u32 {
            let e = EdgeId(e);
            let edge = g.edge(e);
            if edge.src != u || !g.is_edge_active(e) || !live(e) || seen[edge.dst.index()] {
                continue;
            }
            seen[edge.dst.index()] = true;
            q.push_back(edge.dst);
        }
    }
    seen
}

/// IC spread by summing over all `2^k` states of the uncertain edges, plus
/// the seed offset.
pub fn brute_ic(g: &ProbGraph, seeds: &[NodeId]) -> f64 {
    brute_ic_counting(g, seeds, &|_| true) + g.seed_offset() as f64
}

/// Expected number of reached nodes for which `counted` holds, under IC.
pub fn brute_ic_counting(g: &ProbGraph, seeds: &[NodeId], counted: &dyn Fn(NodeId) -> bool) -> f64 {
    let active: Vec<EdgeId> = (0..g.edge_count() as u32)
        .map(EdgeId)
        .filter(|&e| g.is_edge_active(e))
        .collect();
    let uncertain: Vec<EdgeId> = active
        .iter()
        .copied()
        .filter(|&e| g.edge(e).p > 0.0 && g.edge(e).p < 1.0)
        .collect();
    assert!(
        uncertain.len() <= 20,
        "oracle limited to 20 uncertain edges"
    );
    let mut total = 0.0;
    for mask in 0u64..(1 << uncertain.len()) {
        let mut weight = 1.0;
        let mut state = vec![false; g.edge_count()];
        for &e in &active {
            state[e.index()] = g.edge(e).p >= 1.0;
        }
        for (bit, &e) in uncertain.iter().enumerate() {
            let p = g.edge(e).p;
            if mask >> bit & 1 == 1 {
                state[e.index()] = true;
                weight *= p;
            } else {
                weight *= 1.0 - p;
            }
        }
        let r = reached(g, seeds, &|e| state[e.index()]);
        let c = (0..g.n())
            .filter(|&v| r[v] && counted(NodeId(v as u32)))
            .count();
        total += weight * c as f64;
    }
    total
}

/// LT spread by enumerating every node's choice of at most one live
/// in-edge, plus the seed offset.
pub fn brute_lt(g: &ProbGraph, seeds: &[NodeId]) -> f64 {
    let nodes: Vec<NodeId> = (0..g.n() as u32)
        .map(NodeId)
        .filter(|&v| g.is_node_alive(v))
        .collect();
    // options per node: (edge or none, probability)
    let options: Vec<Vec<(Option<EdgeId>, f64)>> = nodes
        .iter()
        .map(|&v| {
            let mut opts: Vec<(Option<EdgeId>, f64)> = (0..g.edge_count() as u32)
                .map(EdgeId)
                .filter(|&e| g.edge(e).dst == v && g.is_edge_active(e) && g.edge(e).p > 0.0)
                .map(|e| (Some(e), g.edge(e).p))
                .collect();
            let rest = 1.0 - opts.iter().map(|o| o.1).sum::<f64>();
            if rest > 1e-15 {
                opts.push((None, rest));
            }
            opts
        })
        .collect();
    let combos: f64 = options.iter().map(|o| o.len() as f64).product();
    assert!(combos <= 5e6, "oracle limited to 5e6 worlds");
    let mut idx = vec![0usize; nodes.len()];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        let mut state = vec![false; g.edge_count()];
        for (i, o) in options.iter().enumerate() {
            let (e, p) = o[idx[i]];
            weight *= p;
            if let Some(e) = e {
                state[e.index()] = true;
            }
        }
        total += weight * reach(g, seeds, &|e| state[e.index()]) as f64;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return total + g.seed_offset() as f64;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn brute_spread(g: &ProbGraph, seeds: &[NodeId]) -> f64 {
    match g.model() {
        Model::Ic => brute_ic(g, seeds),
        Model::Lt => brute_lt(g, seeds),
    }
}

/// Exact decrease from blocking each non-seed node, indexed by node id.
pub fn brute_node_decreases(g: &ProbGraph, s: NodeId) -> Vec<Option<f64>> {
    let base = brute_spread(g, &[s]);
    (0..g.n() as u32)
        .map(NodeId)
        .map(|v| {
            (v != s && g.is_node_alive(v))
                .then(|| base - brute_spread(&g.remove_nodes(&[v]).unwrap(), &[s]))
        })
        .collect()
}

/// Exact decrease from blocking each active edge, indexed by edge id.
pub fn brute_edge_decreases(g: &ProbGraph, s: NodeId) -> Vec<Option<f64>> {
    let base = brute_spread(g, &[s]);
    (0..g.edge_count() as u32)
        .map(EdgeId)
        .map(|e| {
            g.is_edge_active(e)
                .then(|| base - brute_spread(&g.remove_edge_ids(&[e]).unwrap(), &[s]))
        })
        .collect()
}

/// Immediate dominators from the definition: `d` dominates `v` when `v`
/// is unreachable from `root` once `d` is deleted.
pub fn definitional_idom(n: usize, pairs: &[(u32, u32)], root: u32) -> Vec<Option<u32>> {
    let reach_without = |skip: Option<u32>| {
        let mut seen = vec![false; n];
        if skip == Some(root) {
            return seen;
        }
        seen[root as usize] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(a, b) in pairs {
                if a == u && Some(b) != skip && !seen[b as usize] {
                    seen[b as usize] = true;
                    stack.push(b);
                }
            }
        }
        seen
    };
    let reachable = reach_without(None);
    let without: Vec<Vec<bool>> = (0..n as u32).map(|d| reach_without(Some(d))).collect();
    // strict dominators of v
    let sdoms = |v: u32| -> Vec<u32> {
        (0..n as u32)
            .filter(|&d| d != v && reachable[d as usize] && !without[d as usize][v as usize])
            .collect()
    };
    (0..n as u32)
        .map(|v| {
            if v == root || !reachable[v as usize] {
                return None;
            }
            let ds = sdoms(v);
            // the strict dominator dominated by all the others
            ds.iter().copied().find(|&d| {
                ds.iter()
                    .all(|&o| o == d || !without[o as usize][d as usize])
            })
        })
        .collect()
}

/// Random IC graph on `n` nodes with edge density `density` and
/// probabilities uniform in `[0.05, 0.95)`.
pub fn random_ic(n: usize, density: f64, seed: MasterSeed) -> ProbGraph {
    let pairs = gnp_pairs(n, density, seed.derive(0));
    let mut rng = seed.derive(1).rng();
    ProbGraph::new(
        n,
        pairs
            .iter()
            .map(|&(u, v)| (u, v, rng.random_range(0.05..0.95))),
    )
    .unwrap()
}

/// Random LT graph whose in-sums stay below one: every in-edge of `v`
/// receives a random share of a random total mass.
pub fn random_lt(n: usize, density: f64, seed: MasterSeed) -> ProbGraph {
    let pairs = gnp_pairs(n, density, seed.derive(0));
    let mut rng = seed.derive(1).rng();
    let mut indeg = vec![0usize; n];
    for &(_, v) in &pairs {
        indeg[v as usize] += 1;
    }
    let mass: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..1.0)).collect();
    let edges: Vec<(u32, u32, f64)> = pairs
        .iter()
        .map(|&(u, v)| {
            let share = mass[v as usize] / indeg[v as usize] as f64;
            (u, v, share * rng.random_range(0.5..1.0))
        })
        .collect();
    ProbGraph::new(n, edges).unwrap().with_model(Model::Lt)
}

/// The toy graph's node with label `l`.
pub fn toy_node(g: &ProbGraph, l: u64) -> NodeId {
    g.node_by_label(l).unwrap()
}
