mod common;

use common::*;
use imin::decrease::{edge_world_cut_sizes, world_node_contributions};
use imin::synth::gnp_pairs;
use imin::world::{exact_spread_with_cap, uncertain_edge_count};
use imin::*;

fn seeded(g: ProbGraph) -> (ProbGraph, NodeId) {
    (g.with_seeds([NodeId(0)]).unwrap(), NodeId(0))
}

#[test]
fn exact_spread_matches_enumeration_ic() {
    for i in 0..40 {
        let (g, s) = seeded(random_ic(6 + i % 3, 0.3, MasterSeed(100 + i as u64)));
        if uncertain_edge_count(&g, s) > 16 || g.edge_count() > 18 {
            continue;
        }
        let a = exact_spread(&g, s).unwrap();
        let b = brute_ic(&g, &[s]);
        assert!((a - b).abs() < 1e-9, "graph {i}: {a} vs {b}");
    }
}

#[test]
fn exact_spread_matches_enumeration_lt() {
    for i in 0..40 {
        let (g, s) = seeded(random_lt(5 + i % 3, 0.4, MasterSeed(200 + i as u64)));
        let a = exact_spread(&g, s).unwrap();
        let b = brute_lt(&g, &[s]);
        assert!((a - b).abs() < 1e-9, "graph {i}: {a} vs {b}");
    }
}

#[test]
fn desc_tracks_exact_decreases_under_lt() {
    for i in 0..10 {
        let (g, s) = seeded(random_lt(7, 0.4, MasterSeed(300 + i)));
        let t = desc(&g, s, 20_000, MasterSeed(i)).unwrap();
        for (v, want) in brute_node_decreases(&g, s).into_iter().enumerate() {
            if let Some(want) = want {
                let got = t.delta(v as u32).unwrap();
                assert!(
                    (got - want).abs() < 0.1,
                    "graph {i} node {v}: {got} vs {want}"
                );
            }
        }
        let t = desce(&g, s, 20_000, MasterSeed(i)).unwrap();
        for (e, want) in brute_edge_decreases(&g, s).into_iter().enumerate() {
            if let Some(want) = want {
                let got = t.delta(e as u32).unwrap();
                assert!(
                    (got - want).abs() < 0.1,
                    "graph {i} edge {e}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn relabeling_nodes_permutes_the_table() {
    // IC coins are keyed by edge id, so a node permutation that keeps the
    // edge order sees exactly the same worlds.
    for i in 0..10u64 {
        let n = 12;
        let g = random_ic(n, 0.25, MasterSeed(400 + i));
        let perm: Vec<u32> = {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p[1..].reverse();
            p
        };
        let h = ProbGraph::new(
            n,
            g.edges()
                .iter()
                .map(|e| (perm[e.src.index()], perm[e.dst.index()], e.p)),
        )
        .unwrap();
        let (g, s) = seeded(g);
        let (h, _) = seeded(h);
        let a = desc(&g, s, 3_000, MasterSeed(i)).unwrap();
        let b = desc(&h, s, 3_000, MasterSeed(i)).unwrap();
        for (v, &pv) in perm.iter().enumerate().skip(1) {
            assert_eq!(a.raw(v as u32), b.raw(pv), "graph {i} node {v}");
        }
        let ae = desce(&g, s, 3_000, MasterSeed(i)).unwrap();
        let be = desce(&h, s, 3_000, MasterSeed(i)).unwrap();
        assert_eq!(ae.raw_counts, be.raw_counts);
    }
}

#[test]
fn tables_are_sums_of_world_contributions() {
    let g = toy_graph().unify_seeds().unwrap();
    let s = g.unified_seed().unwrap();
    let seed = MasterSeed(77);
    let small = desc(&g, s, 400, seed).unwrap();
    let large = desc(&g, s, 1_000, seed).unwrap();
    let mut acc = small.raw_counts.clone();
    for i in 400..1_000 {
        for (v, c) in world_node_contributions(&g, s, seed.round(i)) {
            acc[v.index()] += c as u64;
        }
    }
    assert_eq!(acc, large.raw_counts);
    for v in 0..g.n() as u32 {
        assert!(small.raw(v) <= large.raw(v));
    }
}

#[test]
fn local_edge_table_equals_full_split_worlds() {
    for i in 0..10u64 {
        let (g, s) = seeded(random_ic(15, 0.2, MasterSeed(500 + i)));
        let seed = MasterSeed(i);
        let t = desce(&g, s, 300, seed).unwrap();
        let mut acc = vec![0u64; g.edge_count()];
        for r in 0..300 {
            let w = sample_world(&g, seed.round(r));
            for (e, c) in edge_world_cut_sizes(&build_edge_world(&w), s) {
                acc[e.index()] += c as u64;
            }
        }
        assert_eq!(acc, t.raw_counts, "graph {i}");
    }
}

/// Replaces every edge `(u, v)` by `u -> w -> v` with the original
/// probability on the first half and 1 on the second.
fn split_graph(g: &ProbGraph) -> ProbGraph {
    let n = g.n();
    let mut edges = Vec::new();
    for (j, e) in g.edges().iter().enumerate() {
        let w = (n + j) as u32;
        edges.push((e.src.0, w, e.p));
        edges.push((w, e.dst.0, 1.0));
    }
    ProbGraph::new(n + g.edge_count(), edges).unwrap()
}

#[test]
fn edge_decreases_equal_split_node_decreases() {
    let mut compared = 0;
    for i in 0..8u64 {
        let (g, s) = seeded(random_ic(6, 0.3, MasterSeed(600 + i)));
        if g.edge_count() > 12 {
            continue;
        }
        let (split, _) = seeded(split_graph(&g));
        let n = g.n();
        let original = |v: NodeId| v.index() < n;
        let base = brute_ic_counting(&split, &[s], &original);
        let edge_exact = brute_edge_decreases(&g, s);
        let et = desce(&g, s, 20_000, MasterSeed(i)).unwrap();
        for (e, want) in edge_exact.iter().enumerate() {
            let w = NodeId((n + e) as u32);
            let cut = base - brute_ic_counting(&split.remove_nodes(&[w]).unwrap(), &[s], &original);
            let want = want.unwrap();
            assert!(
                (cut - want).abs() < 1e-9,
                "graph {i} edge {e}: {cut} vs {want}"
            );
            let got = et.delta(e as u32).unwrap();
            assert!(
                (got - cut).abs() < 0.1,
                "graph {i} edge {e}: estimate {got} vs {cut}"
            );
            compared += 1;
        }
    }
    assert!(compared > 20);
}

#[test]
fn unification_preserves_multi_seed_spread() {
    for i in 0..20u64 {
        let g = if i % 2 == 0 {
            random_ic(7, 0.3, MasterSeed(700 + i))
        } else {
            random_lt(7, 0.35, MasterSeed(700 + i))
        };
        let seeds = [NodeId(0), NodeId(3), NodeId(5)];
        let g = g.with_seeds(seeds).unwrap();
        if g.model() == Model::Ic && g.edge_count() > 18 {
            continue;
        }
        let want = brute_spread(&g, &seeds);
        let u = match g.unify_seeds() {
            Ok(u) => u,
            Err(Error::LtMergeOverflow { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let s = u.unified_seed().unwrap();
        let got = exact_spread(&u, s).unwrap() + u.seed_offset() as f64;
        assert!((got - want).abs() < 1e-9, "graph {i}: {got} vs {want}");
    }
}

#[test]
fn greedy_equivalence_holds_under_lt() {
    for i in 0..6u64 {
        let (g, s) = seeded(random_lt(20, 0.15, MasterSeed(800 + i)));
        let mut cfg = GreedyConfig::new(400, MasterSeed(i));
        cfg.record_tables = true;
        for kind in [CandidateKind::Node, CandidateKind::Edge] {
            let a = advanced_greedy(&g, s, 3, &CandidatePool::of_kind(&g, kind), &cfg).unwrap();
            let b = baseline_greedy(&g, s, 3, kind, &cfg).unwrap();
            assert_eq!(a.blockers, b.blockers);
            let ta: Vec<_> = a.trace.iter().map(|t| t.table.clone()).collect();
            let tb: Vec<_> = b.trace.iter().map(|t| t.table.clone()).collect();
            assert_eq!(ta, tb);
        }
    }
}

#[test]
fn lt_sampler_z_scores() {
    let pairs = gnp_pairs(16, 0.6, MasterSeed(13_000));
    let g =
        imin::io::assign_wc(&ProbGraph::new(16, pairs.iter().map(|&(u, v)| (u, v, 0.0))).unwrap())
            .with_model(Model::Lt);
    let worlds = 10_000u64;
    let mut hits = vec![0u64; g.edge_count()];
    for r in 0..worlds {
        for e in sample_world(&g, MasterSeed(5).round(r)).live_edges() {
            hits[e.index()] += 1;
        }
    }
    let worst = hits
        .iter()
        .zip(g.edges())
        .map(|(&h, e)| {
            let sd = (e.p * (1.0 - e.p) / worlds as f64).sqrt();
            if sd == 0.0 {
                0.0
            } else {
                (h as f64 / worlds as f64 - e.p).abs() / sd
            }
        })
        .fold(0.0, f64::max);
    assert!(worst < 5.0, "max |z| = {worst}");
}

#[test]
fn exact_cap_is_enforced() {
    let g = toy_graph();
    let s = g.seeds()[0];
    assert!(matches!(
        exact_spread_with_cap(&g, s, 2),
        Err(Error::ExactInfeasible {
            uncertain: 3,
            cap: 2
        })
    ));
}

#[test]
fn toy_heuristics_and_fill() {
    let g = toy_graph().unify_seeds().unwrap();
    let s = g.unified_seed().unwrap();
    let od = heuristic_outdegree(&g, 1, CandidateKind::Edge);
    let e = g.edge(EdgeId(od.blockers.members[0]));
    assert_eq!((g.label(e.src), g.label(e.dst)), (2, 5));
    let od = heuristic_outdegree(&g, 1, CandidateKind::Node);
    assert_eq!(g.label(NodeId(od.blockers.members[0])), 5);

    let mut cfg = GreedyConfig::new(2_000, MasterSeed(3));
    let short = greedy_replace(&g, s, 3, &cfg).unwrap();
    assert_eq!(short.blockers.len(), 2);
    assert_eq!(short.warnings.len(), 1);
    cfg.fill_budget = true;
    let filled = greedy_replace(&g, s, 3, &cfg).unwrap();
    assert_eq!(filled.blockers.len(), 3);

    let r = heuristic_random(&g, 4, CandidateKind::Node, MasterSeed(1));
    assert_eq!(r.blockers.len(), 4);
    assert!(!r.blockers.members.contains(&s.0));
    assert_eq!(
        r.blockers,
        heuristic_random(&g, 4, CandidateKind::Node, MasterSeed(1)).blockers
    );
}
