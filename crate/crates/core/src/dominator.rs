//! Dominator trees of sampled worlds.
//!
//! Two constructions are provided: Lengauer-Tarjan (simple link-eval with
//! path compression, no balancing) for arbitrary worlds, and a BFS tree for
//! LT worlds where every node has at most one live in-edge, which makes the
//! unique in-neighbor the immediate dominator. [`brute_force_idom`] applies
//! the definition directly and exists to cross-check both.

use std::fmt::Write as _;

use crate::csr::Successors;
use crate::error::{Error, Result};
use crate::graph::NodeId;

const NONE: u32 = u32::MAX;

/// Dominator tree rooted at a source, spanning the nodes it reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomTree {
    /// Reachable nodes; `order[0]` is the root and every node appears
    /// after its immediate dominator.
    order: Vec<u32>,
    /// Node -> position in `order`, `NONE` when unreachable.
    pos: Vec<u32>,
    /// Position -> position of the immediate dominator (root maps to itself).
    idom: Vec<u32>,
}

impl DomTree {
    pub fn root(&self) -> NodeId {
        NodeId(self.order[0])
    }

    /// Number of reachable nodes.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.pos.get(v.index()).is_some_and(|&p| p != NONE)
    }

    /// Reachable nodes, each listed after its immediate dominator.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.order.iter().map(|&v| NodeId(v))
    }

    /// Immediate dominator; `None` for the root and unreachable nodes.
    pub fn idom(&self, v: NodeId) -> Option<NodeId> {
        let p = *self.pos.get(v.index())?;
        if p == NONE || p == 0 {
            return None;
        }
        Some(NodeId(self.order[self.idom[p as usize] as usize]))
    }

    /// `idom` for every node of the source graph.
    pub fn idom_map(&self) -> Vec<Option<NodeId>> {
        (0..self.pos.len() as u32)
            .map(|v| self.idom(NodeId(v)))
            .collect()
    }

    pub fn children(&self, v: NodeId) -> Vec<NodeId> {
        let Some(&p) = self.pos.get(v.index()) else {
            return Vec::new();
        };
        if p == NONE {
            return Vec::new();
        }
        (1..self.order.len())
            .filter(|&i| self.idom[i] == p)
            .map(|i| NodeId(self.order[i]))
            .collect()
    }

    /// Subtree sums of per-node weights, indexed by node; unreachable
    /// nodes get 0.
    pub fn subtree_weights(&self, weight: impl Fn(NodeId) -> u32) -> Vec<u32> {
        let mut acc: Vec<u32> = self.order.iter().map(|&v| weight(NodeId(v))).collect();
        for i in (1..self.order.len()).rev() {
            let parent = self.idom[i] as usize;
            acc[parent] += acc[i];
        }
        let mut out = vec![0u32; self.pos.len()];
        for (i, &v) in self.order.iter().enumerate() {
            out[v as usize] = acc[i];
        }
        out
    }

    /// One `child parent` line per non-root node, in tree order.
    pub fn to_parent_lines(&self) -> String {
        let mut s = String::new();
        for i in 1..self.order.len() {
            let _ = writeln!(s, "{} {}", self.order[i], self.order[self.idom[i] as usize]);
        }
        s
    }
}

/// Size of every rooted subtree, indexed by node (0 when unreachable).
pub fn subtree_sizes(tree: &DomTree) -> Vec<u32> {
    tree.subtree_weights(|_| 1)
}

/// Lengauer-Tarjan. DFS visits successors in adjacency order.
pub fn build_lengauer_tarjan<G: Successors + ?Sized>(g: &G, root: NodeId) -> DomTree {
    let n = g.node_count();
    let mut pos = vec![NONE; n];
    let mut order: Vec<u32> = Vec::new();
    let mut parent: Vec<u32> = Vec::new();

    // iterative preorder DFS
    let mut stack: Vec<(u32, usize)> = vec![(root.0, 0)];
    pos[root.index()] = 0;
    order.push(root.0);
    parent.push(0);
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        let succ = g.successors(v);
        if next < succ.len() {
            top.1 += 1;
            let w = succ[next];
            if pos[w as usize] == NONE {
                pos[w as usize] = order.len() as u32;
                parent.push(pos[v as usize]);
                order.push(w);
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }

    let len = order.len();
    // predecessor lists in preorder numbering
    let mut pred_start = vec![0u32; len + 1];
    for &v in &order {
        for &w in g.successors(v) {
            pred_start[pos[w as usize] as usize + 1] += 1;
        }
    }
    for i in 0..len {
        pred_start[i + 1] += pred_start[i];
    }
    let mut cursor = pred_start.clone();
    let mut preds = vec![0u32; pred_start[len] as usize];
    for (i, &v) in order.iter().enumerate() {
        for &w in g.successors(v) {
            let wp = pos[w as usize] as usize;
            preds[cursor[wp] as usize] = i as u32;
            cursor[wp] += 1;
        }
    }

    let mut semi: Vec<u32> = (0..len as u32).collect();
    let mut label: Vec<u32> = (0..len as u32).collect();
    let mut ancestor = vec![NONE; len];
    let mut idom = vec![0u32; len];
    let mut bucket: Vec<Vec<u32>> = vec![Vec::new(); len];
    let mut path: Vec<u32> = Vec::new();

    let mut eval = |v: u32, ancestor: &mut [u32], label: &mut [u32], semi: &[u32]| -> u32 {
        if ancestor[v as usize] == NONE {
            return v;
        }
        // compress the ancestor path of v
        path.clear();
        let mut x = v;
        while ancestor[ancestor[x as usize] as usize] != NONE {
            path.push(x);
            x = ancestor[x as usize];
        }
        while let Some(y) = path.pop() {
            let a = ancestor[y as usize] as usize;
            if semi[label[a] as usize] < semi[label[y as usize] as usize] {
                label[y as usize] = label[a];
            }
            ancestor[y as usize] = ancestor[a];
        }
        label[v as usize]
    };

    for w in (1..len).rev() {
        let p = parent[w];
        for &v in &preds[pred_start[w] as usize..pred_start[w + 1] as usize] {
            let u = eval(v, &mut ancestor, &mut label, &semi);
            if semi[u as usize] < semi[w] {
                semi[w] = semi[u as usize];
            }
        }
        bucket[semi[w] as usize].push(w as u32);
        ancestor[w] = p;
        let pending = std::mem::take(&mut bucket[p as usize]);
        for v in pending {
            let u = eval(v, &mut ancestor, &mut label, &semi);
            idom[v as usize] = if semi[u as usize] < semi[v as usize] {
                u
            } else {
                p
            };
        }
    }
    for w in 1..len {
        if idom[w] != semi[w] {
            idom[w] = idom[idom[w] as usize];
        }
    }
    DomTree { order, pos, idom }
}

/// BFS construction for worlds whose nodes have live in-degree at most 1.
pub fn build_lt<G: Successors + ?Sized>(g: &G, root: NodeId) -> Result<DomTree> {
    let n = g.node_count();
    let mut indeg = vec![0usize; n];
    for v in 0..n as u32 {
        for &w in g.successors(v) {
            indeg[w as usize] += 1;
            if indeg[w as usize] > 1 {
                return Err(Error::NotLtWorld {
                    node: NodeId(w),
                    in_degree: indeg[w as usize],
                });
            }
        }
    }
    Ok(bfs_tree(g, root))
}

/// BFS tree without the in-degree check; callers guarantee the LT shape.
pub(crate) fn bfs_tree<G: Successors + ?Sized>(g: &G, root: NodeId) -> DomTree {
    let mut pos = vec![NONE; g.node_count()];
    let mut order = vec![root.0];
    let mut idom = vec![0u32];
    pos[root.index()] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        for &w in g.successors(v) {
            if pos[w as usize] == NONE {
                pos[w as usize] = order.len() as u32;
                order.push(w);
                idom.push(head as u32);
            }
        }
        head += 1;
    }
    DomTree { order, pos, idom }
}

fn reach_without<G: Successors + ?Sized>(g: &G, root: NodeId, removed: Option<u32>) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    if removed == Some(root.0) {
        return seen;
    }
    seen[root.index()] = true;
    let mut stack = vec![root.0];
    while let Some(v) = stack.pop() {
        for &w in g.successors(v) {
            if Some(w) != removed && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Immediate dominators straight from the definition: `u` dominates `v`
/// iff `v` is unreachable once `u` is removed. Quadratic; meant for
/// graphs with at most a few hundred reachable nodes.
pub fn brute_force_idom<G: Successors + ?Sized>(g: &G, root: NodeId) -> Vec<Option<NodeId>> {
    let n = g.node_count();
    let reach = reach_without(g, root, None);
    // dominated_by[u][v]: u dominates v (u != v)
    let mut dominated_by = vec![vec![false; n]; n];
    for u in 0..n {
        if !reach[u] {
            continue;
        }
        if u == root.index() {
            for v in 0..n {
                dominated_by[u][v] = reach[v] && v != u;
            }
            continue;
        }
        let without = reach_without(g, root, Some(u as u32));
        for v in 0..n {
            dominated_by[u][v] = reach[v] && v != u && !without[v];
        }
    }
    let mut out = vec![None; n];
    for v in 0..n {
        if !reach[v] || v == root.index() {
            continue;
        }
        let strict: Vec<usize> = (0..n).filter(|&u| dominated_by[u][v]).collect();
        out[v] = strict
            .iter()
            .copied()
            .find(|&d| strict.iter().all(|&o| o == d || dominated_by[o][d]))
            .map(|d| NodeId(d as u32));
    }
    out
}
