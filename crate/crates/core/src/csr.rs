//! Compressed adjacency used by sampled worlds and dominator construction.

/// Read access to out-neighbors of a node-indexed digraph.
pub trait Successors {
    fn node_count(&self) -> usize;
    fn successors(&self, v: u32) -> &[u32];
}

/// Forward-star adjacency. Neighbor order within each node follows the
/// order in which the pairs were supplied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    /// `slots[k]` is the input position of the pair stored at slot `k`.
    slots: Vec<u32>,
}

impl Csr {
    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Csr {
        let mut offsets = vec![0u32; n + 1];
        for &(u, _) in pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; pairs.len()];
        let mut slots = vec![0u32; pairs.len()];
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            let at = cursor[u as usize] as usize;
            targets[at] = v;
            slots[at] = idx as u32;
            cursor[u as usize] += 1;
        }
        Csr {
            offsets,
            targets,
            slots,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Input positions of `v`'s out-pairs, aligned with `successors(v)`.
    pub fn slot_indices(&self, v: u32) -> &[u32] {
        let (a, b) = self.range(v);
        &self.slots[a..b]
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.node_count()];
        for &t in &self.targets {
            deg[t as usize] += 1;
        }
        deg
    }

    #[inline]
    fn range(&self, v: u32) -> (usize, usize) {
        (
            self.offsets[v as usize] as usize,
            self.offsets[v as usize + 1] as usize,
        )
    }
}

impl Successors for Csr {
    fn node_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    #[inline]
    fn successors(&self, v: u32) -> &[u32] {
        let (a, b) = self.range(v);
        &self.targets[a..b]
    }
}
