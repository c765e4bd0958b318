use std::collections::VecDeque;

use super::{FlowNetwork, RESIDUAL_EPSILON};

/// Residual graph in compressed adjacency form.
///
/// User arc `k` becomes the pair `2k` (forward, full capacity) and `2k + 1` (reverse, zero
/// capacity); `a ^ 1` is always the sister of `a`.
pub(super) struct Residual {
    pub head: Vec<usize>,
    pub rcap: Vec<f64>,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
}

impl Residual {
    pub fn new(net: &FlowNetwork) -> Self {
        let n = net.vertex_count();
        let arcs = net.arcs();
        let mut head = Vec::with_capacity(arcs.len() * 2);
        let mut rcap = Vec::with_capacity(arcs.len() * 2);
        let mut degree = vec![0usize; n + 1];
        for arc in arcs {
            head.push(arc.to);
            rcap.push(arc.capacity);
            head.push(arc.from);
            rcap.push(0.0);
            degree[arc.from] += 1;
            degree[arc.to] += 1;
        }

        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![0usize; offsets[n]];
        for (k, arc) in arcs.iter().enumerate() {
            adjacency[fill[arc.from]] = 2 * k;
            fill[arc.from] += 1;
            adjacency[fill[arc.to]] = 2 * k + 1;
            fill[arc.to] += 1;
        }

        Residual {
            head,
            rcap,
            offsets,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Arc ids leaving `v` (forward arcs and reverse arcs of arcs entering `v`).
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_residual(&self, arc: usize) -> bool {
        self.rcap[arc] > RESIDUAL_EPSILON
    }

    pub fn push(&mut self, arc: usize, amount: f64) {
        self.rcap[arc] -= amount;
        self.rcap[arc ^ 1] += amount;
    }

    pub fn reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(v) = queue.pop_front() {
            for &a in self.out_arcs(v) {
                let w = self.head[a];
                if !seen[w] && self.has_residual(a) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

impl Residual {
    /// Index range into the adjacency of `v`, for loops that mutate while iterating.
    pub fn arc_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn arc_at(&self, slot: usize) -> usize {
        self.adjacency[slot]
    }
}
