//! Boykov-Kolmogorov augmenting paths.
//!
//! Two search trees grow from the source and from the sink through non-saturated arcs. When
//! they touch, the path is augmented; nodes whose tree arc saturates become orphans and try to
//! re-attach to their own tree before being freed. Trees survive across augmentations, which is
//! what makes the method fast on grid-like vision graphs.

use std::collections::VecDeque;

use super::residual::Residual;

/// Parent marker for orphans and free nodes.
const NO_PARENT: usize = usize::MAX;
/// Parent marker for the two terminals.
const ROOT: usize = usize::MAX - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tree {
    Free,
    Source,
    Sink,
}

struct Search<'g> {
    g: &'g mut Residual,
    tree: Vec<Tree>,
    /// Arc from the node towards its parent.
    parent: Vec<usize>,
    timestamp: Vec<u64>,
    dist: Vec<u32>,
    queued: Vec<bool>,
    active: VecDeque<usize>,
    orphans: VecDeque<usize>,
    time: u64,
}

pub(super) fn run(g: &mut Residual, source: usize, sink: usize) {
    let n = g.vertex_count();
    let mut search = Search {
        g,
        tree: vec![Tree::Free; n],
        parent: vec![NO_PARENT; n],
        timestamp: vec![0; n],
        dist: vec![0; n],
        queued: vec![false; n],
        active: VecDeque::new(),
        orphans: VecDeque::new(),
        time: 0,
    };
    search.tree[source] = Tree::Source;
    search.tree[sink] = Tree::Sink;
    search.parent[source] = ROOT;
    search.parent[sink] = ROOT;
    search.activate(source);
    search.activate(sink);

    while let Some(meet) = search.grow() {
        search.time += 1;
        search.augment(meet);
        search.adopt();
    }
}

impl Search<'_> {
    fn activate(&mut self, v: usize) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.active.push_back(v);
        }
    }

    /// Residual arc a tree of kind `tree` may use between `p` and its neighbour along `a`
    /// (`a` leaves `p`): source trees grow along `p -> q`, sink trees along `q -> p`.
    fn growth_arc(tree: Tree, a: usize) -> usize {
        match tree {
            Tree::Sink => a ^ 1,
            _ => a,
        }
    }

    /// Expands active nodes until the trees meet. Returns the arc from the source tree into
    /// the sink tree.
    fn grow(&mut self) -> Option<usize> {
        while let Some(&p) = self.active.front() {
            let tree = self.tree[p];
            if tree != Tree::Free {
                for slot in self.g.arc_range(p) {
                    let a = self.g.arc_at(slot);
                    let along = Self::growth_arc(tree, a);
                    if !self.g.has_residual(along) {
                        continue;
                    }
                    let q = self.g.head[a];
                    match self.tree[q] {
                        Tree::Free => {
                            self.tree[q] = tree;
                            self.parent[q] = a ^ 1;
                            self.timestamp[q] = self.timestamp[p];
                            self.dist[q] = self.dist[p] + 1;
                            self.activate(q);
                        }
                        other if other != tree => return Some(along),
                        _ => {
                            // Same tree: re-hang q below p if that shortens its path to the root.
                            if self.timestamp[q] <= self.timestamp[p] && self.dist[q] > self.dist[p] {
                                self.parent[q] = a ^ 1;
                                self.timestamp[q] = self.timestamp[p];
                                self.dist[q] = self.dist[p] + 1;
                            }
                        }
                    }
                }
            }
            self.active.pop_front();
            self.queued[p] = false;
        }
        None
    }

    fn augment(&mut self, meet: usize) {
        let g = &mut *self.g;
        let mut bottleneck = g.rcap[meet];

        let mut v = g.head[meet ^ 1];
        while self.parent[v] != ROOT {
            let a = self.parent[v];
            bottleneck = bottleneck.min(g.rcap[a ^ 1]);
            v = g.head[a];
        }
        let mut v = g.head[meet];
        while self.parent[v] != ROOT {
            let a = self.parent[v];
            bottleneck = bottleneck.min(g.rcap[a]);
            v = g.head[a];
        }

        g.push(meet, bottleneck);

        let mut v = g.head[meet ^ 1];
        while self.parent[v] != ROOT {
            let a = self.parent[v];
            g.push(a ^ 1, bottleneck);
            if !g.has_residual(a ^ 1) {
                self.parent[v] = NO_PARENT;
                self.orphans.push_back(v);
            }
            v = g.head[a];
        }
        let mut v = g.head[meet];
        while self.parent[v] != ROOT {
            let a = self.parent[v];
            g.push(a, bottleneck);
            if !g.has_residual(a) {
                self.parent[v] = NO_PARENT;
                self.orphans.push_back(v);
            }
            v = g.head[a];
        }
    }

    /// Distance from `q` to its tree root, or `None` if the path runs into an orphan.
    /// Marks every node on a successful path with the current time and its distance.
    fn root_distance(&mut self, q: usize) -> Option<u32> {
        let mut d = 0u32;
        let mut j = q;
        loop {
            if self.timestamp[j] == self.time {
                d += self.dist[j];
                break;
            }
            match self.parent[j] {
                ROOT => {
                    self.timestamp[j] = self.time;
                    self.dist[j] = 0;
                    break;
                }
                NO_PARENT => return None,
                a => {
                    d += 1;
                    j = self.g.head[a];
                }
            }
        }
        let mut j = q;
        let mut dj = d;
        while self.timestamp[j] != self.time {
            self.timestamp[j] = self.time;
            self.dist[j] = dj;
            dj -= 1;
            j = self.g.head[self.parent[j]];
        }
        Some(d)
    }

    fn adopt(&mut self) {
        while let Some(p) = self.orphans.pop_front() {
            let tree = self.tree[p];
            // The arc a new parent q needs: q -> p for the source tree, p -> q for the sink tree.
            let link = |a: usize| match tree {
                Tree::Sink => a,
                _ => a ^ 1,
            };

            let mut best: Option<(usize, u32)> = None;
            for slot in self.g.arc_range(p) {
                let a = self.g.arc_at(slot);
                if !self.g.has_residual(link(a)) {
                    continue;
                }
                let q = self.g.head[a];
                if self.tree[q] != tree || self.parent[q] == NO_PARENT {
                    continue;
                }
                if let Some(d) = self.root_distance(q) {
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((a, d));
                    }
                }
            }

            if let Some((a, d)) = best {
                self.parent[p] = a;
                self.timestamp[p] = self.time;
                self.dist[p] = d + 1;
                continue;
            }

            for slot in self.g.arc_range(p) {
                let a = self.g.arc_at(slot);
                let q = self.g.head[a];
                if self.tree[q] != tree {
                    continue;
                }
                if self.g.has_residual(link(a)) {
                    self.activate(q);
                }
                let pa = self.parent[q];
                if pa != NO_PARENT && pa != ROOT && self.g.head[pa] == p {
                    self.parent[q] = NO_PARENT;
                    self.orphans.push_back(q);
                }
            }
            self.tree[p] = Tree::Free;
        }
    }
}
