use std::collections::VecDeque;

use super::residual::Residual;

pub(super) fn run(g: &mut Residual, source: usize, sink: usize) {
    let n = g.vertex_count();
    let mut level = vec![u32::MAX; n];
    let mut cursor = vec![0usize; n];
    let mut path: Vec<usize> = Vec::new();

    while bfs_levels(g, source, sink, &mut level) {
        for (v, c) in cursor.iter_mut().enumerate() {
            *c = g.arc_range(v).start;
        }
        // Iterative DFS along the level graph, advancing per-vertex cursors past dead arcs.
        let mut v = source;
        path.clear();
        loop {
            if v == sink {
                let bottleneck = path
                    .iter()
                    .map(|&a| g.rcap[a])
                    .fold(f64::INFINITY, f64::min);
                for &a in &path {
                    g.push(a, bottleneck);
                }
                // Restart from the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&a| !g.has_residual(a))
                    .expect("augmenting path saturates at least one arc");
                v = g.head[path[cut] ^ 1];
                path.truncate(cut);
                continue;
            }
            let end = g.arc_range(v).end;
            let mut advanced = false;
            while cursor[v] < end {
                let a = g.arc_at(cursor[v]);
                let w = g.head[a];
                if g.has_residual(a) && level[w] == level[v] + 1 {
                    path.push(a);
                    v = w;
                    advanced = true;
                    break;
                }
                cursor[v] += 1;
            }
            if advanced {
                continue;
            }
            // Dead end: retreat.
            level[v] = u32::MAX;
            match path.pop() {
                Some(a) => {
                    v = g.head[a ^ 1];
                    cursor[v] += 1;
                }
                None => break,
            }
        }
    }
}

fn bfs_levels(g: &Residual, source: usize, sink: usize, level: &mut [u32]) -> bool {
    level.fill(u32::MAX);
    level[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &a in g.out_arcs(v) {
            let w = g.head[a];
            if level[w] == u32::MAX && g.has_residual(a) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    level[sink] != u32::MAX
}
