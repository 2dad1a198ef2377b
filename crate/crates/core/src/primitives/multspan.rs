use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeSet, Graph, NONE};

/// Greedy `(2k-1)`-spanner. Edges are scanned in lexicographic order and an
/// edge is kept only if its endpoints are more than `2k - 1` hops apart in
/// the spanner built so far. The output has girth above `2k`.
pub fn multspan(g: &Graph, k: usize) -> EdgeSet {
    let k = k.max(1);
    let limit = (2 * k - 1) as u32;
    let n = g.n();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut out = EdgeSet::new();
    let mut seen = vec![NONE; n];
    let mut depth = vec![0u32; n];
    let mut queue = VecDeque::new();

    for (stamp, &(u, v)) in g.edges().iter().enumerate() {
        let stamp = stamp as u32;
        if !within(&adj, u, v, limit, stamp, &mut seen, &mut depth, &mut queue) {
            adj[u].push(v as u32);
            adj[v].push(u as u32);
            out.insert(u, v);
        }
    }
    out
}

/// Depth-limited BFS from `u` looking for `v`. `seen` holds the stamp of the
/// search that last visited each vertex, so it never needs clearing.
#[allow(clippy::too_many_arguments)]
fn within(
    adj: &[Vec<u32>],
    u: usize,
    v: usize,
    limit: u32,
    stamp: u32,
    seen: &mut [u32],
    depth: &mut [u32],
    queue: &mut VecDeque<u32>,
) -> bool {
    queue.clear();
    seen[u] = stamp;
    depth[u] = 0;
    queue.push_back(u as u32);
    while let Some(x) = queue.pop_front() {
        let x = x as usize;
        if depth[x] == limit {
            continue;
        }
        for &y in &adj[x] {
            let y = y as usize;
            if seen[y] == stamp {
                continue;
            }
            if y == v {
                return true;
            }
            seen[y] = stamp;
            depth[y] = depth[x] + 1;
            queue.push_back(y as u32);
        }
    }
    false
}
