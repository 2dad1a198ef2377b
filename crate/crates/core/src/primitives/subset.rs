use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::cluster;
use crate::error::Result;
use crate::graph::{EdgeSet, Graph, NONE};
use crate::paths::{source_rows, walk_parents, TieBreakWeights};

/// What the path-buying pass did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubsetSpannerStats {
    pub terminals: usize,
    pub cluster_size: usize,
    pub clustering_edges: usize,
    pub pairs: usize,
    pub bought: usize,
    /// Purchases forced because the pair would otherwise exceed +2.
    pub forced: usize,
}

/// Subgraph keeping every pair of `s` within `+2` of its true distance.
///
/// Phase one clusters with `e = ⌈√|s|⌉` and keeps all edges at unclustered
/// vertices plus a star per cluster. Phase two walks the pairs of `s` by
/// increasing distance and buys the missing edges of the canonical path when
/// they cost at most twice the number of (endpoint, cluster) distances the
/// path would shorten. A pair still farther than `+2` is bought regardless.
pub fn subset_spanner(g: &Graph, tb: &TieBreakWeights, s: &[usize]) -> Result<EdgeSet> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    for &t in &s {
        g.check_vertex(t)?;
    }
    let owned: Vec<_> = s.iter().map(|&t| source_rows(g, tb, t)).collect();
    let rows: Vec<_> = owned.iter().map(|(d, p)| (d.as_slice(), p.as_slice())).collect();
    Ok(subset_spanner_rows(g, &s, &rows)?.0)
}

/// Path buying over precomputed canonical rows; `rows[i]` holds the distance
/// and parent rows of `s[i]`, and `s` must be sorted without repeats.
pub(crate) fn subset_spanner_rows(
    g: &Graph,
    s: &[usize],
    rows: &[(&[u32], &[u32])],
) -> Result<(EdgeSet, SubsetSpannerStats)> {
    let mut stats = SubsetSpannerStats { terminals: s.len(), ..Default::default() };
    let mut out = EdgeSet::new();
    if s.len() < 2 {
        return Ok((out, stats));
    }
    let n = g.n();
    let e = crate::ceil_pow(s.len(), 0.5);
    let c = cluster(g, e)?;
    stats.cluster_size = e;

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let add = |a: usize, b: usize, adj: &mut Vec<Vec<u32>>, out: &mut EdgeSet| {
        if out.insert(a, b) {
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
    };
    for &(a, b) in g.edges() {
        if !c.is_clustered(a) || !c.is_clustered(b) {
            add(a, b, &mut adj, &mut out);
        }
    }
    for (k, members) in c.clusters().iter().enumerate() {
        let center = c.center(k);
        for &w in &members[1..] {
            add(center, w, &mut adj, &mut out);
        }
    }
    stats.clustering_edges = out.len();

    let mut queue = VecDeque::new();
    let mut hrow: Vec<Vec<u32>> = s
        .iter()
        .map(|&t| {
            let mut r = vec![NONE; n];
            bfs(&adj, t, &mut r, &mut queue);
            r
        })
        .collect();

    let mut pairs = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let d = rows[i].0[s[j]];
            if d != NONE {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_unstable();
    stats.pairs = pairs.len();

    for (dg, i, j) in pairs {
        let (t1, t2) = (s[i], s[j]);
        let path = walk_parents(rows[i].1, t1, t2).expect("connected pair");
        let missing: Vec<_> = path.edges().filter(|&(a, b)| !out.contains(a, b)).collect();
        if missing.is_empty() {
            continue;
        }
        let dh = hrow[i][t2];
        let affordable = missing.len() <= 2 * path_value(&c, &path, &hrow[i], &hrow[j]);
        if !affordable {
            if dh != NONE && dh <= dg + 2 {
                continue;
            }
            stats.forced += 1;
        }
        stats.bought += 1;
        for &(a, b) in &missing {
            add(a, b, &mut adj, &mut out);
        }
        for r in hrow.iter_mut() {
            relax(&adj, &missing, r, &mut queue);
        }
    }
    Ok((out, stats))
}

/// Number of (endpoint, cluster) pairs whose distance would shrink if the
/// whole path were present.
fn path_value(
    c: &crate::cluster::Clustering,
    path: &crate::graph::Path,
    from_first: &[u32],
    from_last: &[u32],
) -> usize {
    let len = path.len() as u32;
    let mut best: BTreeMap<usize, (u32, u32)> = BTreeMap::new();
    for (pos, &v) in path.vertices().iter().enumerate() {
        if let Some(k) = c.cluster_of(v) {
            let pos = pos as u32;
            let b = best.entry(k).or_insert((u32::MAX, u32::MAX));
            b.0 = b.0.min(pos);
            b.1 = b.1.min(len - pos);
        }
    }
    let mut value = 0;
    for (k, (p1, p2)) in best {
        let members = &c.clusters()[k];
        let cur1 = members.iter().map(|&w| from_first[w]).min().unwrap_or(NONE);
        let cur2 = members.iter().map(|&w| from_last[w]).min().unwrap_or(NONE);
        value += usize::from(p1 < cur1) + usize::from(p2 < cur2);
    }
    value
}

fn bfs(adj: &[Vec<u32>], src: usize, out: &mut [u32], queue: &mut VecDeque<u32>) {
    out.fill(NONE);
    out[src] = 0;
    queue.clear();
    queue.push_back(src as u32);
    while let Some(x) = queue.pop_front() {
        let dx = out[x as usize];
        for &y in &adj[x as usize] {
            if out[y as usize] == NONE {
                out[y as usize] = dx + 1;
                queue.push_back(y);
            }
        }
    }
}

/// Repairs a distance row after `added` edges were inserted.
fn relax(adj: &[Vec<u32>], added: &[(usize, usize)], row: &mut [u32], queue: &mut VecDeque<u32>) {
    queue.clear();
    let improve = |from: usize, to: usize, row: &mut [u32], queue: &mut VecDeque<u32>| {
        if row[from] != NONE && row[from] + 1 < row[to] {
            row[to] = row[from] + 1;
            queue.push_back(to as u32);
        }
    };
    for &(a, b) in added {
        improve(a, b, row, queue);
        improve(b, a, row, queue);
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x as usize] {
            improve(x as usize, y as usize, row, queue);
        }
    }
}
