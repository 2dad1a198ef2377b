//! Immutable unweighted undirected simple graphs.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Normalized undirected edge, smaller endpoint first.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Compressed adjacency. Neighbor lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate and reversed pairs are
    /// merged; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n >= NONE as usize {
            return Err(Error::InvalidParameter("vertex count does not fit in u32"));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(edge(u, v));
        }
        list.sort_unstable();
        list.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &list {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * list.len()];
        for &(u, v) in &list {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Ok(Graph { n, offsets, targets, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_edges(n, core::iter::empty()).expect("empty graph is valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.targets[self.offsets[u]..self.offsets[u + 1]]
            .iter()
            .map(|&v| v as usize)
    }

    #[inline]
    pub(crate) fn neighbor_slice(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub(crate) fn slot_range(&self, u: usize) -> core::ops::Range<usize> {
        self.offsets[u]..self.offsets[u + 1]
    }

    #[inline]
    pub(crate) fn slot_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbor_slice(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// BFS from `src` writing hop distances into `out` (`NONE` when unreachable).
    pub(crate) fn bfs_into(&self, src: usize, out: &mut [u32], queue: &mut VecDeque<u32>) {
        out.fill(NONE);
        queue.clear();
        out[src] = 0;
        queue.push_back(src as u32);
        while let Some(x) = queue.pop_front() {
            let dx = out[x as usize];
            for &y in self.neighbor_slice(x as usize) {
                if out[y as usize] == NONE {
                    out[y as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
    }

    /// Connected component label per vertex, labels assigned in order of the
    /// smallest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x) {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Subgraph induced by `keep` (ascending), relabelled to `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Result<Graph> {
        let mut map = vec![NONE; self.n];
        for (i, &v) in keep.iter().enumerate() {
            self.check_vertex(v)?;
            map[v] = i as u32;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (map[u], map[v]);
            (a != NONE && b != NONE).then_some((a as usize, b as usize))
        });
        Graph::from_edges(keep.len(), edges)
    }

    /// Vertices of the largest connected component (ties go to the component
    /// containing the smallest vertex id), ascending.
    pub fn largest_component(&self) -> Vec<usize> {
        let label = self.components();
        let count = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], core::cmp::Reverse(c)));
        match best {
            Some(c) => (0..self.n).filter(|&v| label[v] == c).collect(),
            None => Vec::new(),
        }
    }
}

/// Exact hop distance between `u` and `v`; `None` when disconnected.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<u32>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![NONE; g.n()];
    let mut queue = VecDeque::new();
    dist[u] = 0;
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if dist[y] == NONE {
                dist[y] = dist[x] + 1;
                if y == v {
                    return Ok(Some(dist[y]));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

/// One row of the distance matrix.
pub fn all_distances_from(g: &Graph, u: usize) -> Result<Vec<Option<u32>>> {
    g.check_vertex(u)?;
    let mut row = vec![NONE; g.n()];
    g.bfs_into(u, &mut row, &mut VecDeque::new());
    Ok(row.into_iter().map(|d| (d != NONE).then_some(d)).collect())
}

/// A simple path given as its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Hop count.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path { vertices: v }
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| edge(w[0], w[1]))
    }

    /// True when consecutive vertices are adjacent in `g` and no vertex repeats.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = BTreeSet::new();
        self.vertices.iter().all(|&v| v < g.n() && seen.insert(v))
            && self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// A set of undirected edges, kept normalized and ordered.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    edges: BTreeSet<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        self.edges.insert(edge(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn extend_from(&mut self, other: &EdgeSet) {
        self.edges.extend(other.edges.iter().copied());
    }

    pub fn is_subset_of(&self, g: &Graph) -> bool {
        self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }

    pub fn to_graph(&self, n: usize) -> Result<Graph> {
        Graph::from_edges(n, self.iter())
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet { edges: iter.into_iter().map(|(u, v)| edge(u, v)).collect() }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn dedups_reversed_and_repeated_pairs() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidVertex { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn distance_examples() {
        let p5 = path_graph(5);
        assert_eq!(distance(&p5, 0, 4), Ok(Some(4)));
        assert_eq!(distance(&p5, 3, 3), Ok(Some(0)));
        assert_eq!(distance(&cycle(4), 0, 2), Ok(Some(2)));
        assert_eq!(distance(&Graph::empty(2), 0, 1), Ok(None));
        assert!(distance(&p5, 0, 5).is_err());
    }

    #[test]
    fn distance_is_symmetric() {
        let g = gnp(60, 0.06, 11);
        for u in 0..60 {
            for v in 0..60 {
                assert_eq!(distance(&g, u, v), distance(&g, v, u));
            }
        }
    }

    #[test]
    fn rows_match_examples() {
        let row: Vec<_> = all_distances_from(&path_graph(5), 0).unwrap();
        assert_eq!(row, [0, 1, 2, 3, 4].map(Some).to_vec());
        let row = all_distances_from(&complete(4), 2).unwrap();
        assert_eq!(row, [1, 1, 0, 1].map(Some).to_vec());
    }

    #[test]
    fn rows_agree_with_pairwise_distance() {
        use rand::{Rng, SeedableRng};
        let g = gnp(200, 0.05, 7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let (u, v) = (rng.gen_range(0..200), rng.gen_range(0..200));
            let row = all_distances_from(&g, u).unwrap();
            assert_eq!(row[v], distance(&g, u, v).unwrap());
        }
    }

    /// Repeated relaxation d[u][v] = min(d[u][v], d[u][w] + 1) over edges
    /// until stable; independent of BFS.
    fn relaxation_oracle(g: &Graph) -> Vec<Vec<u32>> {
        let n = g.n();
        let mut d = vec![vec![NONE; n]; n];
        for (u, row) in d.iter_mut().enumerate() {
            row[u] = 0;
        }
        loop {
            let mut changed = false;
            for &(a, b) in g.edges() {
                for u in 0..n {
                    for (x, y) in [(a, b), (b, a)] {
                        if d[u][x] != NONE && d[u][x] + 1 < d[u][y] {
                            d[u][y] = d[u][x] + 1;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return d;
            }
        }
    }

    #[test]
    fn bfs_matches_relaxation_oracle_small_graphs() {
        for seed in 0..12 {
            let n = 20 + 4 * seed as usize;
            let g = gnp(n, 0.08, seed);
            let oracle = relaxation_oracle(&g);
            for u in 0..n {
                let row = all_distances_from(&g, u).unwrap();
                for v in 0..n {
                    let want = (oracle[u][v] != NONE).then_some(oracle[u][v]);
                    assert_eq!(row[v], want, "seed {seed} pair ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn largest_component_prefers_bigger_then_lower_id() {
        let g = Graph::from_edges(7, [(0, 1), (2, 3), (3, 4), (5, 6)]).unwrap();
        assert_eq!(g.largest_component(), vec![2, 3, 4]);
        let h = g.induced(&[2, 3, 4]).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn path_validity() {
        let g = path_graph(4);
        assert!(Path::new(vec![0, 1, 2]).is_valid_in(&g));
        assert!(!Path::new(vec![0, 2]).is_valid_in(&g));
        assert!(!Path::new(vec![0, 1, 0]).is_valid_in(&g));
        assert_eq!(Path::new(vec![3, 2, 1]).len(), 2);
    }
}
