//! Canonical ("nested") shortest paths.
//!
//! Every edge gets a tiny deterministic perturbation derived from a seed and
//! its endpoint pair. The canonical path between two vertices is the unique
//! shortest path of minimum total perturbation. Unique minimum-weight paths
//! are closed under taking subpaths, so any two canonical paths meet in one
//! contiguous stretch.
//!
//! The perturbation is stored as an integer `η ∈ [1, 2^40]`; the real value
//! is `η / (2^40 + 1) / (2n²)`, strictly inside `(0, 1/(2n²))`. Comparing
//! `(hops, Σ η)` lexicographically is exactly comparing the perturbed real
//! weights `Σ (1 + η_real)`, without floating-point rounding.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, NONE};
use crate::par;

const ETA_BITS: u32 = 40;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-edge perturbations, aligned with the graph's adjacency slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreakWeights {
    seed: u64,
    n: usize,
    by_slot: Vec<u64>,
}

impl TieBreakWeights {
    pub fn new(g: &Graph, seed: u64) -> Self {
        let mut by_slot = vec![0u64; g.slot_count()];
        for u in 0..g.n() {
            for (slot, &v) in g.slot_range(u).zip(g.neighbor_slice(u)) {
                by_slot[slot] = Self::hash_eta(seed, u, v as usize);
            }
        }
        TieBreakWeights { seed, n: g.n(), by_slot }
    }

    fn hash_eta(seed: u64, u: usize, v: usize) -> u64 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let h = splitmix64(seed ^ splitmix64(((a as u64) << 32) | b as u64));
        (h >> (64 - ETA_BITS)) + 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Seed used when this instance's weights must be re-derived.
    pub fn next_seed(&self) -> u64 {
        splitmix64(self.seed.wrapping_add(1))
    }

    /// Integer perturbation of edge `(u, v)`, `None` if it is not an edge.
    pub fn eta(&self, g: &Graph, u: usize, v: usize) -> Option<u64> {
        if u >= g.n() {
            return None;
        }
        let slots = g.slot_range(u);
        g.neighbor_slice(u)
            .binary_search(&(v as u32))
            .ok()
            .map(|i| self.by_slot[slots.start + i])
    }

    /// Real-valued perturbation in `(0, 1/(2n²))`.
    pub fn perturbation(&self, g: &Graph, u: usize, v: usize) -> Option<f64> {
        let n = self.n.max(1) as f64;
        self.eta(g, u, v)
            .map(|e| e as f64 / ((1u64 << ETA_BITS) as f64 + 1.0) / (2.0 * n * n))
    }

    #[inline]
    pub(crate) fn slot(&self, slot: usize) -> u64 {
        self.by_slot[slot]
    }
}

/// Builds the canonical shortest-path tree of `src`: fills `dist` and
/// `parent` rows, returns the number of exact weight ties met while choosing
/// parents. Ties fall back to the smaller predecessor id.
fn source_tree(
    g: &Graph,
    tb: &TieBreakWeights,
    src: usize,
    dist: &mut [u32],
    parent: &mut [u32],
    weight: &mut [u64],
    order: &mut Vec<u32>,
) -> usize {
    dist.fill(NONE);
    parent.fill(NONE);
    order.clear();
    dist[src] = 0;
    parent[src] = src as u32;
    weight[src] = 0;
    order.push(src as u32);
    let mut head = 0;
    while head < order.len() {
        let x = order[head] as usize;
        head += 1;
        for &y in g.neighbor_slice(x) {
            if dist[y as usize] == NONE {
                dist[y as usize] = dist[x] + 1;
                order.push(y);
            }
        }
    }
    let mut ties = 0;
    for &y in &order[1..] {
        let y = y as usize;
        let want = dist[y] - 1;
        let mut best = u64::MAX;
        let mut best_p = NONE;
        for (slot, &p) in g.slot_range(y).zip(g.neighbor_slice(y)) {
            if dist[p as usize] != want {
                continue;
            }
            let w = weight[p as usize] + tb.slot(slot);
            // neighbors are ascending, so on equal weight the earlier p wins
            if w < best {
                best = w;
                best_p = p;
            } else if w == best {
                ties += 1;
            }
        }
        weight[y] = best;
        parent[y] = best_p;
    }
    ties
}

/// Distance and parent rows of one canonical tree, computed from scratch.
pub(crate) fn source_rows(g: &Graph, tb: &TieBreakWeights, src: usize) -> (Vec<u32>, Vec<u32>) {
    let n = g.n();
    let (mut dist, mut parent, mut weight) = (vec![0; n], vec![0; n], vec![0; n]);
    source_tree(g, tb, src, &mut dist, &mut parent, &mut weight, &mut Vec::new());
    (dist, parent)
}

/// Canonical path between `u` and `v`, computed from scratch.
pub fn canonical_path(g: &Graph, tb: &TieBreakWeights, u: usize, v: usize) -> Result<Path> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let n = g.n();
    let (mut dist, mut parent, mut weight) = (vec![0; n], vec![0; n], vec![0; n]);
    source_tree(g, tb, u, &mut dist, &mut parent, &mut weight, &mut Vec::new());
    walk_parents(&parent, u, v).ok_or(Error::NoPath { from: u, to: v })
}

pub(crate) fn walk_parents(parent: &[u32], u: usize, v: usize) -> Option<Path> {
    if parent[v] == NONE {
        return None;
    }
    let mut out = vec![v];
    let mut x = v;
    while x != u {
        x = parent[x] as usize;
        out.push(x);
    }
    out.reverse();
    Some(Path::new(out))
}

/// All canonical shortest-path trees of a graph: exact hop distances plus the
/// predecessor of every target on its canonical path, for every source.
#[derive(Debug, Clone)]
pub struct CanonicalPaths {
    n: usize,
    dist: Vec<u32>,
    parent: Vec<u32>,
    ties: usize,
}

impl CanonicalPaths {
    pub fn build(g: &Graph, tb: &TieBreakWeights) -> Self {
        let n = g.n();
        let rows = par::map_indices(n, |src| {
            let (mut dist, mut parent, mut weight) = (vec![0; n], vec![0; n], vec![0; n]);
            let ties =
                source_tree(g, tb, src, &mut dist, &mut parent, &mut weight, &mut Vec::new());
            (dist, parent, ties)
        });
        let mut dist = Vec::with_capacity(n * n);
        let mut parent = Vec::with_capacity(n * n);
        let mut ties = 0;
        for (d, p, t) in rows {
            dist.extend_from_slice(&d);
            parent.extend_from_slice(&p);
            ties += t;
        }
        CanonicalPaths { n, dist, parent, ties }
    }

    /// Builds with `seed`, re-deriving the seed while exact ties are detected
    /// (at most `attempts` times). Returns the weights actually used.
    pub fn build_audited(g: &Graph, seed: u64, attempts: usize) -> (TieBreakWeights, Self) {
        let mut tb = TieBreakWeights::new(g, seed);
        let mut paths = Self::build(g, &tb);
        for _ in 0..attempts {
            if paths.ties == 0 {
                break;
            }
            tb = TieBreakWeights::new(g, tb.next_seed());
            paths = Self::build(g, &tb);
        }
        (tb, paths)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact weight ties seen while building (0 means every canonical path is
    /// the unique minimum).
    pub fn ties(&self) -> usize {
        self.ties
    }

    #[inline]
    pub fn distance(&self, u: usize, v: usize) -> Option<u32> {
        let d = self.dist[u * self.n + v];
        (d != NONE).then_some(d)
    }

    #[inline]
    pub(crate) fn dist_row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    #[inline]
    pub(crate) fn parent_row(&self, u: usize) -> &[u32] {
        &self.parent[u * self.n..(u + 1) * self.n]
    }

    /// Predecessor of `v` on the canonical path from `u`.
    #[inline]
    pub fn parent(&self, u: usize, v: usize) -> Option<usize> {
        let p = self.parent[u * self.n + v];
        (p != NONE && u != v).then_some(p as usize)
    }

    pub fn path(&self, u: usize, v: usize) -> Result<Path> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidVertex { vertex: u.max(v), n: self.n });
        }
        walk_parents(self.parent_row(u), u, v).ok_or(Error::NoPath { from: u, to: v })
    }

    pub fn tree(&self, src: usize) -> SourceTree {
        SourceTree::from_parents(src, self.parent_row(src))
    }
}

/// Children lists of one canonical shortest-path tree.
#[derive(Debug, Clone)]
pub struct SourceTree {
    root: usize,
    offsets: Vec<u32>,
    children: Vec<u32>,
}

impl SourceTree {
    fn from_parents(root: usize, parent: &[u32]) -> Self {
        let n = parent.len();
        let mut count = vec![0u32; n + 1];
        for (v, &p) in parent.iter().enumerate() {
            if p != NONE && v != root {
                count[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let offsets = count.clone();
        let mut fill = count;
        let mut children = vec![0u32; offsets[n] as usize];
        for (v, &p) in parent.iter().enumerate() {
            if p != NONE && v != root {
                children[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }
        SourceTree { root, offsets, children }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, v: usize) -> &[u32] {
        &self.children[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Depth-first walk from the root. `enter(state, v)` returns whether to
    /// descend into `v`'s subtree; `leave(state, v)` runs for every entered
    /// vertex once its subtree is done, so per-path counters held in `state`
    /// can be pushed and popped.
    pub fn walk<S, E, L>(&self, state: &mut S, mut enter: E, mut leave: L)
    where
        E: FnMut(&mut S, usize) -> bool,
        L: FnMut(&mut S, usize),
    {
        let mut stack: Vec<(u32, u32)> = Vec::new();
        if enter(state, self.root) {
            stack.push((self.root as u32, 0));
        } else {
            leave(state, self.root);
        }
        while let Some(top) = stack.last_mut() {
            let (v, i) = (top.0 as usize, top.1 as usize);
            let kids = self.children(v);
            if i < kids.len() {
                top.1 += 1;
                let c = kids[i] as usize;
                if enter(state, c) {
                    stack.push((c as u32, 0));
                } else {
                    leave(state, c);
                }
            } else {
                stack.pop();
                leave(state, v);
            }
        }
    }
}
