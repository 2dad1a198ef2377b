use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::SparseArtifact;
use crate::error::{Error, Result};
use crate::graph::{Graph, NONE};
use crate::par;
use crate::schedule::ConstructionKind;

pub const DEFAULT_SAMPLE_PAIRS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    /// Every connected unordered pair.
    Exact,
    /// `pairs` connected pairs drawn uniformly with replacement.
    Sampled { seed: u64, pairs: usize },
}

/// A pair the artifact places closer than the graph does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub dg: u32,
    pub dh: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub mode: MeasureMode,
    pub kind: ConstructionKind,
    pub n: usize,
    pub edges: usize,
    pub pair_count: u64,
    pub max_additive_error: u32,
    pub mean_additive_error: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Additive error → number of pairs.
    pub error_histogram: BTreeMap<u32, u64>,
    pub violations: Vec<Violation>,
    /// Pairs connected in the graph but not in the artifact.
    pub artifact_unreachable: u64,
}

impl DistortionReport {
    /// No underestimates, nothing disconnected, and the max within `bound`.
    pub fn passes(&self, bound: f64) -> bool {
        self.violations.is_empty()
            && self.artifact_unreachable == 0
            && self.max_additive_error as f64 <= bound
    }
}

/// Distance rows of an artifact: BFS over a subgraph, or Dijkstra once
/// shortcuts are present.
pub(crate) enum Host {
    Unit(Graph),
    Weighted(Vec<Vec<(u32, u32)>>),
}

impl Host {
    pub fn new(a: &SparseArtifact) -> Result<Self> {
        let h = a.subgraph_graph()?;
        if a.weighted_edges().is_empty() {
            return Ok(Host::Unit(h));
        }
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); a.n()];
        for &(u, v) in h.edges() {
            adj[u].push((v as u32, 1));
            adj[v].push((u as u32, 1));
        }
        for &(u, v, w) in a.weighted_edges() {
            adj[u].push((v as u32, w));
            adj[v].push((u as u32, w));
        }
        Ok(Host::Weighted(adj))
    }

    pub fn row(&self, src: usize) -> Vec<u32> {
        match self {
            Host::Unit(h) => {
                let mut row = vec![NONE; h.n()];
                h.bfs_into(src, &mut row, &mut VecDeque::new());
                row
            }
            Host::Weighted(adj) => {
                let mut row = vec![NONE; adj.len()];
                let mut heap = BinaryHeap::new();
                row[src] = 0;
                heap.push(Reverse((0u32, src as u32)));
                while let Some(Reverse((d, x))) = heap.pop() {
                    if d > row[x as usize] {
                        continue;
                    }
                    for &(y, w) in &adj[x as usize] {
                        let nd = d + w;
                        if nd < row[y as usize] {
                            row[y as usize] = nd;
                            heap.push(Reverse((nd, y)));
                        }
                    }
                }
                row
            }
        }
    }
}

pub(crate) fn check_artifact(g: &Graph, a: &SparseArtifact) -> Result<()> {
    if a.n() != g.n() {
        return Err(Error::ArtifactMismatch("vertex count differs from graph"));
    }
    if !a.subgraph().all(|((u, v), _)| g.has_edge(u, v)) {
        return Err(Error::ArtifactMismatch("subgraph edge missing from graph"));
    }
    Ok(())
}

/// Shortcuts whose weight is not the true distance: `(u, v, weight, δ_G)`.
pub fn shortcut_errors(g: &Graph, a: &SparseArtifact) -> Result<Vec<(usize, usize, u32, Option<u32>)>> {
    check_artifact(g, a)?;
    let mut by_source: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
    for &(u, v, w) in a.weighted_edges() {
        by_source.entry(u).or_default().push((v, w));
    }
    let jobs: Vec<_> = by_source.into_iter().collect();
    let bad = par::map_items(&jobs, |(u, targets)| {
        let mut row = vec![NONE; g.n()];
        g.bfs_into(*u, &mut row, &mut VecDeque::new());
        targets
            .iter()
            .filter(|&&(v, w)| row[v] != w)
            .map(|&(v, w)| (*u, v, w, (row[v] != NONE).then_some(row[v])))
            .collect::<Vec<_>>()
    });
    Ok(bad.concat())
}

#[derive(Default)]
struct Partial {
    pairs: u64,
    sum: u64,
    max: u32,
    worst: Option<(usize, usize)>,
    hist: BTreeMap<u32, u64>,
    violations: Vec<Violation>,
    unreachable: u64,
}

impl Partial {
    fn record(&mut self, u: usize, v: usize, dg: u32, dh: u32) {
        if dh == NONE {
            self.unreachable += 1;
            return;
        }
        if dh < dg {
            self.violations.push(Violation { u, v, dg, dh });
            return;
        }
        let err = dh - dg;
        self.pairs += 1;
        self.sum += err as u64;
        if err > self.max || self.worst.is_none() {
            self.max = err.max(self.max);
            self.worst = Some((u, v));
        }
        *self.hist.entry(err).or_insert(0) += 1;
    }

    fn merge(&mut self, other: Partial) {
        self.pairs += other.pairs;
        self.sum += other.sum;
        if other.max > self.max || self.worst.is_none() {
            self.max = other.max.max(self.max);
            self.worst = other.worst.or(self.worst);
        }
        for (k, c) in other.hist {
            *self.hist.entry(k).or_insert(0) += c;
        }
        self.violations.extend(other.violations);
        self.unreachable += other.unreachable;
    }
}

/// Additive error of `a` against `g` over connected pairs.
pub fn measure_distortion(
    g: &Graph,
    a: &SparseArtifact,
    mode: MeasureMode,
) -> Result<DistortionReport> {
    check_artifact(g, a)?;
    let host = Host::new(a)?;
    let n = g.n();
    let jobs: Vec<(usize, Vec<usize>)> = match mode {
        MeasureMode::Exact => (0..n).map(|u| (u, (u + 1..n).collect())).collect(),
        MeasureMode::Sampled { seed, pairs } => sample_pairs(g, seed, pairs),
    };
    let parts = par::map_items(&jobs, |(u, targets)| {
        let mut part = Partial::default();
        if targets.is_empty() {
            return part;
        }
        let mut dg = vec![NONE; n];
        g.bfs_into(*u, &mut dg, &mut VecDeque::new());
        let dh = host.row(*u);
        for &v in targets {
            if dg[v] != NONE {
                part.record(*u, v, dg[v], dh[v]);
            }
        }
        part
    });
    let mut total = Partial::default();
    for p in parts {
        total.merge(p);
    }
    let counted = total.pairs + total.violations.len() as u64 + total.unreachable;
    Ok(DistortionReport {
        mode,
        kind: a.kind(),
        n,
        edges: a.edge_count(),
        pair_count: counted,
        max_additive_error: total.max,
        mean_additive_error: if total.pairs == 0 { 0.0 } else { total.sum as f64 / total.pairs as f64 },
        worst_pair: total.worst,
        error_histogram: total.hist,
        violations: total.violations,
        artifact_unreachable: total.unreachable,
    })
}

/// Uniform connected pairs `u ≠ v`, grouped by first endpoint.
fn sample_pairs(g: &Graph, seed: u64, pairs: usize) -> Vec<(usize, Vec<usize>)> {
    let n = g.n();
    let comp = g.components();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut drawn = 0;
    let mut attempts = 0usize;
    let budget = pairs.saturating_mul(64).max(1024);
    while n >= 2 && drawn < pairs && attempts < budget {
        attempts += 1;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && comp[u] == comp[v] {
            grouped.entry(u).or_default().push(v);
            drawn += 1;
        }
    }
    grouped.into_iter().collect()
}
