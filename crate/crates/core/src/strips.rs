//! Strip creation.
//!
//! A strip is a canonical shortest path that, when inserted, has at most `d`
//! hops, meets at most `m` strips already present, and meets exactly `m`
//! clusters that no strip has touched yet (clean clusters). Strips are added
//! until no pair of vertices has a canonical path meeting all three
//! conditions.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::cluster::Clustering;
use crate::error::Result;
use crate::graph::{edge, Edge, EdgeSet, Graph, Path, NONE};
use crate::paths::{CanonicalPaths, TieBreakWeights};
use crate::schedule::LengthBound;

/// Counts for one path against the current strip set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathStats {
    pub strips_hit: usize,
    pub clean_clusters_hit: usize,
}

/// What the strip looked like at the moment it was inserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub source: usize,
    pub target: usize,
    pub length: usize,
    pub strips_hit: usize,
    pub clean_clusters_hit: usize,
}

/// Classification of strip edges at insertion time, following the four-way
/// case split of the linear edge bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeCaseCounts {
    /// Both endpoints unclustered.
    pub both_unclustered: usize,
    /// An endpoint not yet touched by any strip edge.
    pub fresh_endpoint: usize,
    /// Both endpoints already touched by strip edges, the edge itself new.
    pub between_strips: usize,
    /// Edge already present in an earlier strip.
    pub already_present: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripSet {
    d: LengthBound,
    m: usize,
    strips: Vec<Path>,
    by_vertex: Vec<Vec<u32>>,
    clean: Vec<bool>,
    insertions: Vec<Insertion>,
    edge_cases: EdgeCaseCounts,
}

impl StripSet {
    fn empty(n: usize, clusters: usize, d: LengthBound, m: usize) -> Self {
        StripSet {
            d,
            m,
            strips: Vec::new(),
            by_vertex: vec![Vec::new(); n],
            clean: vec![true; clusters],
            insertions: Vec::new(),
            edge_cases: EdgeCaseCounts::default(),
        }
    }

    /// Rebuilds bookkeeping for an explicit list of strips. Insertion records
    /// and the edge-case breakdown are not recoverable and stay empty.
    pub fn from_strips(c: &Clustering, d: LengthBound, m: usize, strips: Vec<Path>) -> Self {
        let mut ss = StripSet::empty(c.vertex_count(), c.len(), d, m);
        for p in strips {
            ss.push(c, p);
        }
        ss
    }

    fn push(&mut self, c: &Clustering, p: Path) {
        let id = self.strips.len() as u32;
        for &v in p.vertices() {
            self.by_vertex[v].push(id);
            if let Some(k) = c.cluster_of(v) {
                self.clean[k] = false;
            }
        }
        self.strips.push(p);
    }

    pub fn length_bound(&self) -> LengthBound {
        self.d
    }

    pub fn quota(&self) -> usize {
        self.m
    }

    pub fn strips(&self) -> &[Path] {
        &self.strips
    }

    pub fn len(&self) -> usize {
        self.strips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strips.is_empty()
    }

    /// Ids of the strips containing `v`, ascending.
    pub fn strips_at(&self, v: usize) -> &[u32] {
        &self.by_vertex[v]
    }

    pub fn is_clean(&self, cluster: usize) -> bool {
        self.clean[cluster]
    }

    pub fn clean_count(&self) -> usize {
        self.clean.iter().filter(|&&c| c).count()
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.insertions
    }

    pub fn edge_cases(&self) -> EdgeCaseCounts {
        self.edge_cases
    }

    /// Union of all strip edges.
    pub fn edges(&self) -> EdgeSet {
        self.strips.iter().flat_map(|p| p.edges()).collect()
    }

    /// For each cluster, the ids of the strips touching it.
    pub(crate) fn strips_by_cluster(&self, c: &Clustering) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); c.len()];
        for (v, ids) in self.by_vertex.iter().enumerate() {
            if let Some(k) = c.cluster_of(v) {
                out[k].extend_from_slice(ids);
            }
        }
        for ids in &mut out {
            ids.sort_unstable();
            ids.dedup();
        }
        out
    }
}

/// Distinct strips and distinct clean clusters sharing a vertex with `p`.
pub fn path_stats(ss: &StripSet, c: &Clustering, p: &Path) -> PathStats {
    let mut strips = BTreeSet::new();
    let mut clean = BTreeSet::new();
    for &v in p.vertices() {
        strips.extend(ss.strips_at(v).iter().copied());
        if let Some(k) = c.cluster_of(v) {
            if ss.is_clean(k) {
                clean.insert(k);
            }
        }
    }
    PathStats { strips_hit: strips.len(), clean_clusters_hit: clean.len() }
}

/// Distinct strip edges with at least one clustered endpoint.
pub fn strip_edge_budget(ss: &StripSet, c: &Clustering) -> usize {
    ss.edges()
        .iter()
        .filter(|&(u, v)| c.is_clustered(u) || c.is_clustered(v))
        .count()
}

/// Running counts along a root-to-vertex path of a canonical tree. `enter`
/// and `leave` must be called in depth-first order.
pub(crate) struct PathCounter<'a> {
    ss: &'a StripSet,
    c: &'a Clustering,
    strip_refs: Vec<u32>,
    cluster_refs: Vec<u32>,
    pub strips: usize,
    pub clean: usize,
    closure: Option<Closure>,
}

/// Strips touching any cluster the path touches (or the path itself).
struct Closure {
    by_cluster: Vec<Vec<u32>>,
    cluster_refs: Vec<u32>,
    strip_refs: Vec<u32>,
    count: usize,
}

impl<'a> PathCounter<'a> {
    pub fn new(ss: &'a StripSet, c: &'a Clustering) -> Self {
        PathCounter {
            ss,
            c,
            strip_refs: vec![0; ss.len()],
            cluster_refs: vec![0; c.len()],
            strips: 0,
            clean: 0,
            closure: None,
        }
    }

    pub fn with_closure(mut self) -> Self {
        self.closure = Some(Closure {
            by_cluster: self.ss.strips_by_cluster(self.c),
            cluster_refs: vec![0; self.c.len()],
            strip_refs: vec![0; self.ss.len()],
            count: 0,
        });
        self
    }

    pub fn closure_strips(&self) -> usize {
        self.closure.as_ref().map_or(0, |c| c.count)
    }

    pub fn enter(&mut self, v: usize) {
        for &s in self.ss.strips_at(v) {
            let r = &mut self.strip_refs[s as usize];
            if *r == 0 {
                self.strips += 1;
            }
            *r += 1;
        }
        let cluster = self.c.cluster_of(v);
        if let Some(k) = cluster {
            if self.ss.is_clean(k) {
                if self.cluster_refs[k] == 0 {
                    self.clean += 1;
                }
                self.cluster_refs[k] += 1;
            }
        }
        if let Some(cl) = self.closure.as_mut() {
            let touched: &[u32] = match cluster {
                Some(k) => {
                    cl.cluster_refs[k] += 1;
                    if cl.cluster_refs[k] > 1 {
                        &[]
                    } else {
                        &cl.by_cluster[k]
                    }
                }
                None => self.ss.strips_at(v),
            };
            for &s in touched {
                let r = &mut cl.strip_refs[s as usize];
                if *r == 0 {
                    cl.count += 1;
                }
                *r += 1;
            }
        }
    }

    pub fn leave(&mut self, v: usize) {
        for &s in self.ss.strips_at(v) {
            let r = &mut self.strip_refs[s as usize];
            *r -= 1;
            if *r == 0 {
                self.strips -= 1;
            }
        }
        let cluster = self.c.cluster_of(v);
        if let Some(k) = cluster {
            if self.ss.is_clean(k) {
                self.cluster_refs[k] -= 1;
                if self.cluster_refs[k] == 0 {
                    self.clean -= 1;
                }
            }
        }
        if let Some(cl) = self.closure.as_mut() {
            let touched: &[u32] = match cluster {
                Some(k) => {
                    cl.cluster_refs[k] -= 1;
                    if cl.cluster_refs[k] > 0 {
                        &[]
                    } else {
                        &cl.by_cluster[k]
                    }
                }
                None => self.ss.strips_at(v),
            };
            for &s in touched {
                let r = &mut cl.strip_refs[s as usize];
                *r -= 1;
                if *r == 0 {
                    cl.count -= 1;
                }
            }
        }
    }
}

/// Per-target counts along every canonical path out of one source.
pub(crate) struct SourceCounts {
    pub strips: Vec<u32>,
    pub clean: Vec<u32>,
    /// First vertex on the path where the clean count reached the quota.
    pub first_full: Vec<u32>,
}

pub(crate) fn source_counts(
    paths: &CanonicalPaths,
    ss: &StripSet,
    c: &Clustering,
    u: usize,
    quota: usize,
) -> SourceCounts {
    let n = paths.n();
    let mut out = SourceCounts {
        strips: vec![NONE; n],
        clean: vec![NONE; n],
        first_full: vec![NONE; n],
    };
    let parent = paths.parent_row(u);
    let mut counter = PathCounter::new(ss, c);
    let tree = paths.tree(u);
    tree.walk(
        &mut counter,
        |counter, v| {
            counter.enter(v);
            out.strips[v] = counter.strips as u32;
            out.clean[v] = counter.clean as u32;
            out.first_full[v] = if counter.clean >= quota {
                let p = parent[v] as usize;
                if v == u || (out.clean[p] as usize) < quota {
                    v as u32
                } else {
                    out.first_full[p]
                }
            } else {
                NONE
            };
            true
        },
        |counter, v| counter.leave(v),
    );
    out
}

/// Runs strip creation from scratch.
pub fn create_strips(
    g: &Graph,
    tb: &TieBreakWeights,
    c: &Clustering,
    d: LengthBound,
    m: usize,
) -> Result<StripSet> {
    c.check_graph(g)?;
    let paths = CanonicalPaths::build(g, tb);
    create_strips_with(&paths, c, d, m)
}

/// Strip creation over precomputed canonical paths.
///
/// Ordered pairs are scanned lexicographically. For a pair `(u, v)` that
/// fails because the path is too long or meets more than `m` clean clusters,
/// the shortest prefix `ρ(u, x)` meeting exactly `m` clean clusters is tried
/// in its place. After an insertion the scan restarts. A source that had no
/// qualifying pair keeps none after later insertions (clean counts only drop,
/// strip counts only grow), so restarting at the current source gives the
/// same result as restarting at vertex 0.
pub fn create_strips_with(
    paths: &CanonicalPaths,
    c: &Clustering,
    d: LengthBound,
    m: usize,
) -> Result<StripSet> {
    if m == 0 {
        return Err(crate::Error::InvalidParameter("strip quota m must be at least 1"));
    }
    if c.vertex_count() != paths.n() {
        return Err(crate::Error::ClusteringMismatch {
            expected: paths.n(),
            found: c.vertex_count(),
        });
    }
    let n = paths.n();
    let mut ss = StripSet::empty(n, c.len(), d, m);
    if m > c.len() {
        return Ok(ss);
    }
    let mut strip_edges: BTreeSet<Edge> = BTreeSet::new();
    let mut touched = vec![false; n];

    for u in 0..n {
        loop {
            let counts = source_counts(paths, &ss, c, u, m);
            let qualifies = |x: usize| {
                x != u
                    && d.allows(paths.distance(u, x).unwrap_or(u32::MAX) as usize)
                    && counts.strips[x] as usize <= m
                    && counts.clean[x] as usize == m
            };
            let mut found = None;
            for v in 0..n {
                if v == u || counts.clean[v] == NONE {
                    continue;
                }
                if qualifies(v) {
                    found = Some(v);
                    break;
                }
                let len = paths.distance(u, v).unwrap() as usize;
                let overshoot = !d.allows(len) || counts.clean[v] as usize > m;
                let x = counts.first_full[v];
                if overshoot && x != NONE && qualifies(x as usize) {
                    found = Some(x as usize);
                    break;
                }
            }
            let Some(x) = found else { break };

            let path = paths.path(u, x)?;
            let record = Insertion {
                source: u,
                target: x,
                length: path.len(),
                strips_hit: counts.strips[x] as usize,
                clean_clusters_hit: counts.clean[x] as usize,
            };
            for (a, b) in path.edges() {
                let cases = &mut ss.edge_cases;
                if !c.is_clustered(a) && !c.is_clustered(b) {
                    cases.both_unclustered += 1;
                } else if strip_edges.contains(&edge(a, b)) {
                    cases.already_present += 1;
                } else if !touched[a] || !touched[b] {
                    cases.fresh_endpoint += 1;
                } else {
                    cases.between_strips += 1;
                }
            }
            for (a, b) in path.edges() {
                strip_edges.insert(edge(a, b));
                touched[a] = true;
                touched[b] = true;
            }
            ss.push(c, path);
            ss.insertions.push(record);
        }
    }
    Ok(ss)
}

/// A pair whose canonical path would still qualify as a new strip, if any.
/// `None` certifies that `ss` is a fixpoint.
pub fn find_qualifying_pair(
    paths: &CanonicalPaths,
    c: &Clustering,
    ss: &StripSet,
) -> Option<(usize, usize)> {
    let (d, m) = (ss.length_bound(), ss.quota());
    let n = paths.n();
    (0..n).find_map(|u| {
        let counts = source_counts(paths, ss, c, u, m);
        (0..n)
            .find(|&v| {
                v != u
                    && counts.clean[v] as usize == m
                    && counts.strips[v] as usize <= m
                    && d.allows(paths.distance(u, v).unwrap() as usize)
            })
            .map(|v| (u, v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::cluster;
    use crate::graph::fixtures::*;

    fn p9_setup() -> (Graph, CanonicalPaths, Clustering) {
        let g = path_graph(9);
        let tb = TieBreakWeights::new(&g, 0);
        let paths = CanonicalPaths::build(&g, &tb);
        let c = Clustering::from_clusters(&g, 2, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]])
            .unwrap();
        (g, paths, c)
    }

    #[test]
    fn p9_single_strip() {
        let (_, paths, c) = p9_setup();
        let ss = create_strips_with(&paths, &c, LengthBound::Unbounded, 4).unwrap();
        // (0, 6) is the first pair in lexicographic order touching all four
        // clusters.
        assert_eq!(ss.len(), 1);
        assert_eq!(ss.strips()[0].vertices(), &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(ss.clean_count(), 0);
        assert_eq!(strip_edge_budget(&ss, &c), 6);
        assert_eq!(find_qualifying_pair(&paths, &c, &ss), None);
        let rec = ss.insertions()[0];
        assert_eq!((rec.strips_hit, rec.clean_clusters_hit, rec.length), (0, 4, 6));
    }

    #[test]
    fn p9_full_path_strip_budget() {
        let (_, _, c) = p9_setup();
        let ss = StripSet::from_strips(
            &c,
            LengthBound::Unbounded,
            4,
            vec![Path::new((0..9).collect())],
        );
        // every edge, (7, 8) included, touches a clustered vertex
        assert_eq!(strip_edge_budget(&ss, &c), 8);
    }

    #[test]
    fn p9_stats_after_first_strip() {
        let (_, paths, c) = p9_setup();
        let ss = create_strips_with(&paths, &c, LengthBound::Unbounded, 4).unwrap();
        for u in 0..9 {
            for v in 0..9 {
                let p = paths.path(u, v).unwrap();
                let s = path_stats(&ss, &c, &p);
                let shares = p.vertices().iter().any(|&x| x <= 6);
                assert_eq!(s.strips_hit, shares as usize);
                assert_eq!(s.clean_clusters_hit, 0);
            }
        }
    }

    #[test]
    fn trivial_cases() {
        let (g, paths, c) = p9_setup();
        let ss = create_strips_with(&paths, &c, LengthBound::Unbounded, 5).unwrap();
        assert!(ss.is_empty());
        let p = paths.path(0, 8).unwrap();
        assert_eq!(path_stats(&ss, &c, &p), PathStats { strips_hit: 0, clean_clusters_hit: 4 });
        assert_eq!(path_stats(&ss, &c, &Path::default()), PathStats::default());
        assert_eq!(strip_edge_budget(&ss, &c), 0);

        let none = cluster(&g, 10).unwrap();
        let ss = create_strips_with(&paths, &none, LengthBound::Unbounded, 1).unwrap();
        assert!(ss.is_empty());
        assert!(create_strips_with(&paths, &c, LengthBound::Unbounded, 0).is_err());
    }

    #[test]
    fn unclustered_path_reports_nothing() {
        let g = path_graph(6);
        let c = Clustering::from_clusters(&g, 2, vec![vec![0, 1]]).unwrap();
        let ss = StripSet::from_strips(&c, LengthBound::Unbounded, 1, Vec::new());
        let p = Path::new(vec![3, 4, 5]);
        assert_eq!(path_stats(&ss, &c, &p), PathStats::default());
    }

    #[test]
    fn length_bound_limits_strips() {
        let (_, paths, c) = p9_setup();
        // with d = 3 a strip may span at most four vertices, i.e. two clusters
        let ss = create_strips_with(&paths, &c, LengthBound::Bounded(3), 2).unwrap();
        assert_eq!(
            ss.strips().iter().map(|p| p.vertices().to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 1, 2], vec![3, 4, 5, 6]]
        );
    }

    fn check_invariants(paths: &CanonicalPaths, c: &Clustering, ss: &StripSet) {
        let m = ss.quota();
        assert!(ss.len() <= c.len() / m);
        for rec in ss.insertions() {
            assert!(ss.length_bound().allows(rec.length));
            assert!(rec.strips_hit <= m);
            assert_eq!(rec.clean_clusters_hit, m);
        }
        for k in 0..c.len() {
            let dirty = c.clusters()[k].iter().any(|&v| !ss.strips_at(v).is_empty());
            assert_eq!(ss.is_clean(k), !dirty);
        }
        assert_eq!(find_qualifying_pair(paths, c, ss), None);
        let cases = ss.edge_cases();
        assert_eq!(strip_edge_budget(ss, c), cases.fresh_endpoint + cases.between_strips);
    }

    #[test]
    fn fixpoint_and_invariants_on_random_graphs() {
        for (seed, n, p, e, m, d) in [
            (1u64, 120, 0.04, 2, 3, LengthBound::Unbounded),
            (2, 150, 0.03, 2, 2, LengthBound::Bounded(6)),
            (3, 100, 0.06, 1, 4, LengthBound::Bounded(8)),
            (4, 90, 0.05, 3, 1, LengthBound::Bounded(2)),
        ] {
            let g = gnp(n, p, seed);
            let paths = CanonicalPaths::build(&g, &TieBreakWeights::new(&g, seed));
            let c = cluster(&g, e).unwrap();
            let ss = create_strips_with(&paths, &c, d, m).unwrap();
            check_invariants(&paths, &c, &ss);
            assert!(strip_edge_budget(&ss, &c) <= 8 * n);
        }
    }

    #[test]
    fn grid_strips() {
        let g = grid(10, 10);
        let paths = CanonicalPaths::build(&g, &TieBreakWeights::new(&g, 5));
        let c = cluster(&g, 2).unwrap();
        let ss = create_strips_with(&paths, &c, LengthBound::Unbounded, 5).unwrap();
        assert!(!ss.is_empty());
        check_invariants(&paths, &c, &ss);
        for p in ss.strips() {
            assert!(p.is_valid_in(&g));
        }
    }

    #[test]
    fn unbounded_fixpoint_caps_clean_hits() {
        // with d unbounded and few enough strips that condition 2 never binds,
        // no canonical path meets more than m clean clusters
        let g = grid(12, 12);
        let paths = CanonicalPaths::build(&g, &TieBreakWeights::new(&g, 9));
        let c = cluster(&g, 2).unwrap();
        let m = 9;
        let ss = create_strips_with(&paths, &c, LengthBound::Unbounded, m).unwrap();
        assert!(!ss.is_empty());
        assert!(ss.len() <= m);
        for u in 0..144 {
            for v in 0..144 {
                if let Ok(p) = paths.path(u, v) {
                    assert!(path_stats(&ss, &c, &p).clean_clusters_hit <= m);
                }
            }
        }
    }

    #[test]
    fn source_counts_match_path_stats() {
        let g = gnp(80, 0.06, 12);
        let paths = CanonicalPaths::build(&g, &TieBreakWeights::new(&g, 12));
        let c = cluster(&g, 2).unwrap();
        let ss = create_strips_with(&paths, &c, LengthBound::Bounded(5), 2).unwrap();
        for u in [0, 17, 42] {
            let counts = source_counts(&paths, &ss, &c, u, 2);
            for v in 0..80 {
                let Ok(p) = paths.path(u, v) else { continue };
                let s = path_stats(&ss, &c, &p);
                assert_eq!(counts.strips[v] as usize, s.strips_hit);
                assert_eq!(counts.clean[v] as usize, s.clean_clusters_hit);
            }
        }
    }
}
