//! The three constructions.
//!
//! All of them start from the same base: a greedy multiplicative spanner,
//! the strip edges, and every edge with both endpoints unclustered. The first
//! spanner stops there (with unbounded strips). The other two run the
//! strip/hitting stage and then either add exact-weight shortcuts inside the
//! hitting set (emulator) or a subset spanner on it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cluster::{cluster, Clustering};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, EdgeSet, Graph, NONE};
use crate::par;
use crate::paths::{CanonicalPaths, TieBreakWeights};
use crate::primitives::{
    hitting_set, multspan, subset_spanner_rows, SetFamily, SubsetSpannerStats,
};
use crate::schedule::{schedule, ConstructionKind, ParameterSchedule};
use crate::strips::{create_strips_with, PathCounter, StripSet};

/// Which step of a construction first contributed an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Multspan,
    Strips,
    Unclustered,
    SubsetSpan,
    EmulatorShortcut,
}

impl Provenance {
    pub const ALL: [Provenance; 5] = [
        Provenance::Multspan,
        Provenance::Strips,
        Provenance::Unclustered,
        Provenance::SubsetSpan,
        Provenance::EmulatorShortcut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Provenance::Multspan => "multspan",
            Provenance::Strips => "strips",
            Provenance::Unclustered => "unclustered",
            Provenance::SubsetSpan => "subsetspan",
            Provenance::EmulatorShortcut => "emulator-shortcut",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A spanner (subgraph) or emulator (subgraph plus exact-weight shortcuts).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseArtifact {
    schedule: ParameterSchedule,
    seed: u64,
    subgraph: BTreeMap<Edge, Provenance>,
    weighted: Vec<(usize, usize, u32)>,
    hitting_set: Vec<usize>,
}

impl SparseArtifact {
    /// Reassembles an artifact, e.g. from a file. Edges are normalized;
    /// repeats and spanners carrying shortcuts are rejected.
    pub fn from_parts(
        schedule: ParameterSchedule,
        seed: u64,
        subgraph: Vec<(Edge, Provenance)>,
        mut weighted: Vec<(usize, usize, u32)>,
        mut hitting_set: Vec<usize>,
    ) -> Result<Self> {
        let n = schedule.n;
        let mut map = BTreeMap::new();
        for ((u, v), p) in subgraph {
            if u >= n || v >= n {
                return Err(Error::InvalidVertex { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if map.insert(edge(u, v), p).is_some() {
                return Err(Error::ArtifactMismatch("repeated subgraph edge"));
            }
        }
        if !schedule.kind.is_emulator() && !weighted.is_empty() {
            return Err(Error::ArtifactMismatch("spanner with weighted edges"));
        }
        for w in &mut weighted {
            if w.0 >= n || w.1 >= n {
                return Err(Error::InvalidVertex { vertex: w.0.max(w.1), n });
            }
            let (a, b) = edge(w.0, w.1);
            *w = (a, b, w.2);
        }
        weighted.sort_unstable();
        hitting_set.sort_unstable();
        hitting_set.dedup();
        Ok(SparseArtifact { schedule, seed, subgraph: map, weighted, hitting_set })
    }

    pub fn kind(&self) -> ConstructionKind {
        self.schedule.kind
    }

    pub fn is_emulator(&self) -> bool {
        self.schedule.kind.is_emulator()
    }

    pub fn schedule(&self) -> &ParameterSchedule {
        &self.schedule
    }

    pub fn epsilon(&self) -> f64 {
        self.schedule.epsilon
    }

    pub fn n(&self) -> usize {
        self.schedule.n
    }

    /// Seed of the tie-break weights the artifact was built with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn subgraph(&self) -> impl Iterator<Item = (Edge, Provenance)> + '_ {
        self.subgraph.iter().map(|(&e, &p)| (e, p))
    }

    pub fn subgraph_edges(&self) -> EdgeSet {
        self.subgraph.keys().copied().collect()
    }

    pub fn subgraph_len(&self) -> usize {
        self.subgraph.len()
    }

    pub fn weighted_edges(&self) -> &[(usize, usize, u32)] {
        &self.weighted
    }

    pub fn hitting_set(&self) -> &[usize] {
        &self.hitting_set
    }

    /// Subgraph edges plus shortcuts.
    pub fn edge_count(&self) -> usize {
        self.subgraph.len() + self.weighted.len()
    }

    /// Edge count per provenance tag; every tag is present, and the values
    /// sum to [`edge_count`](Self::edge_count).
    pub fn provenance_counts(&self) -> BTreeMap<Provenance, usize> {
        let mut out: BTreeMap<_, _> = Provenance::ALL.iter().map(|&p| (p, 0)).collect();
        for p in self.subgraph.values() {
            *out.get_mut(p).unwrap() += 1;
        }
        *out.get_mut(&Provenance::EmulatorShortcut).unwrap() += self.weighted.len();
        out
    }

    pub fn subgraph_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n(), self.subgraph.keys().copied())
    }
}

/// Family members produced by the Algorithm 3 pair scan.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HittingSummary {
    pub family: SetFamily,
    /// Distinct members built from the 2-neighborhood of met strips.
    pub strip_members: usize,
    /// Distinct members that are path prefixes.
    pub path_members: usize,
    pub min_strip_member: Option<usize>,
    pub min_path_member: Option<usize>,
    /// (source, first threshold vertex) combinations seen before dedup.
    pub triggers: usize,
}

/// Output of the strip/hitting stage.
#[derive(Debug, Clone)]
pub struct HittingStage {
    pub clustering: Clustering,
    pub strips: StripSet,
    pub base: BTreeMap<Edge, Provenance>,
    pub summary: HittingSummary,
    pub hitting_set: Vec<usize>,
}

/// Everything a construction computed, kept for auditing.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub artifact: SparseArtifact,
    pub clustering: Clustering,
    pub strips: StripSet,
    pub hitting: Option<HittingSummary>,
    pub subset: Option<SubsetSpannerStats>,
    pub tie_break: TieBreakWeights,
    pub paths: CanonicalPaths,
}

struct Base {
    clustering: Clustering,
    strips: StripSet,
    edges: BTreeMap<Edge, Provenance>,
}

fn tag(edges: &mut BTreeMap<Edge, Provenance>, e: Edge, p: Provenance) {
    edges.entry(edge(e.0, e.1)).or_insert(p);
}

fn base(g: &Graph, paths: &CanonicalPaths, sched: &ParameterSchedule) -> Result<Base> {
    let clustering = cluster(g, sched.cluster_size)?;
    let strips = create_strips_with(paths, &clustering, sched.strip_length, sched.strip_quota)?;
    let mut edges = BTreeMap::new();
    for e in multspan(g, sched.multspan_k).iter() {
        tag(&mut edges, e, Provenance::Multspan);
    }
    for e in strips.edges().iter() {
        tag(&mut edges, e, Provenance::Strips);
    }
    for &(u, v) in g.edges() {
        if !clustering.is_clustered(u) && !clustering.is_clustered(v) {
            tag(&mut edges, (u, v), Provenance::Unclustered);
        }
    }
    Ok(Base { clustering, strips, edges })
}

fn check_paths(g: &Graph, paths: &CanonicalPaths) -> Result<()> {
    if paths.n() == g.n() {
        Ok(())
    } else {
        Err(Error::ArtifactMismatch("canonical paths built for another graph"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Trigger {
    /// Ids of the strips met, ascending.
    Strips(Vec<u32>),
    /// Vertices of the prefix, ascending.
    Path(Vec<usize>),
}

/// The first vertex on each canonical path out of `u` where a threshold is
/// met, and the family member it prescribes.
fn scan_source(
    paths: &CanonicalPaths,
    c: &Clustering,
    ss: &StripSet,
    strip_threshold: usize,
    clean_threshold: usize,
    u: usize,
    g: &Graph,
) -> (usize, BTreeSet<Trigger>) {
    let mut out = BTreeSet::new();
    if g.degree(u) == 0 {
        return (0, out);
    }
    let mut counter = PathCounter::new(ss, c);
    let tree = paths.tree(u);
    let mut hits = 0usize;
    tree.walk(
        &mut counter,
        |counter, v| {
            counter.enter(v);
            let by_strips = counter.strips >= strip_threshold;
            if !by_strips && counter.clean < clean_threshold {
                return true;
            }
            hits += 1;
            let prefix = paths.path(u, v).expect("tree vertex is reachable");
            let t = if by_strips {
                let mut ids: Vec<u32> = prefix
                    .vertices()
                    .iter()
                    .flat_map(|&w| ss.strips_at(w).iter().copied())
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                Trigger::Strips(ids)
            } else {
                let mut vs = prefix.into_vertices();
                vs.sort_unstable();
                Trigger::Path(vs)
            };
            out.insert(t);
            false
        },
        |counter, v| counter.leave(v),
    );
    (hits, out)
}

/// Vertices within two hops of any vertex of the given strips.
pub(crate) fn strip_neighborhood(g: &Graph, ss: &StripSet, ids: &[u32]) -> Vec<usize> {
    let mut mark = vec![NONE; g.n()];
    let mut frontier = Vec::new();
    for &s in ids {
        for &v in ss.strips()[s as usize].vertices() {
            if mark[v] == NONE {
                mark[v] = 0;
                frontier.push(v);
            }
        }
    }
    for depth in 1..=2 {
        let mut next = Vec::new();
        for &x in &frontier {
            for y in g.neighbors(x) {
                if mark[y] == NONE {
                    mark[y] = depth;
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    (0..g.n()).filter(|&v| mark[v] != NONE).collect()
}

/// Family member prescribed for a prefix `ρ(u, x)` whose last vertex first
/// met the strip threshold (`by_strips`) or the clean threshold.
pub(crate) fn member_for(
    g: &Graph,
    ss: &StripSet,
    by_strips: bool,
    prefix: &crate::graph::Path,
) -> Vec<usize> {
    if by_strips {
        let mut ids: Vec<u32> = prefix
            .vertices()
            .iter()
            .flat_map(|&w| ss.strips_at(w).iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        strip_neighborhood(g, ss, &ids)
    } else {
        let mut vs = prefix.vertices().to_vec();
        vs.sort_unstable();
        vs
    }
}

/// Runs clustering, strip creation with the schedule's `d` and `m`, the
/// ordered-pair threshold scan, and the greedy hitting set.
pub fn build_strip_hitting_stage(
    g: &Graph,
    tb: &TieBreakWeights,
    sched: &ParameterSchedule,
) -> Result<HittingStage> {
    let paths = CanonicalPaths::build(g, tb);
    stage_with(g, &paths, sched)
}

fn stage_with(g: &Graph, paths: &CanonicalPaths, sched: &ParameterSchedule) -> Result<HittingStage> {
    check_paths(g, paths)?;
    let (Some(st), Some(ct)) = (sched.strip_threshold, sched.clean_threshold) else {
        return Err(Error::InvalidParameter("schedule has no hitting thresholds"));
    };
    let Base { clustering, strips, edges } = base(g, paths, sched)?;
    let n = g.n();
    let scans = par::map_indices(n, |u| scan_source(paths, &clustering, &strips, st, ct, u, g));

    let mut strip_keys = BTreeSet::new();
    let mut path_sets = BTreeSet::new();
    let mut triggers = 0;
    for (hits, found) in scans {
        triggers += hits;
        for t in found {
            match t {
                Trigger::Strips(ids) => {
                    strip_keys.insert(ids);
                }
                Trigger::Path(vs) => {
                    path_sets.insert(vs);
                }
            }
        }
    }
    let strip_keys: Vec<Vec<u32>> = strip_keys.into_iter().collect();
    let strip_sets: BTreeSet<Vec<usize>> =
        par::map_items(&strip_keys, |ids| strip_neighborhood(g, &strips, ids))
            .into_iter()
            .collect();

    let summary_sizes = |s: &BTreeSet<Vec<usize>>| s.iter().map(Vec::len).min();
    let min_strip_member = summary_sizes(&strip_sets);
    let min_path_member = summary_sizes(&path_sets);
    let (strip_members, path_members) = (strip_sets.len(), path_sets.len());
    let mut family = SetFamily::new(strip_sets.into_iter().chain(path_sets).collect())?;
    family.dedup();
    let hitting_set = hitting_set(n, &family)?;
    Ok(HittingStage {
        clustering,
        strips,
        base: edges,
        summary: HittingSummary {
            family,
            strip_members,
            path_members,
            min_strip_member,
            min_path_member,
            triggers,
        },
        hitting_set,
    })
}

/// Builds the construction `kind` from scratch.
pub fn build(
    kind: ConstructionKind,
    g: &Graph,
    tb: &TieBreakWeights,
    epsilon: f64,
) -> Result<BuildOutput> {
    let paths = CanonicalPaths::build(g, tb);
    build_with(kind, g, tb, paths, epsilon)
}

/// Builds over canonical paths already computed with `tb`.
pub fn build_with(
    kind: ConstructionKind,
    g: &Graph,
    tb: &TieBreakWeights,
    paths: CanonicalPaths,
    epsilon: f64,
) -> Result<BuildOutput> {
    check_paths(g, &paths)?;
    let sched = schedule(kind, g.n(), epsilon)?;
    match kind {
        ConstructionKind::Spanner1 => {
            let Base { clustering, strips, edges } = base(g, &paths, &sched)?;
            let artifact = SparseArtifact {
                schedule: sched,
                seed: tb.seed(),
                subgraph: edges,
                weighted: Vec::new(),
                hitting_set: Vec::new(),
            };
            Ok(BuildOutput {
                artifact,
                clustering,
                strips,
                hitting: None,
                subset: None,
                tie_break: tb.clone(),
                paths,
            })
        }
        ConstructionKind::Emulator | ConstructionKind::Spanner2 => {
            let stage = stage_with(g, &paths, &sched)?;
            let mut subgraph = stage.base;
            let t = stage.hitting_set;
            let mut weighted = Vec::new();
            let mut subset = None;
            if kind.is_emulator() {
                for (i, &a) in t.iter().enumerate() {
                    for &b in &t[i + 1..] {
                        if subgraph.contains_key(&(a, b)) {
                            continue;
                        }
                        if let Some(d) = paths.distance(a, b) {
                            weighted.push((a, b, d));
                        }
                    }
                }
            } else if !t.is_empty() {
                let rows: Vec<_> = t.iter().map(|&x| (paths.dist_row(x), paths.parent_row(x))).collect();
                let (edges, stats) = subset_spanner_rows(g, &t, &rows)?;
                for e in edges.iter() {
                    tag(&mut subgraph, e, Provenance::SubsetSpan);
                }
                subset = Some(stats);
            }
            let artifact =
                SparseArtifact { schedule: sched, seed: tb.seed(), subgraph, weighted, hitting_set: t };
            Ok(BuildOutput {
                artifact,
                clustering: stage.clustering,
                strips: stage.strips,
                hitting: Some(stage.summary),
                subset,
                tie_break: tb.clone(),
                paths,
            })
        }
    }
}

pub fn build_spanner1(g: &Graph, tb: &TieBreakWeights, epsilon: f64) -> Result<SparseArtifact> {
    Ok(build(ConstructionKind::Spanner1, g, tb, epsilon)?.artifact)
}

pub fn build_emulator(g: &Graph, tb: &TieBreakWeights, epsilon: f64) -> Result<SparseArtifact> {
    Ok(build(ConstructionKind::Emulator, g, tb, epsilon)?.artifact)
}

pub fn build_spanner2(g: &Graph, tb: &TieBreakWeights, epsilon: f64) -> Result<SparseArtifact> {
    Ok(build(ConstructionKind::Spanner2, g, tb, epsilon)?.artifact)
}
