//! Executable forms of the strip lemmas and of the error-bound chain.
//!
//! Constants are fixed: a path meeting at most `k` strips and `k` clean
//! clusters is stretched by at most `16·k·⌈log₂ n⌉`, and a path meeting
//! `k ≥ m` clean clusters and fewer than `k/2` strips at the fixpoint has at
//! least `k·d/(2m)` hops.
//!
//! For the strip count in the first bound we use every strip that touches
//! the path or one of the clusters the path touches. The detour argument
//! leaves the path inside a touched cluster and can land on such a strip
//! without the path itself meeting it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cluster::unclustered_edge_count;
use crate::construct::{member_for, BuildOutput};
use crate::error::Result;
use crate::graph::{Graph, NONE};
use crate::par;
use crate::strips::{find_qualifying_pair, strip_edge_budget, EdgeCaseCounts, PathCounter};
use crate::verify::distortion::{check_artifact, Host};

/// Which vertices to audit; every pair inside the chosen set is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditScope {
    All,
    Sample { seed: u64, vertices: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma3Violation {
    pub u: usize,
    pub v: usize,
    pub strips: usize,
    pub clean: usize,
    pub k: usize,
    pub dg: u32,
    pub dh: u32,
    pub bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma4Violation {
    pub u: usize,
    pub v: usize,
    pub k: usize,
    pub strips: usize,
    pub dg: u32,
    pub d: usize,
    pub m: usize,
}

/// Links of the chain `u → w_u → t_u → t_v → w_v → v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Segment {
    /// No hitting-set vertex in the member prescribed for `(u, x_u)`.
    Unhit,
    /// `δ_G(t_u, w_u)` above `d + 2` (strip member) or nonzero (path member).
    Reach,
    /// `δ_H(w_u, t_u)` above `(2⌈log₂ n⌉ - 1)·δ_G(w_u, t_u)`.
    Stretch,
    /// `δ_H(u, w_u)` above the prefix's own strip-lemma bound.
    Prefix,
    /// `δ_H(t_u, t_v)` above `δ_G(t_u, t_v)` plus the continuation's slack.
    Middle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentViolation {
    pub segment: Segment,
    pub from: usize,
    pub to: usize,
    pub measured: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub n: usize,
    pub vertices_audited: usize,
    pub pairs_audited: u64,
    /// Edges with both endpoints unclustered, against `n·e`.
    pub unclustered_edges: usize,
    pub unclustered_limit: usize,
    /// Strip edges at clustered vertices, against `8n`.
    pub strip_budget: usize,
    pub strip_budget_limit: usize,
    pub edge_cases: EdgeCaseCounts,
    pub strip_count: usize,
    pub cluster_count: usize,
    pub strip_quota: usize,
    /// Insertions whose recorded state breaks a strip condition.
    pub insertion_failures: Vec<usize>,
    /// A pair that would still qualify as a strip; `None` at the fixpoint.
    pub fixpoint_witness: Option<(usize, usize)>,
    pub lemma3_pairs: u64,
    /// Largest `(δ_H - δ_G) / (16·k·⌈log₂ n⌉)` seen with `k > 0`.
    pub lemma3_max_ratio: f64,
    pub lemma3_violations: Vec<Lemma3Violation>,
    pub chain_pairs: u64,
    pub segment_violations: Vec<SegmentViolation>,
    pub lemma4_pairs: u64,
    pub lemma4_violations: Vec<Lemma4Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.unclustered_edges <= self.unclustered_limit
            && self.strip_budget <= self.strip_budget_limit
            && self.strip_count * self.strip_quota <= self.cluster_count
            && self.insertion_failures.is_empty()
            && self.fixpoint_witness.is_none()
            && self.lemma3_violations.is_empty()
            && self.segment_violations.is_empty()
            && self.lemma4_violations.is_empty()
    }
}

/// Per-target counts along the canonical paths out of one source.
struct Profile {
    strips: Vec<u32>,
    clean: Vec<u32>,
    closure: Vec<u32>,
    /// First vertex meeting a threshold, and whether the strip one fired.
    trigger: Vec<(u32, bool)>,
}

fn profile(out: &BuildOutput, u: usize, thresholds: Option<(usize, usize)>) -> Profile {
    let n = out.paths.n();
    let mut p = Profile {
        strips: vec![0; n],
        clean: vec![0; n],
        closure: vec![0; n],
        trigger: vec![(NONE, false); n],
    };
    let parent = out.paths.parent_row(u);
    let mut counter = PathCounter::new(&out.strips, &out.clustering).with_closure();
    out.paths.tree(u).walk(
        &mut (&mut counter, &mut p),
        |(counter, p), v| {
            counter.enter(v);
            p.strips[v] = counter.strips as u32;
            p.clean[v] = counter.clean as u32;
            p.closure[v] = counter.closure_strips() as u32;
            if let Some((st, ct)) = thresholds {
                let inherited = if v == u { (NONE, false) } else { p.trigger[parent[v] as usize] };
                p.trigger[v] = if inherited.0 != NONE {
                    inherited
                } else if counter.strips >= st {
                    (v as u32, true)
                } else if counter.clean >= ct {
                    (v as u32, false)
                } else {
                    (NONE, false)
                };
            }
            true
        },
        |(counter, _), v| counter.leave(v),
    );
    p
}

/// Hitting-set vertex chosen for a triggered prefix `ρ(u, x)`.
#[derive(Clone, Copy)]
struct Anchor {
    t: usize,
}

/// Checks clustering, strip and construction invariants of one build.
pub fn audit_lemmas(g: &Graph, out: &BuildOutput, scope: AuditScope) -> Result<AuditReport> {
    check_artifact(g, &out.artifact)?;
    let n = g.n();
    let sched = *out.artifact.schedule();
    let l = crate::log2_ceil(n) as u64;
    let (d, m) = (out.strips.length_bound(), out.strips.quota());
    let thresholds = sched.strip_threshold.zip(sched.clean_threshold);
    let t_set = out.artifact.hitting_set();
    let host = Host::new(&out.artifact)?;

    let w_set: Vec<usize> = match scope {
        AuditScope::All => (0..n).collect(),
        AuditScope::Sample { seed, vertices } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = rand::seq::index::sample(&mut rng, n, vertices.min(n)).into_vec();
            s.sort_unstable();
            s
        }
    };

    let mut sources: BTreeSet<usize> = w_set.iter().copied().collect();
    sources.extend(t_set.iter().copied());
    let sources: Vec<usize> = sources.into_iter().collect();
    let rows = par::map_items(&sources, |&s| host.row(s));
    let mut hrow: Vec<Option<&[u32]>> = vec![None; n];
    for (s, r) in sources.iter().zip(&rows) {
        hrow[*s] = Some(r.as_slice());
    }
    let hdist = |a: usize, b: usize| hrow[a].expect("row computed")[b];

    let profiles = par::map_items(&w_set, |&u| profile(out, u, thresholds));

    let lemma3_bound = |k: usize| 16 * k as u64 * l;
    let reach_budget = |by_strips: bool| -> u64 {
        match (by_strips, d.finite()) {
            (false, _) => 0,
            (true, Some(d)) => d as u64 + 2,
            (true, None) => u64::MAX,
        }
    };

    // Resolve anchors and the segments that depend on one side only.
    let mut segment_violations = Vec::new();
    let mut anchors: Vec<BTreeMap<usize, Option<Anchor>>> = Vec::with_capacity(w_set.len());
    for (i, &u) in w_set.iter().enumerate() {
        let prof = &profiles[i];
        let mut here: BTreeMap<usize, Option<Anchor>> = BTreeMap::new();
        for &v in &w_set {
            let (x, by_strips) = prof.trigger[v];
            if x == NONE || v == u || here.contains_key(&(x as usize)) {
                continue;
            }
            let x = x as usize;
            let prefix = out.paths.path(u, x)?;
            let member = member_for(g, &out.strips, by_strips, &prefix);
            let t = member.iter().copied().find(|m| t_set.binary_search(m).is_ok());
            let Some(t) = t else {
                segment_violations.push(SegmentViolation {
                    segment: Segment::Unhit,
                    from: u,
                    to: x,
                    measured: 0,
                    budget: 0,
                });
                here.insert(x, None);
                continue;
            };
            let w = prefix
                .vertices()
                .iter()
                .copied()
                .min_by_key(|&w| out.paths.distance(t, w).unwrap_or(NONE))
                .unwrap();
            let reach = out.paths.distance(t, w).unwrap() as u64;
            if reach > reach_budget(by_strips) {
                segment_violations.push(SegmentViolation {
                    segment: Segment::Reach,
                    from: t,
                    to: w,
                    measured: reach,
                    budget: reach_budget(by_strips),
                });
            }
            let stretch = hdist(t, w) as u64;
            if stretch > (2 * l - 1) * reach {
                segment_violations.push(SegmentViolation {
                    segment: Segment::Stretch,
                    from: t,
                    to: w,
                    measured: stretch,
                    budget: (2 * l - 1) * reach,
                });
            }
            let k = prof.closure[w].max(prof.clean[w]) as usize;
            let excess = hdist(u, w) as u64 - out.paths.distance(u, w).unwrap() as u64;
            if excess > lemma3_bound(k) {
                segment_violations.push(SegmentViolation {
                    segment: Segment::Prefix,
                    from: u,
                    to: w,
                    measured: excess,
                    budget: lemma3_bound(k),
                });
            }
            here.insert(x, Some(Anchor { t }));
        }
        anchors.push(here);
    }

    let slack = if sched.kind.is_emulator() { 0 } else { 2 * l };
    let mut middles = BTreeSet::new();
    let mut report = AuditReport {
        n,
        vertices_audited: w_set.len(),
        pairs_audited: 0,
        unclustered_edges: unclustered_edge_count(g, &out.clustering)?,
        unclustered_limit: n * out.clustering.cluster_size(),
        strip_budget: strip_edge_budget(&out.strips, &out.clustering),
        strip_budget_limit: 8 * n,
        edge_cases: out.strips.edge_cases(),
        strip_count: out.strips.len(),
        cluster_count: out.clustering.len(),
        strip_quota: m,
        insertion_failures: Vec::new(),
        fixpoint_witness: find_qualifying_pair(&out.paths, &out.clustering, &out.strips),
        lemma3_pairs: 0,
        lemma3_max_ratio: 0.0,
        lemma3_violations: Vec::new(),
        chain_pairs: 0,
        segment_violations: Vec::new(),
        lemma4_pairs: 0,
        lemma4_violations: Vec::new(),
    };
    for (i, ins) in out.strips.insertions().iter().enumerate() {
        if !d.allows(ins.length) || ins.strips_hit > m || ins.clean_clusters_hit != m {
            report.insertion_failures.push(i);
        }
    }

    let index_of: BTreeMap<usize, usize> = w_set.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    for (i, &u) in w_set.iter().enumerate() {
        let prof = &profiles[i];
        for &v in &w_set {
            if v == u {
                continue;
            }
            let Some(dg) = out.paths.distance(u, v) else { continue };
            report.pairs_audited += 1;
            let dh = hdist(u, v);
            let (strips, clean) = (prof.strips[v] as usize, prof.clean[v] as usize);

            if let Some(d) = d.finite() {
                if clean >= m && 2 * strips < clean {
                    report.lemma4_pairs += 1;
                    if (2 * m as u64) * (dg as u64) < (clean as u64) * (d as u64) {
                        report.lemma4_violations.push(Lemma4Violation {
                            u,
                            v,
                            k: clean,
                            strips,
                            dg,
                            d,
                            m,
                        });
                    }
                }
            }

            let (x_u, _) = prof.trigger[v];
            if x_u == NONE {
                report.lemma3_pairs += 1;
                let k = (prof.closure[v] as usize).max(clean);
                let excess = dh.saturating_sub(dg) as u64;
                if k > 0 {
                    let ratio = excess as f64 / lemma3_bound(k) as f64;
                    if ratio > report.lemma3_max_ratio {
                        report.lemma3_max_ratio = ratio;
                    }
                }
                if dh == NONE || excess > lemma3_bound(k) {
                    report.lemma3_violations.push(Lemma3Violation {
                        u,
                        v,
                        strips,
                        clean,
                        k,
                        dg,
                        dh,
                        bound: lemma3_bound(k),
                    });
                }
                continue;
            }
            report.chain_pairs += 1;
            let j = index_of[&v];
            let (x_v, _) = profiles[j].trigger[u];
            let a = anchors[i].get(&(x_u as usize)).copied().flatten();
            let b = if x_v == NONE { None } else { anchors[j].get(&(x_v as usize)).copied().flatten() };
            if let (Some(a), Some(b)) = (a, b) {
                let (t1, t2) = if a.t <= b.t { (a.t, b.t) } else { (b.t, a.t) };
                middles.insert((t1, t2));
            }
        }
    }
    for (t1, t2) in middles {
        let dg = out.paths.distance(t1, t2).unwrap() as u64;
        let dh = hdist(t1, t2) as u64;
        if dh > dg + slack {
            segment_violations.push(SegmentViolation {
                segment: Segment::Middle,
                from: t1,
                to: t2,
                measured: dh - dg,
                budget: slack,
            });
        }
    }
    report.segment_violations = segment_violations;
    Ok(report)
}
