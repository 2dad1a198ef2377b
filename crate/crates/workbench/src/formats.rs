//! JSON and CSV shapes of everything the workbench writes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use stripspan_core::strips::EdgeCaseCounts;
use stripspan_core::{
    schedule, AuditReport, BuildOutput, Clustering, ConstructionKind, DistortionReport,
    LengthBound, MeasureMode, ParameterSchedule, Provenance, SparseArtifact, StripSet,
};

use crate::Error;

pub const ARTIFACT_FORMAT: &str = "stripspan-artifact/1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

mod length_bound {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &LengthBound, s: S) -> Result<S::Ok, S::Error> {
        match d {
            LengthBound::Bounded(d) => s.serialize_u64(*d as u64),
            LengthBound::Unbounded => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LengthBound, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(x) => x
                .as_u64()
                .map(|x| LengthBound::Bounded(x as usize))
                .ok_or_else(|| D::Error::custom("length bound must be a non-negative integer")),
            Value::String(s) if s == "inf" => Ok(LengthBound::Unbounded),
            other => Err(D::Error::custom(format!("bad length bound {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub mu: f64,
    pub delta: f64,
    pub cluster_size: usize,
    pub strip_quota: usize,
    #[serde(with = "length_bound")]
    pub strip_length: LengthBound,
    pub strip_threshold: Option<usize>,
    pub clean_threshold: Option<usize>,
    pub multspan_k: usize,
}

impl From<&ParameterSchedule> for ScheduleJson {
    fn from(s: &ParameterSchedule) -> Self {
        ScheduleJson {
            mu: s.mu,
            delta: s.delta,
            cluster_size: s.cluster_size,
            strip_quota: s.strip_quota,
            strip_length: s.strip_length,
            strip_threshold: s.strip_threshold,
            clean_threshold: s.clean_threshold,
            multspan_k: s.multspan_k,
        }
    }
}

/// What produced an artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub graph: String,
    pub graph_sha256: String,
    pub construction: String,
    pub epsilon: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactJson {
    pub format: String,
    /// "spanner" or "emulator".
    pub kind: String,
    pub construction: String,
    pub epsilon: f64,
    pub n: usize,
    /// Tie-break seed actually used (after any re-derivation).
    pub seed: u64,
    pub subgraph_edges: Vec<[usize; 2]>,
    /// Provenance tag of each subgraph edge, aligned with `subgraph_edges`.
    pub edge_provenance: Vec<String>,
    pub weighted_edges: Vec<[u64; 3]>,
    pub provenance_counts: BTreeMap<String, usize>,
    pub hitting_set: Vec<usize>,
    pub schedule: ScheduleJson,
    pub config: BuildConfig,
}

impl ArtifactJson {
    pub fn new(a: &SparseArtifact, config: BuildConfig) -> Self {
        let (edges, tags) = a.subgraph().map(|((u, v), p)| ([u, v], p.name().to_string())).unzip();
        ArtifactJson {
            format: ARTIFACT_FORMAT.into(),
            kind: if a.is_emulator() { "emulator" } else { "spanner" }.into(),
            construction: a.kind().name().into(),
            epsilon: a.epsilon(),
            n: a.n(),
            seed: a.seed(),
            subgraph_edges: edges,
            edge_provenance: tags,
            weighted_edges: a
                .weighted_edges()
                .iter()
                .map(|&(u, v, w)| [u as u64, v as u64, w as u64])
                .collect(),
            provenance_counts: a
                .provenance_counts()
                .into_iter()
                .map(|(p, c)| (p.name().to_string(), c))
                .collect(),
            hitting_set: a.hitting_set().to_vec(),
            schedule: a.schedule().into(),
            config,
        }
    }

    /// Rebuilds the core artifact; the schedule is recomputed from
    /// `(construction, n, epsilon)` and must match the stored one.
    pub fn to_artifact(&self) -> Result<SparseArtifact, Error> {
        let bad = |m: &str| Error::Usage(format!("artifact: {m}"));
        if self.format != ARTIFACT_FORMAT {
            return Err(bad(&format!("unsupported format '{}'", self.format)));
        }
        let kind = ConstructionKind::parse(&self.construction)
            .ok_or_else(|| bad(&format!("unknown construction '{}'", self.construction)))?;
        let sched = schedule(kind, self.n, self.epsilon)?;
        if ScheduleJson::from(&sched) != self.schedule {
            return Err(bad("schedule does not match construction, n and epsilon"));
        }
        if self.subgraph_edges.len() != self.edge_provenance.len() {
            return Err(bad("edge_provenance length differs from subgraph_edges"));
        }
        let edges = self
            .subgraph_edges
            .iter()
            .zip(&self.edge_provenance)
            .map(|(&[u, v], tag)| {
                Provenance::parse(tag)
                    .map(|p| ((u, v), p))
                    .ok_or_else(|| bad(&format!("unknown provenance '{tag}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let weighted = self
            .weighted_edges
            .iter()
            .map(|&[u, v, w]| (u as usize, v as usize, w as u32))
            .collect();
        Ok(SparseArtifact::from_parts(sched, self.seed, edges, weighted, self.hitting_set.clone())?)
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("in-memory serialization");
    out.push(b'\n');
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<Vec<u8>, Error> {
    let bytes = to_json_bytes(value);
    std::fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    Ok(bytes)
}

pub fn read_artifact(path: &Path) -> Result<(ArtifactJson, Vec<u8>), Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let a = serde_json::from_slice(&bytes).map_err(|e| Error::json(path, e))?;
    Ok((a, bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusteringJson {
    pub e: usize,
    pub clusters: Vec<Vec<usize>>,
    pub centers: Vec<usize>,
}

impl From<&Clustering> for ClusteringJson {
    fn from(c: &Clustering) -> Self {
        ClusteringJson {
            e: c.cluster_size(),
            clusters: c.clusters().to_vec(),
            centers: c.centers().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripSetJson {
    #[serde(with = "length_bound")]
    pub d: LengthBound,
    pub m: usize,
    pub strips: Vec<Vec<usize>>,
}

impl From<&StripSet> for StripSetJson {
    fn from(s: &StripSet) -> Self {
        StripSetJson {
            d: s.length_bound(),
            m: s.quota(),
            strips: s.strips().iter().map(|p| p.vertices().to_vec()).collect(),
        }
    }
}

fn mode_json(mode: MeasureMode) -> Value {
    match mode {
        MeasureMode::Exact => json!({ "type": "exact" }),
        MeasureMode::Sampled { seed, pairs } => json!({ "type": "sampled", "seed": seed, "pairs": pairs }),
    }
}

fn edge_cases_json(c: &EdgeCaseCounts) -> Value {
    json!({
        "both_unclustered": c.both_unclustered,
        "fresh_endpoint": c.fresh_endpoint,
        "between_strips": c.between_strips,
        "already_present": c.already_present,
    })
}

/// Distortion report with the verdict and its provenance.
pub fn report_json(
    r: &DistortionReport,
    epsilon: f64,
    bound: f64,
    shortcut_errors: usize,
    pass: bool,
    config: Value,
) -> Value {
    json!({
        "kind": if r.kind.is_emulator() { "emulator" } else { "spanner" },
        "construction": r.kind.name(),
        "n": r.n,
        "epsilon": epsilon,
        "edges": r.edges,
        "mode": mode_json(r.mode),
        "pair_count": r.pair_count,
        "max_additive_error": r.max_additive_error,
        "mean_additive_error": r.mean_additive_error,
        "worst_pair": r.worst_pair.map(|(u, v)| [u, v]),
        "error_histogram": r.error_histogram.iter().map(|(k, c)| (k.to_string(), *c)).collect::<BTreeMap<_, _>>(),
        "violations": r.violations.iter().map(|x| [x.u as u64, x.v as u64, x.dg as u64, x.dh as u64]).collect::<Vec<_>>(),
        "artifact_unreachable": r.artifact_unreachable,
        "shortcut_weight_errors": shortcut_errors,
        "bound": bound,
        "pass": pass,
        "config": config,
    })
}

pub const REPORT_CSV_HEADER: &str = "n,epsilon,kind,edges,max_err,bound,pass";

pub fn report_csv_row(r: &DistortionReport, epsilon: f64, bound: f64, pass: bool) -> String {
    format!("{},{},{},{},{},{:.3},{}", r.n, epsilon, r.kind, r.edges, r.max_additive_error, bound, pass)
}

pub fn audit_json(r: &AuditReport, config: Value) -> Value {
    json!({
        "clean": r.is_clean(),
        "n": r.n,
        "vertices_audited": r.vertices_audited,
        "pairs_audited": r.pairs_audited,
        "claim1": { "unclustered_edges": r.unclustered_edges, "limit": r.unclustered_limit },
        "strip_budget": {
            "edges": r.strip_budget,
            "limit": r.strip_budget_limit,
            "cases": edge_cases_json(&r.edge_cases),
        },
        "strips": { "count": r.strip_count, "clusters": r.cluster_count, "quota": r.strip_quota },
        "insertion_failures": r.insertion_failures,
        "fixpoint_witness": r.fixpoint_witness.map(|(u, v)| [u, v]),
        "lemma3": {
            "pairs": r.lemma3_pairs,
            "max_ratio": r.lemma3_max_ratio,
            "violations": r.lemma3_violations.iter().map(|x| json!({
                "u": x.u, "v": x.v, "strips": x.strips, "clean": x.clean, "k": x.k,
                "dg": x.dg, "dh": x.dh, "bound": x.bound,
            })).collect::<Vec<_>>(),
        },
        "chain": {
            "pairs": r.chain_pairs,
            "violations": r.segment_violations.iter().map(|x| json!({
                "segment": format!("{:?}", x.segment).to_lowercase(),
                "from": x.from, "to": x.to, "measured": x.measured, "budget": x.budget,
            })).collect::<Vec<_>>(),
        },
        "lemma4": {
            "pairs": r.lemma4_pairs,
            "violations": r.lemma4_violations.iter().map(|x| json!({
                "u": x.u, "v": x.v, "k": x.k, "strips": x.strips, "dg": x.dg, "d": x.d, "m": x.m,
            })).collect::<Vec<_>>(),
        },
        "config": config,
    })
}

/// Build statistics written next to an artifact.
pub fn stats_json(out: &BuildOutput, ties: usize, wall_ms: f64, artifact_sha256: &str, config: &BuildConfig) -> Value {
    let a = &out.artifact;
    let (n, eps, kind) = (a.n(), a.epsilon(), a.kind());
    json!({
        "config": config,
        "artifact_sha256": artifact_sha256,
        "construction": kind.name(),
        "n": n,
        "epsilon": eps,
        "seed_used": a.seed(),
        "tie_events": ties,
        "edges": a.edge_count(),
        "provenance_counts": a.provenance_counts().into_iter().map(|(p, c)| (p.name().to_string(), c)).collect::<BTreeMap<_, _>>(),
        "clusters": out.clustering.len(),
        "strips": out.strips.len(),
        "strip_edge_cases": edge_cases_json(&out.strips.edge_cases()),
        "hitting_set": a.hitting_set().len(),
        "family": out.hitting.as_ref().map(|h| json!({
            "members": h.family.len(),
            "strip_members": h.strip_members,
            "path_members": h.path_members,
            "min_strip_member": h.min_strip_member,
            "min_path_member": h.min_path_member,
            "triggers": h.triggers,
        })),
        "subset_spanner": out.subset.map(|s| json!({
            "terminals": s.terminals,
            "cluster_size": s.cluster_size,
            "clustering_edges": s.clustering_edges,
            "pairs": s.pairs,
            "bought": s.bought,
            "forced": s.forced,
        })),
        "bounds": {
            "edges": kind.edge_bound(n, eps),
            "distortion": kind.distortion_bound(n, eps),
            "hitting_set": kind.hitting_set_bound(n, eps),
        },
        "wall_time_ms": wall_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Model};

    fn config() -> BuildConfig {
        BuildConfig {
            graph: "g.txt".into(),
            graph_sha256: "00".into(),
            construction: "emulator".into(),
            epsilon: 0.1,
            seed: 1,
        }
    }

    #[test]
    fn artifact_round_trip() {
        let g = generate(Model::Grid, 144, 12.0, 0).unwrap();
        for kind in ConstructionKind::ALL {
            let out = crate::build_seeded(&g, kind, 0.1, 1).unwrap();
            let j = ArtifactJson::new(&out.artifact, config());
            let text = serde_json::to_string(&j).unwrap();
            let back: ArtifactJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, j);
            assert_eq!(back.to_artifact().unwrap(), out.artifact);
            let total: usize = j.provenance_counts.values().sum();
            assert_eq!(total, out.artifact.edge_count());
        }
    }

    #[test]
    fn tampered_schedule_rejected() {
        let g = generate(Model::Grid, 64, 8.0, 0).unwrap();
        let out = crate::build_seeded(&g, ConstructionKind::Spanner1, 0.1, 1).unwrap();
        let mut j = ArtifactJson::new(&out.artifact, config());
        j.epsilon = 0.2;
        assert!(j.to_artifact().is_err());
    }

    #[test]
    fn strip_json_uses_inf() {
        let s = StripSetJson { d: LengthBound::Unbounded, m: 4, strips: vec![vec![0, 1, 2]] };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"d":"inf","m":4,"strips":[[0,1,2]]}"#);
        assert_eq!(serde_json::from_str::<StripSetJson>(&text).unwrap(), s);
        let s = StripSetJson { d: LengthBound::Bounded(7), m: 1, strips: vec![] };
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"d":7,"m":1,"strips":[]}"#);
    }

    #[test]
    fn clustering_json_shape() {
        let g = generate(Model::Grid, 9, 3.0, 0).unwrap();
        let c = stripspan_core::cluster(&g, 2).unwrap();
        let text = serde_json::to_string(&ClusteringJson::from(&c)).unwrap();
        assert!(text.starts_with(r#"{"e":2,"clusters":[[0,1]"#), "{text}");
    }
}
