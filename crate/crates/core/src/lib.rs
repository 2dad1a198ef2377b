//! Additive spanners and emulators built on strip creation.
//!
//! The crate is `no_std` with `alloc`. Everything here is pure graph
//! computation over an immutable [`Graph`]: canonical shortest paths,
//! radius-one clustering, strip creation, the three black-box primitives
//! (greedy multiplicative spanner, greedy hitting set, subset spanner), the
//! three headline constructions, and the brute-force verification harness.
//!
//! Enable the `parallel` feature to fan per-source work out over rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod par;

pub mod cluster;
pub mod construct;
pub mod graph;
pub mod paths;
pub mod primitives;
pub mod schedule;
pub mod strips;
pub mod verify;

pub use cluster::{cluster, unclustered_edge_count, Clustering};
pub use construct::{
    build, build_emulator, build_spanner1, build_spanner2, build_strip_hitting_stage,
    BuildOutput, HittingStage, Provenance, SparseArtifact,
};
pub use error::{Error, Result};
pub use graph::{all_distances_from, distance, Edge, EdgeSet, Graph, Path};
pub use paths::{canonical_path, CanonicalPaths, SourceTree, TieBreakWeights};
pub use primitives::{hitting_set, multspan, subset_spanner, SetFamily};
pub use schedule::{schedule, ConstructionKind, LengthBound, ParameterSchedule};
pub use strips::{create_strips, path_stats, strip_edge_budget, PathStats, StripSet};
pub use verify::{
    apsp_oracle, audit_lemmas, measure_distortion, AuditReport, DistanceMatrix,
    DistortionReport, MeasureMode,
};

/// `⌈log₂ n⌉`, never below 1.
pub fn log2_ceil(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `⌈n^x⌉` with a small tolerance so that exact powers (1024^0.1 = 2) do not
/// round up through floating-point noise. Never below 1.
pub fn ceil_pow(n: usize, x: f64) -> usize {
    let v = libm::pow(n as f64, x);
    let c = libm::ceil(v - 1e-9);
    if c < 1.0 {
        1
    } else {
        c as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_ceil_values() {
        assert_eq!(log2_ceil(0), 1);
        assert_eq!(log2_ceil(2), 1);
        assert_eq!(log2_ceil(3), 2);
        assert_eq!(log2_ceil(400), 9);
        assert_eq!(log2_ceil(1024), 10);
        assert_eq!(log2_ceil(1025), 11);
        assert_eq!(log2_ceil(2048), 11);
    }

    #[test]
    fn ceil_pow_exact_powers() {
        assert_eq!(ceil_pow(1024, 0.1), 2);
        assert_eq!(ceil_pow(1024, 0.5), 32);
        assert_eq!(ceil_pow(500, 0.1), 2);
        assert_eq!(ceil_pow(400, 0.45), 15);
        assert_eq!(ceil_pow(2048, 0.0), 1);
        assert_eq!(ceil_pow(7, -1.0), 1);
    }
}
