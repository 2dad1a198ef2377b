//! Parameter schedules for the three constructions.

use core::fmt;

use crate::error::{Error, Result};
use crate::{ceil_pow, log2_ceil};

/// Hop bound on strip length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthBound {
    Bounded(usize),
    Unbounded,
}

impl LengthBound {
    #[inline]
    pub fn allows(self, len: usize) -> bool {
        match self {
            LengthBound::Bounded(d) => len <= d,
            LengthBound::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            LengthBound::Bounded(d) => Some(d),
            LengthBound::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstructionKind {
    /// Multiplicative spanner + strips with unbounded length + unclustered edges.
    Spanner1,
    /// Strip/hitting stage followed by exact-distance shortcuts inside the hitting set.
    Emulator,
    /// Strip/hitting stage followed by a subset spanner on the hitting set.
    Spanner2,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 3] =
        [ConstructionKind::Spanner1, ConstructionKind::Emulator, ConstructionKind::Spanner2];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::Spanner1 => "spanner1",
            ConstructionKind::Emulator => "emulator",
            ConstructionKind::Spanner2 => "spanner2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Admissible epsilon interval.
    pub fn epsilon_range(self) -> (f64, f64) {
        match self {
            ConstructionKind::Spanner1 => (0.0, 1.0),
            ConstructionKind::Emulator => (0.0, 0.2),
            ConstructionKind::Spanner2 => (0.0, 0.25),
        }
    }

    /// Exponent `x` of the `n^x` distortion term.
    pub fn distortion_exponent(self, epsilon: f64) -> f64 {
        match self {
            ConstructionKind::Spanner1 => 0.5 - epsilon / 2.0,
            ConstructionKind::Emulator => 1.0 / 3.0 - 2.0 * epsilon / 3.0,
            ConstructionKind::Spanner2 => 2.0 / 3.0 - 5.0 * epsilon / 3.0,
        }
    }

    pub fn is_emulator(self) -> bool {
        self == ConstructionKind::Emulator
    }

    /// Additive distortion every artifact of this kind must stay within:
    /// `32·n^x·⌈log₂ n⌉` for the first spanner, `64·n^x·⌈log₂ n⌉²` for the
    /// two hitting-set constructions.
    pub fn distortion_bound(self, n: usize, epsilon: f64) -> f64 {
        let l = log2_ceil(n) as f64;
        let core = libm::pow(n as f64, self.distortion_exponent(epsilon));
        match self {
            ConstructionKind::Spanner1 => 32.0 * core * l,
            _ => 64.0 * core * l * l,
        }
    }

    /// Edge budget: `20·n^{1+ε}` for the first spanner, `40·n^{1+ε}·⌈log₂ n⌉`
    /// otherwise.
    pub fn edge_bound(self, n: usize, epsilon: f64) -> f64 {
        let base = libm::pow(n as f64, 1.0 + epsilon);
        match self {
            ConstructionKind::Spanner1 => 20.0 * base,
            _ => 40.0 * base * log2_ceil(n) as f64,
        }
    }

    /// Hitting-set budget: `8·n^{1/2+ε/2}·⌈log₂ n⌉` (emulator) or
    /// `8·n^{2ε}·⌈log₂ n⌉` (second spanner).
    pub fn hitting_set_bound(self, n: usize, epsilon: f64) -> Option<f64> {
        let l = log2_ceil(n) as f64;
        match self {
            ConstructionKind::Spanner1 => None,
            ConstructionKind::Emulator => {
                Some(8.0 * libm::pow(n as f64, 0.5 + epsilon / 2.0) * l)
            }
            ConstructionKind::Spanner2 => Some(8.0 * libm::pow(n as f64, 2.0 * epsilon) * l),
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents and the integer knobs derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSchedule {
    pub kind: ConstructionKind,
    pub n: usize,
    pub epsilon: f64,
    /// Exponent of the strip quota.
    pub mu: f64,
    /// Distortion exponent.
    pub delta: f64,
    /// Cluster size `⌈n^ε⌉`.
    pub cluster_size: usize,
    /// Strip quota `m`.
    pub strip_quota: usize,
    /// Strip length bound `d`.
    pub strip_length: LengthBound,
    /// `⌈n^Δ/2⌉`; pairs meeting this many strips feed the hitting family.
    pub strip_threshold: Option<usize>,
    /// `⌈n^Δ⌉`; pairs meeting this many clean clusters feed the hitting family.
    pub clean_threshold: Option<usize>,
    /// Stretch parameter of the multiplicative spanner, `⌈log₂ n⌉`.
    pub multspan_k: usize,
}

const TOL: f64 = 1e-12;

pub fn schedule(kind: ConstructionKind, n: usize, epsilon: f64) -> Result<ParameterSchedule> {
    let (lo, hi) = kind.epsilon_range();
    if !epsilon.is_finite() || epsilon < lo - TOL || epsilon > hi + TOL {
        return Err(Error::EpsilonOutOfRange { kind: kind.name(), epsilon, lo, hi });
    }
    let epsilon = epsilon.clamp(lo, hi);
    let clamp0 = |x: f64| if x.abs() < TOL { 0.0 } else { x };
    let cluster_size = ceil_pow(n, epsilon);
    let multspan_k = log2_ceil(n);
    let s = match kind {
        ConstructionKind::Spanner1 => {
            let x = clamp0(0.5 - epsilon / 2.0);
            ParameterSchedule {
                kind,
                n,
                epsilon,
                mu: x,
                delta: x,
                cluster_size,
                strip_quota: ceil_pow(n, x),
                strip_length: LengthBound::Unbounded,
                strip_threshold: None,
                clean_threshold: None,
                multspan_k,
            }
        }
        ConstructionKind::Emulator | ConstructionKind::Spanner2 => {
            let (mu, delta) = if kind.is_emulator() {
                (1.0 / 6.0 - 5.0 * epsilon / 6.0, 1.0 / 3.0 - 2.0 * epsilon / 3.0)
            } else {
                (1.0 / 3.0 - 4.0 * epsilon / 3.0, 2.0 / 3.0 - 5.0 * epsilon / 3.0)
            };
            let (mu, delta) = (clamp0(mu), clamp0(delta));
            let n_delta = libm::pow(n as f64, delta);
            ParameterSchedule {
                kind,
                n,
                epsilon,
                mu,
                delta,
                cluster_size,
                strip_quota: ceil_pow(n, mu),
                strip_length: LengthBound::Bounded(ceil_pow(n, delta)),
                strip_threshold: Some(libm::ceil(n_delta / 2.0 - 1e-9).max(1.0) as usize),
                clean_threshold: Some(ceil_pow(n, delta)),
                multspan_k,
            }
        }
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn emulator_endpoints() {
        let s = schedule(ConstructionKind::Emulator, 1000, 0.2).unwrap();
        assert!(close(s.mu, 0.0) && close(s.delta, 0.2));
        assert_eq!(s.strip_quota, 1);
        let s = schedule(ConstructionKind::Emulator, 1000, 0.0).unwrap();
        assert!(close(s.mu, 1.0 / 6.0) && close(s.delta, 1.0 / 3.0));
        assert_eq!(s.cluster_size, 1);
        assert_eq!(s.strip_length, LengthBound::Bounded(10));
        assert_eq!(s.clean_threshold, Some(10));
        assert_eq!(s.strip_threshold, Some(5));
    }

    #[test]
    fn spanner2_endpoint() {
        let s = schedule(ConstructionKind::Spanner2, 4096, 0.25).unwrap();
        assert!(close(s.mu, 0.0) && close(s.delta, 0.25));
        assert_eq!(s.strip_length, LengthBound::Bounded(8));
        assert_eq!(s.strip_threshold, Some(4));
    }

    #[test]
    fn spanner1_knobs() {
        let s = schedule(ConstructionKind::Spanner1, 1024, 0.0).unwrap();
        assert_eq!(s.strip_quota, 32);
        assert_eq!(s.cluster_size, 1);
        assert_eq!(s.strip_length, LengthBound::Unbounded);
        assert_eq!(s.multspan_k, 10);
        let s = schedule(ConstructionKind::Spanner1, 1024, 0.1).unwrap();
        assert_eq!(s.cluster_size, 2);
    }

    #[test]
    fn out_of_range_names_interval() {
        let err = schedule(ConstructionKind::Emulator, 100, 0.25).unwrap_err();
        assert_eq!(
            err,
            Error::EpsilonOutOfRange { kind: "emulator", epsilon: 0.25, lo: 0.0, hi: 0.2 }
        );
        assert!(schedule(ConstructionKind::Spanner2, 100, -0.01).is_err());
        assert!(schedule(ConstructionKind::Spanner1, 100, 1.0).is_ok());
        assert!(schedule(ConstructionKind::Spanner1, 100, f64::NAN).is_err());
    }

    #[test]
    fn mu_never_negative() {
        for kind in ConstructionKind::ALL {
            let (lo, hi) = kind.epsilon_range();
            for i in 0..=20 {
                let eps = lo + (hi - lo) * i as f64 / 20.0;
                let s = schedule(kind, 777, eps).unwrap();
                assert!(s.mu >= 0.0, "{kind} at {eps}");
                assert!(s.strip_quota >= 1);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for k in ConstructionKind::ALL {
            assert_eq!(ConstructionKind::parse(k.name()), Some(k));
        }
        assert_eq!(ConstructionKind::parse("spanner3"), None);
    }
}
