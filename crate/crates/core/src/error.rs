use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidVertex { vertex: usize, n: usize },
    SelfLoop(usize),
    NoPath { from: usize, to: usize },
    InvalidParameter(&'static str),
    EpsilonOutOfRange { kind: &'static str, epsilon: f64, lo: f64, hi: f64 },
    EmptyMember { index: usize },
    ClusteringMismatch { expected: usize, found: usize },
    ArtifactMismatch(&'static str),
    GraphTooLarge { n: usize, cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidVertex { vertex, n } => {
                write!(f, "vertex {vertex} out of range for graph on {n} vertices")
            }
            Error::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            Error::NoPath { from, to } => write!(f, "no path between {from} and {to}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::EpsilonOutOfRange { kind, epsilon, lo, hi } => write!(
                f,
                "epsilon {epsilon} outside the admissible interval [{lo}, {hi}] for {kind}"
            ),
            Error::EmptyMember { index } => {
                write!(f, "set family member {index} is empty and cannot be hit")
            }
            Error::ClusteringMismatch { expected, found } => write!(
                f,
                "clustering covers {found} vertices but the graph has {expected}"
            ),
            Error::ArtifactMismatch(msg) => write!(f, "artifact does not match graph: {msg}"),
            Error::GraphTooLarge { n, cap } => {
                write!(f, "graph on {n} vertices exceeds the oracle cap of {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
