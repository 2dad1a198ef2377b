//! Workbench around `stripspan-core`: file formats, graph generators,
//! parameter sweeps and the `stripspan` command line.

use std::path::{Path, PathBuf};

use stripspan_core::construct::build_with;
use stripspan_core::{BuildOutput, CanonicalPaths, ConstructionKind, Graph};

pub mod cli;
pub mod formats;
pub mod generate;
pub mod io;
pub mod sweep;

/// Seed used whenever none is given on the command line.
pub const DEFAULT_SEED: u64 = 1;

/// How many times the tie-break seed is re-derived when exact ties show up.
pub const TIE_ATTEMPTS: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] stripspan_core::Error),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn json(path: &Path, source: serde_json::Error) -> Self {
        Error::Json { path: path.to_path_buf(), source }
    }
}

/// Canonical paths with the tie-break seed re-derived until no exact ties
/// remain, then the requested construction.
pub fn build_seeded(
    g: &Graph,
    kind: ConstructionKind,
    epsilon: f64,
    seed: u64,
) -> Result<BuildOutput, Error> {
    // check the range before the quadratic path computation
    stripspan_core::schedule(kind, g.n(), epsilon)?;
    let (tb, paths) = CanonicalPaths::build_audited(g, seed, TIE_ATTEMPTS);
    Ok(build_with(kind, g, &tb, paths, epsilon)?)
}
