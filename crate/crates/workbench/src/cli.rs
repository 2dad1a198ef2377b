//! The `stripspan` command line.
//!
//! Exit codes: 0 on success, 1 on usage, input or build errors, 2 when a
//! verification or audit finds a violation or an exceeded bound.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stripspan_core::verify::{shortcut_errors, AuditScope, DEFAULT_SAMPLE_PAIRS};
use stripspan_core::{audit_lemmas, measure_distortion, ConstructionKind, MeasureMode};

use crate::formats::{self, ArtifactJson, BuildConfig, ClusteringJson, StripSetJson};
use crate::generate::{generate, largest_component, Model};
use crate::sweep::{self, SweepConfig, WORKERS_ENV};
use crate::{io, Error, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "stripspan", version, about = "Additive spanners and emulators via strip creation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<ConstructionKind, String> {
    ConstructionKind::parse(s)
        .ok_or_else(|| format!("unknown construction '{s}' (spanner1, emulator, spanner2)"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph in edge-list format.
    Gen {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// gnp: p; grid: row count; rgg: radius; ba: edges per new vertex.
        #[arg(long)]
        param: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Keep only the largest connected component (relabelled).
        #[arg(long)]
        largest_component: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a spanner or emulator artifact.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        construction: ConstructionKind,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long)]
        clustering_out: Option<PathBuf>,
        #[arg(long)]
        strips_out: Option<PathBuf>,
    },
    /// Measure an artifact's additive distortion against its graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        artifact: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_PAIRS)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Additive bound to check; defaults to the construction's bound.
        #[arg(long)]
        bound: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tradeoff table over sizes, epsilons and constructions.
    Sweep {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_kind, required = true)]
        constructions: Vec<ConstructionKind>,
        /// gnp and rgg: average degree; grid: row count; ba: edges per vertex.
        #[arg(long)]
        param: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        largest_component: bool,
        #[arg(long, default_value_t = 1024)]
        exact_limit: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_PAIRS)]
        pairs: usize,
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild and audit the strip and hitting-set lemmas on every pair.
    Audit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        construction: ConstructionKind,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Audit all pairs among this many sampled vertices instead of all.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn file_sha(path: &Path) -> Result<String, Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(formats::sha256_hex(&bytes))
}

fn emit(path: Option<&Path>, value: &Value, stdout: &mut dyn Write) -> Result<(), Error> {
    match path {
        Some(p) => formats::write_json(p, value).map(|_| ()),
        None => stdout
            .write_all(&formats::to_json_bytes(value))
            .map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

/// Runs one command; `Ok(false)` means a verification failure.
pub fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<bool, Error> {
    match cmd {
        Command::Gen { model, n, param, seed, largest_component: lc, out } => {
            let mut g = generate(model, n, param, seed)?;
            if lc {
                g = largest_component(&g);
            }
            io::write_graph(&out, &g)?;
            Ok(true)
        }
        Command::Build { graph, construction, epsilon, seed, out, stats, clustering_out, strips_out } => {
            let g = io::read_graph(&graph)?;
            let config = BuildConfig {
                graph: graph.display().to_string(),
                graph_sha256: file_sha(&graph)?,
                construction: construction.name().into(),
                epsilon,
                seed,
            };
            let start = Instant::now();
            let built = crate::build_seeded(&g, construction, epsilon, seed)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let bytes = formats::write_json(&out, &ArtifactJson::new(&built.artifact, config.clone()))?;
            if let Some(p) = stats {
                let sha = formats::sha256_hex(&bytes);
                let v = formats::stats_json(&built, built.paths.ties(), wall_ms, &sha, &config);
                formats::write_json(&p, &v)?;
            }
            if let Some(p) = clustering_out {
                formats::write_json(&p, &ClusteringJson::from(&built.clustering))?;
            }
            if let Some(p) = strips_out {
                formats::write_json(&p, &StripSetJson::from(&built.strips))?;
            }
            Ok(true)
        }
        Command::Verify { graph, artifact, mode, pairs, seed, bound, out } => {
            let g = io::read_graph(&graph)?;
            let (aj, bytes) = formats::read_artifact(&artifact)?;
            let a = aj.to_artifact()?;
            let mode = match mode {
                Mode::Exact => MeasureMode::Exact,
                Mode::Sampled => MeasureMode::Sampled { seed, pairs },
            };
            let report = measure_distortion(&g, &a, mode)?;
            let bad = shortcut_errors(&g, &a)?.len();
            let bound = bound.unwrap_or_else(|| a.kind().distortion_bound(a.n(), a.epsilon()));
            let pass = report.passes(bound) && bad == 0;
            let config = json!({
                "graph": graph.display().to_string(),
                "graph_sha256": file_sha(&graph)?,
                "artifact": artifact.display().to_string(),
                "artifact_sha256": formats::sha256_hex(&bytes),
                "seed": seed,
                "build_seed": a.seed(),
            });
            let v = formats::report_json(&report, a.epsilon(), bound, bad, pass, config);
            emit(out.as_deref(), &v, stdout)?;
            Ok(pass)
        }
        Command::Sweep {
            model,
            sizes,
            epsilons,
            constructions,
            param,
            seed,
            largest_component,
            exact_limit,
            pairs,
            workers,
            out,
        } => {
            let cfg = SweepConfig {
                model,
                sizes,
                epsilons,
                constructions,
                param,
                seed,
                largest_component,
                exact_limit,
                pairs,
                workers: workers.filter(|&w| w > 0).unwrap_or_else(sweep::worker_count),
            };
            let rows = sweep::run(&cfg)?;
            let file = std::fs::File::create(&out).map_err(|e| Error::io(&out, e))?;
            sweep::write_csv(std::io::BufWriter::new(file), &rows)?;
            Ok(true)
        }
        Command::Audit { graph, construction, epsilon, seed, vertices, out } => {
            let g = io::read_graph(&graph)?;
            let built = crate::build_seeded(&g, construction, epsilon, seed)?;
            let scope = match vertices {
                Some(k) => AuditScope::Sample { seed, vertices: k },
                None => AuditScope::All,
            };
            let report = audit_lemmas(&g, &built, scope)?;
            let config = json!({
                "graph": graph.display().to_string(),
                "graph_sha256": file_sha(&graph)?,
                "construction": construction.name(),
                "epsilon": epsilon,
                "seed": seed,
                "build_seed": built.artifact.seed(),
                "vertices": vertices,
            });
            emit(out.as_deref(), &formats::audit_json(&report, config), stdout)?;
            Ok(report.is_clean())
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "stripspan: verification failed");
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            let _ = writeln!(stderr, "stripspan: {e}");
            EXIT_ERROR
        }
    }
}
