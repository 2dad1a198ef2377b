//! ε-sweeps: one CSV row per `(n, ε, construction)` cell.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use stripspan_core::{measure_distortion, ConstructionKind, MeasureMode, DistortionReport};
use stripspan_core::verify::{shortcut_errors, DEFAULT_SAMPLE_PAIRS};

use crate::generate::{generate, largest_component, Model};
use crate::Error;

/// Bumped whenever the column set or order changes.
pub const CSV_VERSION: u32 = 1;

/// Worker count for sweep cells.
pub const WORKERS_ENV: &str = "STRIPSPAN_WORKERS";

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: Model,
    pub sizes: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub constructions: Vec<ConstructionKind>,
    /// Model parameter as given to `generate`, except for gnp and rgg where it
    /// is the target average degree (so one value works across sizes).
    pub param: f64,
    pub seed: u64,
    pub largest_component: bool,
    /// Exact measurement up to this many vertices, sampled above.
    pub exact_limit: usize,
    pub pairs: usize,
    pub workers: usize,
}

impl SweepConfig {
    pub fn cells(&self) -> Vec<(usize, f64, ConstructionKind)> {
        let mut sizes = self.sizes.clone();
        sizes.sort_unstable();
        sizes.dedup();
        let mut eps = self.epsilons.clone();
        eps.sort_by(f64::total_cmp);
        eps.dedup();
        let mut kinds = self.constructions.clone();
        kinds.sort();
        kinds.dedup();
        let mut cells = Vec::new();
        for &n in &sizes {
            for &e in &eps {
                for &k in &kinds {
                    cells.push((n, e, k));
                }
            }
        }
        cells
    }

    fn model_param(&self, n: usize) -> f64 {
        match self.model {
            Model::Gnp => (self.param / (n.max(2) - 1) as f64).min(1.0),
            Model::Rgg => (self.param / (std::f64::consts::PI * n as f64)).sqrt(),
            Model::Grid | Model::Ba => self.param,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub model: String,
    pub n: usize,
    pub epsilon: f64,
    pub construction: String,
    pub seed: u64,
    pub mode: String,
    pub edges: Option<usize>,
    pub max_err: Option<u32>,
    pub mean_err: Option<f64>,
    pub bound: f64,
    /// edges / n^{1+ε}
    pub edges_ratio: Option<f64>,
    /// max_err / n^{distortion exponent}
    pub distortion_ratio: Option<f64>,
    pub hitting_set: Option<usize>,
    pub strips: Option<usize>,
    pub pass: bool,
    pub error: String,
}

struct Measured {
    n: usize,
    report: DistortionReport,
    hitting: usize,
    strips: usize,
    bad_shortcuts: usize,
}

fn run_cell(cfg: &SweepConfig, n: usize, eps: f64, kind: ConstructionKind) -> Result<Measured, Error> {
    let mut g = generate(cfg.model, n, cfg.model_param(n), cfg.seed)?;
    if cfg.largest_component {
        g = largest_component(&g);
    }
    let out = crate::build_seeded(&g, kind, eps, cfg.seed)?;
    let mode = if g.n() <= cfg.exact_limit {
        MeasureMode::Exact
    } else {
        MeasureMode::Sampled { seed: cfg.seed, pairs: cfg.pairs }
    };
    let report = measure_distortion(&g, &out.artifact, mode)?;
    let bad_shortcuts = shortcut_errors(&g, &out.artifact)?.len();
    Ok(Measured {
        n: g.n(),
        report,
        hitting: out.artifact.hitting_set().len(),
        strips: out.strips.len(),
        bad_shortcuts,
    })
}

fn row(cfg: &SweepConfig, n: usize, eps: f64, kind: ConstructionKind) -> SweepRow {
    let mut row = SweepRow {
        model: cfg.model.to_string(),
        n,
        epsilon: eps,
        construction: kind.name().into(),
        seed: cfg.seed,
        mode: String::new(),
        edges: None,
        max_err: None,
        mean_err: None,
        bound: kind.distortion_bound(n, eps),
        edges_ratio: None,
        distortion_ratio: None,
        hitting_set: None,
        strips: None,
        pass: false,
        error: String::new(),
    };
    match run_cell(cfg, n, eps, kind) {
        Ok(m) => {
            // bounds are taken at the measured vertex count
            let nf = m.n as f64;
            let r = &m.report;
            row.n = m.n;
            row.bound = kind.distortion_bound(m.n, eps);
            row.mode = match r.mode {
                MeasureMode::Exact => "exact".into(),
                MeasureMode::Sampled { .. } => "sampled".into(),
            };
            row.edges = Some(r.edges);
            row.max_err = Some(r.max_additive_error);
            row.mean_err = Some(r.mean_additive_error);
            row.edges_ratio = Some(r.edges as f64 / nf.powf(1.0 + eps));
            row.distortion_ratio =
                Some(r.max_additive_error as f64 / nf.powf(kind.distortion_exponent(eps)));
            row.hitting_set = Some(m.hitting);
            row.strips = Some(m.strips);
            row.pass = r.passes(row.bound) && m.bad_shortcuts == 0;
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// Runs every cell; failures land in the row's `error` column.
pub fn run(cfg: &SweepConfig) -> Result<Vec<SweepRow>, Error> {
    let cells = cfg.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("worker pool: {e}")))?;
    // collect keeps cell order whatever order the cells finish in
    Ok(pool.install(|| cells.par_iter().map(|&(n, e, k)| row(cfg, n, e, k)).collect()))
}

pub fn write_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<(), Error> {
    let io = |e| Error::Usage(format!("csv: {e}"));
    writeln!(w, "# stripspan-sweep v{CSV_VERSION}").map_err(io)?;
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r).map_err(|e| Error::Usage(format!("csv: {e}")))?;
    }
    wtr.flush().map_err(io)?;
    Ok(())
}

pub fn default_config(model: Model, param: f64) -> SweepConfig {
    SweepConfig {
        model,
        sizes: vec![],
        epsilons: vec![],
        constructions: vec![],
        param,
        seed: crate::DEFAULT_SEED,
        largest_component: false,
        exact_limit: 1024,
        pairs: DEFAULT_SAMPLE_PAIRS,
        workers: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_text(rows: &[SweepRow]) -> String {
        let mut out = Vec::new();
        write_csv(&mut out, rows).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn single_cell_gives_one_row_plus_header() {
        let mut cfg = default_config(Model::Grid, 8.0);
        cfg.sizes = vec![64];
        cfg.epsilons = vec![0.1];
        cfg.constructions = vec![ConstructionKind::Spanner1];
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].pass, "{:?}", rows[0]);
        let text = csv_text(&rows);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "# stripspan-sweep v1");
        assert!(lines[1].starts_with("model,n,epsilon,construction,seed,mode,edges,max_err"));
    }

    #[test]
    fn order_is_fixed_and_failures_are_rows() {
        let mut cfg = default_config(Model::Gnp, 6.0);
        cfg.sizes = vec![120, 60];
        cfg.epsilons = vec![0.25, 0.1];
        cfg.constructions = vec![ConstructionKind::Spanner2, ConstructionKind::Emulator];
        cfg.workers = 3;
        let rows = run(&cfg).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.epsilon, r.construction.as_str())).collect();
        assert_eq!(&keys[..4], &[(0.1, "emulator"), (0.1, "spanner2"), (0.25, "emulator"), (0.25, "spanner2")]);
        assert_eq!(rows[0].n, 60);
        // the emulator does not accept ε = 0.25
        assert!(rows[2].error.contains("epsilon"), "{:?}", rows[2]);
        assert!(!rows[2].pass);
        assert!(rows[3].error.is_empty(), "{:?}", rows[3]);
        cfg.workers = 1;
        assert_eq!(run(&cfg).unwrap(), rows);
    }
}
