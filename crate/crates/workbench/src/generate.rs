//! Deterministic random and lattice graph models.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stripspan_core::Graph;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    /// Erdős–Rényi G(n, p); param is p.
    Gnp,
    /// `rows × (n / rows)` lattice; param is the row count.
    Grid,
    /// Random geometric graph in the unit square; param is the radius.
    Rgg,
    /// Preferential attachment; param is the edges added per new vertex.
    Ba,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Gnp => "gnp",
            Model::Grid => "grid",
            Model::Rgg => "rgg",
            Model::Ba => "ba",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "gnp" => Ok(Model::Gnp),
            "grid" => Ok(Model::Grid),
            "rgg" => Ok(Model::Rgg),
            "ba" => Ok(Model::Ba),
            _ => Err(Error::Usage(format!("unknown model '{s}' (gnp, grid, rgg, ba)"))),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub fn generate(model: Model, n: usize, param: f64, seed: u64) -> Result<Graph, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match model {
        Model::Gnp => {
            if !(param > 0.0 && param <= 1.0) {
                return Err(usage(format!("gnp needs p in (0, 1], got {param}")));
            }
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(param) {
                        e.push((u, v));
                    }
                }
            }
            e
        }
        Model::Grid => {
            let rows = param as usize;
            if param.fract() != 0.0 || rows == 0 || n % rows != 0 {
                return Err(usage(format!("grid needs a row count dividing n={n}, got {param}")));
            }
            let cols = n / rows;
            let mut e = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        e.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        e.push((v, v + cols));
                    }
                }
            }
            e
        }
        Model::Rgg => {
            if !(param > 0.0) || !param.is_finite() {
                return Err(usage(format!("rgg needs a positive radius, got {param}")));
            }
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let r2 = param * param;
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                    if dx * dx + dy * dy <= r2 {
                        e.push((u, v));
                    }
                }
            }
            e
        }
        Model::Ba => {
            let m = param as usize;
            if param.fract() != 0.0 || m == 0 || n <= m {
                return Err(usage(format!("ba needs an integer degree in [1, n), got {param}")));
            }
            // seed clique on m + 1 vertices, then degree-proportional picks
            // from the endpoint list
            let mut e = Vec::new();
            let mut ends = Vec::new();
            for u in 0..=m {
                for v in u + 1..=m {
                    e.push((u, v));
                    ends.extend([u, v]);
                }
            }
            for v in m + 1..n {
                let mut chosen: Vec<usize> = Vec::with_capacity(m);
                while chosen.len() < m {
                    let t = *ends.choose(&mut rng).expect("seed clique has edges");
                    if !chosen.contains(&t) {
                        chosen.push(t);
                    }
                }
                for t in chosen {
                    e.push((t, v));
                    ends.extend([t, v]);
                }
            }
            e
        }
    };
    Ok(Graph::from_edges(n, edges)?)
}

/// Relabelled largest component.
pub fn largest_component(g: &Graph) -> Graph {
    g.induced(&g.largest_component()).expect("component vertices are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_and_complete_counts() {
        let g = generate(Model::Grid, 9, 3.0, 0).unwrap();
        assert_eq!((g.n(), g.edge_count()), (9, 12));
        let g = generate(Model::Gnp, 100, 1.0, 5).unwrap();
        assert_eq!(g.edge_count(), 4950);
    }

    #[test]
    fn seeds_are_deterministic() {
        for model in [Model::Gnp, Model::Rgg, Model::Ba] {
            let p = match model {
                Model::Gnp => 0.02,
                Model::Rgg => 0.08,
                _ => 3.0,
            };
            assert_eq!(generate(model, 500, p, 9).unwrap(), generate(model, 500, p, 9).unwrap());
            assert_ne!(generate(model, 500, p, 9).unwrap(), generate(model, 500, p, 10).unwrap());
        }
    }

    #[test]
    fn bad_parameters_are_usage_errors() {
        for (model, p) in [(Model::Gnp, 0.0), (Model::Gnp, 1.5), (Model::Grid, 7.0), (Model::Rgg, -1.0), (Model::Ba, 0.0)] {
            assert!(matches!(generate(model, 30, p, 0), Err(Error::Usage(_))), "{model} {p}");
        }
    }

    #[test]
    fn ba_degrees() {
        let g = generate(Model::Ba, 200, 3.0, 1).unwrap();
        assert_eq!(g.edge_count(), 6 + 3 * (200 - 4));
        assert!((0..200).all(|v| g.degree(v) >= 3));
    }

    #[test]
    fn largest_component_is_connected() {
        let g = generate(Model::Gnp, 400, 1.5 / 400.0, 3).unwrap();
        let h = largest_component(&g);
        assert!(h.n() < 400 && h.n() > 0);
        assert!(h.components().iter().all(|&c| c == 0));
    }
}
