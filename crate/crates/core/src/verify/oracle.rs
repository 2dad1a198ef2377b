use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, NONE};
use crate::par;

/// Largest graph [`apsp_oracle`] accepts; the matrix is `n²` words.
pub const DEFAULT_APSP_CAP: usize = 5000;

/// Dense hop-distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        let d = self.data[u * self.n + v];
        (d != NONE).then_some(d)
    }

    pub fn row(&self, u: usize) -> Vec<Option<u32>> {
        (0..self.n).map(|v| self.get(u, v)).collect()
    }
}

pub fn apsp_oracle(g: &Graph) -> Result<DistanceMatrix> {
    apsp_oracle_capped(g, DEFAULT_APSP_CAP)
}

/// One BFS per source.
pub fn apsp_oracle_capped(g: &Graph, cap: usize) -> Result<DistanceMatrix> {
    let n = g.n();
    if n > cap {
        return Err(Error::GraphTooLarge { n, cap });
    }
    let rows = par::map_indices(n, |u| {
        let mut row = vec![NONE; n];
        g.bfs_into(u, &mut row, &mut VecDeque::new());
        row
    });
    Ok(DistanceMatrix { n, data: rows.concat() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_distances_from;
    use crate::graph::fixtures::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_cases() {
        let m = apsp_oracle(&path_graph(5)).unwrap();
        assert_eq!(m.get(0, 4), Some(4));
        let m = apsp_oracle(&Graph::empty(2)).unwrap();
        assert_eq!(m.get(0, 1), None);
        assert_eq!(m.get(1, 1), Some(0));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            apsp_oracle_capped(&Graph::empty(11), 10),
            Err(Error::GraphTooLarge { n: 11, cap: 10 })
        );
    }

    #[test]
    fn metric_properties() {
        let g = gnp(256, 0.05, 3);
        let m = apsp_oracle(&g).unwrap();
        for u in 0..256 {
            assert_eq!(m.row(u), all_distances_from(&g, u).unwrap());
            assert_eq!(m.get(u, u), Some(0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20_000 {
            let (a, b, c) = (rng.gen_range(0..256), rng.gen_range(0..256), rng.gen_range(0..256));
            assert_eq!(m.get(a, b), m.get(b, a));
            if let (Some(x), Some(y)) = (m.get(a, b), m.get(b, c)) {
                assert!(m.get(a, c).unwrap() <= x + y);
            }
        }
    }
}
