use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A family of nonempty vertex sets, each stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetFamily {
    members: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(members: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(members.len());
        for (index, mut m) in members.into_iter().enumerate() {
            if m.is_empty() {
                return Err(Error::EmptyMember { index });
            }
            m.sort_unstable();
            m.dedup();
            out.push(m);
        }
        Ok(SetFamily { members: out })
    }

    /// Sorts the members and drops repeats; hitting is unaffected.
    pub fn dedup(&mut self) {
        self.members.sort_unstable();
        self.members.dedup();
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.members.iter().map(Vec::len).min()
    }

    pub fn is_hit_by(&self, set: &[usize]) -> bool {
        let mut mark = vec![false; set.iter().max().map_or(0, |&m| m + 1)];
        for &v in set {
            mark[v] = true;
        }
        self.members
            .iter()
            .all(|m| m.iter().any(|&v| mark.get(v).copied().unwrap_or(false)))
    }
}

/// `⌈(n / min_size)·(ln|fam| + 1)⌉`, the greedy set-cover guarantee.
pub fn hitting_set_bound(n: usize, fam: &SetFamily) -> usize {
    match fam.min_size() {
        None => 0,
        Some(s) => {
            let x = (n as f64 / s as f64) * (libm::log(fam.len() as f64) + 1.0);
            libm::ceil(x - 1e-9) as usize
        }
    }
}

/// Greedy hitting set: repeatedly take the vertex in the most not-yet-hit
/// members, lowest id on ties. Returned ascending.
pub fn hitting_set(n: usize, fam: &SetFamily) -> Result<Vec<usize>> {
    let mut count = vec![0usize; n];
    let mut offsets = vec![0usize; n + 1];
    for m in fam.members() {
        for &v in m {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            count[v] += 1;
            offsets[v + 1] += 1;
        }
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut containing = vec![0u32; offsets[n]];
    for (i, m) in fam.members().iter().enumerate() {
        for &v in m {
            containing[fill[v]] = i as u32;
            fill[v] += 1;
        }
    }

    let mut hit = vec![false; fam.len()];
    let mut left = fam.len();
    let mut out = Vec::new();
    while left > 0 {
        let best = (0..n).fold(0, |b, v| if count[v] > count[b] { v } else { b });
        out.push(best);
        for &i in &containing[offsets[best]..offsets[best + 1]] {
            let i = i as usize;
            if !hit[i] {
                hit[i] = true;
                left -= 1;
                for &w in &fam.members()[i] {
                    count[w] -= 1;
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
