//! Radius-one clustering into clusters of exactly `e` vertices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, NONE};

/// Partial partition of the vertex set. Every cluster has exactly `e`
/// members and a center adjacent to all other members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    e: usize,
    clusters: Vec<Vec<usize>>,
    centers: Vec<usize>,
    membership: Vec<u32>,
}

impl Clustering {
    pub fn cluster_size(&self) -> usize {
        self.e
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Members of each cluster; the center comes first, then the rest ascending.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn center(&self, cluster: usize) -> usize {
        self.centers[cluster]
    }

    /// Number of vertices the clustering was built over.
    pub fn vertex_count(&self) -> usize {
        self.membership.len()
    }

    #[inline]
    pub fn cluster_of(&self, v: usize) -> Option<usize> {
        let c = self.membership[v];
        (c != NONE).then_some(c as usize)
    }

    #[inline]
    pub fn is_clustered(&self, v: usize) -> bool {
        self.membership[v] != NONE
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.membership.len() == g.n() {
            Ok(())
        } else {
            Err(Error::ClusteringMismatch { expected: g.n(), found: self.membership.len() })
        }
    }

    /// Rebuilds a clustering from explicit clusters (center first in each).
    /// Checks sizes, disjointness and the radius-one property against `g`.
    pub fn from_clusters(g: &Graph, e: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut membership = vec![NONE; g.n()];
        let mut centers = Vec::with_capacity(clusters.len());
        for (i, c) in clusters.iter().enumerate() {
            if c.len() != e {
                return Err(Error::InvalidParameter("cluster size differs from e"));
            }
            let center = c[0];
            for &v in c {
                g.check_vertex(v)?;
                if membership[v] != NONE {
                    return Err(Error::InvalidParameter("clusters overlap"));
                }
                if v != center && !g.has_edge(center, v) {
                    return Err(Error::InvalidParameter("member not adjacent to its center"));
                }
                membership[v] = i as u32;
            }
            centers.push(center);
        }
        Ok(Clustering { e, clusters, centers, membership })
    }
}

/// Greedy clustering. Passes scan candidate centers in ascending id; a vertex
/// with at least `e - 1` unmarked neighbors becomes a center together with its
/// `e - 1` lowest-id unmarked neighbors. Passes repeat until one adds nothing.
pub fn cluster(g: &Graph, e: usize) -> Result<Clustering> {
    if e == 0 {
        return Err(Error::InvalidParameter("cluster size e must be at least 1"));
    }
    let n = g.n();
    let mut membership = vec![NONE; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut centers = Vec::new();
    if e > n {
        return Ok(Clustering { e, clusters, centers, membership });
    }
    let mut unmarked_deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let mut added = false;
        for u in 0..n {
            if membership[u] != NONE || unmarked_deg[u] + 1 < e {
                continue;
            }
            let mut members = vec![u];
            members.extend(
                g.neighbors(u)
                    .filter(|&v| membership[v] == NONE)
                    .take(e - 1),
            );
            let id = clusters.len() as u32;
            for &v in &members {
                membership[v] = id;
                for w in g.neighbors(v) {
                    unmarked_deg[w] -= 1;
                }
            }
            centers.push(u);
            clusters.push(members);
            added = true;
        }
        if !added {
            break;
        }
    }
    Ok(Clustering { e, clusters, centers, membership })
}

/// Edges with both endpoints unclustered.
pub fn unclustered_edge_count(g: &Graph, c: &Clustering) -> Result<usize> {
    c.check_graph(g)?;
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| !c.is_clustered(u) && !c.is_clustered(v))
        .count())
}
