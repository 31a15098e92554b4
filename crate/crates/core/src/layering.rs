//! Layering partition of a graph around a root, the cluster tree built on
//! top of it, and support vertices.
//!
//! Vertices at equal distance `i` from the root are split into clusters:
//! two of them share a cluster iff they are joined by a path avoiding every
//! vertex closer to the root than `i`. Adjacent clusters in consecutive
//! layers form a tree rooted at `{root}`.

use crate::error::LayeringError;
use crate::graph::{DistanceMatrix, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub layer: u32,
    /// Sorted vertex ids.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeringTree {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeringPartition {
    pub root: usize,
    /// Distance from the root, per vertex.
    pub layer: Vec<u32>,
    pub cluster_of: Vec<usize>,
    /// Ordered by `(layer, smallest member)`; cluster 0 is `{root}`.
    pub clusters: Vec<Cluster>,
    pub tree: LayeringTree,
    /// Support vertex per cluster; `None` only for the root cluster.
    pub support: Vec<Option<usize>>,
}

impl LayeringPartition {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn members(&self, cluster: usize) -> &[usize] {
        &self.clusters[cluster].members
    }

    pub fn parent(&self, cluster: usize) -> Option<usize> {
        self.tree.parent[cluster]
    }

    pub fn children(&self, cluster: usize) -> &[usize] {
        &self.tree.children[cluster]
    }

    pub fn depth(&self) -> u32 {
        self.layer.iter().copied().max().unwrap_or(0)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Builds the layering partition rooted at `s` with one BFS and a
/// deepest-first union-find sweep; no all-pairs distances are needed.
pub fn build_layering_partition(g: &Graph, s: usize) -> LayeringPartition {
    assert!(s < g.n(), "root {s} out of range");
    let layer = g.bfs_distances(s);
    let depth = layer.iter().copied().max().unwrap_or(0) as usize;
    let mut by_layer = vec![Vec::new(); depth + 1];
    for (v, &i) in layer.iter().enumerate() {
        by_layer[i as usize].push(v);
    }

    // After adding layer i, the sets are the components of G minus B_{i-1}(s).
    let mut sets = DisjointSets::new(g.n());
    let mut clusters = Vec::new();
    for i in (0..=depth).rev() {
        for &v in &by_layer[i] {
            for &u in g.neighbors(v) {
                if layer[u] as usize >= i {
                    sets.union(u, v);
                }
            }
        }
        let mut groups: Vec<(usize, usize)> = by_layer[i].iter().map(|&v| (sets.find(v), v)).collect();
        groups.sort_unstable();
        for chunk in groups.chunk_by(|a, b| a.0 == b.0) {
            let mut members: Vec<usize> = chunk.iter().map(|&(_, v)| v).collect();
            members.sort_unstable();
            clusters.push(Cluster {
                layer: i as u32,
                members,
            });
        }
    }
    clusters.sort_by(|a, b| (a.layer, a.members[0]).cmp(&(b.layer, b.members[0])));

    let mut cluster_of = vec![0; g.n()];
    for (id, cluster) in clusters.iter().enumerate() {
        for &v in &cluster.members {
            cluster_of[v] = id;
        }
    }

    let tree = layering_tree(g, &layer, &cluster_of, &clusters)
        .expect("clusters of a layering partition always form a tree");
    let mut lp = LayeringPartition {
        root: s,
        layer,
        cluster_of,
        clusters,
        tree,
        support: Vec::new(),
    };
    lp.support = choose_supports(&lp, g);
    lp
}

/// Derives the cluster tree from the edges of `g`: a cluster's parent is
/// the unique adjacent cluster one layer closer to the root.
pub fn layering_tree(
    g: &Graph,
    layer: &[u32],
    cluster_of: &[usize],
    clusters: &[Cluster],
) -> Result<LayeringTree, LayeringError> {
    let mut parent: Vec<Option<usize>> = vec![None; clusters.len()];
    for (id, cluster) in clusters.iter().enumerate() {
        if cluster.layer == 0 {
            continue;
        }
        for &v in &cluster.members {
            for &u in g.neighbors(v) {
                if layer[u] + 1 != cluster.layer {
                    continue;
                }
                let candidate = cluster_of[u];
                match parent[id] {
                    None => parent[id] = Some(candidate),
                    Some(existing) if existing != candidate => {
                        return Err(LayeringError::MultipleParents {
                            cluster: id,
                            first: existing.min(candidate),
                            second: existing.max(candidate),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        if parent[id].is_none() {
            return Err(LayeringError::Orphan { cluster: id });
        }
    }
    let mut children = vec![Vec::new(); clusters.len()];
    for (id, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(id);
        }
    }
    Ok(LayeringTree { parent, children })
}

/// Support vertex of each non-root cluster: the smallest-id vertex one layer
/// up with a neighbor in the cluster.
pub fn choose_supports(lp: &LayeringPartition, g: &Graph) -> Vec<Option<usize>> {
    lp.clusters
        .iter()
        .map(|cluster| {
            if cluster.layer == 0 {
                return None;
            }
            cluster
                .members
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().copied())
                .filter(|&u| lp.layer[u] + 1 == cluster.layer)
                .min()
        })
        .collect()
}

pub fn cluster_diameters(lp: &LayeringPartition, dm: &DistanceMatrix) -> Vec<u32> {
    lp.clusters.iter().map(|c| dm.diameter_of(&c.members).0).collect()
}

/// Largest cluster diameter `D`.
pub fn max_cluster_diameter(lp: &LayeringPartition, dm: &DistanceMatrix) -> u32 {
    cluster_diameters(lp, dm).into_iter().max().unwrap_or(0)
}
