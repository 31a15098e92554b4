//! Tree approximants built from a layering partition.
//!
//! `H` joins every cluster to its support vertex; `H'` routes each cluster
//! through its own Steiner point with 0-length member edges and a 1-length
//! edge to the support. Giving every edge of these trees one uniform length
//! yields `H_l` and `H'_l`, non-contracting tree hosts whose distortion is
//! within a constant factor of the best tree embedding.

use crate::distortion::{
    edge_sufficient_noncontraction, max_edge_expansion, multiplicative_report, DistortionReport,
};
use crate::error::HostError;
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, Matrix, WeightedGraph};
use crate::layering::{build_layering_partition, max_cluster_diameter, LayeringPartition};
use crate::scalar::{int, rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeEmbedding {
    /// Number of real vertices; Steiner point of cluster `c` is node `n + c`.
    pub n: usize,
    /// Edges `(support, member)` of the unweighted spanning tree `H`.
    pub h: Vec<(usize, usize)>,
    /// `H'` with 0/1 labels, on `n + clusters` nodes.
    pub h_prime: WeightedGraph<u32>,
    /// Uniform edge length of `H_l`.
    pub ell_h: u32,
    /// Uniform edge length of `H'_l`.
    pub ell_h_prime: Rational,
    /// Largest cluster diameter `D`.
    pub max_diameter: u32,
    /// Largest input distance across an edge of `H`.
    pub max_h_edge_distance: u32,
    /// Lower bound on the optimal tree distortion.
    pub lower_bound: Rational,
}

impl TreeEmbedding {
    pub fn h_graph(&self) -> WeightedGraph<u32> {
        WeightedGraph::from_edges(self.n, self.h.iter().map(|&(u, v)| (u, v, 1)).collect())
    }

    pub fn h_ell(&self) -> WeightedGraph<Rational> {
        self.h_graph().with_uniform_length(int(i64::from(self.ell_h)))
    }

    pub fn h_prime_ell(&self) -> WeightedGraph<Rational> {
        self.h_prime.with_uniform_length(self.ell_h_prime)
    }
}

/// Spanning tree `H`: each non-root cluster's members hang off its support.
pub fn build_h(lp: &LayeringPartition) -> Vec<(usize, usize)> {
    lp.clusters
        .iter()
        .zip(&lp.support)
        .filter_map(|(cluster, support)| support.map(|x| (x, cluster)))
        .flat_map(|(x, cluster)| cluster.members.iter().map(move |&v| (x, v)))
        .collect()
}

/// `{0,1}`-labeled tree `H'` with one Steiner point per cluster. The root
/// cluster's Steiner point is a pendant on the root and carries no 1-edge.
pub fn build_h_prime(lp: &LayeringPartition) -> WeightedGraph<u32> {
    let n = lp.layer.len();
    let mut tree = WeightedGraph::new(n + lp.cluster_count());
    for (id, cluster) in lp.clusters.iter().enumerate() {
        let steiner = n + id;
        for &v in &cluster.members {
            tree.add_edge(v, steiner, 0);
        }
        if let Some(x) = lp.support[id] {
            tree.add_edge(steiner, x, 1);
        }
    }
    tree
}

/// `m = max d_G(u,v)` over edges `uv` of `H`, at least 1.
pub fn compute_ell_h(h: &[(usize, usize)], dm: &DistanceMatrix) -> u32 {
    h.iter().map(|&(u, v)| dm.d(u, v)).max().unwrap_or(1).max(1)
}

/// `(1/2) max(D + 1, m)`. The `+1` keeps `H'_l` non-contracting for pairs
/// whose tree path crosses a single 1-edge.
pub fn compute_ell_h_prime(max_diameter: u32, m: u32) -> Rational {
    rational(i64::from((max_diameter + 1).max(m)), 2)
}

/// `max(1, D/3, g(m))` where `g` is the least `lambda` with
/// `max(3 lambda - 1, 2 lambda + 1) >= m`.
pub fn lower_bound_lambda(max_diameter: u32, m: u32) -> Rational {
    let m = i64::from(m);
    let from_support = if m >= 5 {
        rational(m + 1, 3)
    } else {
        rational(m - 1, 2).max(int(1))
    };
    int(1)
        .max(rational(i64::from(max_diameter), 3))
        .max(from_support)
}

pub fn approximate_tree_embedding(g: &Graph, s: usize) -> TreeEmbedding {
    let lp = build_layering_partition(g, s);
    let dm = all_pairs_distances(g);
    approximate_tree_embedding_with(&lp, &dm)
}

pub fn approximate_tree_embedding_with(lp: &LayeringPartition, dm: &DistanceMatrix) -> TreeEmbedding {
    let h = build_h(lp);
    let h_prime = build_h_prime(lp);
    let max_diameter = max_cluster_diameter(lp, dm);
    let m = compute_ell_h(&h, dm);
    TreeEmbedding {
        n: lp.layer.len(),
        h,
        h_prime,
        ell_h: m,
        ell_h_prime: compute_ell_h_prime(max_diameter, m),
        max_diameter,
        max_h_edge_distance: m,
        lower_bound: lower_bound_lambda(max_diameter, m),
    }
}

/// Path lengths between the first `n_real` nodes of a tree host.
pub fn tree_metric_on_v<T: Scalar>(t: &WeightedGraph<T>, n_real: usize) -> Result<Matrix<T>, HostError> {
    let nodes = t.node_count();
    if nodes > 0 && t.edges().len() != nodes - 1 {
        return Err(HostError::NotATree);
    }
    let adjacency = t.adjacency()?;
    let mut metric = Matrix::filled(n_real, T::zero());
    let mut dist: Vec<Option<T>> = vec![None; nodes];
    let mut stack = Vec::new();
    for source in 0..n_real {
        dist.iter_mut().for_each(|d| *d = None);
        dist[source] = Some(T::zero());
        stack.push(source);
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            let du = dist[u].clone().expect("visited");
            for (v, w) in &adjacency[u] {
                if dist[*v].is_none() {
                    dist[*v] = Some(du.clone() + w.clone());
                    reached += 1;
                    stack.push(*v);
                }
            }
        }
        if reached != nodes {
            return Err(HostError::Disconnected);
        }
        for (target, d) in dist.iter().take(n_real).enumerate() {
            metric.set(source, target, d.clone().expect("connected"));
        }
    }
    Ok(metric)
}

/// Exact checks of everything the construction promises, over all pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCertificate {
    /// `d_H(s, v) = d_G(s, v)` for every `v`.
    pub root_isometry: bool,
    /// `d_H - 2 <= d_G <= d_H + D`.
    pub h_additive: bool,
    /// `d_H' <= d_G <= d_H' + D`.
    pub h_prime_additive: bool,
    /// `d_{H_l} <= ell_h (d_G + 2)`.
    pub h_ell_bound: bool,
    /// `d_{H'_l} <= 2 ell_h' (d_G + 1)`.
    pub h_prime_ell_bound: bool,
    pub h_ell: DistortionReport<Rational>,
    pub h_prime_ell: DistortionReport<Rational>,
    /// Largest `H'_l` stretch over pairs at input distance >= 2.
    pub h_prime_ell_far_ratio: Option<Rational>,
    /// `distortion(H_l) <= 9 LB`.
    pub h_ell_factor: bool,
    /// `distortion(H'_l) <= 6 LB + 2`.
    pub h_prime_ell_factor: bool,
    /// The edge-local checks agree with the full pair scans.
    pub shortcuts_agree: bool,
}

impl TreeCertificate {
    pub fn all_pass(&self) -> bool {
        self.root_isometry
            && self.h_additive
            && self.h_prime_additive
            && self.h_ell.non_contracting
            && self.h_prime_ell.non_contracting
            && self.h_ell_bound
            && self.h_prime_ell_bound
            && self.h_ell_factor
            && self.h_prime_ell_factor
            && self.shortcuts_agree
    }
}

pub fn certify_tree_embedding(
    g: &Graph,
    dm: &DistanceMatrix,
    root: usize,
    emb: &TreeEmbedding,
) -> Result<TreeCertificate, HostError> {
    let n = g.n();
    let h_hops = tree_metric_on_v(&emb.h_graph(), n)?;
    let h_prime_labels = tree_metric_on_v(&emb.h_prime, n)?;
    let h_ell_graph = emb.h_ell();
    let h_prime_ell_graph = emb.h_prime_ell();
    let h_ell = tree_metric_on_v(&h_ell_graph, n)?;
    let h_prime_ell = tree_metric_on_v(&h_prime_ell_graph, n)?;

    let d_max = emb.max_diameter;
    let ell_h = int(i64::from(emb.ell_h));
    let two_ell_hp = emb.ell_h_prime * 2;
    let mut h_additive = true;
    let mut h_prime_additive = true;
    let mut h_ell_bound = true;
    let mut h_prime_ell_bound = true;
    let mut far_ratio: Option<Rational> = None;
    for (u, v) in dm.pairs() {
        let d = dm.d(u, v);
        let dh = *h_hops.get(u, v);
        let dhp = *h_prime_labels.get(u, v);
        h_additive &= dh <= d + 2 && d <= dh + d_max;
        h_prime_additive &= dhp <= d && d <= dhp + d_max;
        let dr = int(i64::from(d));
        h_ell_bound &= *h_ell.get(u, v) <= ell_h * (dr + 2);
        h_prime_ell_bound &= *h_prime_ell.get(u, v) <= two_ell_hp * (dr + 1);
        if d >= 2 {
            let ratio = *h_prime_ell.get(u, v) / dr;
            far_ratio = Some(far_ratio.map_or(ratio, |r: Rational| r.max(ratio)));
        }
    }
    let root_isometry = (0..n).all(|v| *h_hops.get(root, v) == dm.d(root, v));

    let h_ell_report = multiplicative_report(dm, &h_ell);
    let h_prime_ell_report = multiplicative_report(dm, &h_prime_ell);
    let lb = emb.lower_bound;
    let h_ell_factor = h_ell_report.max_ratio <= lb * 9;
    let h_prime_ell_factor = h_prime_ell_report.max_ratio <= lb * 6 + 2;

    let expansion_agrees = |host: &Matrix<Rational>, report: &DistortionReport<Rational>| {
        n < 2 || max_edge_expansion(g, host) == report.max_ratio
    };
    let shortcuts_agree = expansion_agrees(&h_ell, &h_ell_report)
        && expansion_agrees(&h_prime_ell, &h_prime_ell_report)
        && edge_sufficient_noncontraction(dm, &h_ell_graph)? == h_ell_report.non_contracting
        && edge_sufficient_noncontraction(dm, &h_prime_ell_graph)? == h_prime_ell_report.non_contracting;

    Ok(TreeCertificate {
        root_isometry,
        h_additive,
        h_prime_additive,
        h_ell_bound,
        h_prime_ell_bound,
        h_ell: h_ell_report,
        h_prime_ell: h_prime_ell_report,
        h_prime_ell_far_ratio: far_ratio,
        h_ell_factor,
        h_prime_ell_factor,
        shortcuts_agree,
    })
}
