//! Exact distortion accounting between an input graph metric and a host metric.
//!
//! Besides the full pair scan, two edge-local checks are provided: if every
//! input edge is stretched by at most `b`, every pair is; and if every host
//! edge is at least as long as the input distance between its ends, the host
//! metric never contracts.

use std::collections::BinaryHeap;

use crate::error::HostError;
use crate::graph::{DistanceMatrix, Graph, Matrix, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport<T> {
    pub non_contracting: bool,
    /// `max d_host(u,v) / d_G(u,v)` over distinct pairs; 1 for a single vertex.
    pub max_ratio: T,
    pub worst_expansion_pair: Option<(usize, usize)>,
    /// Pair with the smallest ratio, present only when that ratio is below 1.
    pub worst_contraction_pair: Option<(usize, usize)>,
    /// `(max d_host - d_G, max d_G - d_host)`, each floored at 0.
    pub additive_slack: (T, T),
}

impl<T: Scalar> DistortionReport<T> {
    pub fn within(&self, bound: &T) -> bool {
        self.non_contracting && self.max_ratio <= *bound
    }
}

/// Scans every pair of `dg` against the same-indexed entries of `host`.
/// `host` may be larger than `dg`; extra rows are ignored.
pub fn multiplicative_report<T: Scalar>(dg: &DistanceMatrix, host: &Matrix<T>) -> DistortionReport<T> {
    assert!(host.n() >= dg.n(), "host metric must cover every input vertex");
    let mut max_ratio = T::one();
    let mut worst_expansion = None;
    let mut min_ratio: Option<T> = None;
    let mut worst_contraction = None;
    let mut expand_slack = T::zero();
    let mut contract_slack = T::zero();
    for (u, v) in dg.pairs() {
        let d = T::from_hops(dg.d(u, v));
        let h = host.get(u, v).clone();
        let ratio = h.clone() / d.clone();
        if worst_expansion.is_none() || ratio > max_ratio {
            max_ratio = ratio.clone();
            worst_expansion = Some((u, v));
        }
        if min_ratio.as_ref().is_none_or(|m| ratio < *m) {
            min_ratio = Some(ratio.clone());
            if ratio < T::one() {
                worst_contraction = Some((u, v));
            }
        }
        if h > d {
            expand_slack = T::max_of(expand_slack, h - d);
        } else if d > h {
            contract_slack = T::max_of(contract_slack, d - h);
        }
    }
    DistortionReport {
        non_contracting: worst_contraction.is_none(),
        max_ratio,
        worst_expansion_pair: worst_expansion,
        worst_contraction_pair: worst_contraction,
        additive_slack: (expand_slack, contract_slack),
    }
}

/// Largest host distance across an input edge; 0 for an edgeless graph.
pub fn max_edge_expansion<T: Scalar>(g: &Graph, host: &Matrix<T>) -> T {
    g.edges()
        .map(|(u, v)| host.get(u, v).clone())
        .fold(T::zero(), T::max_of)
}

/// True iff every input edge maps to host distance at most `bound`, which
/// bounds the stretch of every pair by `bound`.
pub fn edge_sufficient_expansion<T: Scalar>(g: &Graph, host: &Matrix<T>, bound: &T) -> bool {
    g.edges().all(|(u, v)| *host.get(u, v) <= *bound)
}

/// True iff every host segment between two real vertices (nodes `0..n_real`)
/// whose interior uses only Steiner nodes is at least as long as the input
/// distance between its ends. Direct real-real edges are such segments.
pub fn edge_sufficient_noncontraction<T: Scalar>(
    dg: &DistanceMatrix,
    host: &WeightedGraph<T>,
) -> Result<bool, HostError> {
    let n_real = dg.n();
    let adjacency = host.adjacency()?;
    for source in 0..n_real {
        for (target, length) in steiner_segments(&adjacency, source, n_real) {
            if length < T::from_hops(dg.d(source, target)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Shortest lengths from `source` to each real node reachable without
/// passing through another real node.
fn steiner_segments<T: Scalar>(
    adjacency: &[Vec<(usize, T)>],
    source: usize,
    n_real: usize,
) -> Vec<(usize, T)> {
    #[derive(PartialEq)]
    struct Item<T>(T, usize);
    impl<T: PartialOrd> Eq for Item<T> {}
    impl<T: PartialOrd> PartialOrd for Item<T> {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl<T: PartialOrd> Ord for Item<T> {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            other
                .0
                .partial_cmp(&self.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(other.1.cmp(&self.1))
        }
    }

    let mut best: std::collections::HashMap<usize, T> = Default::default();
    let mut done = std::collections::HashSet::new();
    let mut heap = BinaryHeap::new();
    heap.push(Item(T::zero(), source));
    best.insert(source, T::zero());
    let mut out = Vec::new();
    while let Some(Item(d, u)) = heap.pop() {
        if !done.insert(u) {
            continue;
        }
        if u != source && u < n_real {
            out.push((u, d));
            continue;
        }
        for (v, w) in &adjacency[u] {
            let candidate = d.clone() + w.clone();
            if best.get(v).is_none_or(|b| candidate < *b) {
                best.insert(*v, candidate.clone());
                heap.push(Item(candidate, *v));
            }
        }
    }
    out
}
