//! Cluster taxonomy for a distortion target `lambda`.
//!
//! With `Λ = 4λ+2`, a cluster is small when its diameter is at most `Λ`;
//! otherwise it must have exactly two `Λ`-far vertices (bifocal), split into
//! two cells around a diametral focal pair. Bifocal clusters are medium up to
//! diameter `16λ+12` and big beyond it. A cluster holding three pairwise
//! `Λ`-far vertices is an obstruction to outerplanar hosts.

use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph};
use crate::layering::LayeringPartition;
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaParams {
    pub lambda: Rational,
    /// `4λ + 2`
    pub far: Rational,
    /// `8λ + 6`
    pub delta: Rational,
    /// `16λ + 12`
    pub big: Rational,
    /// `16λ + 10`
    pub almost_big: Rational,
}

impl LambdaParams {
    pub fn new(lambda: Rational) -> Result<Self, ClassifyError> {
        if lambda < int(1) {
            return Err(ClassifyError::LambdaBelowOne(lambda));
        }
        Ok(LambdaParams {
            lambda,
            far: lambda * 4 + 2,
            delta: lambda * 8 + 6,
            big: lambda * 16 + 12,
            almost_big: lambda * 16 + 10,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("lambda must be at least 1, got {0}")]
    LambdaBelowOne(Rational),
    #[error("cluster {cluster} contains pairwise far vertices {triple:?}")]
    FarTripleFound { cluster: usize, triple: [usize; 3] },
    #[error("cluster {0} is not bifocal")]
    NotBifocal(usize),
}

/// `d > t` over exact rationals.
pub fn exceeds(d: u32, threshold: &Rational) -> bool {
    int(i64::from(d)) > *threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterClass {
    Small,
    Medium,
    Big,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub center: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAnalysis {
    pub cluster: usize,
    pub class: ClusterClass,
    /// Medium with diameter above `16λ+10`.
    pub almost_big: bool,
    pub diameter: u32,
    /// Lexicographically smallest diametral pair, for bifocal clusters.
    pub focal: Option<(usize, usize)>,
    /// One cell for small clusters (centered at the smallest member), two otherwise.
    pub cells: Vec<Cell>,
    /// Adjacent to both cells of a bifocal father.
    pub spread: bool,
}

impl ClusterAnalysis {
    pub fn is_bifocal(&self) -> bool {
        self.class != ClusterClass::Small
    }

    pub fn is_big(&self) -> bool {
        self.class == ClusterClass::Big
    }

    pub fn members(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.cells.iter().flat_map(|c| c.members.iter().copied()).collect();
        all.sort_unstable();
        all
    }

    pub fn cell_index_of(&self, v: usize) -> Option<usize> {
        self.cells.iter().position(|c| c.members.binary_search(&v).is_ok())
    }
}

/// Three members pairwise farther apart than `threshold`, if any exist.
///
/// A two-sweep guess is tried first; otherwise every far pair is intersected
/// against the far-neighborhood bitsets, so `None` is exact.
pub fn far_triple(members: &[usize], dm: &DistanceMatrix, threshold: &Rational) -> Option<[usize; 3]> {
    if members.len() < 3 {
        return None;
    }
    let far = |a: usize, b: usize| exceeds(dm.d(a, b), threshold);
    let farthest = |from: usize| *members.iter().max_by_key(|&&v| (dm.d(from, v), std::cmp::Reverse(v))).unwrap();
    let b = farthest(members[0]);
    let c = farthest(b);
    if far(b, c) {
        if let Some(&x) = members.iter().find(|&&x| far(x, b) && far(x, c)) {
            let mut triple = [b, c, x];
            triple.sort_unstable();
            return Some(triple);
        }
    }

    let k = members.len();
    let words = k.div_ceil(64);
    let mut bits = vec![vec![0u64; words]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && far(members[i], members[j]) {
                bits[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if bits[i][j / 64] & (1 << (j % 64)) == 0 {
                continue;
            }
            // third member strictly after j
            for (w, (a, b)) in bits[i].iter().zip(&bits[j]).enumerate().skip(j / 64) {
                let mut common = a & b;
                if w == j / 64 {
                    common &= u64::MAX.checked_shl((j % 64) as u32 + 1).unwrap_or(0);
                }
                if common != 0 {
                    let l = w * 64 + common.trailing_zeros() as usize;
                    let mut triple = [members[i], members[j], members[l]];
                    triple.sort_unstable();
                    return Some(triple);
                }
            }
        }
    }
    None
}

/// Classifies one cluster. Fails if it holds a far triple at `Λ`.
pub fn classify_cluster(
    cluster: usize,
    members: &[usize],
    dm: &DistanceMatrix,
    params: &LambdaParams,
) -> Result<ClusterAnalysis, ClassifyError> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let (diameter, pair) = dm.diameter_of(&sorted);
    if !exceeds(diameter, &params.far) {
        return Ok(ClusterAnalysis {
            cluster,
            class: ClusterClass::Small,
            almost_big: false,
            diameter,
            focal: None,
            cells: vec![Cell {
                center: sorted[0],
                members: sorted,
            }],
            spread: false,
        });
    }
    if let Some(triple) = far_triple(&sorted, dm, &params.far) {
        return Err(ClassifyError::FarTripleFound { cluster, triple });
    }
    let (c1, c2) = pair.expect("positive diameter has a diametral pair");
    let (first, second): (Vec<usize>, Vec<usize>) = sorted.iter().partition(|&&x| dm.d(x, c1) <= dm.d(x, c2));
    let class = if exceeds(diameter, &params.big) {
        ClusterClass::Big
    } else {
        ClusterClass::Medium
    };
    Ok(ClusterAnalysis {
        cluster,
        class,
        almost_big: class == ClusterClass::Medium && exceeds(diameter, &params.almost_big),
        diameter,
        focal: Some((c1, c2)),
        cells: vec![
            Cell {
                center: c1,
                members: first,
            },
            Cell {
                center: c2,
                members: second,
            },
        ],
        spread: false,
    })
}

/// Some edge of `g` joins the two vertex sets. `b` must be sorted.
pub fn sets_adjacent(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    a.iter()
        .any(|&u| g.neighbors(u).iter().any(|v| b.binary_search(v).is_ok()))
}

/// The child touches both cells of its father. False for a non-bifocal father.
pub fn is_spread(child_members: &[usize], father: &ClusterAnalysis, g: &Graph) -> bool {
    father.is_bifocal()
        && father
            .cells
            .iter()
            .all(|cell| sets_adjacent(g, child_members, &cell.members))
}

/// `C` together with the component of `G - B_k(s)` containing the child,
/// where `k` is the layer of `C`.
pub fn fiber(g: &Graph, lp: &LayeringPartition, cluster: usize, child: usize) -> Vec<usize> {
    let k = lp.clusters[cluster].layer;
    let start = lp.members(child)[0];
    let mut inside = vec![false; g.n()];
    let mut stack = vec![start];
    inside[start] = true;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if !inside[v] && lp.layer[v] > k {
                inside[v] = true;
                stack.push(v);
            }
        }
    }
    for &v in lp.members(cluster) {
        inside[v] = true;
    }
    (0..g.n()).filter(|&v| inside[v]).collect()
}

pub fn min_cross_cell_distance(analysis: &ClusterAnalysis, dm: &DistanceMatrix) -> Result<u32, ClassifyError> {
    if !analysis.is_bifocal() {
        return Err(ClassifyError::NotBifocal(analysis.cluster));
    }
    let (a, b) = (&analysis.cells[0].members, &analysis.cells[1].members);
    Ok(a.iter()
        .flat_map(|&u| b.iter().map(move |&v| dm.d(u, v)))
        .min()
        .unwrap_or(u32::MAX))
}

/// Every cross-cell pair is farther apart than `delta`.
pub fn is_delta_separated(
    analysis: &ClusterAnalysis,
    dm: &DistanceMatrix,
    delta: &Rational,
) -> Result<bool, ClassifyError> {
    Ok(exceeds(min_cross_cell_distance(analysis, dm)?, delta))
}

/// Classifies every cluster in id order and marks spread children.
pub fn analyze_clusters(
    g: &Graph,
    lp: &LayeringPartition,
    dm: &DistanceMatrix,
    params: &LambdaParams,
) -> Result<Vec<ClusterAnalysis>, ClassifyError> {
    let mut analyses = Vec::with_capacity(lp.cluster_count());
    for (id, cluster) in lp.clusters.iter().enumerate() {
        analyses.push(classify_cluster(id, &cluster.members, dm, params)?);
    }
    for id in 0..analyses.len() {
        if let Some(father) = lp.parent(id) {
            analyses[id].spread = is_spread(lp.members(id), &analyses[father], g);
        }
    }
    Ok(analyses)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cluster {cluster}: {property}: {detail}")]
pub struct TaxonomyViolation {
    pub cluster: usize,
    pub property: &'static str,
    pub detail: String,
}

/// Re-checks the structural facts the outerplanar construction relies on.
pub fn check_taxonomy(
    g: &Graph,
    lp: &LayeringPartition,
    dm: &DistanceMatrix,
    params: &LambdaParams,
    analyses: &[ClusterAnalysis],
) -> Result<(), TaxonomyViolation> {
    let violation = |cluster, property, detail: String| TaxonomyViolation {
        cluster,
        property,
        detail,
    };
    let two_far = params.far * 2;
    for a in analyses.iter().filter(|a| a.is_bifocal()) {
        for cell in &a.cells {
            let (d, _) = dm.diameter_of(&cell.members);
            if int(i64::from(d)) > two_far {
                return Err(violation(a.cluster, "bifocal cell diameter <= 2Λ", format!("cell of {} has diameter {d}", cell.center)));
            }
        }
    }
    for a in analyses.iter().filter(|a| a.is_big() || a.almost_big) {
        let cross = min_cross_cell_distance(a, dm).expect("bifocal");
        let required = if a.is_big() {
            params.lambda * 8 + 8
        } else {
            params.delta
        };
        if !exceeds(cross, &required) {
            return Err(violation(a.cluster, "cells separated", format!("cross distance {cross} not above {required}")));
        }
        for cell in &a.cells {
            let (d, _) = dm.diameter_of(&cell.members);
            if exceeds(d, &params.far) {
                return Err(violation(a.cluster, "big cell diameter <= Λ", format!("cell diameter {d}")));
            }
        }
        let Some(father_id) = lp.parent(a.cluster) else {
            return Err(violation(a.cluster, "father of big cluster is bifocal", "root cluster".into()));
        };
        let father = &analyses[father_id];
        if !father.is_bifocal() {
            return Err(violation(a.cluster, "father of big cluster is bifocal", format!("father {father_id} is small")));
        }
        if !a.spread {
            return Err(violation(a.cluster, "big cluster is spread", String::new()));
        }
        let cells_of = |v: usize| -> Vec<usize> {
            g.neighbors(v)
                .iter()
                .filter(|&&z| lp.cluster_of[z] == father_id)
                .map(|&z| father.cell_index_of(z).expect("member"))
                .collect()
        };
        let (c1, c2) = a.focal.expect("bifocal");
        let (near1, near2) = (cells_of(c1), cells_of(c2));
        if near1.iter().any(|x| near2.contains(x)) {
            return Err(violation(a.cluster, "focal centers attach to distinct father cells", format!("{near1:?} vs {near2:?}")));
        }
    }
    for a in analyses.iter().filter(|a| a.is_big()) {
        for &child in lp.children(a.cluster) {
            for cell in &analyses[child].cells {
                let touches = a
                    .cells
                    .iter()
                    .filter(|fc| sets_adjacent(g, &cell.members, &fc.members))
                    .count();
                if touches > 1 {
                    return Err(violation(a.cluster, "no son cell touches both cells of a big cluster", format!("son {child}")));
                }
            }
        }
    }
    Ok(())
}
