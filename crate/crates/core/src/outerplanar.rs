//! Outerplanar approximation for a fixed distortion target `lambda`.
//!
//! Clusters are processed top-down over the cluster tree. Each child cluster
//! is attached to centers of its father's cells by one of four rules; big
//! clusters carry pairs of cycle sides downward and a medium spread child
//! closes the cycle. With uniform edge weight `w = 20λ+15` the result is a
//! non-contracting host with distortion at most `5w = 100λ+75`. When the
//! cluster structure rules out any host of distortion `lambda`, a witness is
//! returned instead.

use log::warn;
use thiserror::Error;

use crate::cluster::{
    analyze_clusters, sets_adjacent, ClassifyError, ClusterAnalysis, ClusterClass, LambdaParams,
};
use crate::distortion::{edge_sufficient_expansion, edge_sufficient_noncontraction, multiplicative_report, DistortionReport};
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, Matrix, WeightedGraph};
use crate::layering::{build_layering_partition, LayeringPartition};
use crate::scalar::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OuterplanarError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("internal invariant violated at cluster {cluster}: {detail}")]
    Invariant { cluster: usize, detail: String },
    #[error("bound violated on pair ({u}, {v}): {detail}")]
    BoundViolation { u: usize, v: usize, detail: String },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionKind {
    /// Three members of one cluster pairwise farther than `4λ+2`.
    FarTriple { cluster: usize, vertices: [usize; 3] },
    /// A cluster with two big children.
    TwoBigSons { cluster: usize, sons: (usize, usize) },
    /// A big cluster with two spread children.
    BigWithTwoSpreadSons { cluster: usize, sons: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub lambda: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachCase {
    /// Small child hangs off one father cell center.
    Small,
    /// Medium child hangs off one father cell center.
    Medium,
    /// Spread medium child of a big father closes a cycle.
    Closing,
    /// Big child continues both sides of a cycle.
    Big,
}

impl AttachCase {
    pub fn number(self) -> u8 {
        match self {
            AttachCase::Small => 1,
            AttachCase::Medium => 2,
            AttachCase::Closing => 3,
            AttachCase::Big => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub father: usize,
    pub child: usize,
    pub case: AttachCase,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterplanarEmbedding {
    pub lambda: Rational,
    /// Uniform edge weight `20λ + 15`.
    pub weight: Rational,
    pub n: usize,
    /// Host edges `(father-layer vertex, child-layer vertex)`.
    pub edges: Vec<(usize, usize)>,
    pub attachments: Vec<Attachment>,
    pub analyses: Vec<ClusterAnalysis>,
}

impl OuterplanarEmbedding {
    pub fn host(&self) -> WeightedGraph<Rational> {
        WeightedGraph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (u, v, self.weight)).collect())
    }

    /// Theorem bound `100λ + 75`.
    pub fn distortion_bound(&self) -> Rational {
        self.weight * 5
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OuterplanarOutcome {
    Embedding(OuterplanarEmbedding),
    Obstruction(Obstruction),
}

impl OuterplanarOutcome {
    pub fn embedding(&self) -> Option<&OuterplanarEmbedding> {
        match self {
            OuterplanarOutcome::Embedding(e) => Some(e),
            OuterplanarOutcome::Obstruction(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            OuterplanarOutcome::Embedding(_) => None,
            OuterplanarOutcome::Obstruction(o) => Some(o),
        }
    }
}

pub fn approximate_outerplanar_embedding(
    g: &Graph,
    s: usize,
    lambda: Rational,
) -> Result<OuterplanarOutcome, OuterplanarError> {
    let lp = build_layering_partition(g, s);
    let dm = all_pairs_distances(g);
    approximate_outerplanar_embedding_with(g, &lp, &dm, lambda)
}

pub fn approximate_outerplanar_embedding_with(
    g: &Graph,
    lp: &LayeringPartition,
    dm: &DistanceMatrix,
    lambda: Rational,
) -> Result<OuterplanarOutcome, OuterplanarError> {
    let params = LambdaParams::new(lambda)?;
    let analyses = match analyze_clusters(g, lp, dm, &params) {
        Ok(a) => a,
        Err(ClassifyError::FarTripleFound { cluster, triple }) => {
            return Ok(OuterplanarOutcome::Obstruction(Obstruction {
                kind: ObstructionKind::FarTriple {
                    cluster,
                    vertices: triple,
                },
                lambda,
            }))
        }
        Err(e) => return Err(e.into()),
    };

    let mut edges = Vec::new();
    let mut attachments = Vec::new();
    // cluster ids are already in non-decreasing layer order
    for father in 0..lp.cluster_count() {
        let sons = lp.children(father);
        let big: Vec<usize> = sons.iter().copied().filter(|&c| analyses[c].is_big()).collect();
        if big.len() >= 2 {
            return Ok(OuterplanarOutcome::Obstruction(Obstruction {
                kind: ObstructionKind::TwoBigSons {
                    cluster: father,
                    sons: (big[0], big[1]),
                },
                lambda,
            }));
        }
        if analyses[father].is_big() {
            let spread: Vec<usize> = sons.iter().copied().filter(|&c| analyses[c].spread).collect();
            if spread.len() >= 2 {
                return Ok(OuterplanarOutcome::Obstruction(Obstruction {
                    kind: ObstructionKind::BigWithTwoSpreadSons {
                        cluster: father,
                        sons: (spread[0], spread[1]),
                    },
                    lambda,
                }));
            }
        }
        for &child in sons {
            let (case, new_edges) = attach_case(g, &analyses[father], &analyses[child])?;
            edges.extend_from_slice(&new_edges);
            attachments.push(Attachment {
                father,
                child,
                case,
                edges: new_edges,
            });
        }
    }

    Ok(OuterplanarOutcome::Embedding(OuterplanarEmbedding {
        lambda,
        weight: lambda * 20 + 15,
        n: g.n(),
        edges,
        attachments,
        analyses,
    }))
}

/// Host edges joining `child` to its father's layer.
pub fn attach_case(
    g: &Graph,
    father: &ClusterAnalysis,
    child: &ClusterAnalysis,
) -> Result<(AttachCase, Vec<(usize, usize)>), OuterplanarError> {
    let members = child.members();
    let star = |center: usize, targets: &[usize]| targets.iter().map(|&v| (center, v)).collect::<Vec<_>>();
    match child.class {
        ClusterClass::Small => {
            let center = adjacent_cell_center(g, father, &members, child.cluster)?;
            Ok((AttachCase::Small, star(center, &members)))
        }
        ClusterClass::Medium if !(father.is_big() && child.spread) => {
            let center = adjacent_cell_center(g, father, &members, child.cluster)?;
            Ok((AttachCase::Medium, star(center, &members)))
        }
        ClusterClass::Medium => {
            let (c1, c2) = (father.cells[0].center, father.cells[1].center);
            let far_cell = &father.cells[1].members;
            let closer = members
                .iter()
                .copied()
                .find(|&v| g.neighbors(v).iter().any(|z| far_cell.binary_search(z).is_ok()))
                .unwrap_or(members[0]);
            let mut edges = star(c1, &members);
            edges.push((c2, closer));
            Ok((AttachCase::Closing, edges))
        }
        ClusterClass::Big => {
            if !father.is_bifocal() {
                return Err(OuterplanarError::Invariant {
                    cluster: child.cluster,
                    detail: "big cluster under a small father".into(),
                });
            }
            let (f1, f2) = (&father.cells[0], &father.cells[1]);
            let (a, b) = (&child.cells[0], &child.cells[1]);
            let straight = sets_adjacent(g, &a.members, &f1.members) && sets_adjacent(g, &b.members, &f2.members);
            let swapped = sets_adjacent(g, &a.members, &f2.members) && sets_adjacent(g, &b.members, &f1.members);
            let (first, second) = match (straight, swapped) {
                (true, _) => (a, b),
                (false, true) => (b, a),
                (false, false) => {
                    return Err(OuterplanarError::Invariant {
                        cluster: child.cluster,
                        detail: "big cluster cells do not match its father's cells".into(),
                    })
                }
            };
            let mut edges = star(f1.center, &first.members);
            edges.extend(star(f2.center, &second.members));
            Ok((AttachCase::Big, edges))
        }
    }
}

fn adjacent_cell_center(
    g: &Graph,
    father: &ClusterAnalysis,
    child_members: &[usize],
    child: usize,
) -> Result<usize, OuterplanarError> {
    let touching: Vec<usize> = (0..father.cells.len())
        .filter(|&i| sets_adjacent(g, child_members, &father.cells[i].members))
        .collect();
    let index = match touching.as_slice() {
        [] => {
            return Err(OuterplanarError::Invariant {
                cluster: child,
                detail: "child not adjacent to its father".into(),
            })
        }
        [only] => *only,
        _ if father.is_big() => {
            return Err(OuterplanarError::Invariant {
                cluster: child,
                detail: "non-spread child touches both cells of a big father".into(),
            })
        }
        _ => {
            let smallest = father.members()[0];
            father.cell_index_of(smallest).expect("member of father")
        }
    };
    Ok(father.cells[index].center)
}

/// Blocks (2-connected components) of a graph given by an edge list, each
/// as `(vertices, edge count)` with vertices sorted.
pub fn blocks(n: usize, edges: &[(usize, usize)]) -> Vec<(Vec<usize>, usize)> {
    let mut adjacency = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, i));
        adjacency[v].push((u, i));
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut clock = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        // (vertex, edge used to enter it, next adjacency index)
        let mut frames: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(frame) = frames.last_mut() {
            let (v, entry, next) = *frame;
            if next < adjacency[v].len() {
                frame.2 += 1;
                let (w, e) = adjacency[v][next];
                if Some(e) == entry {
                    continue;
                }
                if disc[w] == UNSEEN {
                    edge_stack.push(e);
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    frames.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            let Some(&(parent, _, _)) = frames.last() else {
                continue;
            };
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                let entry = entry.expect("non-root frame has an entry edge");
                let mut vertices = Vec::new();
                let mut count = 0;
                while let Some(e) = edge_stack.pop() {
                    vertices.extend([edges[e].0, edges[e].1]);
                    count += 1;
                    if e == entry {
                        break;
                    }
                }
                vertices.sort_unstable();
                vertices.dedup();
                out.push((vertices, count));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Every block is a single edge or a simple cycle.
    pub edges_or_cycles: bool,
    pub cycle_lengths: Vec<usize>,
    pub cycles_even: bool,
    pub cycles_vertex_disjoint: bool,
}

pub fn structure_report(n: usize, edges: &[(usize, usize)]) -> StructureReport {
    let all = blocks(n, edges);
    let edges_or_cycles = all.iter().all(|(vs, m)| *m == 1 || (*m == vs.len() && *m >= 3));
    let cycles: Vec<&Vec<usize>> = all.iter().filter(|(_, m)| *m > 1).map(|(vs, _)| vs).collect();
    let mut seen = vec![false; n];
    let mut disjoint = true;
    for cycle in &cycles {
        for &v in cycle.iter() {
            disjoint &= !seen[v];
            seen[v] = true;
        }
    }
    let mut cycle_lengths: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
    cycle_lengths.sort_unstable();
    StructureReport {
        edges_or_cycles,
        cycles_even: cycle_lengths.iter().all(|l| l % 2 == 0),
        cycle_lengths,
        cycles_vertex_disjoint: disjoint,
    }
}

/// Every block is an edge or a chordless cycle, a sufficient certificate of
/// outerplanarity.
pub fn check_outerplanar_structure(n: usize, edges: &[(usize, usize)]) -> bool {
    structure_report(n, edges).edges_or_cycles
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterplanarCertificate {
    pub bound: Rational,
    pub report: DistortionReport<Rational>,
    /// Every input edge spans at most `bound` in the host.
    pub edge_expansion_ok: bool,
    /// Every host edge is at least the input distance of its ends.
    pub edge_noncontraction_ok: bool,
}

/// Exact two-sided check `d_G <= d_G' <= (100λ+75) d_G` over all pairs,
/// cross-validated against the edge-local checks.
pub fn verify_outerplanar_bounds(
    g: &Graph,
    dm: &DistanceMatrix,
    emb: &OuterplanarEmbedding,
) -> Result<OuterplanarCertificate, OuterplanarError> {
    let bound = emb.distortion_bound();
    let host_metric = host_metric(emb)?;
    let host = emb.host();
    let report = multiplicative_report(dm, &host_metric);
    let edge_expansion_ok = edge_sufficient_expansion(g, &host_metric, &bound);
    let edge_noncontraction_ok = edge_sufficient_noncontraction(dm, &host).map_err(|e| OuterplanarError::Invariant {
        cluster: 0,
        detail: e.to_string(),
    })?;
    if let Some((u, v)) = report.worst_contraction_pair {
        return Err(OuterplanarError::BoundViolation {
            u,
            v,
            detail: format!("host distance {} below input distance {}", host_metric.get(u, v), dm.d(u, v)),
        });
    }
    if report.max_ratio > bound {
        let (u, v) = report.worst_expansion_pair.expect("ratio above bound needs a pair");
        return Err(OuterplanarError::BoundViolation {
            u,
            v,
            detail: format!("stretch {} above {}", format_rational(&report.max_ratio), format_rational(&bound)),
        });
    }
    if !(edge_expansion_ok && edge_noncontraction_ok) {
        return Err(OuterplanarError::Invariant {
            cluster: 0,
            detail: "edge-local checks disagree with the full pair scan".into(),
        });
    }
    Ok(OuterplanarCertificate {
        bound,
        report,
        edge_expansion_ok,
        edge_noncontraction_ok,
    })
}

/// Host distances between real vertices: uniform weight times hop count.
pub fn host_metric(emb: &OuterplanarEmbedding) -> Result<Matrix<Rational>, OuterplanarError> {
    let hops = Graph::from_edges(emb.n, &emb.edges).map_err(|e| OuterplanarError::Invariant {
        cluster: 0,
        detail: format!("host graph invalid: {e}"),
    })?;
    Ok(all_pairs_distances(&hops).map(|&h| emb.weight * i64::from(h)))
}

/// Every value `λ >= 1` at which some cluster could change class, plus 1,
/// sorted and deduplicated.
pub fn lambda_candidates(dm: &DistanceMatrix) -> Vec<Rational> {
    let mut distances: Vec<i64> = dm.pairs().map(|(u, v)| i64::from(dm.d(u, v))).collect();
    distances.sort_unstable();
    distances.dedup();
    let mut out = vec![int(1)];
    for d in distances {
        for (offset, scale) in [(2, 4), (6, 8), (10, 16), (12, 16)] {
            let value = Rational::new(d - offset, scale);
            if value >= int(1) {
                out.push(value);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSearch {
    pub candidates: Vec<Rational>,
    pub lambda: Rational,
    pub embedding: OuterplanarEmbedding,
    /// Candidates above the minimum that were infeasible.
    pub non_monotone: Vec<Rational>,
}

/// Smallest candidate `λ` at which an embedding is produced. Every
/// candidate is evaluated so that non-monotone feasibility is visible.
pub fn find_min_feasible_lambda(g: &Graph, s: usize) -> Result<LambdaSearch, OuterplanarError> {
    let lp = build_layering_partition(g, s);
    let dm = all_pairs_distances(g);
    let candidates = lambda_candidates(&dm);
    let mut first: Option<(Rational, OuterplanarEmbedding)> = None;
    let mut non_monotone = Vec::new();
    for &lambda in &candidates {
        match approximate_outerplanar_embedding_with(g, &lp, &dm, lambda)? {
            OuterplanarOutcome::Embedding(e) => {
                if first.is_none() {
                    first = Some((lambda, e));
                }
            }
            OuterplanarOutcome::Obstruction(_) => {
                if first.is_some() {
                    warn!("feasibility not monotone: obstruction at lambda = {}", format_rational(&lambda));
                    non_monotone.push(lambda);
                }
            }
        }
    }
    let (lambda, embedding) = first.ok_or_else(|| OuterplanarError::Invariant {
        cluster: 0,
        detail: "no candidate lambda is feasible".into(),
    })?;
    Ok(LambdaSearch {
        candidates,
        lambda,
        embedding,
        non_monotone,
    })
}

/// Rechecks a witness from raw distances, independently of the classifier.
pub fn validate_obstruction(
    g: &Graph,
    lp: &LayeringPartition,
    dm: &DistanceMatrix,
    obstruction: &Obstruction,
) -> Result<(), OuterplanarError> {
    let lambda = obstruction.lambda;
    let far = lambda * 4 + 2;
    let big = lambda * 16 + 12;
    let exceeds = |d: u32, t: Rational| int(i64::from(d)) > t;
    let invalid = |msg: String| Err(OuterplanarError::InvalidWitness(msg));
    let is_son = |parent: usize, son: usize| son < lp.cluster_count() && lp.parent(son) == Some(parent);

    let pairwise_far = |vs: &[usize]| -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| exceeds(dm.d(a, b), far)))
    };
    let diametral = |members: &[usize]| -> (u32, usize, usize) {
        let mut best = (0, members[0], members[0]);
        for &a in members {
            for &b in members {
                if a < b && dm.d(a, b) > best.0 {
                    best = (dm.d(a, b), a, b);
                }
            }
        }
        best
    };
    let bifocal_big = |cluster: usize| -> bool {
        let members = lp.members(cluster);
        let (diam, _, _) = diametral(members);
        let has_triple = members.iter().any(|&a| {
            members
                .iter()
                .any(|&b| members.iter().any(|&c| a < b && b < c && pairwise_far(&[a, b, c])))
        });
        exceeds(diam, far) && !has_triple && exceeds(diam, big)
    };

    match &obstruction.kind {
        ObstructionKind::FarTriple { cluster, vertices } => {
            if *cluster >= lp.cluster_count() || vertices.iter().any(|&v| v >= g.n() || lp.cluster_of[v] != *cluster) {
                return invalid(format!("vertices {vertices:?} not all in cluster {cluster}"));
            }
            if !pairwise_far(vertices) {
                return invalid(format!("vertices {vertices:?} not pairwise farther than {}", format_rational(&far)));
            }
        }
        ObstructionKind::TwoBigSons { cluster, sons: (a, b) } => {
            if a == b || !is_son(*cluster, *a) || !is_son(*cluster, *b) {
                return invalid(format!("{a} and {b} are not distinct sons of {cluster}"));
            }
            for son in [*a, *b] {
                if !bifocal_big(son) {
                    return invalid(format!("son {son} is not big"));
                }
            }
        }
        ObstructionKind::BigWithTwoSpreadSons { cluster, sons: (a, b) } => {
            if *cluster >= lp.cluster_count() || !bifocal_big(*cluster) {
                return invalid(format!("cluster {cluster} is not big"));
            }
            if a == b || !is_son(*cluster, *a) || !is_son(*cluster, *b) {
                return invalid(format!("{a} and {b} are not distinct sons of {cluster}"));
            }
            let members = lp.members(*cluster);
            let (_, c1, c2) = diametral(members);
            let (first, second): (Vec<usize>, Vec<usize>) =
                members.iter().partition(|&&x| dm.d(x, c1) <= dm.d(x, c2));
            for son in [*a, *b] {
                let touches = |cell: &[usize]| {
                    lp.members(son)
                        .iter()
                        .any(|&v| g.neighbors(v).iter().any(|z| cell.contains(z)))
                };
                if !(touches(&first) && touches(&second)) {
                    return invalid(format!("son {son} is not spread"));
                }
            }
        }
    }
    Ok(())
}
