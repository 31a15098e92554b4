//! Unweighted input graphs, hop metrics, and weighted host graphs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{GraphError, HostError};
use crate::scalar::Scalar;

/// Simple, undirected, connected, unweighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and disconnected input.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        let graph = Graph { adjacency };
        let dist = graph.bfs_distances(0);
        if let Some(unreached) = dist.iter().position(|&d| d == UNREACHED) {
            return Err(GraphError::Disconnected { unreached });
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Hop distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == UNREACHED {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

const UNREACHED: u32 = u32::MAX;

/// Hop distances from `s`.
pub fn bfs_distances(g: &Graph, s: usize) -> Vec<u32> {
    g.bfs_distances(s)
}

/// Dense square matrix indexed by vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn filled(n: usize, value: T) -> Self {
        Matrix {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Matrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> &T {
        &self.data[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, value: T) {
        self.data[u * self.n + v] = value;
    }

    pub fn row(&self, u: usize) -> &[T] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Unordered pairs `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
    }
}

/// All-pairs hop distances of an input graph.
pub type DistanceMatrix = Matrix<u32>;

impl DistanceMatrix {
    pub fn d(&self, u: usize, v: usize) -> u32 {
        *self.get(u, v)
    }

    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Diameter of a vertex set, with the lexicographically smallest pair realizing it.
    pub fn diameter_of(&self, members: &[usize]) -> (u32, Option<(usize, usize)>) {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut best = (0, None);
        // lexicographic scan: the first strict improvement is the smallest pair
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                let d = self.d(a, b);
                if d > best.0 {
                    best = (d, Some((a, b)));
                }
            }
        }
        best
    }
}

/// One BFS per source, rows computed in parallel.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let rows: Vec<Vec<u32>> = (0..g.n()).into_par_iter().map(|s| g.bfs_distances(s)).collect();
    Matrix::from_rows(rows)
}

/// `{v : d(s, v) <= k}`, sorted; `k = -1` gives the empty set.
pub fn ball(g: &Graph, s: usize, k: i64) -> Vec<usize> {
    if k < 0 {
        return Vec::new();
    }
    g.bfs_distances(s)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| i64::from(d) <= k)
        .map(|(v, _)| v)
        .collect()
}

/// Connected components of the subgraph induced by the non-forbidden
/// vertices. Components are sorted internally and ordered by smallest member.
pub fn components_avoiding(g: &Graph, forbidden: &[usize]) -> Vec<Vec<usize>> {
    let mut blocked = vec![false; g.n()];
    for &v in forbidden {
        blocked[v] = true;
    }
    let mut seen = blocked.clone();
    let mut components = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    component.push(v);
                    stack.push(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// Undirected graph with non-negative edge lengths of type `T`. Nodes beyond
/// the real vertices of an input graph act as Steiner points.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    node_count: usize,
    edges: Vec<(usize, usize, T)>,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn new(node_count: usize) -> Self {
        WeightedGraph {
            node_count,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(node_count: usize, edges: Vec<(usize, usize, T)>) -> Self {
        WeightedGraph { node_count, edges }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, length: T) {
        self.edges.push((u, v, length));
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// Same topology with every edge set to `length`.
    pub fn with_uniform_length<U: Scalar>(&self, length: U) -> WeightedGraph<U> {
        WeightedGraph {
            node_count: self.node_count,
            edges: self.edges.iter().map(|&(u, v, _)| (u, v, length.clone())).collect(),
        }
    }

    pub fn adjacency(&self) -> Result<Vec<Vec<(usize, T)>>, HostError> {
        let mut adjacency = vec![Vec::new(); self.node_count];
        for (u, v, w) in &self.edges {
            let (u, v) = (*u, *v);
            if u >= self.node_count || v >= self.node_count {
                return Err(HostError::OutOfRange {
                    u,
                    v,
                    n: self.node_count,
                });
            }
            if *w < T::zero() {
                return Err(HostError::NegativeLength(u, v));
            }
            adjacency[u].push((v, w.clone()));
            adjacency[v].push((u, w.clone()));
        }
        Ok(adjacency)
    }
}

struct Frontier<T> {
    dist: T,
    node: usize,
}

impl<T: PartialOrd> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: PartialOrd> Eq for Frontier<T> {}

impl<T: PartialOrd> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: PartialOrd> Ord for Frontier<T> {
    // min-heap on distance
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Dijkstra from `source`; `None` marks unreachable nodes.
pub fn weighted_distances_from<T: Scalar>(
    adjacency: &[Vec<(usize, T)>],
    source: usize,
) -> Vec<Option<T>> {
    let mut dist: Vec<Option<T>> = vec![None; adjacency.len()];
    let mut done = vec![false; adjacency.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(T::zero());
    heap.push(Frontier {
        dist: T::zero(),
        node: source,
    });
    while let Some(Frontier { dist: d, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, w) in &adjacency[u] {
            let candidate = d.clone() + w.clone();
            let better = match &dist[*v] {
                None => true,
                Some(current) => candidate < *current,
            };
            if better && !done[*v] {
                dist[*v] = Some(candidate.clone());
                heap.push(Frontier {
                    dist: candidate,
                    node: *v,
                });
            }
        }
    }
    dist
}

/// Exact all-pairs shortest-path lengths of a weighted host graph.
pub fn weighted_all_pairs<T: Scalar>(wg: &WeightedGraph<T>) -> Result<Matrix<T>, HostError> {
    let adjacency = wg.adjacency()?;
    let rows: Vec<Vec<T>> = (0..wg.node_count())
        .into_par_iter()
        .map(|s| {
            weighted_distances_from(&adjacency, s)
                .into_iter()
                .collect::<Option<Vec<T>>>()
                .ok_or(HostError::Disconnected)
        })
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(rows))
}
