//! Seeded instance generators.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, which expands the 64-bit seed with PCG32
//! (multiplier `6364136223846793005`, increment `11634580027462260723`).
//! A draw in `0..k` is `next_u64() % k`. Both the stream cipher and the seed
//! expansion are fixed by their published definitions, so instances are
//! identical on every platform.

use log::debug;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::graph::Graph;
use crate::scalar::{format_rational, int, Rational};

/// Resampling budget for `RandomConnected`.
pub const MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Random recursive tree: vertex `i` hangs off a uniform earlier vertex.
    Tree { n: usize },
    Cycle { n: usize },
    /// `K_{2,r}` with every edge replaced by a path of `t` edges. Hubs are
    /// 0 and 1, the other side is `2..2+r`, path interiors follow.
    SubdividedK2r { r: usize, t: usize },
    /// `G(n, p)` conditioned on connectivity by resampling.
    RandomConnected { n: usize, p: Rational },
    /// Random recursive tree plus `chords` distinct extra edges.
    TreePlusChords { n: usize, chords: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec { family, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{0}")]
    Parameter(String),
    #[error("no connected sample after {0} attempts")]
    NotConnected(usize),
}

fn draw(rng: &mut ChaCha8Rng, k: u64) -> u64 {
    rng.next_u64() % k
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|v| (draw(rng, v as u64) as usize, v)).collect()
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid graph")
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bad = |msg: &str| Err(GenError::Parameter(msg.to_string()));
    match spec.family {
        Family::Tree { n } => {
            if n < 1 {
                return bad("tree needs n >= 1");
            }
            Ok(build(n, &random_tree(&mut rng, n)))
        }
        Family::Cycle { n } => {
            if n < 3 {
                return bad("cycle needs n >= 3");
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Ok(build(n, &edges))
        }
        Family::SubdividedK2r { r, t } => {
            if r < 2 || t < 1 {
                return bad("subdividedK2r needs r >= 2 and t >= 1");
            }
            let mut edges = Vec::with_capacity(2 * r * t);
            let mut next = 2 + r;
            for hub in 0..2 {
                for middle in 2..2 + r {
                    let mut prev = hub;
                    for _ in 1..t {
                        edges.push((prev, next));
                        prev = next;
                        next += 1;
                    }
                    edges.push((prev, middle));
                }
            }
            Ok(build(next, &edges))
        }
        Family::RandomConnected { n, p } => {
            if n < 1 {
                return bad("randomConnected needs n >= 1");
            }
            if p <= int(0) || p > int(1) {
                return bad("randomConnected needs 0 < p <= 1");
            }
            let (num, den) = (*p.numer() as u64, *p.denom() as u64);
            for attempt in 1..=MAX_RESAMPLES {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if draw(&mut rng, den) < num {
                            edges.push((u, v));
                        }
                    }
                }
                if let Ok(g) = Graph::from_edges(n, &edges) {
                    debug!("randomConnected(n={n}, p={}) connected after {attempt} samples", format_rational(&p));
                    return Ok(g);
                }
            }
            Err(GenError::NotConnected(MAX_RESAMPLES))
        }
        Family::TreePlusChords { n, chords } => {
            if n < 1 {
                return bad("treePlusChords needs n >= 1");
            }
            let room = n * n.saturating_sub(1) / 2 - (n - 1);
            if chords > room {
                return bad("treePlusChords: more chords than non-edges");
            }
            let mut edges = random_tree(&mut rng, n);
            let mut present: std::collections::HashSet<(usize, usize)> =
                edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            while edges.len() < n - 1 + chords {
                let u = draw(&mut rng, n as u64) as usize;
                let v = draw(&mut rng, n as u64) as usize;
                if u != v && present.insert((u.min(v), u.max(v))) {
                    edges.push((u, v));
                }
            }
            Ok(build(n, &edges))
        }
    }
}

/// Outcome known in advance for a family, with the generated instance
/// rooted at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedOutcome {
    /// An embedding exists at this `λ`.
    EmbeddingAt(Rational),
    /// A far triple is reported exactly for `λ` strictly below the value.
    FarTripleBelow(Rational),
    /// Some embedding at `λ = 1`; the note describes its shape.
    Embedding(&'static str),
}

pub fn expected_witness(spec: &GenSpec) -> Option<ExpectedOutcome> {
    match spec.family {
        Family::Tree { .. } => Some(ExpectedOutcome::EmbeddingAt(int(1))),
        // the r path ends meet at layer t, pairwise 2t apart: 2t > 4λ+2 iff λ < (t-1)/2
        Family::SubdividedK2r { r, t } if r >= 3 => Some(ExpectedOutcome::FarTripleBelow(Rational::new(t as i64 - 1, 2))),
        Family::SubdividedK2r { .. } => Some(ExpectedOutcome::Embedding("a cycle of length 4t")),
        Family::Cycle { .. } => Some(ExpectedOutcome::Embedding("long cycles close into one even cycle")),
        _ => None,
    }
}
