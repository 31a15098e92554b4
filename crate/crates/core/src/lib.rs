//! Low-distortion embeddings of unweighted graph metrics into tree metrics
//! and outerplanar metrics.
//!
//! Both pipelines start from a [layering partition](layering) of the input
//! graph. The tree pipeline ([`tree_embed`]) produces four tree hosts and a
//! computable lower bound on the optimal tree distortion. The outerplanar
//! pipeline ([`outerplanar`]) either builds a weighted outerplanar host for a
//! given distortion target or returns a combinatorial witness that the target
//! is unattainable. All threshold arithmetic is exact.

pub mod cluster;
pub mod distortion;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod layering;
pub mod outerplanar;
pub mod scalar;
pub mod tree_embed;

pub use error::{GraphError, HostError, LayeringError, ParseRationalError};
pub use graph::{DistanceMatrix, Graph, Matrix, WeightedGraph};
pub use scalar::{Rational, Scalar};

/// Host graph with exact rational edge lengths.
pub type RationalHost = WeightedGraph<Rational>;
/// Exact host metric.
pub type RationalMetric = Matrix<Rational>;
/// Host graph with floating-point edge lengths.
pub type FloatHost = WeightedGraph<f64>;
