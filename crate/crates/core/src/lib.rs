//! Exact agglomerative, k-means and k-medoids clustering.
//!
//! The crate is organised around a few plain data types:
//!
//! * [`Dataset`] holds `n` dense rows of `d` finite reals, optionally labelled.
//! * [`CondensedDistanceMatrix`] stores the upper triangle of pairwise
//!   dissimilarities and is the input to the hierarchical engines and to the
//!   k-medoids family.
//! * [`MergeHistory`] is the dendrogram produced by every hierarchical engine;
//!   [`extraction`] turns it into a flat [`Clustering`].
//! * [`kmeans::run_kmeans`] and the [`kmedoids`] module produce flat
//!   clusterings directly.
//!
//! All accelerated engines are exact: given the same input they produce the
//! same result as their naive counterpart, and the test suite checks this
//! against brute-force oracles.
//!
//! Data-parallel inner loops (distance matrix construction, Lloyd assignment,
//! silhouette) run on rayon when the `parallel` feature is enabled (default),
//! and fall back to sequential loops otherwise. Results are identical either
//! way.

pub mod clustering;
pub mod data;
pub mod error;
pub mod eval;
pub mod extraction;
pub mod hac;
pub mod init;
pub mod io;
pub mod kmeans;
pub mod kmedoids;
pub mod linkage;
pub mod matrix;
pub mod metric;
pub mod par;
pub mod rng;
pub mod synth;

pub use clustering::{Clustering, Prototypes, RunStats};
pub use data::Dataset;
pub use error::{Error, Result};
pub use hac::{Merge, MergeHistory};
pub use linkage::{LinkageScheme, LwCoefficients};
pub use matrix::{CondensedDistanceMatrix, Dissimilarity};
pub use metric::Metric;
pub use par::Execution;
pub use rng::RngState;
