//! Condensed (upper-triangular) pairwise dissimilarity storage.

use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::metric::Metric;
use crate::par::{self, Execution};

/// Default cap on the number of stored entries, n(n−1)/2.
pub const DEFAULT_ENTRY_CAP: usize = 100_000_000;

/// Anything that can report the dissimilarity between two of its `len()` objects.
pub trait Dissimilarity: Sync {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Row-major upper triangle of an `n × n` symmetric dissimilarity matrix with
/// zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedDistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

#[inline]
pub(crate) fn condensed_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Offset of pair `(i, j)` with `i < j < n`.
#[inline]
pub fn offset(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl CondensedDistanceMatrix {
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotEnoughData("a distance matrix needs at least 2 objects".into()));
        }
        if entries.len() != condensed_len(n) {
            return Err(Error::DimensionMismatch { expected: condensed_len(n), got: entries.len() });
        }
        if let Some(bad) = entries.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(invalid(format!("entry {bad} is negative or not finite")));
        }
        Ok(CondensedDistanceMatrix { n, entries })
    }

    /// Pairwise distances of all rows under `metric`, using the default entry cap.
    pub fn from_data(data: &Dataset, metric: Metric) -> Result<Self> {
        Self::from_data_with(data, metric, DEFAULT_ENTRY_CAP, Execution::default())
    }

    pub fn from_data_with(data: &Dataset, metric: Metric, cap: usize, exec: Execution) -> Result<Self> {
        let n = data.len();
        if n < 2 {
            return Err(Error::NotEnoughData("a distance matrix needs at least 2 points".into()));
        }
        let entries = condensed_len(n);
        if entries > cap {
            return Err(Error::TooLarge { entries, cap });
        }
        let rows: Vec<Vec<f64>> = par::map_indices(exec, n - 1, |i| {
            let x = data.row(i);
            (i + 1..n).map(|j| metric.eval(x, data.row(j))).collect()
        });
        Ok(CondensedDistanceMatrix { n, entries: rows.concat() })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub(crate) fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.entries[offset(self.n, i, j)],
            Greater => self.entries[offset(self.n, j, i)],
            Equal => 0.0,
        }
    }

    /// Copy with every entry squared, e.g. to feed Euclidean distances to Ward.
    pub fn squared(&self) -> Self {
        CondensedDistanceMatrix { n: self.n, entries: self.entries.iter().map(|d| d * d).collect() }
    }
}

impl Dissimilarity for CondensedDistanceMatrix {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}

/// On-the-fly distances over a dataset.
#[derive(Debug, Clone, Copy)]
pub struct DataDissimilarity<'a> {
    pub data: &'a Dataset,
    pub metric: Metric,
}

impl Dissimilarity for DataDissimilarity<'_> {
    fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.metric.eval(self.data.row(i), self.data.row(j))
    }
}
