use crate::error::{Error, Result};

/// Label used for noise points.
pub const NOISE: i32 = -1;

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Prototypes {
    #[default]
    None,
    Means(Vec<Vec<f64>>),
    Medoids(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunStats {
    pub iterations: usize,
    pub distance_computations: u64,
}

/// A flat clustering: one label per point, `-1` for noise, otherwise dense
/// labels `0..num_clusters`.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    assignment: Vec<i32>,
    num_clusters: usize,
    pub prototypes: Prototypes,
    pub stats: RunStats,
}

impl Clustering {
    /// Validates labels: every non-noise label is in `0..c` and each occurs.
    pub fn new(assignment: Vec<i32>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::NotEnoughData("clustering has no points".into()));
        }
        let max = assignment.iter().copied().max().unwrap_or(NOISE);
        if let Some(bad) = assignment.iter().find(|&&l| l < NOISE) {
            return Err(Error::InvalidParameter(format!("invalid cluster label {bad}")));
        }
        let c = (max + 1) as usize;
        let mut seen = vec![false; c];
        for &l in &assignment {
            if l >= 0 {
                seen[l as usize] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!("cluster labels are not dense: {missing} is unused")));
        }
        Ok(Clustering { assignment, num_clusters: c, prototypes: Prototypes::None, stats: RunStats::default() })
    }

    /// Dense labels from arbitrary component keys, numbered by order of
    /// first (lowest-index) occurrence. `None` marks noise.
    pub fn from_components<K: Copy + Eq + std::hash::Hash>(keys: impl IntoIterator<Item = Option<K>>) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignment: Vec<i32> = keys
            .into_iter()
            .map(|k| match k {
                None => NOISE,
                Some(k) => {
                    let next = map.len() as i32;
                    *map.entry(k).or_insert(next)
                }
            })
            .collect();
        Clustering {
            num_clusters: map.len(),
            assignment,
            prototypes: Prototypes::None,
            stats: RunStats::default(),
        }
    }

    pub(crate) fn from_parts_unchecked(assignment: Vec<i32>, num_clusters: usize) -> Self {
        Clustering { assignment, num_clusters, prototypes: Prototypes::None, stats: RunStats::default() }
    }

    pub fn assignment(&self) -> &[i32] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn label(&self, i: usize) -> Option<usize> {
        let l = self.assignment[i];
        (l >= 0).then_some(l as usize)
    }

    pub fn num_noise(&self) -> usize {
        self.assignment.iter().filter(|&&l| l == NOISE).count()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_clusters];
        for l in self.assignment.iter().filter(|&&l| l >= 0) {
            sizes[*l as usize] += 1;
        }
        sizes
    }

    /// Member indices per cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.num_clusters];
        for (i, &l) in self.assignment.iter().enumerate() {
            if l >= 0 {
                m[l as usize].push(i);
            }
        }
        m
    }

    pub fn with_prototypes(mut self, p: Prototypes) -> Self {
        self.prototypes = p;
        self
    }

    pub fn with_stats(mut self, s: RunStats) -> Self {
        self.stats = s;
        self
    }
}
