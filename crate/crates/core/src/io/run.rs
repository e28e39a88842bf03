//! Executes a [`RunDescription`] and evaluates the results.

use super::params::{Algorithm, Extraction, HacEngine, MedoidAlgorithm, RunDescription};
use crate::clustering::Clustering;
use crate::data::Dataset;
use crate::error::{invalid, Result};
use crate::eval;
use crate::extraction::{cut_by_height, cut_by_k, extract_with_noise};
use crate::hac::{self, MergeHistory};
use crate::init::initialize_medoids;
use crate::init::InitStrategy;
use crate::kmeans::{self, KMeansConfig};
use crate::linkage::LinkageScheme;
use crate::kmedoids::{self, assign_medoids, pam_build, pam_swap, run_park};
use crate::matrix::{CondensedDistanceMatrix, DataDissimilarity, DEFAULT_ENTRY_CAP};
use crate::metric::Metric;
use crate::par::{self, Execution};
use crate::rng::RngState;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// The k of this run when the description sweeps over several.
    pub k: Option<usize>,
    pub clustering: Clustering,
}

impl RunOutput {
    pub fn label(&self) -> Option<String> {
        self.k.map(|k| format!("k={k}"))
    }
}

fn dendrogram(m: &CondensedDistanceMatrix, engine: HacEngine, linkage: Option<LinkageScheme>) -> Result<MergeHistory> {
    let scheme = || linkage.ok_or_else(|| invalid("missing linkage"));
    Ok(match engine {
        HacEngine::Agnes => hac::run_agnes(m, scheme()?),
        HacEngine::Anderberg => hac::run_anderberg(m, scheme()?),
        HacEngine::NNChain => hac::run_nnchain(m, scheme()?)?,
        HacEngine::Slink => hac::run_slink(m),
        HacEngine::MiniMax(accel) => hac::run_minimax(m, accel),
    })
}

/// One k of a medoid-based run.
fn medoids_for_k(
    algo: &Algorithm,
    data: &Dataset,
    matrix: Option<&CondensedDistanceMatrix>,
    k: usize,
    rng: &mut RngState,
) -> Result<kmedoids::MedoidResult> {
    match algo {
        Algorithm::KMedoids { algo, init, maxiter, .. } => {
            let m = matrix.expect("k-medoids runs on a matrix");
            let start = match init {
                InitStrategy::PamBuild => pam_build(m, k)?,
                other => assign_medoids(m, &initialize_medoids(other, m, k, rng)?)?,
            };
            match algo {
                MedoidAlgorithm::Swap(s) => pam_swap(m, &start, *s, *maxiter),
                MedoidAlgorithm::Park => run_park(m, &start.medoids, *maxiter),
            }
        }
        Algorithm::Clara { config, metric, .. } => {
            kmedoids::run_clara(&DataDissimilarity { data, metric: *metric }, k, config, rng)
        }
        Algorithm::Clarans { config, metric, .. } => {
            kmedoids::run_clarans(&DataDissimilarity { data, metric: *metric }, k, config, rng)
        }
        _ => unreachable!("not a medoid algorithm"),
    }
}

/// Runs `desc` on `data`. Each k draws from its own stream
/// `RngState::fork(seed, k)`, so a k gives the same result alone or in a sweep.
pub fn execute(desc: &RunDescription, data: &Dataset, exec: Execution) -> Result<Vec<RunOutput>> {
    let ks = desc.ks();
    let label = |k: usize| (ks.len() > 1).then_some(k);
    match &desc.algorithm {
        Algorithm::Hierarchical { engine, linkage, metric, extraction } => {
            let extraction = extraction.as_ref().ok_or_else(|| invalid("hierarchical runs need hac.k or hac.threshold"))?;
            let m = CondensedDistanceMatrix::from_data_with(data, *metric, DEFAULT_ENTRY_CAP, exec)?;
            let tree = dendrogram(&m, *engine, *linkage)?;
            match extraction {
                Extraction::Height(t) => Ok(vec![RunOutput { k: None, clustering: cut_by_height(&tree, *t) }]),
                Extraction::Count { ks, minsize } => ks
                    .iter()
                    .map(|&k| {
                        let clustering = match minsize {
                            Some(s) => extract_with_noise(&tree, k, *s)?,
                            None => cut_by_k(&tree, k)?,
                        };
                        Ok(RunOutput { k: label(k), clustering })
                    })
                    .collect(),
            }
        }
        Algorithm::KMeans { variant, maxiter, init, .. } => {
            let runs = par::map_slice(exec, ks, |&k| {
                let cfg = KMeansConfig { k, variant: *variant, maxiter: *maxiter, seed: desc.seed, init: init.clone(), execution: exec };
                let mut rng = RngState::fork(desc.seed, k as u64);
                kmeans::fit_with_rng(data, &cfg, &mut rng).map(|r| RunOutput { k: label(k), clustering: r.clustering })
            });
            runs.into_iter().collect()
        }
        algo @ (Algorithm::KMedoids { .. } | Algorithm::Clara { .. } | Algorithm::Clarans { .. }) => {
            let matrix = match algo {
                Algorithm::KMedoids { metric, .. } => {
                    Some(CondensedDistanceMatrix::from_data_with(data, *metric, DEFAULT_ENTRY_CAP, exec)?)
                }
                _ => None,
            };
            let runs = par::map_slice(exec, ks, |&k| {
                let mut rng = RngState::fork(desc.seed, k as u64);
                medoids_for_k(algo, data, matrix.as_ref(), k, &mut rng)
                    .map(|r| RunOutput { k: label(k), clustering: r.to_clustering() })
            });
            runs.into_iter().collect()
        }
    }
}

/// Internal indices available from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMeasure {
    Sse,
    Silhouette,
    SimplifiedSilhouette,
    DaviesBouldin,
    VarianceRatio,
}

impl EvalMeasure {
    pub const ALL: [EvalMeasure; 5] = [
        EvalMeasure::Sse,
        EvalMeasure::Silhouette,
        EvalMeasure::SimplifiedSilhouette,
        EvalMeasure::DaviesBouldin,
        EvalMeasure::VarianceRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvalMeasure::Sse => "sse",
            EvalMeasure::Silhouette => "silhouette",
            EvalMeasure::SimplifiedSilhouette => "simplified_silhouette",
            EvalMeasure::DaviesBouldin => "davies_bouldin",
            EvalMeasure::VarianceRatio => "variance_ratio",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|m| m.name()).collect();
            invalid(format!("unknown evaluation '{s}' (one of {})", names.join(", ")))
        })
    }
}

/// Evaluates `c` on `data`; undefined values (too few clusters and similar)
/// come back as NaN. The silhouette uses Euclidean distances.
pub fn evaluate(measure: EvalMeasure, data: &Dataset, c: &Clustering, exec: Execution) -> f64 {
    let value = match measure {
        EvalMeasure::Sse => eval::sse(data, c),
        EvalMeasure::Silhouette => {
            let m = DataDissimilarity { data, metric: Metric::Euclidean };
            eval::silhouette_with(&m, c, exec).map(|s| s.mean)
        }
        EvalMeasure::SimplifiedSilhouette => eval::simplified_silhouette(data, c),
        EvalMeasure::DaviesBouldin => eval::davies_bouldin(data, c),
        EvalMeasure::VarianceRatio => eval::variance_ratio(data, c),
    };
    value.unwrap_or(f64::NAN)
}
