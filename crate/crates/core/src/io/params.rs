//! String-keyed configuration resolved into a typed run description.

use std::collections::BTreeMap;

use super::range::parse_int_range;
use crate::error::{invalid, Error, Result};
use crate::hac::MiniMaxAccel;
use crate::init::InitStrategy;
use crate::kmeans::Variant;
use crate::kmedoids::{ClaraConfig, ClaransConfig, MaxNeighbor, SwapAlgorithm};
use crate::linkage::LinkageScheme;
use crate::metric::Metric;

/// Ordered `key=value` pairs. Later duplicates win.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamSet {
    pairs: Vec<(String, String)>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|part| {
            let mut chars = part.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
                && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        })
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<K: Into<String>, V: Into<String>>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self> {
        let mut p = ParamSet::new();
        for (k, v) in pairs {
            p.push(k, v)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> Result<()> {
        let key = key.into();
        if !valid_key(&key) {
            return Err(invalid(format!("'{key}' is not a lowercase dot-separated key")));
        }
        self.pairs.push((key, value.into()));
        Ok(())
    }

    /// Adds a `key=value` argument.
    pub fn push_assignment(&mut self, arg: &str) -> Result<()> {
        let (k, v) = arg.split_once('=').ok_or_else(|| invalid(format!("expected key=value, got '{arg}'")))?;
        self.push(k.trim(), v.trim())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Last value per key; warns about overridden keys.
    fn resolved(&self) -> BTreeMap<&str, &str> {
        let mut map = BTreeMap::new();
        for (k, v) in &self.pairs {
            if let Some(old) = map.insert(k.as_str(), v.as_str()) {
                log::warn!("parameter {k} given more than once; '{v}' replaces '{old}'");
            }
        }
        map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HacEngine {
    Agnes,
    Anderberg,
    NNChain,
    Slink,
    MiniMax(MiniMaxAccel),
}

/// How a dendrogram becomes flat clusterings.
#[derive(Debug, Clone, PartialEq)]
pub enum Extraction {
    Height(f64),
    /// One clustering per k; `minsize` enables noise extraction.
    Count { ks: Vec<usize>, minsize: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MedoidAlgorithm {
    Swap(SwapAlgorithm),
    Park,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Hierarchical {
        engine: HacEngine,
        /// `None` for MiniMax, which has no Lance-Williams form.
        linkage: Option<LinkageScheme>,
        metric: Metric,
        extraction: Option<Extraction>,
    },
    KMeans { ks: Vec<usize>, variant: Variant, maxiter: usize, init: InitStrategy },
    KMedoids { ks: Vec<usize>, algo: MedoidAlgorithm, init: InitStrategy, maxiter: usize, metric: Metric },
    Clara { ks: Vec<usize>, config: ClaraConfig, metric: Metric },
    Clarans { ks: Vec<usize>, config: ClaransConfig, metric: Metric },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunDescription {
    pub seed: u64,
    pub algorithm: Algorithm,
}

impl RunDescription {
    /// The k values this run sweeps over (empty for height cuts).
    pub fn ks(&self) -> &[usize] {
        match &self.algorithm {
            Algorithm::Hierarchical { extraction: Some(Extraction::Count { ks, .. }), .. } => ks,
            Algorithm::Hierarchical { .. } => &[],
            Algorithm::KMeans { ks, .. }
            | Algorithm::KMedoids { ks, .. }
            | Algorithm::Clara { ks, .. }
            | Algorithm::Clarans { ks, .. } => ks,
        }
    }
}

const HAC_EXTRACTION: [&str; 3] = ["hac.k", "hac.threshold", "hac.minsize"];

fn schema(algorithm: &str) -> Option<Vec<&'static str>> {
    let mut keys = vec!["algorithm", "seed"];
    match algorithm {
        "agnes" | "anderberg" | "nnchain" => keys.extend(["hac.linkage", "hac.beta", "hac.metric"]),
        "slink" => keys.extend(["hac.linkage", "hac.metric"]),
        "minimax" => keys.extend(["hac.metric", "minimax.accel"]),
        "kmeans" => keys.extend(["kmeans.k", "kmeans.variant", "kmeans.maxiter", "kmeans.init", "kmeans.rate", "kmeans.centers"]),
        "kmedoids" => keys.extend(["kmedoids.k", "kmedoids.algo", "kmedoids.init", "kmedoids.maxiter", "kmedoids.tolerance", "kmedoids.metric"]),
        "clara" => keys.extend(["clara.k", "clara.numsamples", "clara.samplesize", "clara.fast", "clara.keepbest", "clara.maxiter", "clara.metric"]),
        "clarans" => keys.extend(["clarans.k", "clarans.numlocal", "clarans.maxneighbor", "clarans.fast", "clarans.metric"]),
        _ => return None,
    }
    if matches!(algorithm, "agnes" | "anderberg" | "nnchain" | "slink" | "minimax") {
        keys.extend(HAC_EXTRACTION);
    }
    Some(keys)
}

const ALGORITHMS: &str = "agnes, anderberg, nnchain, slink, minimax, kmeans, kmedoids, clara, clarans";

struct Keys<'a> {
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Keys<'a> {
    fn get(&self, key: &str) -> Option<&'a str> {
        self.map.get(key).copied()
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| invalid(format!("{key}: expected {what}, got '{v}'"))))
            .transpose()
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.parsed(key, "a non-negative integer")?.unwrap_or(default))
    }

    fn real(&self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.parsed(key, "a number")?.unwrap_or(default);
        if !v.is_finite() {
            return Err(invalid(format!("{key}: expected a finite number, got {v}")));
        }
        Ok(v)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.parsed(key, "true or false")?.unwrap_or(false))
    }

    fn range(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.get(key)
            .map(|v| parse_int_range(v).map(|r| r.into_values()).map_err(|e| match e {
                Error::InvalidParameter(m) => invalid(format!("{key}: {m}")),
                other => other,
            }))
            .transpose()
    }

    fn required_range(&self, key: &str) -> Result<Vec<usize>> {
        self.range(key)?.ok_or_else(|| invalid(format!("missing {key}")))
    }

    fn metric(&self, key: &str, default: Metric) -> Result<Metric> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => Metric::parse(v).ok_or_else(|| invalid(format!("{key}: unknown metric '{v}'"))),
        }
    }

    fn init(&self, key: &str, default: InitStrategy) -> Result<InitStrategy> {
        self.get(key).map(InitStrategy::parse).transpose().map(|i| i.unwrap_or(default))
    }
}

/// Centers as `x1,y1;x2,y2;…`.
fn parse_centers(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|c| {
            c.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| invalid(format!("kmeans.centers: '{v}' is not a finite number")))
                })
                .collect()
        })
        .collect()
}

fn hierarchical(name: &str, keys: &Keys) -> Result<Algorithm> {
    let engine = match name {
        "agnes" => HacEngine::Agnes,
        "anderberg" => HacEngine::Anderberg,
        "nnchain" => HacEngine::NNChain,
        "slink" => HacEngine::Slink,
        _ => {
            let accel = match keys.get("minimax.accel") {
                None => MiniMaxAccel::NNChain,
                Some(v) => MiniMaxAccel::parse(v).ok_or_else(|| invalid(format!("minimax.accel: unknown value '{v}'")))?,
            };
            HacEngine::MiniMax(accel)
        }
    };
    let linkage = match engine {
        HacEngine::MiniMax(_) => None,
        HacEngine::Slink => match keys.get("hac.linkage") {
            None | Some("single") => Some(LinkageScheme::Single),
            Some(other) => return Err(invalid(format!("slink computes single linkage only, not '{other}'"))),
        },
        _ => {
            let beta = keys.real("hac.beta", -0.25)?;
            let scheme = LinkageScheme::parse(keys.get("hac.linkage").unwrap_or("ward"), beta)?;
            if engine == HacEngine::NNChain && !scheme.is_reducible() {
                return Err(invalid(format!("nnchain requires a reducible linkage; '{}' is not", scheme.name())));
            }
            Some(scheme)
        }
    };
    let wants_squared = linkage.is_some_and(|l| l.squared_input_expected());
    let metric = match keys.get("hac.metric") {
        None | Some("auto") => if wants_squared { Metric::SquaredEuclidean } else { Metric::Euclidean },
        Some(v) => {
            let m = Metric::parse(v).ok_or_else(|| invalid(format!("hac.metric: unknown metric '{v}'")))?;
            if wants_squared && m != Metric::SquaredEuclidean {
                let l = linkage.expect("wants_squared").name();
                return Err(invalid(format!("{l} linkage expects squared_euclidean input, got {}", m.name())));
            }
            m
        }
    };
    let ks = keys.range("hac.k")?;
    let threshold = keys.parsed::<f64>("hac.threshold", "a number")?;
    let minsize = keys.parsed::<usize>("hac.minsize", "a non-negative integer")?;
    let extraction = match (ks, threshold, minsize) {
        (Some(_), Some(_), _) => return Err(invalid("give either hac.k or hac.threshold, not both")),
        (None, _, Some(_)) => return Err(invalid("hac.minsize needs hac.k")),
        (Some(ks), None, minsize) => Some(Extraction::Count { ks, minsize }),
        (None, Some(t), None) => Some(Extraction::Height(t)),
        (None, None, None) => None,
    };
    Ok(Algorithm::Hierarchical { engine, linkage, metric, extraction })
}

fn kmeans(keys: &Keys) -> Result<Algorithm> {
    let centers = keys.get("kmeans.centers").map(parse_centers).transpose()?;
    let ks = match (keys.range("kmeans.k")?, &centers) {
        (Some(ks), Some(c)) if ks != [c.len()] => {
            return Err(invalid(format!("kmeans.k does not match the {} given centers", c.len())))
        }
        (Some(ks), _) => ks,
        (None, Some(c)) => vec![c.len()],
        (None, None) => return Err(invalid("missing kmeans.k")),
    };
    let init = match centers {
        Some(_) if keys.get("kmeans.init").is_some() => {
            return Err(invalid("kmeans.centers and kmeans.init are mutually exclusive"));
        }
        Some(c) => InitStrategy::Predefined(c),
        None => keys.init("kmeans.init", InitStrategy::KMeansPlusPlus)?,
    };
    let variant = keys.get("kmeans.variant").unwrap_or("lloyd");
    let rate = keys.real("kmeans.rate", 0.05)?;
    if keys.get("kmeans.rate").is_some() && variant != "minusminus" {
        return Err(invalid("kmeans.rate applies to the minusminus variant only"));
    }
    Ok(Algorithm::KMeans { ks, variant: Variant::parse(variant, rate)?, maxiter: keys.count("kmeans.maxiter", 0)?, init })
}

fn kmedoids(keys: &Keys) -> Result<Algorithm> {
    let ks = keys.required_range("kmedoids.k")?;
    let algo = match keys.get("kmedoids.algo").unwrap_or("fastpam") {
        "park" => MedoidAlgorithm::Park,
        other => MedoidAlgorithm::Swap(SwapAlgorithm::parse(other, keys.real("kmedoids.tolerance", 1.0)?)?),
    };
    let init = keys.init("kmedoids.init", InitStrategy::PamBuild)?;
    if init.produces_vectors() {
        return Err(invalid(format!("kmedoids.init: '{}' does not pick data points", init.name())));
    }
    Ok(Algorithm::KMedoids {
        ks,
        algo,
        init,
        maxiter: keys.count("kmedoids.maxiter", 0)?,
        metric: keys.metric("kmedoids.metric", Metric::Euclidean)?,
    })
}

fn clara(keys: &Keys) -> Result<Algorithm> {
    let defaults = ClaraConfig::default();
    let config = ClaraConfig {
        numsamples: keys.count("clara.numsamples", defaults.numsamples)?,
        samplesize: keys.parsed("clara.samplesize", "a non-negative integer")?,
        fast: keys.flag("clara.fast")?,
        keep_best: keys.parsed("clara.keepbest", "true or false")?.unwrap_or(defaults.keep_best),
        maxiter: keys.count("clara.maxiter", 0)?,
    };
    if config.numsamples == 0 {
        return Err(invalid("clara.numsamples must be at least 1"));
    }
    Ok(Algorithm::Clara {
        ks: keys.required_range("clara.k")?,
        config,
        metric: keys.metric("clara.metric", Metric::Euclidean)?,
    })
}

fn clarans(keys: &Keys) -> Result<Algorithm> {
    let defaults = ClaransConfig::default();
    let maxneighbor = match keys.get("clarans.maxneighbor") {
        None => defaults.maxneighbor,
        Some(v) if v.contains('.') => {
            let f = keys.real("clarans.maxneighbor", 0.0)?;
            if !(0.0..=1.0).contains(&f) {
                return Err(invalid(format!("clarans.maxneighbor fraction must lie in [0, 1], got {f}")));
            }
            MaxNeighbor::Fraction(f)
        }
        Some(_) => MaxNeighbor::Count(keys.count("clarans.maxneighbor", 0)?),
    };
    let config = ClaransConfig { numlocal: keys.count("clarans.numlocal", defaults.numlocal)?, maxneighbor, fast: keys.flag("clarans.fast")? };
    if config.numlocal == 0 {
        return Err(invalid("clarans.numlocal must be at least 1"));
    }
    Ok(Algorithm::Clarans {
        ks: keys.required_range("clarans.k")?,
        config,
        metric: keys.metric("clarans.metric", Metric::Euclidean)?,
    })
}

/// Resolves parameters against the schema of the selected algorithm.
pub fn build_algorithm(p: &ParamSet) -> Result<RunDescription> {
    let map = p.resolved();
    let name = *map.get("algorithm").ok_or_else(|| invalid(format!("missing algorithm (one of {ALGORITHMS})")))?;
    let valid = schema(name).ok_or_else(|| invalid(format!("unknown algorithm '{name}' (one of {ALGORITHMS})")))?;
    if let Some(k) = map.keys().find(|k| !valid.contains(k)) {
        return Err(invalid(format!("unknown key '{k}' for {name}; valid keys: {}", valid.join(", "))));
    }
    let keys = Keys { map };
    let seed = keys.parsed("seed", "an unsigned 64-bit integer")?.unwrap_or(0);
    let algorithm = match name {
        "kmeans" => kmeans(&keys)?,
        "kmedoids" => kmedoids(&keys)?,
        "clara" => clara(&keys)?,
        "clarans" => clarans(&keys)?,
        _ => hierarchical(name, &keys)?,
    };
    Ok(RunDescription { seed, algorithm })
}
