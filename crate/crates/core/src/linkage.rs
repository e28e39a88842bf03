//! Lance-Williams linkage schemes.
//!
//! Each scheme updates the dissimilarity between a merged cluster `A ∪ B` and a
//! third cluster `C` as
//! `α₁·d(A,C) + α₂·d(B,C) + β·d(A,B) + γ·|d(A,C) − d(B,C)|`.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkageScheme {
    Single,
    Complete,
    /// UPGMA.
    GroupAverage,
    /// WPGMA.
    WeightedAverage,
    /// UPGMC. Squared Euclidean input; may produce inversions.
    Centroid,
    /// WPGMC. Squared Euclidean input; may produce inversions.
    Median,
    /// Minimum increase of sum of squares. Squared Euclidean input.
    Ward,
    /// Minimum increase of variance. Squared Euclidean input.
    MinVariance,
    /// Flexible beta with γ = 0. Use `LinkageScheme::flexible_beta` to construct.
    FlexibleBeta(f64),
}

/// Lance-Williams coefficients for one update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LwCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LinkageScheme {
    pub const ALL_FIXED: [LinkageScheme; 8] = [
        LinkageScheme::Single,
        LinkageScheme::Complete,
        LinkageScheme::GroupAverage,
        LinkageScheme::WeightedAverage,
        LinkageScheme::Centroid,
        LinkageScheme::Median,
        LinkageScheme::Ward,
        LinkageScheme::MinVariance,
    ];

    /// Flexible-beta linkage; `beta` must lie in (−1, 1). Values above 0 chain.
    pub fn flexible_beta(beta: f64) -> Result<Self> {
        if !(beta > -1.0 && beta < 1.0) {
            return Err(invalid(format!("flexible beta must lie in (-1, 1), got {beta}")));
        }
        Ok(LinkageScheme::FlexibleBeta(beta))
    }

    pub fn name(&self) -> &'static str {
        match self {
            LinkageScheme::Single => "single",
            LinkageScheme::Complete => "complete",
            LinkageScheme::GroupAverage => "group_average",
            LinkageScheme::WeightedAverage => "weighted_average",
            LinkageScheme::Centroid => "centroid",
            LinkageScheme::Median => "median",
            LinkageScheme::Ward => "ward",
            LinkageScheme::MinVariance => "min_variance",
            LinkageScheme::FlexibleBeta(_) => "flexible_beta",
        }
    }

    /// Parses a scheme name. `beta` is only used by `flexible_beta`.
    pub fn parse(name: &str, beta: f64) -> Result<Self> {
        Ok(match name {
            "single" => LinkageScheme::Single,
            "complete" => LinkageScheme::Complete,
            "group_average" | "average" | "upgma" => LinkageScheme::GroupAverage,
            "weighted_average" | "weighted" | "wpgma" => LinkageScheme::WeightedAverage,
            "centroid" | "upgmc" => LinkageScheme::Centroid,
            "median" | "wpgmc" => LinkageScheme::Median,
            "ward" => LinkageScheme::Ward,
            "min_variance" | "mivar" => LinkageScheme::MinVariance,
            "flexible_beta" => LinkageScheme::flexible_beta(beta)?,
            other => return Err(invalid(format!("unknown linkage '{other}'"))),
        })
    }

    /// Schemes whose recursion is only meaningful on squared Euclidean input.
    pub fn squared_input_expected(&self) -> bool {
        matches!(
            self,
            LinkageScheme::Centroid | LinkageScheme::Median | LinkageScheme::Ward | LinkageScheme::MinVariance
        )
    }

    /// Whether the scheme is accepted by the NN-chain engine.
    pub fn is_reducible(&self) -> bool {
        match self {
            LinkageScheme::Centroid | LinkageScheme::Median => false,
            LinkageScheme::FlexibleBeta(b) => *b <= 0.0,
            _ => true,
        }
    }

    pub fn coefficients(&self, size_a: usize, size_b: usize, size_c: usize) -> Result<LwCoefficients> {
        if size_a == 0 || size_b == 0 || size_c == 0 {
            return Err(invalid("cluster sizes must be at least 1"));
        }
        Ok(self.coefficients_unchecked(size_a as f64, size_b as f64, size_c as f64))
    }

    fn coefficients_unchecked(&self, a: f64, b: f64, c: f64) -> LwCoefficients {
        let lw = |alpha1, alpha2, beta, gamma| LwCoefficients { alpha1, alpha2, beta, gamma };
        match *self {
            LinkageScheme::Single => lw(0.5, 0.5, 0.0, -0.5),
            LinkageScheme::Complete => lw(0.5, 0.5, 0.0, 0.5),
            LinkageScheme::GroupAverage => lw(a / (a + b), b / (a + b), 0.0, 0.0),
            LinkageScheme::WeightedAverage => lw(0.5, 0.5, 0.0, 0.0),
            LinkageScheme::Centroid => {
                let ab = a + b;
                lw(a / ab, b / ab, -a * b / (ab * ab), 0.0)
            }
            LinkageScheme::Median => lw(0.5, 0.5, -0.25, 0.0),
            LinkageScheme::Ward => {
                let t = a + b + c;
                lw((a + c) / t, (b + c) / t, -c / t, 0.0)
            }
            LinkageScheme::MinVariance => {
                let t = a + b + c;
                let (ra, rb) = ((a + c) / t, (b + c) / t);
                lw(ra * ra, rb * rb, -c * (a + b) / (t * t), 0.0)
            }
            LinkageScheme::FlexibleBeta(beta) => {
                let alpha = (1.0 - beta) / 2.0;
                lw(alpha, alpha, beta, 0.0)
            }
        }
    }

    /// Dissimilarity between `A ∪ B` and `C`.
    #[inline]
    pub fn combine(&self, d_ac: f64, d_bc: f64, d_ab: f64, size_a: usize, size_b: usize, size_c: usize) -> f64 {
        let (a, b, c) = (size_a as f64, size_b as f64, size_c as f64);
        match *self {
            LinkageScheme::Single => d_ac.min(d_bc),
            LinkageScheme::Complete => d_ac.max(d_bc),
            LinkageScheme::GroupAverage => (a * d_ac + b * d_bc) / (a + b),
            LinkageScheme::WeightedAverage => 0.5 * (d_ac + d_bc),
            LinkageScheme::Ward => ((a + c) * d_ac + (b + c) * d_bc - c * d_ab) / (a + b + c),
            LinkageScheme::MinVariance => {
                let t = a + b + c;
                ((a + c) * (a + c) * d_ac + (b + c) * (b + c) * d_bc - c * (a + b) * d_ab) / (t * t)
            }
            _ => {
                let k = self.coefficients_unchecked(a, b, c);
                k.alpha1 * d_ac + k.alpha2 * d_bc + k.beta * d_ab
            }
        }
    }
}
