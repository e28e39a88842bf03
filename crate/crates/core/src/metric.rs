//! Minkowski-family dissimilarities.
//!
//! `Euclidean` and `Manhattan` are metrics. `SquaredEuclidean` is not (it
//! violates the triangle inequality), so triangle-inequality pruning must be
//! done on `Euclidean` and squared only when computing SSE.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Euclidean,
    SquaredEuclidean,
    Manhattan,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::SquaredEuclidean => "squared_euclidean",
            Metric::Manhattan => "manhattan",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        match s {
            "euclidean" => Some(Metric::Euclidean),
            "squared_euclidean" | "sqeuclidean" => Some(Metric::SquaredEuclidean),
            "manhattan" => Some(Metric::Manhattan),
            _ => None,
        }
    }

    /// True when the triangle inequality holds.
    pub fn is_metric(self) -> bool {
        !matches!(self, Metric::SquaredEuclidean)
    }

    /// Checked distance between two vectors.
    pub fn distance(self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        Ok(self.eval(x, y))
    }

    /// Unchecked hot-loop variant; callers guarantee equal lengths.
    #[inline]
    pub fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match self {
            Metric::Euclidean => squared_euclidean(x, y).sqrt(),
            Metric::SquaredEuclidean => squared_euclidean(x, y),
            Metric::Manhattan => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        }
    }
}

#[inline]
pub fn squared_euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

#[inline]
pub fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    squared_euclidean(x, y).sqrt()
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn desk_values() {
        assert_eq!(Metric::Euclidean.distance(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 5.0);
        assert_eq!(Metric::SquaredEuclidean.distance(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 25.0);
        assert_eq!(Metric::Manhattan.distance(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(Metric::Manhattan.distance(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 7.0);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            Metric::Euclidean.distance(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1e3..1e3f64, 3)
    }

    proptest! {
        #[test]
        fn triangle_inequality(x in vec3(), y in vec3(), z in vec3()) {
            for m in [Metric::Euclidean, Metric::Manhattan] {
                let lhs = m.eval(&x, &z);
                let rhs = m.eval(&x, &y) + m.eval(&y, &z);
                prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
            }
        }

        #[test]
        fn squared_is_square(x in vec3(), y in vec3()) {
            let e = Metric::Euclidean.eval(&x, &y);
            let s = Metric::SquaredEuclidean.eval(&x, &y);
            prop_assert!((e * e - s).abs() <= 1e-12 * s.max(1e-300));
        }

        #[test]
        fn symmetric_and_reflexive(x in vec3(), y in vec3()) {
            for m in [Metric::Euclidean, Metric::SquaredEuclidean, Metric::Manhattan] {
                prop_assert_eq!(m.eval(&x, &y), m.eval(&y, &x));
                prop_assert_eq!(m.eval(&x, &x), 0.0);
            }
        }
    }
}
