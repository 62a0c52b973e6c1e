//! Categorized sample data: counts paired with strictly increasing values.

use crate::error::{Error, Result};
use crate::kahan;

/// Observed data: per-category counts `k_1..k_m` and strictly increasing
/// category values `v_1..v_m`, with `m >= 2` and a positive total count.
#[derive(Debug, Clone, PartialEq)]
pub struct CategorizedSample {
    counts: Vec<u64>,
    values: Vec<f64>,
}

impl CategorizedSample {
    /// Builds a sample from already sorted, distinct-valued categories.
    pub fn new(counts: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        if counts.len() != values.len() {
            return Err(Error::InvalidSample(format!(
                "{} counts but {} values",
                counts.len(),
                values.len()
            )));
        }
        if counts.len() < 2 {
            return Err(Error::InvalidSample(
                "at least two categories are required".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("values must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSample(
                "values must be strictly increasing".into(),
            ));
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidSample("total count must be positive".into()));
        }
        Ok(Self { counts, values })
    }

    /// Builds a sample from raw data: sorts categories by value and merges
    /// categories with identical values by summing their counts.
    pub fn normalize(raw_counts: &[u64], raw_values: &[f64]) -> Result<Self> {
        if raw_counts.len() != raw_values.len() {
            return Err(Error::InvalidSample(format!(
                "{} counts but {} values",
                raw_counts.len(),
                raw_values.len()
            )));
        }
        if raw_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("values must be finite".into()));
        }
        let mut pairs: Vec<(f64, u64)> = raw_values
            .iter()
            .copied()
            .zip(raw_counts.iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut counts: Vec<u64> = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (v, k) in pairs {
            match values.last() {
                Some(last) if *last == v => *counts.last_mut().unwrap() += k,
                _ => {
                    values.push(v);
                    counts.push(k);
                }
            }
        }
        Self::new(counts, values)
    }

    /// Number of categories m.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // m >= 2 by construction
    }

    /// Total number of observations n.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest category value v_1.
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// Largest category value v_m.
    pub fn max_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Value range r = v_m - v_1.
    pub fn range(&self) -> f64 {
        self.max_value() - self.min_value()
    }

    /// Sample mean k.v / n.
    pub fn mean(&self) -> f64 {
        let n = self.total() as f64;
        kahan::sum(
            self.counts
                .iter()
                .zip(&self.values)
                .map(|(&k, &v)| k as f64 * v),
        ) / n
    }
}

/// Sample mean, unbiased sample variance, and value range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub variance: f64,
    pub range: f64,
}

/// Computes mean, variance (n - 1 denominator), and range.
///
/// The variance estimator divides by n - 1, so a single observation is a
/// domain error rather than a zero.
pub fn sample_stats(sample: &CategorizedSample) -> Result<SampleStats> {
    let n = sample.total();
    if n < 2 {
        return Err(Error::Domain(
            "sample variance requires at least two observations".into(),
        ));
    }
    let mean = sample.mean();
    let variance = kahan::sum(
        sample
            .counts()
            .iter()
            .zip(sample.values())
            .map(|(&k, &v)| k as f64 * (v - mean) * (v - mean)),
    ) / (n - 1) as f64;
    Ok(SampleStats {
        mean,
        variance,
        range: sample.range(),
    })
}
