//! Bound-strengthening refinements: category merging (minimize the maximum
//! cluster range) and nearly uniform nest bounds (allow a bounded number of
//! frequency-bound failures in exchange for a larger per-bound budget).

use crate::bounds::{
    nest_eval, nest_lower_end, nest_per_bound, nest_upper_end, BoundInterval, Side,
};
use crate::error::{Error, Result};
use crate::kahan;
use crate::method::Method;
use crate::sample::CategorizedSample;

/// A partition of category indices into contiguous clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Exclusive end index of each cluster; strictly increasing, last == m.
    ends: Vec<usize>,
    /// Largest value range over the chosen clusters.
    max_range: f64,
}

impl Clustering {
    pub fn cluster_count(&self) -> usize {
        self.ends.len()
    }

    /// Number of categories the clustering partitions.
    pub fn category_count(&self) -> usize {
        *self.ends.last().unwrap()
    }

    pub fn max_range(&self) -> f64 {
        self.max_range
    }

    /// Clusters as half-open index ranges into the category list.
    pub fn clusters(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        let starts = std::iter::once(0).chain(self.ends.iter().copied());
        starts.zip(self.ends.iter().copied()).map(|(s, e)| s..e)
    }
}

/// Worst-case value assignment when merging a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeDirection {
    /// Each cluster takes its maximum value (valid for upper bounds).
    Upper,
    /// Each cluster takes its minimum value (valid for lower bounds).
    Lower,
}

/// Finds an h-clustering of the categories minimizing the maximum cluster
/// range, by dynamic programming with choice recovery.
///
/// `c[h][j]` is the optimal max range for the first j categories in h
/// clusters: `c[1][j] = v_j - v_1` and
/// `c[h][j] = min over splits i of max(c[h-1][i], v_j - v_{i+1})`, where the
/// split leaves categories i+1..j as the last cluster and i ranges down to
/// h-1 (all-singleton prefix). Recovery ties break toward the smallest
/// split index, making the plan deterministic.
pub fn merge_plan(values: &[f64], h: usize) -> Result<Clustering> {
    let m = values.len();
    if m == 0 {
        return Err(Error::Domain("no categories to cluster".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("values must be strictly increasing".into()));
    }
    if h == 0 || h > m {
        return Err(Error::Domain(format!("cluster count {h} outside 1..={m}")));
    }
    // c[hh][j], choice[hh][j]; j = number of leading categories covered.
    let mut cost = vec![vec![f64::INFINITY; m + 1]; h + 1];
    let mut choice = vec![vec![0usize; m + 1]; h + 1];
    for j in 1..=m {
        cost[1][j] = values[j - 1] - values[0];
    }
    for hh in 2..=h {
        for j in hh..=m {
            let mut best = f64::INFINITY;
            let mut best_i = hh - 1;
            for i in (hh - 1)..j {
                let candidate = cost[hh - 1][i].max(values[j - 1] - values[i]);
                if candidate < best {
                    best = candidate;
                    best_i = i;
                }
            }
            cost[hh][j] = best;
            choice[hh][j] = best_i;
        }
    }
    let mut ends_rev = vec![m];
    let mut j = m;
    for hh in (2..=h).rev() {
        j = choice[hh][j];
        ends_rev.push(j);
    }
    ends_rev.reverse();
    Ok(Clustering {
        ends: ends_rev,
        max_range: cost[h][m],
    })
}

/// Merges sample categories per the clustering: counts are summed, values
/// take the cluster maximum (upper) or minimum (lower).
pub fn apply_merge(
    sample: &CategorizedSample,
    clustering: &Clustering,
    direction: MergeDirection,
) -> Result<CategorizedSample> {
    if clustering.category_count() != sample.len() {
        return Err(Error::InvalidSample(format!(
            "clustering covers {} categories but sample has {}",
            clustering.category_count(),
            sample.len()
        )));
    }
    let mut counts = Vec::with_capacity(clustering.cluster_count());
    let mut values = Vec::with_capacity(clustering.cluster_count());
    for cluster in clustering.clusters() {
        counts.push(sample.counts()[cluster.clone()].iter().sum());
        values.push(match direction {
            MergeDirection::Upper => sample.values()[cluster.end - 1],
            MergeDirection::Lower => sample.values()[cluster.start],
        });
    }
    CategorizedSample::new(counts, values)
}

/// Nest bound computed on merged categories; valid for the original sample
/// because each observation is credited with its cluster's worst-case value.
///
/// The merge plan depends only on the values, so one plan serves both ends;
/// the upper end merges toward cluster maxima, the lower end toward minima.
pub fn merged_nest_bounds(
    sample: &CategorizedSample,
    delta: f64,
    h: usize,
    side: Side,
) -> Result<BoundInterval> {
    if h < 2 || h > sample.len() {
        return Err(Error::Domain(format!(
            "merged category count {h} outside 2..={}",
            sample.len()
        )));
    }
    let plan = merge_plan(sample.values(), h)?;
    let per_bound = nest_per_bound(delta, side, h);
    let upper_end = || -> Result<f64> {
        let merged = apply_merge(sample, &plan, MergeDirection::Upper)?;
        nest_upper_end(merged.counts(), merged.values(), per_bound)
    };
    let lower_end = || -> Result<f64> {
        let merged = apply_merge(sample, &plan, MergeDirection::Lower)?;
        nest_lower_end(merged.counts(), merged.values(), per_bound)
    };
    let (lower, upper) = match side {
        Side::TwoSided => (lower_end()?, upper_end()?),
        Side::Upper => (sample.min_value(), upper_end()?),
        Side::Lower => (lower_end()?, sample.max_value()),
    };
    Ok(BoundInterval {
        lower: lower.clamp(sample.min_value(), sample.max_value()),
        upper: upper.clamp(sample.min_value(), sample.max_value()),
        delta,
        method: Method::MergedNest { clusters: h },
        side,
    })
}

/// Bound increase from a run of `run_len` failed frequency bounds just
/// before (0-based) category `index`: the mass of the preceding `run_len`
/// maximizer entries migrates up to `index`.
pub fn nu_delta(run_len: usize, index: usize, p: &[f64], values: &[f64]) -> Result<f64> {
    if p.len() != values.len() {
        return Err(Error::Domain(format!(
            "{} probabilities but {} values",
            p.len(),
            values.len()
        )));
    }
    if index >= p.len() || run_len > index {
        return Err(Error::Domain(format!(
            "run length {run_len} / index {index} out of range for {} categories",
            p.len()
        )));
    }
    Ok(kahan::sum((1..=run_len).map(|b| {
        p[index - b] * (values[index] - values[index - b])
    })))
}

/// Worst-case bound increase table for up to `a` frequency-bound failures.
#[derive(Debug, Clone, PartialEq)]
pub struct NuCorrection {
    pub allowed_failures: usize,
    /// `table[i][j]`: max increase with exactly j failures among the bounds
    /// below 1-based category i, unreachable states at -inf.
    pub table: Vec<Vec<f64>>,
    /// The correction to add: `table[m][a]`.
    pub correction: f64,
}

/// Dynamic program over failure placements.
///
/// `c[i][j]` maximizes the increase from j bound failures strictly before
/// the bound for the first i categories. Anchors: `c[i][0] = 0` (no
/// failures) and the diagonal `c[j+1][j] = delta(j, j+1)` (every bound
/// below fails). The recurrence peels the failure run of length `run`
/// ending just below category i:
/// `c[i][j] = max over run of c[i-1-run][j-run] + delta(run, i)`.
pub fn nu_correction(p: &[f64], values: &[f64], a: usize) -> Result<NuCorrection> {
    let m = p.len();
    if m < 2 || values.len() != m {
        return Err(Error::Domain(
            "need at least two categories with matching values".into(),
        ));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("values must be strictly increasing".into()));
    }
    let total = kahan::sum(p.iter().copied());
    if (total - 1.0).abs() > 1e-9 || p.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
        return Err(Error::Domain("p must be a probability vector".into()));
    }
    if a > m - 2 {
        return Err(Error::Domain(format!(
            "allowed failures {a} exceeds m - 2 = {}",
            m - 2
        )));
    }
    let mut table = vec![vec![f64::NEG_INFINITY; a + 1]; m + 1];
    table[0][0] = 0.0;
    for row in table.iter_mut().skip(1) {
        row[0] = 0.0;
    }
    // Diagonal: all j = i - 1 bounds below category i fail.
    for i in 2..=(a + 1).min(m) {
        table[i][i - 1] = nu_delta(i - 1, i - 1, p, values)?;
    }
    for j in 1..=a {
        for i in (j + 2)..=m {
            let mut best = f64::NEG_INFINITY;
            for run in 0..=j {
                let prev = table[i - 1 - run][j - run];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let candidate = prev + nu_delta(run, i - 1, p, values)?;
                if candidate > best {
                    best = candidate;
                }
            }
            table[i][j] = best;
        }
    }
    // Allowing a failures means up to a: failures only shift mass upward,
    // so the row maximum sits at j = a, but take the max defensively.
    let correction = table[m]
        .iter()
        .copied()
        .filter(|c| c.is_finite())
        .fold(0.0f64, f64::max);
    Ok(NuCorrection {
        allowed_failures: a,
        table,
        correction,
    })
}

/// Nearly uniform nest bound: each side inflates its per-bound budget to
/// `(a + 1) * headline / (m - 1)` and compensates with the worst-case
/// correction for up to `a` failed frequency bounds.
///
/// The lower end reverses the counts, runs the upper process, and applies
/// the correction against reversed negated values, subtracting the result.
/// At `a = 0` this reproduces the plain nest bound exactly.
pub fn nearly_uniform_nest_bounds(
    sample: &CategorizedSample,
    delta: f64,
    a: usize,
    side: Side,
) -> Result<BoundInterval> {
    let m = sample.len();
    if a > m - 2 {
        return Err(Error::Domain(format!(
            "allowed failures {a} exceeds m - 2 = {}",
            m - 2
        )));
    }
    let per_bound = nest_per_bound(delta, side, m) * (a + 1) as f64;
    let upper_end = || -> Result<f64> {
        let (state, base) = nest_eval(sample.counts(), sample.values(), per_bound)?;
        let corr = nu_correction(&state.maximizer, sample.values(), a)?;
        Ok(base + corr.correction)
    };
    let lower_end = || -> Result<f64> {
        let rev_counts: Vec<u64> = sample.counts().iter().rev().copied().collect();
        let rev_values: Vec<f64> = sample.values().iter().rev().copied().collect();
        let (state, base) = nest_eval(&rev_counts, &rev_values, per_bound)?;
        let mirrored: Vec<f64> = rev_values.iter().map(|v| -v).collect();
        let corr = nu_correction(&state.maximizer, &mirrored, a)?;
        Ok(base - corr.correction)
    };
    let (lower, upper) = match side {
        Side::TwoSided => (lower_end()?, upper_end()?),
        Side::Upper => (sample.min_value(), upper_end()?),
        Side::Lower => (lower_end()?, sample.max_value()),
    };
    Ok(BoundInterval {
        lower: lower.clamp(sample.min_value(), sample.max_value()),
        upper: upper.clamp(sample.min_value(), sample.max_value()),
        delta,
        method: Method::NearlyUniform {
            allowed_failures: a,
        },
        side,
    })
}
