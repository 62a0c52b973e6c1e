//! Monte Carlo coverage estimation and brute-force oracles.
//!
//! Coverage runs draw multinomial samples from a known distribution,
//! recompute the configured bound on each draw, and count how often the
//! true mean escapes it. Trials derive independent random streams from
//! (seed, trial index), so results are reproducible and order-independent
//! under parallel execution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::bounds::{ProbInterval, Side};
use crate::error::{Error, Result};
use crate::kahan;
use crate::method::{compute_bounds, Method};
use crate::sample::CategorizedSample;

/// A known generating distribution: probabilities over strictly increasing
/// category values.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueDistribution {
    probabilities: Vec<f64>,
    values: Vec<f64>,
}

impl TrueDistribution {
    pub fn new(probabilities: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if probabilities.len() != values.len() {
            return Err(Error::Domain(format!(
                "{} probabilities but {} values",
                probabilities.len(),
                values.len()
            )));
        }
        if probabilities.len() < 2 {
            return Err(Error::Domain("at least two categories required".into()));
        }
        if probabilities
            .iter()
            .any(|p| !p.is_finite() || !(0.0..=1.0).contains(p))
        {
            return Err(Error::Domain("probabilities must lie in [0, 1]".into()));
        }
        let total = kahan::sum(probabilities.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "values must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self {
            probabilities,
            values,
        })
    }

    /// Uniform distribution over the given values.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        Self::new(vec![1.0 / m as f64; m], values)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        false // m >= 2 by construction
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The mean being bounded: p* . v.
    pub fn true_mean(&self) -> f64 {
        kahan::dot(&self.probabilities, &self.values)
    }
}

/// Draws category counts distributed Multinomial(n, p*) by sequential
/// binomial decomposition: category i receives a Binomial draw of the
/// remaining observations with the conditional probability
/// p_i / remaining mass.
pub fn sample_multinomial<R: Rng + ?Sized>(
    n: u64,
    dist: &TrueDistribution,
    rng: &mut R,
) -> Vec<u64> {
    let m = dist.len();
    let mut counts = vec![0u64; m];
    let mut remaining_n = n;
    let mut remaining_mass = 1.0f64;
    for (i, &p) in dist.probabilities.iter().take(m - 1).enumerate() {
        if remaining_n == 0 {
            break;
        }
        let conditional = if remaining_mass <= p {
            1.0
        } else {
            (p / remaining_mass).clamp(0.0, 1.0)
        };
        let draw = if conditional >= 1.0 {
            remaining_n
        } else if conditional <= 0.0 {
            0
        } else {
            Binomial::new(remaining_n, conditional)
                .expect("conditional probability is in (0, 1)")
                .sample(rng)
        };
        counts[i] = draw;
        remaining_n -= draw;
        remaining_mass -= p;
    }
    counts[m - 1] = remaining_n;
    counts
}

/// Independent per-trial stream: the seed and trial index are stamped into
/// the ChaCha key, so trials can run in any order on any schedule.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(b"coverage");
    ChaCha8Rng::from_seed(key)
}

/// Outcome of a Monte Carlo coverage run.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub delta: f64,
    pub method: Method,
    pub side: Side,
    pub seed: u64,
}

impl CoverageReport {
    /// The acceptance threshold delta + 3 sqrt(delta (1 - delta) / trials).
    pub fn threshold(&self) -> f64 {
        self.delta + 3.0 * (self.delta * (1.0 - self.delta) / self.trials as f64).sqrt()
    }

    /// Whether the empirical failure rate respects the PAC contract up to
    /// three standard errors of sampling slack.
    pub fn passes(&self) -> bool {
        self.failure_rate <= self.threshold()
    }
}

/// Estimates the bound-failure rate of a method over seeded multinomial
/// trials. A trial fails when the true mean lies strictly outside the
/// computed bound (ties at the bound count as successes).
pub fn coverage_estimate(
    method: Method,
    side: Side,
    dist: &TrueDistribution,
    n: u64,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    if n == 0 {
        return Err(Error::Domain("at least one observation required".into()));
    }
    let true_mean = dist.true_mean();
    let failures = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<u64> {
            let mut rng = trial_rng(seed, trial);
            let counts = sample_multinomial(n, dist, &mut rng);
            let sample = CategorizedSample::new(counts, dist.values.clone())?;
            let bound = compute_bounds(method, &sample, delta, side)?;
            let failed = match side {
                Side::Upper => true_mean > bound.upper,
                Side::Lower => true_mean < bound.lower,
                Side::TwoSided => true_mean > bound.upper || true_mean < bound.lower,
            };
            Ok(u64::from(failed))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(CoverageReport {
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        delta,
        method,
        side,
        seed,
    })
}

/// Constraints the grid oracle understands: per-category probability
/// intervals and/or lower bounds on the prefix sums p_1 + .. + p_i.
#[derive(Debug, Clone, Default)]
pub struct SimplexConstraints {
    pub boxes: Option<Vec<ProbInterval>>,
    /// Entry i bounds the prefix of length i + 1; the last entry is
    /// typically 1 (the full sum).
    pub cumulative_lower: Option<Vec<f64>>,
}

/// Exhaustive grid maximum of p . v over the constrained simplex.
///
/// Grid points place integer numbers of `resolution`-sized mass units on
/// each category. The first m - 2 coordinates are enumerated outright; the
/// split of the leftover mass across the last two coordinates is linear in
/// one variable, so only the two feasible endpoints are scored, which is
/// exactly the grid maximum over those coordinates.
pub fn brute_force_max_mean(
    constraints: &SimplexConstraints,
    values: &[f64],
    resolution: f64,
) -> Result<f64> {
    let m = values.len();
    if !(2..=4).contains(&m) {
        return Err(Error::Domain(format!(
            "grid oracle supports 2..=4 categories, got {m}"
        )));
    }
    if !(1e-3..=0.5).contains(&resolution) {
        return Err(Error::Domain(format!(
            "resolution must lie in [1e-3, 0.5], got {resolution}"
        )));
    }
    let steps = (1.0 / resolution).round() as i64;
    let scale = steps as f64;
    // Constraint bounds in grid units, with a 1e-6-unit guard against
    // float noise on exactly grid-aligned inputs.
    let lo_units: Vec<i64> = match &constraints.boxes {
        Some(boxes) => {
            if boxes.len() != m {
                return Err(Error::Domain("box constraint length mismatch".into()));
            }
            boxes
                .iter()
                .map(|b| ((b.lower * scale - 1e-6).ceil() as i64).max(0))
                .collect()
        }
        None => vec![0; m],
    };
    let hi_units: Vec<i64> = match &constraints.boxes {
        Some(boxes) => boxes
            .iter()
            .map(|b| ((b.upper * scale + 1e-6).floor() as i64).min(steps))
            .collect(),
        None => vec![steps; m],
    };
    let cum_units: Vec<i64> = match &constraints.cumulative_lower {
        Some(cum) => {
            if cum.len() != m {
                return Err(Error::Domain(
                    "cumulative constraint length mismatch".into(),
                ));
            }
            cum.iter()
                .map(|t| ((t * scale - 1e-6).ceil() as i64).max(0))
                .collect()
        }
        None => vec![0; m],
    };
    // Suffix sums of interval bounds prune prefixes that cannot finish.
    let mut suffix_lo = vec![0i64; m + 1];
    let mut suffix_hi = vec![0i64; m + 1];
    for i in (0..m).rev() {
        suffix_lo[i] = suffix_lo[i + 1] + lo_units[i];
        suffix_hi[i] = suffix_hi[i + 1] + hi_units[i];
    }

    let mut best: Option<f64> = None;
    // Score the best split of `left` units between the final two
    // coordinates given the units already spent.
    let mut finish = |prefix_units: i64, prefix_value: f64| {
        let left = steps - prefix_units;
        if left < 0 {
            return;
        }
        let a = m - 2;
        let b = m - 1;
        let idx_min = lo_units[a]
            .max(left - hi_units[b])
            .max(cum_units[a] - prefix_units)
            .max(0);
        let idx_max = hi_units[a].min(left - lo_units[b]).min(left);
        if idx_min > idx_max {
            return;
        }
        for idx in [idx_min, idx_max] {
            let value =
                (prefix_value + idx as f64 * values[a] + (left - idx) as f64 * values[b]) / scale;
            if best.is_none_or(|cur| value > cur) {
                best = Some(value);
            }
        }
    };

    match m {
        2 => finish(0, 0.0),
        3 => {
            let lo = lo_units[0].max(cum_units[0]).max(steps - suffix_hi[1]);
            let hi = hi_units[0].min(steps - suffix_lo[1]);
            for idx in lo..=hi {
                finish(idx, idx as f64 * values[0]);
            }
        }
        4 => {
            let lo0 = lo_units[0].max(cum_units[0]).max(steps - suffix_hi[1]);
            let hi0 = hi_units[0].min(steps - suffix_lo[1]);
            for idx0 in lo0..=hi0 {
                let v0 = idx0 as f64 * values[0];
                let lo1 = lo_units[1]
                    .max(cum_units[1] - idx0)
                    .max(steps - idx0 - suffix_hi[2]);
                let hi1 = hi_units[1].min(steps - idx0 - suffix_lo[2]);
                for idx1 in lo1..=hi1 {
                    finish(idx0 + idx1, v0 + idx1 as f64 * values[1]);
                }
            }
        }
        _ => unreachable!(),
    }
    best.ok_or_else(|| Error::Infeasible("no grid point satisfies the constraints".into()))
}

/// Minimum over contiguous h-partitions of the maximum cluster range,
/// by direct enumeration of split-point subsets.
pub fn brute_force_merge(values: &[f64], h: usize) -> Result<f64> {
    let m = values.len();
    if m == 0 || m > 12 {
        return Err(Error::Domain(format!(
            "enumeration oracle supports 1..=12 categories, got {m}"
        )));
    }
    if h == 0 || h > m {
        return Err(Error::Domain(format!("cluster count {h} outside 1..={m}")));
    }
    let gaps = m - 1;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << gaps) {
        if mask.count_ones() as usize != h - 1 {
            continue;
        }
        let mut max_range = 0.0f64;
        let mut start = 0usize;
        for gap in 0..gaps {
            if mask & (1 << gap) != 0 {
                max_range = max_range.max(values[gap] - values[start]);
                start = gap + 1;
            }
        }
        max_range = max_range.max(values[m - 1] - values[start]);
        best = best.min(max_range);
    }
    Ok(best)
}
