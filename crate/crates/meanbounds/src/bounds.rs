//! Mean-bound methods: Bonferroni box, Bonferroni nest, Hoeffding, and
//! Maurer-Pontil, each with one-sided and simultaneous two-sided variants.
//!
//! The box and nest methods bound the unknown category distribution inside
//! a likely set built from simultaneous binomial inversions and extremize
//! the mean over that set. Hoeffding and Maurer-Pontil are the standard
//! single-variable baselines evaluated on the same data.

use crate::binom::{invert_lower, invert_upper, InversionQuery};
use crate::error::{Error, Result};
use crate::kahan;
use crate::method::Method;
use crate::sample::{sample_stats, CategorizedSample};

/// Which ends of the mean bound are requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
    TwoSided,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Lower => write!(f, "lower"),
            Side::Upper => write!(f, "upper"),
            Side::TwoSided => write!(f, "two-sided"),
        }
    }
}

/// A mean bound holding with probability at least 1 - delta.
///
/// One-sided intervals carry the trivial other end (the support edge), so
/// `lower <= upper` always holds and both ends stay inside `[v_1, v_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub delta: f64,
    pub method: Method,
    pub side: Side,
}

impl BoundInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    fn clamped(
        lower: f64,
        upper: f64,
        sample: &CategorizedSample,
        delta: f64,
        method: Method,
        side: Side,
    ) -> Self {
        let lo = lower.clamp(sample.min_value(), sample.max_value());
        let up = upper.clamp(sample.min_value(), sample.max_value());
        BoundInterval {
            lower: lo,
            upper: up.max(lo),
            delta,
            method,
            side,
        }
    }
}

/// Threshold sequence and maximizing probability vector of a nest bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NestState {
    /// t_0 = 0, interior inversion lower bounds, t_m = 1.
    pub thresholds: Vec<f64>,
    /// p_i = t_i - t_{i-1}; sums to one.
    pub maximizer: Vec<f64>,
}

/// Per-category probability interval of the Bonferroni box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbInterval {
    pub lower: f64,
    pub upper: f64,
}

fn validate_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "delta must lie strictly inside (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Two-sided Hoeffding interval `mean -/+ r sqrt(ln(2/delta) / 2n)`,
/// clamped to the known support.
pub fn hoeffding_bounds(sample: &CategorizedSample, delta: f64) -> Result<BoundInterval> {
    validate_delta(delta)?;
    let n = sample.total() as f64;
    let mean = sample.mean();
    let eps = sample.range() * ((2.0 / delta).ln() / (2.0 * n)).sqrt();
    Ok(BoundInterval::clamped(
        mean - eps,
        mean + eps,
        sample,
        delta,
        Method::Hoeffding,
        Side::TwoSided,
    ))
}

/// Two-sided Maurer-Pontil empirical Bernstein interval
/// `mean -/+ [sqrt(2 var ln(4/delta) / n) + 7 r ln(4/delta) / 3(n-1)]`.
pub fn maurer_pontil_bounds(sample: &CategorizedSample, delta: f64) -> Result<BoundInterval> {
    validate_delta(delta)?;
    let stats = sample_stats(sample)?;
    let n = sample.total() as f64;
    let ln_term = (4.0 / delta).ln();
    let eps = (2.0 * stats.variance * ln_term / n).sqrt()
        + 7.0 * stats.range * ln_term / (3.0 * (n - 1.0));
    Ok(BoundInterval::clamped(
        stats.mean - eps,
        stats.mean + eps,
        sample,
        delta,
        Method::MaurerPontil,
        Side::TwoSided,
    ))
}

/// Per-category inversion intervals `[p_-(n, k_i, delta/2m), p_+(n, k_i, delta/2m)]`.
///
/// By the union bound the full vector of category probabilities lies in the
/// product of these intervals with probability at least 1 - delta.
pub fn box_intervals(sample: &CategorizedSample, delta: f64) -> Result<Vec<ProbInterval>> {
    validate_delta(delta)?;
    let n = sample.total();
    let per_category = delta / (2.0 * sample.len() as f64);
    sample
        .counts()
        .iter()
        .map(|&k| {
            let q = InversionQuery::new(n, k, per_category)?;
            Ok(ProbInterval {
                lower: invert_lower(q),
                upper: invert_upper(q),
            })
        })
        .collect()
}

/// Feasibility slack for box sums; interval endpoints are rounded
/// conservatively so genuine inputs only miss 1 by accumulated noise.
const BOX_FEASIBILITY_TOL: f64 = 1e-9;

/// Maximizes `p . v` over the box intersected with the simplex.
///
/// Starts every coordinate at its lower bound, then walks from the last
/// category backward, granting each coordinate the remaining headroom up to
/// its upper bound. Returns the maximizing vector and the achieved value.
pub fn box_maximize(intervals: &[ProbInterval], values: &[f64]) -> Result<(Vec<f64>, f64)> {
    if intervals.len() != values.len() {
        return Err(Error::Domain(format!(
            "{} intervals but {} values",
            intervals.len(),
            values.len()
        )));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("values must be strictly increasing".into()));
    }
    for iv in intervals {
        if !(0.0..=1.0).contains(&iv.lower)
            || !(0.0..=1.0).contains(&iv.upper)
            || iv.lower > iv.upper
        {
            return Err(Error::Domain(format!(
                "interval [{}, {}] is not a probability interval",
                iv.lower, iv.upper
            )));
        }
    }
    let sum_lower = kahan::sum(intervals.iter().map(|iv| iv.lower));
    if sum_lower > 1.0 + BOX_FEASIBILITY_TOL {
        return Err(Error::Infeasible(format!(
            "lower bounds sum to {sum_lower} > 1"
        )));
    }
    let mut p: Vec<f64> = intervals.iter().map(|iv| iv.lower).collect();
    let mut headroom = (1.0 - sum_lower).max(0.0);
    for i in (0..p.len()).rev() {
        if headroom <= 0.0 {
            break;
        }
        let grant = headroom.min(intervals[i].upper - intervals[i].lower);
        p[i] += grant;
        headroom -= grant;
    }
    if headroom > BOX_FEASIBILITY_TOL {
        return Err(Error::Infeasible(format!(
            "upper bounds leave {headroom} of probability mass unassigned"
        )));
    }
    let bound = kahan::dot(&p, values);
    Ok((p, bound))
}

/// Bonferroni box mean bound.
///
/// Both ends derive from the same box at per-category budget delta/(2m), so
/// the two-sided variant needs no extra split of delta. The lower end comes
/// from maximizing against reversed, negated values.
pub fn box_bounds(sample: &CategorizedSample, delta: f64, side: Side) -> Result<BoundInterval> {
    let intervals = box_intervals(sample, delta)?;
    let upper_end = box_maximize(&intervals, sample.values())?.1;
    let reversed: Vec<ProbInterval> = intervals.iter().rev().copied().collect();
    let negated: Vec<f64> = sample.values().iter().rev().map(|v| -v).collect();
    let lower_end = -box_maximize(&reversed, &negated)?.1;
    let (lower, upper) = match side {
        Side::TwoSided => (lower_end, upper_end),
        Side::Upper => (sample.min_value(), upper_end),
        Side::Lower => (lower_end, sample.max_value()),
    };
    Ok(BoundInterval::clamped(
        lower,
        upper,
        sample,
        delta,
        Method::BonferroniBox,
        side,
    ))
}

/// Nest threshold sequence: t_0 = 0, interior
/// t_i = p_-(n, k_1 + .. + k_i, per_bound_delta), and t_m = 1.
///
/// Interior thresholds are forced nondecreasing by a running maximum; the
/// running maximum of valid cumulative lower bounds is itself valid.
pub fn nest_thresholds(counts: &[u64], per_bound_delta: f64) -> Result<Vec<f64>> {
    validate_delta(per_bound_delta)?;
    if counts.len() < 2 {
        return Err(Error::Domain("at least two categories required".into()));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::Domain("total count must be positive".into()));
    }
    let m = counts.len();
    let mut thresholds = Vec::with_capacity(m + 1);
    thresholds.push(0.0);
    let mut cumulative = 0u64;
    for &k in &counts[..m - 1] {
        cumulative += k;
        let q = InversionQuery::new(n, cumulative, per_bound_delta)?;
        let t = invert_lower(q).max(*thresholds.last().unwrap());
        thresholds.push(t);
    }
    thresholds.push(1.0);
    Ok(thresholds)
}

/// Evaluates the nest maximizer p_i = t_i - t_{i-1} and the bound `p . v`.
///
/// Values need not be increasing here: the lower-bound construction feeds
/// reversed (descending) values through the same assignment.
pub fn nest_eval(counts: &[u64], values: &[f64], per_bound_delta: f64) -> Result<(NestState, f64)> {
    if counts.len() != values.len() {
        return Err(Error::Domain(format!(
            "{} counts but {} values",
            counts.len(),
            values.len()
        )));
    }
    let thresholds = nest_thresholds(counts, per_bound_delta)?;
    let maximizer: Vec<f64> = thresholds.windows(2).map(|w| w[1] - w[0]).collect();
    let bound = kahan::dot(&maximizer, values);
    Ok((
        NestState {
            thresholds,
            maximizer,
        },
        bound,
    ))
}

/// Upper-bound budget per nest threshold for the requested side.
pub(crate) fn nest_per_bound(delta: f64, side: Side, m: usize) -> f64 {
    let headline = match side {
        Side::TwoSided => delta / 2.0,
        Side::Lower | Side::Upper => delta,
    };
    headline / (m - 1) as f64
}

/// Nest upper end on `(counts, values)` at the given per-bound budget.
pub(crate) fn nest_upper_end(counts: &[u64], values: &[f64], per_bound: f64) -> Result<f64> {
    Ok(nest_eval(counts, values, per_bound)?.1)
}

/// Nest lower end: reverse counts and values, run the upper process.
pub(crate) fn nest_lower_end(counts: &[u64], values: &[f64], per_bound: f64) -> Result<f64> {
    let rev_counts: Vec<u64> = counts.iter().rev().copied().collect();
    let rev_values: Vec<f64> = values.iter().rev().copied().collect();
    Ok(nest_eval(&rev_counts, &rev_values, per_bound)?.1)
}

/// Bonferroni nest mean bound.
///
/// One-sided bounds spend delta/(m-1) per threshold; the two-sided variant
/// spends (delta/2)/(m-1) per threshold on each side, since the upper and
/// lower nests collect different category combinations.
pub fn nest_bounds(sample: &CategorizedSample, delta: f64, side: Side) -> Result<BoundInterval> {
    validate_delta(delta)?;
    let per_bound = nest_per_bound(delta, side, sample.len());
    let (lower, upper) = match side {
        Side::TwoSided => (
            nest_lower_end(sample.counts(), sample.values(), per_bound)?,
            nest_upper_end(sample.counts(), sample.values(), per_bound)?,
        ),
        Side::Upper => (
            sample.min_value(),
            nest_upper_end(sample.counts(), sample.values(), per_bound)?,
        ),
        Side::Lower => (
            nest_lower_end(sample.counts(), sample.values(), per_bound)?,
            sample.max_value(),
        ),
    };
    Ok(BoundInterval::clamped(
        lower,
        upper,
        sample,
        delta,
        Method::BonferroniNest,
        side,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn balanced_linear(m: usize, per: u64) -> CategorizedSample {
        CategorizedSample::new(vec![per; m], (0..m).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn hoeffding_matches_closed_form() {
        let s = balanced_linear(10, 10);
        let b = hoeffding_bounds(&s, 0.05).unwrap();
        let eps = 9.0 * (40.0f64.ln() / 200.0).sqrt();
        assert_relative_eq!(eps, 1.2222913641665576, max_relative = 1e-12);
        assert_relative_eq!(b.lower, 4.5 - eps, max_relative = 1e-12);
        assert_relative_eq!(b.upper, 4.5 + eps, max_relative = 1e-12);
    }

    #[test]
    fn hoeffding_halves_when_n_quadruples() {
        let s1 = balanced_linear(10, 10);
        let s4 = balanced_linear(10, 40);
        let w1 = hoeffding_bounds(&s1, 0.05).unwrap().width();
        let w4 = hoeffding_bounds(&s4, 0.05).unwrap().width();
        assert_relative_eq!(w4, w1 / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn hoeffding_epsilon_is_positive() {
        let s = CategorizedSample::new(vec![1, 0], vec![0.0, 1e-9]).unwrap();
        let b = hoeffding_bounds(&s, 0.5).unwrap();
        assert!(b.width() > 0.0);
    }

    #[test]
    fn maurer_pontil_matches_closed_form() {
        let s = balanced_linear(10, 10);
        let b = maurer_pontil_bounds(&s, 0.05).unwrap();
        let eps = (b.upper - b.lower) / 2.0;
        assert_relative_eq!(eps, 1.7841188193389943, max_relative = 1e-10);
    }

    #[test]
    fn maurer_pontil_zero_variance_keeps_range_term() {
        let s = CategorizedSample::new(vec![100, 0], vec![0.0, 1.0]).unwrap();
        let b = maurer_pontil_bounds(&s, 0.05).unwrap();
        let expect = 7.0 * (80.0f64).ln() / (3.0 * 99.0);
        assert_relative_eq!(b.upper, expect, max_relative = 1e-12);
    }

    #[test]
    fn maurer_pontil_range_term_linear_in_r() {
        let narrow = CategorizedSample::new(vec![100, 0], vec![0.0, 1.0]).unwrap();
        let wide = CategorizedSample::new(vec![100, 0], vec![0.0, 2.0]).unwrap();
        let half_width = |s| {
            let b = maurer_pontil_bounds(s, 0.05).unwrap();
            (b.upper - b.lower) / 2.0
        };
        assert_relative_eq!(
            half_width(&wide),
            2.0 * half_width(&narrow),
            max_relative = 1e-12
        );
    }

    #[test]
    fn maurer_pontil_needs_two_observations() {
        let s = CategorizedSample::new(vec![1, 0], vec![0.0, 1.0]).unwrap();
        assert!(maurer_pontil_bounds(&s, 0.05).is_err());
    }

    #[test]
    fn box_intervals_edge_counts() {
        let s = CategorizedSample::new(vec![0, 12], vec![0.0, 1.0]).unwrap();
        let ivs = box_intervals(&s, 0.05).unwrap();
        assert_eq!(ivs[0].lower, 0.0);
        assert_eq!(ivs[1].upper, 1.0);
        // the two nontrivial ends mirror each other (up to one rounding of 1 - x)
        assert_relative_eq!(ivs[0].upper, 1.0 - ivs[1].lower, max_relative = 1e-14);
    }

    #[test]
    fn box_intervals_balanced_are_identical() {
        let s = CategorizedSample::new(vec![10, 10, 10], vec![0.0, 1.0, 2.0]).unwrap();
        let ivs = box_intervals(&s, 0.06).unwrap();
        assert_eq!(ivs[0], ivs[1]);
        assert_eq!(ivs[1], ivs[2]);
        // delta/(2m) = 0.01; reference roots from 60-digit bisection
        assert_relative_eq!(ivs[0].lower, 0.15075430523887149, max_relative = 1e-11);
        assert_relative_eq!(ivs[0].upper, 0.5611825009395184, max_relative = 1e-11);
    }

    #[test]
    fn box_maximize_greedy_trace() {
        let intervals = [
            ProbInterval {
                lower: 0.1,
                upper: 0.4,
            },
            ProbInterval {
                lower: 0.2,
                upper: 0.5,
            },
            ProbInterval {
                lower: 0.3,
                upper: 0.6,
            },
        ];
        let (p, bound) = box_maximize(&intervals, &[0.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(p[0], 0.1, max_relative = 1e-15);
        assert_relative_eq!(p[1], 0.3, max_relative = 1e-12);
        assert_relative_eq!(p[2], 0.6, max_relative = 1e-15);
        assert_relative_eq!(bound, 1.5, max_relative = 1e-12);
    }

    #[test]
    fn box_maximize_unconstrained_puts_mass_on_top() {
        let intervals = [ProbInterval {
            lower: 0.0,
            upper: 1.0,
        }; 3];
        let (p, bound) = box_maximize(&intervals, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0]);
        assert_eq!(bound, 2.0);
    }

    #[test]
    fn box_maximize_point_box_recovers_frequencies() {
        let freqs = [0.2, 0.3, 0.5];
        let intervals: Vec<ProbInterval> = freqs
            .iter()
            .map(|&f| ProbInterval { lower: f, upper: f })
            .collect();
        let (p, bound) = box_maximize(&intervals, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(p, freqs.to_vec());
        assert_relative_eq!(bound, 1.3, max_relative = 1e-12);
    }

    #[test]
    fn box_maximize_rejects_infeasible_sets() {
        let too_low = [ProbInterval {
            lower: 0.6,
            upper: 0.7,
        }; 2];
        assert!(matches!(
            box_maximize(&too_low, &[0.0, 1.0]),
            Err(Error::Infeasible(_))
        ));
        let too_high = [ProbInterval {
            lower: 0.0,
            upper: 0.3,
        }; 2];
        assert!(matches!(
            box_maximize(&too_high, &[0.0, 1.0]),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn box_two_category_matches_direct_inversion() {
        // With m = 2 the box upper end at per-category budget d equals the
        // direct two-category inversion bound at the same budget.
        let s = CategorizedSample::new(vec![3, 7], vec![0.0, 1.0]).unwrap();
        let delta = 0.05;
        let b = box_bounds(&s, delta, Side::TwoSided).unwrap();
        let d = delta / 4.0;
        let p_plus = binom::invert_upper(InversionQuery::new(10, 7, d).unwrap());
        assert_eq!(b.upper, p_plus);
        let p_plus_first = binom::invert_upper(InversionQuery::new(10, 3, d).unwrap());
        assert_eq!(b.lower, 1.0 - p_plus_first);
    }

    #[test]
    fn box_reversal_symmetry() {
        // Reflecting values through v_1 + v_m swaps and mirrors the ends.
        let s = CategorizedSample::new(vec![2, 3, 5], vec![0.0, 1.0, 4.0]).unwrap();
        let refl_values: Vec<f64> = s.values().iter().rev().map(|v| 4.0 - v).collect();
        let refl_counts: Vec<u64> = s.counts().iter().rev().copied().collect();
        let refl = CategorizedSample::new(refl_counts, refl_values).unwrap();
        let b = box_bounds(&s, 0.05, Side::TwoSided).unwrap();
        let br = box_bounds(&refl, 0.05, Side::TwoSided).unwrap();
        assert_relative_eq!(b.lower, 4.0 - br.upper, max_relative = 1e-12);
        assert_relative_eq!(b.upper, 4.0 - br.lower, max_relative = 1e-12);
    }

    #[test]
    fn nest_thresholds_two_categories() {
        let t = nest_thresholds(&[3, 7], 0.05).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[2], 1.0);
        assert_relative_eq!(t[1], 0.08726443391415031, max_relative = 1e-11);
    }

    #[test]
    fn nest_thresholds_top_heavy_interior_zero() {
        let t = nest_thresholds(&[0, 0, 0, 9], 0.05).unwrap();
        assert_eq!(t, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn nest_eval_two_categories_is_inversion_complement() {
        let (state, bound) = nest_eval(&[3, 7], &[0.0, 1.0], 0.05).unwrap();
        assert_eq!(bound, 1.0 - state.thresholds[1]);
        let p_plus = binom::invert_upper(InversionQuery::new(10, 7, 0.05).unwrap());
        assert_eq!(bound, p_plus);
    }

    #[test]
    fn nest_eval_top_mass_gives_max_value() {
        let (_, bound) = nest_eval(&[0, 0, 30], &[0.0, 1.0, 2.0], 0.05).unwrap();
        assert_eq!(bound, 2.0);
    }

    #[test]
    fn nest_two_sided_m2_matches_two_sided_inversion() {
        let s = CategorizedSample::new(vec![3, 7], vec![0.0, 1.0]).unwrap();
        let b = nest_bounds(&s, 0.05, Side::TwoSided).unwrap();
        let p_plus_top = binom::invert_upper(InversionQuery::new(10, 7, 0.025).unwrap());
        let p_plus_bot = binom::invert_upper(InversionQuery::new(10, 3, 0.025).unwrap());
        assert_eq!(b.upper, p_plus_top);
        assert_eq!(b.lower, 1.0 - p_plus_bot);
    }

    #[test]
    fn one_sided_nest_is_tighter_than_two_sided_end() {
        let s = balanced_linear(5, 20);
        let upper_only = nest_bounds(&s, 0.05, Side::Upper).unwrap();
        let two = nest_bounds(&s, 0.05, Side::TwoSided).unwrap();
        assert!(upper_only.upper < two.upper);
        assert_eq!(upper_only.lower, s.min_value());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn frequencies_lie_in_box(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(2..6);
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(0..40)).collect();
            if counts.iter().sum::<u64>() == 0 { return Ok(()); }
            let values: Vec<f64> = (0..m).map(|i| i as f64).collect();
            let s = CategorizedSample::new(counts.clone(), values).unwrap();
            let n = s.total() as f64;
            let ivs = box_intervals(&s, 0.05).unwrap();
            for (iv, &k) in ivs.iter().zip(s.counts()) {
                let f = k as f64 / n;
                prop_assert!(iv.lower <= f + 1e-12 && f <= iv.upper + 1e-12);
            }
        }

        #[test]
        fn intervals_sandwich_sample_mean(seed in 0u64..1000, delta in 0.01f64..0.5) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(2..7);
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(0..30)).collect();
            if counts.iter().sum::<u64>() < 2 { return Ok(()); }
            let values: Vec<f64> = (0..m).map(|i| (i as f64).exp()).collect();
            let s = CategorizedSample::new(counts, values).unwrap();
            let mean = s.mean();
            for b in [
                box_bounds(&s, delta, Side::TwoSided).unwrap(),
                nest_bounds(&s, delta, Side::TwoSided).unwrap(),
                hoeffding_bounds(&s, delta).unwrap(),
                maurer_pontil_bounds(&s, delta).unwrap(),
            ] {
                prop_assert!(b.lower <= mean + 1e-9, "{:?} lower {} vs mean {}", b.method, b.lower, mean);
                prop_assert!(b.upper >= mean - 1e-9, "{:?} upper {} vs mean {}", b.method, b.upper, mean);
                prop_assert!(b.lower >= s.min_value() && b.upper <= s.max_value());
            }
        }

        #[test]
        fn wider_delta_never_widens_intervals(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(2..6);
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(1..30)).collect();
            let values: Vec<f64> = (0..m).map(|i| i as f64 * 1.5).collect();
            let s = CategorizedSample::new(counts, values).unwrap();
            for (small, large) in [(0.01, 0.05), (0.05, 0.2), (0.2, 0.6)] {
                for f in [box_bounds, nest_bounds] {
                    let tight = f(&s, large, Side::TwoSided).unwrap();
                    let loose = f(&s, small, Side::TwoSided).unwrap();
                    prop_assert!(tight.lower >= loose.lower - 1e-12);
                    prop_assert!(tight.upper <= loose.upper + 1e-12);
                }
            }
        }

        #[test]
        fn affine_equivariance(seed in 0u64..500, a in 0.1f64..8.0, b in -5.0f64..5.0) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(2..6);
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(1..30)).collect();
            let values: Vec<f64> = (0..m).map(|i| i as f64).collect();
            let mapped: Vec<f64> = values.iter().map(|v| a * v + b).collect();
            let s = CategorizedSample::new(counts.clone(), values).unwrap();
            let sm = CategorizedSample::new(counts, mapped).unwrap();
            for f in [
                box_bounds as fn(&CategorizedSample, f64, Side) -> Result<BoundInterval>,
                nest_bounds,
            ] {
                let orig = f(&s, 0.05, Side::TwoSided).unwrap();
                let shifted = f(&sm, 0.05, Side::TwoSided).unwrap();
                prop_assert!((shifted.lower - (a * orig.lower + b)).abs() < 1e-9 * (1.0 + a));
                prop_assert!((shifted.upper - (a * orig.upper + b)).abs() < 1e-9 * (1.0 + a));
            }
            let oh = hoeffding_bounds(&s, 0.05).unwrap();
            let sh = hoeffding_bounds(&sm, 0.05).unwrap();
            prop_assert!((sh.upper - (a * oh.upper + b)).abs() < 1e-9 * (1.0 + a));
            let om = maurer_pontil_bounds(&s, 0.05).unwrap();
            let smp = maurer_pontil_bounds(&sm, 0.05).unwrap();
            prop_assert!((smp.upper - (a * om.upper + b)).abs() < 1e-8 * (1.0 + a));
        }

        #[test]
        fn nest_cumulative_frequency_domination(seed in 0u64..500, per_bound in 0.001f64..0.5) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(2..7);
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(0..25)).collect();
            if counts.iter().sum::<u64>() == 0 { return Ok(()); }
            let n: u64 = counts.iter().sum();
            let t = nest_thresholds(&counts, per_bound).unwrap();
            let mut cum = 0u64;
            for i in 0..m - 1 {
                cum += counts[i];
                prop_assert!(t[i + 1] <= cum as f64 / n as f64 + 1e-12);
            }
            for w in t.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }
    }
}
