//! Probably-approximately-correct bounds on the mean of a discrete
//! distribution, computed from i.i.d. category counts with known category
//! values.
//!
//! The likely-set methods (Bonferroni box and Bonferroni nest) invert exact
//! binomial tails to bound category probabilities simultaneously, then
//! extremize the mean over the resulting set; they are strongest for small
//! samples. Hoeffding and Maurer-Pontil intervals are included as
//! single-variable baselines. Two refinements trade structure for budget:
//! merging neighboring categories and allowing a bounded number of
//! frequency-bound failures (nearly uniform bounds). A Monte Carlo harness
//! estimates empirical bound-failure rates against the PAC contract.

pub mod binom;
pub mod bounds;
mod error;
mod kahan;
pub mod method;
pub mod refine;
pub mod sample;
pub mod sweep;
pub mod verify;

pub use binom::{cdf as binom_cdf, invert_lower, invert_upper, InversionQuery};
pub use bounds::{
    box_bounds, box_intervals, box_maximize, hoeffding_bounds, maurer_pontil_bounds, nest_bounds,
    nest_eval, nest_thresholds, BoundInterval, NestState, ProbInterval, Side,
};
pub use error::{Error, Result};
pub use method::{compute_bounds, Method};
pub use refine::{
    apply_merge, merge_plan, merged_nest_bounds, nearly_uniform_nest_bounds, nu_correction,
    nu_delta, Clustering, MergeDirection, NuCorrection,
};
pub use sample::{sample_stats, CategorizedSample, SampleStats};
pub use sweep::{
    run_sweep, scenario_counts, scenario_values, CountShape, SweepRow, SweepScenario, ValueShape,
};
pub use verify::{
    brute_force_max_mean, brute_force_merge, coverage_estimate, sample_multinomial, trial_rng,
    CoverageReport, SimplexConstraints, TrueDistribution,
};
