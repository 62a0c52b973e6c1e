//! Bound-method tags and a single dispatch point used by the coverage
//! harness and the CLI.

use crate::bounds::{box_bounds, hoeffding_bounds, maurer_pontil_bounds, nest_bounds};
use crate::bounds::{BoundInterval, Side};
use crate::error::Result;
use crate::refine::{merged_nest_bounds, nearly_uniform_nest_bounds};
use crate::sample::CategorizedSample;

/// The available mean-bound methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Hoeffding,
    MaurerPontil,
    BonferroniBox,
    BonferroniNest,
    /// Nest bound after merging down to the given number of categories.
    MergedNest {
        clusters: usize,
    },
    /// Nest bound allowing the given number of frequency-bound failures.
    NearlyUniform {
        allowed_failures: usize,
    },
}

impl Method {
    /// The four parameter-free methods.
    pub const BASE: [Method; 4] = [
        Method::BonferroniBox,
        Method::BonferroniNest,
        Method::Hoeffding,
        Method::MaurerPontil,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Hoeffding => "hoeffding",
            Method::MaurerPontil => "maurer-pontil",
            Method::BonferroniBox => "box",
            Method::BonferroniNest => "nest",
            Method::MergedNest { .. } => "merged-nest",
            Method::NearlyUniform { .. } => "nearly-uniform",
        }
    }

    /// Refinement parameter (h or a), when the method carries one.
    pub fn param(&self) -> Option<usize> {
        match self {
            Method::MergedNest { clusters } => Some(*clusters),
            Method::NearlyUniform { allowed_failures } => Some(*allowed_failures),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Computes the requested bound on the sample.
///
/// Hoeffding and Maurer-Pontil are inherently simultaneous two-sided
/// intervals, so they ignore the requested side and report both ends.
pub fn compute_bounds(
    method: Method,
    sample: &CategorizedSample,
    delta: f64,
    side: Side,
) -> Result<BoundInterval> {
    match method {
        Method::Hoeffding => hoeffding_bounds(sample, delta),
        Method::MaurerPontil => maurer_pontil_bounds(sample, delta),
        Method::BonferroniBox => box_bounds(sample, delta, side),
        Method::BonferroniNest => nest_bounds(sample, delta, side),
        Method::MergedNest { clusters } => merged_nest_bounds(sample, delta, clusters, side),
        Method::NearlyUniform { allowed_failures } => {
            nearly_uniform_nest_bounds(sample, delta, allowed_failures, side)
        }
    }
}
