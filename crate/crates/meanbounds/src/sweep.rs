//! Deterministic experiment scenarios: count shapes, value shapes, and the
//! bound-versus-n sweep behind the CLI's CSV output.

use crate::bounds::Side;
use crate::error::{Error, Result};
use crate::method::{compute_bounds, Method};
use crate::sample::CategorizedSample;

/// How observations are spread over categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountShape {
    /// Equal counts per category (largest-remainder rounding when the
    /// total is not divisible by m).
    Balanced,
    /// Each category ideally holds twice the previous one's weight,
    /// rounded by largest remainder to sum exactly to n.
    Doubling,
}

impl CountShape {
    pub fn name(&self) -> &'static str {
        match self {
            CountShape::Balanced => "balanced",
            CountShape::Doubling => "doubling",
        }
    }
}

/// How category values grow with the index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueShape {
    /// 0, 1, .., m-1.
    Linear,
    /// 2^0, 2^1, .., 2^(m-1).
    Exponential,
    /// 2^(scale (i-1) / m) for i = 1..m.
    Power { scale: f64 },
}

impl ValueShape {
    pub fn name(&self) -> String {
        match self {
            ValueShape::Linear => "linear".into(),
            ValueShape::Exponential => "exponential".into(),
            ValueShape::Power { scale } => format!("power{scale}"),
        }
    }
}

/// Largest-remainder rounding of `n * weights` to integers summing to n.
/// Ties go to the lower index, so the outcome is deterministic.
fn largest_remainder(weights: &[f64], n: u64) -> Vec<u64> {
    let ideal: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut counts: Vec<u64> = ideal.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - ideal[a].floor();
        let rb = ideal[b] - ideal[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take((n - assigned) as usize) {
        counts[i] += 1;
    }
    counts
}

/// Deterministic counts for a scenario at total n.
pub fn scenario_counts(shape: CountShape, m: usize, n: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(Error::Domain("at least two categories required".into()));
    }
    if n == 0 {
        return Err(Error::Domain("total count must be positive".into()));
    }
    match shape {
        CountShape::Balanced => {
            if n < m as u64 {
                return Err(Error::Domain(format!(
                    "balanced counts need n >= m, got n={n}, m={m}"
                )));
            }
            Ok(largest_remainder(&vec![1.0 / m as f64; m], n))
        }
        CountShape::Doubling => {
            let weights: Vec<f64> = (0..m).map(|i| 2f64.powi(i as i32)).collect();
            let total: f64 = weights.iter().sum();
            let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
            Ok(largest_remainder(&weights, n))
        }
    }
}

/// Deterministic values for a scenario.
pub fn scenario_values(shape: ValueShape, m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::Domain("at least two categories required".into()));
    }
    Ok(match shape {
        ValueShape::Linear => (0..m).map(|i| i as f64).collect(),
        ValueShape::Exponential => (0..m).map(|i| 2f64.powi(i as i32)).collect(),
        ValueShape::Power { scale } => (0..m)
            .map(|i| 2f64.powf(scale * i as f64 / m as f64))
            .collect(),
    })
}

/// A bound-versus-n experiment specification.
#[derive(Debug, Clone)]
pub struct SweepScenario {
    pub count_shape: CountShape,
    pub value_shape: ValueShape,
    pub m: usize,
    pub n_grid: Vec<u64>,
    pub delta: f64,
    pub methods: Vec<Method>,
    /// Extra merged-nest rows, one per requested cluster count.
    pub merged_clusters: Vec<usize>,
    /// Extra nearly-uniform rows, one per allowed-failure count.
    pub allowed_failures: Vec<usize>,
    pub side: Side,
}

impl SweepScenario {
    pub fn name(&self) -> String {
        format!(
            "{}-{}-m{}",
            self.count_shape.name(),
            self.value_shape.name(),
            self.m
        )
    }
}

/// One output row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: String,
    pub method: Method,
    pub m: usize,
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
}

/// Runs the scenario over its n grid, one row per (n, method).
pub fn run_sweep(scenario: &SweepScenario) -> Result<Vec<SweepRow>> {
    let values = scenario_values(scenario.value_shape, scenario.m)?;
    let name = scenario.name();
    let mut all_methods = scenario.methods.clone();
    all_methods.extend(
        scenario
            .merged_clusters
            .iter()
            .map(|&clusters| Method::MergedNest { clusters }),
    );
    all_methods.extend(
        scenario
            .allowed_failures
            .iter()
            .map(|&allowed_failures| Method::NearlyUniform { allowed_failures }),
    );
    if all_methods.is_empty() {
        return Err(Error::Domain("no methods requested".into()));
    }
    let mut rows = Vec::with_capacity(scenario.n_grid.len() * all_methods.len());
    for &n in &scenario.n_grid {
        let counts = scenario_counts(scenario.count_shape, scenario.m, n)?;
        let sample = CategorizedSample::new(counts, values.clone())?;
        for &method in &all_methods {
            let bound = compute_bounds(method, &sample, scenario.delta, scenario.side)?;
            rows.push(SweepRow {
                scenario: name.clone(),
                method,
                m: scenario.m,
                n,
                lower: bound.lower,
                upper: bound.upper,
            });
        }
    }
    Ok(rows)
}
