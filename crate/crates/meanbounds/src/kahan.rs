//! Compensated (Neumaier) summation helpers.
//!
//! Bound computations sum up to thousands of products of probabilities and
//! category values; plain accumulation could loosen a bound by rounding
//! noise, so sums and dot products go through an error-free-transformation
//! accumulator.

/// Running Neumaier sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator.
pub(crate) fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Accumulator::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Compensated dot product; panics if lengths differ.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    sum(a.iter().zip(b).map(|(x, y)| x * y))
}
