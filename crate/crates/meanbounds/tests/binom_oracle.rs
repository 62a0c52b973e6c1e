//! Independent oracles for the binomial CDF and its inversions.
//!
//! The CDF is cross-checked against exact rational summation (big-integer
//! binomial coefficients) over a dense small-n grid, and against frozen
//! 60-digit references for trial counts up to one million. Inversion roots
//! are bracketed with the rational CDF evaluated directly on the defining
//! inequalities, which keeps the oracle independent of the mirrored-tail
//! construction used by the implementation.

#![allow(clippy::excessive_precision)] // reference values keep their full digits

use meanbounds::{binom_cdf, invert_lower, invert_upper, InversionQuery};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact B(n, k, p) by term-wise rational summation of Eq.-style masses.
fn exact_cdf(n: u64, k: i64, p: &BigRational) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    if k as u64 >= n {
        return BigRational::one();
    }
    let q = big(1) - p;
    let mut coeff = BigInt::one(); // C(n, 0)
    let mut total = BigRational::zero();
    for i in 0..=(k as u64) {
        if i > 0 {
            coeff = coeff * BigInt::from(n - i + 1) / BigInt::from(i);
        }
        let term =
            BigRational::from_integer(coeff.clone()) * p.pow(i as i32) * q.pow((n - i) as i32);
        total += term;
    }
    total
}

fn ratio_from_f64(x: f64) -> BigRational {
    Ratio::from_float(x).expect("finite float")
}

#[test]
fn cdf_matches_exact_rational_summation() {
    let probs: [(i64, i64); 5] = [(1, 10), (1, 3), (1, 2), (9, 10), (99, 100)];
    for n in [1u64, 2, 5, 10, 17, 50, 97, 200] {
        for (num, den) in probs {
            let p = big(num) / big(den);
            let pf = num as f64 / den as f64;
            for k in [0i64, 1, (n / 3) as i64, (n / 2) as i64, n as i64 - 1] {
                let exact = exact_cdf(n, k, &p).to_f64().unwrap();
                let got = binom_cdf(n, k, pf).unwrap();
                let tol = 1e-12 * exact.max(f64::MIN_POSITIVE);
                assert!(
                    (got - exact).abs() <= tol.max(1e-300),
                    "B({n},{k},{num}/{den}): got {got}, exact {exact}"
                );
            }
        }
    }
}

/// Frozen references computed with 60-digit arithmetic; the relative-error
/// contract is 1e-10 over 0 <= k <= n <= 1e6, checked here with margin.
#[test]
fn cdf_matches_high_precision_references() {
    let cases: [(u64, i64, f64, f64); 14] = [
        (10, 5, 0.5, 0.623046875),
        (100, 42, 0.37, 0.8722250475070745542518),
        (1000, 500, 0.5, 0.5126125090891804009534),
        (1000, 400, 0.35, 0.9995465117176181451848),
        (1_000_000, 500_000, 0.5, 0.5003989421806658750445),
        (1_000_000, 499_000, 0.5, 0.02280414993269104321015),
        (1_000_000, 1_000, 0.001, 0.508409368220775807666),
        (1_000_000, 100, 0.0001, 0.5265621985632192897788),
        (1_000_000, 999_999, 0.999, 1.0),
        (50, 0, 0.05, 0.07694497527671332927429),
        (50, 49, 0.95, 0.9230550247232866707257),
        (1_000_000, 502_000, 0.5, 0.9999684629880654000456),
        (1_000_000, 490_000, 0.5, 2.772181643849612301731e-89),
        (123_456, 41_152, 0.3333, 0.5112485713565337266934),
    ];
    for (n, k, p, expect) in cases {
        let got = binom_cdf(n, k, p).unwrap();
        let rel = (got - expect).abs() / expect.max(f64::MIN_POSITIVE);
        assert!(
            rel <= 1e-10,
            "B({n},{k},{p}): got {got}, expect {expect}, rel {rel}"
        );
    }
    // Complement accuracy where the upper tail is the small quantity.
    let upper_tail = 1.0 - binom_cdf(1_000_000, 502_000, 0.5).unwrap();
    let rel = (upper_tail - 3.153701193459995441078e-5).abs() / 3.1537e-5;
    assert!(rel <= 1e-10, "upper tail rel error {rel}");
}

/// Brackets each inversion root with the exact rational CDF applied to the
/// defining inequality (not the mirrored identity the implementation uses).
#[test]
fn inversion_roots_bracketed_by_rational_cdf() {
    let eps = ratio_from_f64(1e-9);
    for (n, k, delta) in [
        (10u64, 5u64, 0.05f64),
        (10, 3, 0.05),
        (30, 10, 0.01),
        (40, 7, 0.1),
        (7, 2, 0.25),
    ] {
        let delta_r = ratio_from_f64(delta);
        let upper = invert_upper(InversionQuery::new(n, k, delta).unwrap());
        let p = ratio_from_f64(upper);
        // B(n, k, .) is decreasing: just left of the root the tail still
        // clears delta, just right of it the tail has fallen below.
        assert!(
            exact_cdf(n, k as i64, &(&p - &eps)) >= delta_r,
            "p_plus({n},{k},{delta}) = {upper} sits above the root"
        );
        assert!(
            exact_cdf(n, k as i64, &(&p + &eps)) < delta_r,
            "p_plus({n},{k},{delta}) = {upper} sits below the root"
        );

        let lower = invert_lower(InversionQuery::new(n, k, delta).unwrap());
        if k > 0 {
            let p = ratio_from_f64(lower);
            // 1 - B(n, k-1, .) is increasing in p.
            let g_left = big(1) - exact_cdf(n, k as i64 - 1, &(&p - &eps).max(BigRational::zero()));
            let g_right = big(1) - exact_cdf(n, k as i64 - 1, &(&p + &eps));
            assert!(
                g_left < delta_r,
                "p_minus({n},{k},{delta}) = {lower} sits above the root"
            );
            assert!(
                g_right >= delta_r,
                "p_minus({n},{k},{delta}) = {lower} sits below the root"
            );
        } else {
            assert_eq!(lower, 0.0);
        }
    }
}

/// Operational rounding contract: the upper inversion returns the high end
/// of its final bracket, so the computed tail there has already fallen
/// below delta, and nudging further out keeps it below. (Against the exact
/// root the bracket width 2^-80 is far below CDF evaluation error, so the
/// sign of the overshoot is only meaningful against the computed tail.)
#[test]
fn inversion_rounding_is_conservative() {
    for (n, k, delta) in [(10u64, 5u64, 0.05f64), (100, 37, 0.2), (3, 1, 0.4)] {
        let upper = invert_upper(InversionQuery::new(n, k, delta).unwrap());
        assert!(
            binom_cdf(n, k as i64, upper).unwrap() < delta,
            "upper inversion rounded down at ({n},{k},{delta})"
        );
        assert!(binom_cdf(n, k as i64, (upper + 1e-9).min(1.0)).unwrap() < delta);
        // Mirror construction: the lower inversion is exactly one minus an
        // upper inversion, inheriting the same bracket side.
        let lower = invert_lower(InversionQuery::new(n, k, delta).unwrap());
        let mirrored = invert_upper(InversionQuery::new(n, n - k, delta).unwrap());
        assert_eq!(lower, 1.0 - mirrored);
    }
}

#[test]
fn rational_oracle_self_checks() {
    // B(10, 5, 1/2) = 638/1024 exactly.
    let p = big(1) / big(2);
    let expect = big(638) / big(1024);
    assert_eq!(exact_cdf(10, 5, &p), expect);
    // Total mass telescopes to one.
    assert_eq!(exact_cdf(10, 10, &p), BigRational::one());
    assert!(exact_cdf(10, -1, &p).is_zero());
    assert!(
        (exact_cdf(10, 9, &p) - (BigRational::one() - (big(1) / big(1024)))).abs()
            < ratio_from_f64(1e-30)
    );
}
