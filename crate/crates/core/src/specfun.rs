//! Special functions: the Gamma function and the confluent hypergeometric 1F1.

use crate::error::{Error, Result};

// Lanczos (g = 7, n = 9) coefficients, as tabulated in the GSL and Numerical
// Recipes literature. Relative accuracy is well below 1e-12 for x > 0.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function for positive real arguments.
///
/// Only `x > 0` is supported; nothing in this crate evaluates Gamma at
/// nonpositive points.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("gamma requires x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos argument comfortably above 0.5
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_positive(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

const HYP1F1_TERM_CAP: usize = 10_000;
const HYP1F1_EPS: f64 = 1e-16;

/// Confluent hypergeometric function 1F1(a; b; x) for real arguments.
///
/// The power series is summed directly for `x >= 0`; for `x < 0` the Kummer
/// transformation `1F1(a;b;x) = e^x 1F1(b-a;b;-x)` avoids the catastrophic
/// cancellation of the raw alternating series.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::DomainError(format!(
            "hyp1f1 pole: b = {b} is a nonpositive integer"
        )));
    }
    if x < 0.0 {
        let series = hyp1f1_series(b - a, b, -x)?;
        Ok(x.exp() * series)
    } else {
        hyp1f1_series(a, b, x)
    }
}

/// Raw power series for 1F1. Exposed for cross-checks against the transformed
/// evaluation path; prefer [`hyp1f1`] for negative arguments.
pub fn hyp1f1_raw_series(a: f64, b: f64, x: f64) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::DomainError(format!(
            "hyp1f1 pole: b = {b} is a nonpositive integer"
        )));
    }
    hyp1f1_series(a, b, x)
}

fn hyp1f1_series(a: f64, b: f64, x: f64) -> Result<f64> {
    // terminating polynomial case: a a nonpositive integer
    let terminates = a <= 0.0 && a == a.floor();
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64; // Kahan correction
    for k in 0..HYP1F1_TERM_CAP {
        let kf = k as f64;
        if terminates && a + kf == 0.0 {
            return Ok(sum + comp);
        }
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() <= HYP1F1_EPS * sum.abs().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::NoConverge { terms: HYP1F1_TERM_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(2.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-13);
        // product recurrence from Gamma(0.5): 2.5 * 1.5 * 0.5 * sqrt(pi)
        assert_relative_eq!(gamma(3.5).unwrap(), 3.3233509704478426, max_relative = 1e-12);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence_on_unit_interval_sweep() {
        let mut x = 0.05;
        while x < 10.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            x += 0.0437;
        }
    }

    #[test]
    fn hyp1f1_at_zero_is_one() {
        assert_eq!(hyp1f1(2.3, 0.5, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn hyp1f1_collapses_to_exponential() {
        assert_relative_eq!(hyp1f1(1.0, 1.0, 2.0).unwrap(), 2.0f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(hyp1f1(1.0, 1.0, 2.0).unwrap(), 7.38905609893065, max_relative = 1e-10);
    }

    #[test]
    fn hyp1f1_one_two_is_expm1_over_x() {
        // 1F1(1;2;x) = (e^x - 1)/x, checked at x = -1 against the raw series
        let val = hyp1f1(1.0, 2.0, -1.0).unwrap();
        assert_relative_eq!(val, 1.0 - (-1.0f64).exp(), max_relative = 1e-12);
        let raw = hyp1f1_raw_series(1.0, 2.0, -1.0).unwrap();
        assert_relative_eq!(val, raw, max_relative = 1e-10);
        assert_relative_eq!(val, 0.6321205588285577, max_relative = 1e-7);
    }

    #[test]
    fn hyp1f1_rejects_nonpositive_integer_b() {
        assert!(hyp1f1(1.0, 0.0, 1.0).is_err());
        assert!(hyp1f1(1.0, -3.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn kummer_transform_consistency(a in 0.3f64..3.0, b in 0.4f64..3.0, x in -10.0f64..0.0) {
            let transformed = hyp1f1(a, b, x).unwrap();
            let raw = hyp1f1_raw_series(a, b, x).unwrap();
            prop_assert!(
                (transformed - raw).abs() <= 1e-8 * raw.abs().max(1.0),
                "a={a} b={b} x={x}: {transformed} vs {raw}"
            );
        }

        #[test]
        fn contiguity_relation(a in 0.5f64..3.0, b in 0.5f64..3.0, x in -5.0f64..5.0) {
            // b*M(a;b;x) - b*M(a-1;b;x) - x*M(a;b+1;x) = 0
            let lhs = b * hyp1f1(a, b, x).unwrap()
                - b * hyp1f1(a - 1.0, b, x).unwrap()
                - x * hyp1f1(a, b + 1.0, x).unwrap();
            let scale = hyp1f1(a, b, x).unwrap().abs().max(1.0);
            prop_assert!(lhs.abs() <= 1e-8 * scale, "residual {lhs}");
        }
    }
}
