//! Summary statistics and the tests used by the acceptance criteria.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};
use statrs::statistics::{Data, OrderStatistics, Statistics};

pub const QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// `(tau, value)` pairs for [`QUANTILES`].
    pub quantiles: Vec<(f64, f64)>,
}

pub fn moments(xs: &[f64]) -> Moments {
    let n = xs.len();
    if n == 0 {
        return Moments::default();
    }
    let mean = xs.mean();
    let std_error = if n > 1 { xs.std_dev() / (n as f64).sqrt() } else { 0.0 };
    let mut data = Data::new(xs.to_vec());
    let quantiles = QUANTILES.iter().map(|&q| (q, data.quantile(q))).collect();
    Moments {
        count: n,
        mean,
        std_error,
        quantiles,
    }
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    Data::new(xs.to_vec()).median()
}

/// Frequency `k / n` and its binomial standard error.
pub fn proportion(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let f = k as f64 / n as f64;
    (f, (f * (1.0 - f) / n as f64).sqrt())
}

/// Whether `mean_b - mean_a` exceeds `z` standard errors of the difference.
pub fn significant_increase(a: &Moments, b: &Moments, z: f64) -> bool {
    let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    b.mean - a.mean > z * se
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignTest {
    pub increases: u64,
    pub decreases: u64,
    pub ties: u64,
    /// `P(X >= increases)` for `X ~ Bin(increases + decreases, 1/2)`.
    pub p_value: f64,
}

/// One-sided sign test for `after > before` over paired samples.
pub fn sign_test(before: &[usize], after: &[usize]) -> SignTest {
    let (mut inc, mut dec, mut ties) = (0u64, 0u64, 0u64);
    for (a, b) in before.iter().zip(after) {
        match b.cmp(a) {
            std::cmp::Ordering::Greater => inc += 1,
            std::cmp::Ordering::Less => dec += 1,
            std::cmp::Ordering::Equal => ties += 1,
        }
    }
    let n = inc + dec;
    let p_value = if inc == 0 {
        1.0
    } else {
        Binomial::new(0.5, n).expect("valid binomial").sf(inc - 1)
    };
    SignTest {
        increases: inc,
        decreases: dec,
        ties,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_small_sample() {
        let m = moments(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        // Sample standard deviation sqrt(5/3), divided by 2.
        assert!((m.std_error - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(moments(&[7.0]).std_error, 0.0);
    }

    #[test]
    fn sign_test_values() {
        // 10 increases, 0 decreases: p = 2^-10.
        let t = sign_test(&[0; 12], &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0]);
        assert_eq!((t.increases, t.decreases, t.ties), (10, 0, 2));
        assert!((t.p_value - 1.0 / 1024.0).abs() < 1e-12);
        // 2 of 3: P(X >= 2) = 4/8.
        let t = sign_test(&[0, 0, 1], &[1, 1, 0]);
        assert!((t.p_value - 0.5).abs() < 1e-12);
        assert_eq!(sign_test(&[1], &[1]).p_value, 1.0);
    }

    #[test]
    fn increase_test() {
        let a = Moments { mean: 1.0, std_error: 0.1, ..Moments::default() };
        let b = Moments { mean: 1.5, std_error: 0.1, ..Moments::default() };
        assert!(significant_increase(&a, &b, 3.0));
        assert!(!significant_increase(&b, &a, 3.0));
        assert_eq!(proportion(1, 4), (0.25, (0.25f64 * 0.75 / 4.0).sqrt()));
    }
}
