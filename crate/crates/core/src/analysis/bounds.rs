use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Tail bound on `P(B_n)` for two lines crossing at angle `alpha`:
/// `4 e^{-n sin α + 1} / (1 - e^{-sin α})`.
pub fn b_n_bound(n: u32, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(alpha > 0.0 && alpha < core::f64::consts::PI) {
        return Err(Error::param("alpha", alloc::format!("must lie in (0, pi), got {alpha}")));
    }
    let s = libm::sin(alpha);
    Ok(4.0 * libm::exp(1.0 - n as f64 * s) / (1.0 - libm::exp(-s)))
}

/// First term of the bound on `P(A_m)` for duplicated lines at distance `r`:
/// `e^{-2rm} (1 - e^{-2r}) / 2`.
pub fn a_m_first_term(m: u32, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::param("r", alloc::format!("must be positive, got {r}")));
    }
    Ok(0.5 * libm::exp(-2.0 * r * m as f64) * (1.0 - libm::exp(-2.0 * r)))
}

/// Empirical `P(G > t)` from a sample of gaps.
pub fn survival(sample: &[f64], t: f64) -> Option<f64> {
    (!sample.is_empty()).then(|| sample.iter().filter(|&&g| g > t).count() as f64 / sample.len() as f64)
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundParams {
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub max_index: u32,
    /// Observed gaps `X_{τ_2} - X_{τ_1}` between the first two cluster leads.
    pub lead_gaps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundRow {
    pub name: &'static str,
    pub index: u32,
    pub value: f64,
    /// Empirical `P(X_{τ_2} - X_{τ_1} > r m)` for the `A_m` rows.
    pub empirical_tail: Option<f64>,
}

/// `b_n` rows for `n = 1..=max_index` when `alpha` is given, and `a_m` rows
/// when `r` is given.
pub fn theoretical_bounds(params: &BoundParams) -> Result<Vec<BoundRow>> {
    if params.max_index == 0 {
        return Err(Error::param("max_index", "must be at least 1"));
    }
    let mut rows = Vec::new();
    if let Some(alpha) = params.alpha {
        for n in 1..=params.max_index {
            rows.push(BoundRow {
                name: "b_n",
                index: n,
                value: b_n_bound(n, alpha)?,
                empirical_tail: None,
            });
        }
    }
    if let Some(r) = params.r {
        for m in 1..=params.max_index {
            rows.push(BoundRow {
                name: "a_m",
                index: m,
                value: a_m_first_term(m, r)?,
                empirical_tail: survival(&params.lead_gaps, r * m as f64),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn reference_values() {
        // 4 e^{-9} / (1 - e^{-1}) and e^{-2} (1 - e^{-2}) / 2, evaluated independently.
        let b = b_n_bound(10, FRAC_PI_2).unwrap();
        assert!((b - 7.809257418577363e-4).abs() < 1e-15);
        let a = a_m_first_term(1, 1.0).unwrap();
        assert!((a - 0.05850982217393926).abs() < 1e-15);
    }

    #[test]
    fn other_angles() {
        let b = b_n_bound(3, core::f64::consts::FRAC_PI_3).unwrap();
        assert!((b - 1.3965639626205926).abs() < 1e-12);
        let a = a_m_first_term(3, 0.5).unwrap();
        assert!((a - 0.015735714739564883).abs() < 1e-15);
    }

    #[test]
    fn monotone() {
        for n in 1..30 {
            assert!(b_n_bound(n + 1, 1.0).unwrap() < b_n_bound(n, 1.0).unwrap());
            assert!(a_m_first_term(n + 1, 0.7).unwrap() < a_m_first_term(n, 0.7).unwrap());
        }
    }

    #[test]
    fn domain() {
        assert!(b_n_bound(0, 1.0).is_err());
        assert!(b_n_bound(1, 0.0).is_err());
        assert!(b_n_bound(1, core::f64::consts::PI).is_err());
        assert!(a_m_first_term(1, 0.0).is_err());
        assert!(a_m_first_term(0, 1.0).is_err());
        assert!(theoretical_bounds(&BoundParams::default()).is_err());
    }

    #[test]
    fn table() {
        let rows = theoretical_bounds(&BoundParams {
            alpha: Some(FRAC_PI_2),
            r: Some(1.0),
            max_index: 2,
            lead_gaps: alloc::vec![0.5, 1.5, 2.5, 3.0],
        })
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[2].empirical_tail, Some(0.75));
        assert_eq!(rows[3].empirical_tail, Some(0.5));
        assert_eq!(survival(&[], 1.0), None);
    }
}
