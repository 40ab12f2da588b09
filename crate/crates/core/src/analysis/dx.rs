use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::hitting::HittingTimes;
use crate::geometry::Line;
use crate::processes::Realization;
use crate::walk::Trajectory;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DxRecord {
    pub x: f64,
    /// Distinct unvisited shadows in `(0, x)` at time `T_{[x,∞)}`, increasing.
    pub remaining_z: Vec<f64>,
    pub value: f64,
    /// Set when `T_{(-∞,0)} < T_{[x,∞)}`; the value is then 0.
    pub degenerate_zero: bool,
    /// `T_{[x,∞)}`, if reached.
    pub t_reach: Option<usize>,
}

/// `max_i (2 z_i - z_{i+1} - x)` over `0 = z_n < ... < z_1 < z_0 = x`, where
/// `remaining` lists `z_{n-1} < ... < z_1`.
pub fn dx_value(x: f64, remaining: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut upper = x;
    for &z in remaining.iter().rev().chain(core::iter::once(&0.0)) {
        best = best.max(2.0 * upper - z - x);
        upper = z;
    }
    best
}

/// `D_x` for the walk `traj` on `real`, with `x > 0`.
///
/// Errors with [`Error::Untracked`] when neither `[x, ∞)` nor `(-∞, 0)` is
/// entered within the trajectory.
pub fn compute_dx(real: &Realization, traj: &Trajectory, x: f64) -> Result<DxRecord> {
    compute_dx_with(real, traj, &HittingTimes::new(traj), x)
}

pub(crate) fn compute_dx_with(
    real: &Realization,
    traj: &Trajectory,
    hits: &HittingTimes,
    x: f64,
) -> Result<DxRecord> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::param("x", alloc::format!("must be positive, got {x}")));
    }
    let t_reach = hits.t_at_least(x);
    let t_neg = hits.t_negative();
    let degenerate = match (t_neg, t_reach) {
        (None, None) => return Err(Error::Untracked(x)),
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
    };
    if degenerate {
        return Ok(DxRecord {
            x,
            remaining_z: Vec::new(),
            value: 0.0,
            degenerate_zero: true,
            t_reach,
        });
    }
    let t = t_reach.expect("reached before the negative half-line");
    let mut remaining = Vec::new();
    for line in Line::BOTH {
        let pts = real.line(line);
        let lo = pts.partition_point(|&v| v <= 0.0);
        let hi = pts.partition_point(|&v| v < x);
        for (i, &v) in pts.iter().enumerate().take(hi).skip(lo) {
            if traj.visit_time(line, i).is_none_or(|time| time > t) {
                remaining.push(v);
            }
        }
    }
    remaining.sort_unstable_by(f64::total_cmp);
    remaining.dedup();
    Ok(DxRecord {
        x,
        value: dx_value(x, &remaining),
        remaining_z: remaining,
        degenerate_zero: false,
        t_reach,
    })
}
