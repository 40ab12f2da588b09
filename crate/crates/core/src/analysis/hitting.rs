use alloc::vec::Vec;

use crate::geometry::Line;
use crate::processes::Realization;
use crate::walk::Trajectory;

/// First-entry times of the shadow trajectory into rays, half-lines and
/// singletons. `None` means the set is not entered within the trajectory.
#[derive(Clone, Debug)]
pub struct HittingTimes {
    /// `Ŝ_0, Ŝ_1, ...`
    shadows: Vec<f64>,
    /// `max(Ŝ_1..Ŝ_n)` at position `n - 1`.
    run_max: Vec<f64>,
    /// `min(Ŝ_1..Ŝ_n)` at position `n - 1`.
    run_min: Vec<f64>,
}

impl HittingTimes {
    pub fn new(traj: &Trajectory) -> HittingTimes {
        let shadows: Vec<f64> = traj.shadows().collect();
        let mut run_max = Vec::with_capacity(traj.len());
        let mut run_min = Vec::with_capacity(traj.len());
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for &u in &shadows[1..] {
            hi = hi.max(u);
            lo = lo.min(u);
            run_max.push(hi);
            run_min.push(lo);
        }
        HittingTimes {
            shadows,
            run_max,
            run_min,
        }
    }

    #[inline]
    pub fn shadow(&self, n: usize) -> f64 {
        self.shadows[n]
    }

    pub fn shadows(&self) -> &[f64] {
        &self.shadows
    }

    /// Number of steps of the underlying trajectory.
    pub fn steps(&self) -> usize {
        self.shadows.len() - 1
    }

    /// `T_{[x, ∞)}`.
    pub fn t_at_least(&self, x: f64) -> Option<usize> {
        let i = self.run_max.partition_point(|&m| m < x);
        (i < self.run_max.len()).then_some(i + 1)
    }

    /// `T_{(x, ∞)}`.
    pub fn t_above(&self, x: f64) -> Option<usize> {
        let i = self.run_max.partition_point(|&m| m <= x);
        (i < self.run_max.len()).then_some(i + 1)
    }

    /// `T_{(-∞, x)}`.
    pub fn t_below(&self, x: f64) -> Option<usize> {
        let i = self.run_min.partition_point(|&m| m >= x);
        (i < self.run_min.len()).then_some(i + 1)
    }

    /// `T_{(-∞, 0)}`.
    pub fn t_negative(&self) -> Option<usize> {
        self.t_below(0.0)
    }

    /// `T_x`.
    pub fn t_point(&self, x: f64) -> Option<usize> {
        self.shadows[1..].iter().position(|&u| u == x).map(|i| i + 1)
    }

    /// `max(Ŝ_0..Ŝ_n)`.
    pub fn max_through(&self, n: usize) -> f64 {
        if n == 0 {
            self.shadows[0]
        } else {
            self.run_max[n - 1].max(self.shadows[0])
        }
    }

    /// `min(Ŝ_0..Ŝ_n)`.
    pub fn min_through(&self, n: usize) -> f64 {
        if n == 0 {
            self.shadows[0]
        } else {
            self.run_min[n - 1].min(self.shadows[0])
        }
    }
}

/// `T^R_x`: the step at which the last point with shadow `x` is visited.
/// `None` if there is no such point or one of them is never visited.
pub fn t_both_copies(real: &Realization, traj: &Trajectory, x: f64) -> Option<usize> {
    let mut latest = None;
    for line in Line::BOTH {
        if let Ok(i) = real.line(line).binary_search_by(|v| v.total_cmp(&x)) {
            let t = traj.visit_time(line, i)?;
            latest = latest.max(Some(t));
        }
    }
    latest
}
