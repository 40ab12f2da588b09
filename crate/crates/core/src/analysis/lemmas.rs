use alloc::collections::BTreeSet;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::dx::compute_dx_with;
use super::hitting::{t_both_copies, HittingTimes};
use crate::geometry::{Geometry, Line};
use crate::processes::{Construction, Realization};
use crate::walk::Trajectory;
use crate::{Error, Result};

/// Number of instances checked and violated, with the first offending step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Tally {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

impl Tally {
    fn record(&mut self, ok: bool, step: usize) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            self.first_violation.get_or_insert(step);
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LemmaReport {
    pub distance_a: Tally,
    pub distance_b: Tally,
    pub empty_int: Tally,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.distance_a.violations + self.distance_b.violations + self.empty_int.violations
    }

    pub fn merge(&mut self, other: &LemmaReport) {
        self.distance_a.merge(&other.distance_a);
        self.distance_b.merge(&other.distance_b);
        self.empty_int.merge(&other.empty_int);
    }
}

fn require_shadow_space(real: &Realization, op: &'static str) -> Result<()> {
    match real.space().geometry {
        Geometry::IntersectingLines { .. } => Err(Error::WrongKind {
            op,
            what: "intersecting lines",
        }),
        _ => Ok(()),
    }
}

#[inline]
fn unvisited_at(traj: &Trajectory, line: Line, i: usize, n: usize) -> bool {
    traj.visit_time(line, i).is_none_or(|t| t > n)
}

/// Unvisited points whose shadows lie inside the running span `[a, b]`.
struct Holes<'a> {
    real: &'a Realization,
    sets: [BTreeSet<usize>; 2],
    // Per line, positions `lo..hi` are the points with shadow in `[a, b]`.
    lo: [usize; 2],
    hi: [usize; 2],
}

impl<'a> Holes<'a> {
    fn new(real: &'a Realization, traj: &Trajectory, u0: f64) -> Self {
        let mut holes = Holes {
            real,
            sets: [BTreeSet::new(), BTreeSet::new()],
            lo: [0; 2],
            hi: [0; 2],
        };
        for line in Line::BOTH {
            let pts = real.line(line);
            let k = line.index();
            holes.lo[k] = pts.partition_point(|&v| v < u0);
            holes.hi[k] = holes.lo[k];
        }
        holes.expand(traj, u0, u0, 0);
        holes
    }

    /// Grows the span to `[a, b]`, adding points unvisited at time `n`.
    fn expand(&mut self, traj: &Trajectory, a: f64, b: f64, n: usize) {
        for line in Line::BOTH {
            let pts = self.real.line(line);
            let k = line.index();
            let new_lo = pts.partition_point(|&v| v < a);
            let new_hi = pts.partition_point(|&v| v <= b);
            for i in (new_lo..self.lo[k]).chain(self.hi[k]..new_hi) {
                if unvisited_at(traj, line, i, n) {
                    self.sets[k].insert(i);
                }
            }
            self.lo[k] = self.lo[k].min(new_lo);
            self.hi[k] = self.hi[k].max(new_hi);
        }
    }

    fn remove(&mut self, line: Line, i: usize) {
        self.sets[line.index()].remove(&i);
    }

    /// Smallest `y - x` over holes `x < y` on different lines.
    fn min_cross_gap(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for line in Line::BOTH {
            let other = line.other();
            let other_pts = self.real.line(other);
            for &i in &self.sets[line.index()] {
                let y = self.real.line(line)[i];
                let p = other_pts.partition_point(|&v| v < y);
                if let Some(&j) = self.sets[other.index()].range(..p).next_back() {
                    let gap = y - other_pts[j];
                    best = Some(best.map_or(gap, |b| b.min(gap)));
                }
            }
        }
        best
    }

    /// Whether some hole has shadow in `(lo, hi]` (or `[lo, hi)` when `closed_low`).
    fn any_in(&self, lo: f64, hi: f64, closed_low: bool) -> bool {
        Line::BOTH.iter().any(|&line| {
            let pts = self.real.line(line);
            let from = if closed_low {
                pts.partition_point(|&v| v < lo)
            } else {
                pts.partition_point(|&v| v <= lo)
            };
            let to = if closed_low {
                pts.partition_point(|&v| v < hi)
            } else {
                pts.partition_point(|&v| v <= hi)
            };
            from < to && self.sets[line.index()].range(from..to).next().is_some()
        })
    }
}

/// Checks both parts of the distance lemma at every step.
///
/// (a) Unvisited points on different lines with shadows inside the running
/// span are more than `r` apart. (b) A step that stays inside the span and
/// moves left (right) takes the rightmost (leftmost) remaining point between
/// its target and the current shadow.
pub fn check_lemma_distance(real: &Realization, traj: &Trajectory) -> Result<(Tally, Tally)> {
    require_shadow_space(real, "check_lemma_distance")?;
    let r = real.spec.separation().unwrap_or(0.0);
    let mut a_tally = Tally::default();
    let mut b_tally = Tally::default();
    let mut lo = traj.start.u;
    let mut hi = traj.start.u;
    let mut holes = Holes::new(real, traj, lo);
    for n in 0..=traj.len() {
        if let Some(gap) = holes.min_cross_gap() {
            a_tally.record(gap > r, n);
        }
        if n == traj.len() {
            break;
        }
        let z = traj.site(n).u;
        let next = traj.site(n + 1);
        let y = next.u;
        if lo <= y && y < z {
            b_tally.record(!holes.any_in(y, z, false), n);
        } else if z < y && y <= hi {
            b_tally.record(!holes.any_in(z, y, true), n);
        }
        if let Some(i) = real.index_of(next) {
            holes.remove(next.line, i);
        }
        lo = lo.min(y);
        hi = hi.max(y);
        holes.expand(traj, lo, hi, n + 1);
    }
    Ok((a_tally, b_tally))
}

/// Range maximum over a fixed array (sparse table).
struct RangeMax<T> {
    levels: Vec<Vec<T>>,
}

fn max_of<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

impl<T: Copy + PartialOrd> RangeMax<T> {
    fn new(values: Vec<T>) -> Self {
        let mut levels = alloc::vec![values];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().expect("level");
            let next = (0..prev.len() - width)
                .map(|i| max_of(prev[i], prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        RangeMax { levels }
    }

    /// Maximum over `[from, to)`, or `None` for an empty range.
    fn query(&self, from: usize, to: usize) -> Option<T> {
        if from >= to {
            return None;
        }
        let k = (usize::BITS - 1 - (to - from).leading_zeros()) as usize;
        let level = &self.levels[k];
        Some(max_of(level[from], level[to - (1 << k)]))
    }
}

/// Checks the empty-interval lemma at the instances its argument covers.
///
/// Let `(c, ι)` be the last point with shadow `c` to be visited, at step
/// `t = T^R_c`, let `M` be the running maximum at `t` and `j` the first step
/// with `Ŝ_j = M`. When the running minimum at `j` is at most `c` and the walk
/// stays in `[c, ∞)` strictly between `j` and `t`, every point with shadow in
/// `(c, M]` must be visited before `t`.
pub fn check_empty_interval(real: &Realization, traj: &Trajectory) -> Result<Tally> {
    require_shadow_space(real, "check_empty_interval")?;
    let hits = HittingTimes::new(traj);
    let mut merged: Vec<(f64, usize)> = Line::BOTH
        .iter()
        .flat_map(|&line| {
            real.line(line)
                .iter()
                .enumerate()
                .map(move |(i, &u)| (u, traj.visit_time(line, i).unwrap_or(usize::MAX)))
        })
        .collect();
    merged.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let shadows: Vec<f64> = merged.iter().map(|p| p.0).collect();
    let latest = RangeMax::new(merged.iter().map(|p| p.1).collect());
    let lowest = RangeMax::new(hits.shadows().iter().map(|&u| -u).collect());

    let mut tally = Tally::default();
    for t in 1..=traj.len() {
        let c = traj.site(t).u;
        if t_both_copies(real, traj, c) != Some(t) {
            continue;
        }
        let m = hits.max_through(t);
        let j = if hits.shadow(0) >= m {
            0
        } else {
            hits.t_at_least(m).expect("maximum is reached")
        };
        if j >= t || hits.min_through(j) > c || lowest.query(j + 1, t).is_some_and(|v| -v < c) {
            continue;
        }
        let from = shadows.partition_point(|&v| v <= c);
        let to = shadows.partition_point(|&v| v <= m);
        let ok = latest.query(from, to).is_none_or(|last| last < t);
        tally.record(ok, t);
    }
    Ok(tally)
}

/// Runs the distance and empty-interval checks.
pub fn check_lemmas(real: &Realization, traj: &Trajectory) -> Result<LemmaReport> {
    let (distance_a, distance_b) = check_lemma_distance(real, traj)?;
    let empty_int = check_empty_interval(real, traj)?;
    Ok(LemmaReport {
        distance_a,
        distance_b,
        empty_int,
    })
}

/// Checks the range of every decided `D_x` at the `A_k` abscissas: `0 < D <= x`
/// (thinned, `x = X_k`), `0 <= D <= x` (shifted, `x = X_k + s`), and `D = 0`
/// for degenerate records.
pub fn check_dx_bounds(real: &Realization, traj: &Trajectory) -> Tally {
    let (base, shift, strict) = match real.spec.construction {
        Construction::ParallelThinned { .. } => (&real.base_points, 0.0, true),
        Construction::ParallelShifted { s } if s > 0.0 => (&real.line0, s, false),
        _ => return Tally::default(),
    };
    let hits = HittingTimes::new(traj);
    let mut tally = Tally::default();
    let first = base.partition_point(|&v| v <= 0.0);
    for (k, &xk) in base[first..].iter().enumerate() {
        let x = xk + shift;
        let Ok(rec) = compute_dx_with(real, traj, &hits, x) else {
            continue;
        };
        let ok = if rec.degenerate_zero {
            rec.value == 0.0
        } else if strict {
            rec.value > 0.0 && rec.value <= x
        } else {
            rec.value >= 0.0 && rec.value <= x
        };
        tally.record(ok, k + 1);
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Site, Space};
    use crate::processes::ProcessSpec;
    use crate::walk::{run_walk, StopReason, StopRule};

    fn thinned(line0: &[f64], line1: &[f64]) -> Realization {
        let spec = ProcessSpec::new(
            Construction::ParallelThinned { p: 0.5 },
            1.0,
            Space::parallel(1.0, 20.0).unwrap(),
        )
        .unwrap();
        Realization::from_lines(spec, line0.to_vec(), line1.to_vec()).unwrap()
    }

    #[test]
    fn range_max() {
        let rm = RangeMax::new(vec![3, 1, 4, 1, 5, 9, 2, 6]);
        assert_eq!(rm.query(0, 8), Some(9));
        assert_eq!(rm.query(0, 3), Some(4));
        assert_eq!(rm.query(6, 7), Some(2));
        assert_eq!(rm.query(6, 8), Some(6));
        assert_eq!(rm.query(3, 3), None);
    }

    #[test]
    fn genuine_walks_pass() {
        let real = thinned(&[-2.0, -0.4, 0.3, 1.1, 2.5, 4.0], &[-1.3, -0.4, 0.9, 2.5, 3.2]);
        let traj = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        let report = check_lemmas(&real, &traj).unwrap();
        assert_eq!(report.violations(), 0, "{report:?}");

        // 0.3, 1.0, then back inside the span to (0.6, 1), then -0.5.
        let real = thinned(&[-0.5, 0.3, 1.0], &[0.6]);
        let traj = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(traj.steps[2], Site::on1(0.6));
        let report = check_lemmas(&real, &traj).unwrap();
        assert_eq!(report.violations(), 0, "{report:?}");
        assert_eq!(report.distance_b.checked, 1);
    }

    #[test]
    fn forged_walk_breaks_part_b() {
        // Skipping (2, 0) on the way back from 3 to 1 leaves a closer point behind.
        let real = thinned(&[1.0, 2.0, 3.0], &[]);
        let traj = Trajectory {
            start: Site::ORIGIN,
            steps: vec![Site::on0(3.0), Site::on0(1.0), Site::on0(2.0)],
            step_distances: vec![3.0, 2.0, 1.0],
            stop_reason: StopReason::Exhausted,
            visited: [vec![Some(2), Some(3), Some(1)], vec![]],
        };
        let (_, b) = check_lemma_distance(&real, &traj).unwrap();
        assert_eq!(b.violations, 1);
        assert_eq!(b.first_violation, Some(1));
    }

    #[test]
    fn forged_walk_breaks_part_a() {
        // (1.5, 0) and (2, 1) are left inside the span [0, 3] only 0.5 apart.
        let real = thinned(&[1.5, 3.0], &[2.0]);
        let traj = Trajectory {
            start: Site::ORIGIN,
            steps: vec![Site::on0(3.0)],
            step_distances: vec![3.0],
            stop_reason: StopReason::Truncated,
            visited: [vec![None, Some(1)], vec![None]],
        };
        let (a, _) = check_lemma_distance(&real, &traj).unwrap();
        assert_eq!(a.violations, 1);
    }

    #[test]
    fn forged_walk_breaks_empty_interval() {
        // (1, 0) is visited from 3 with (2, 0) still pending in (1, 3].
        let real = thinned(&[1.0, 2.0, 3.0], &[]);
        let traj = Trajectory {
            start: Site::ORIGIN,
            steps: vec![Site::on0(3.0), Site::on0(1.0), Site::on0(2.0)],
            step_distances: vec![3.0, 2.0, 1.0],
            stop_reason: StopReason::Exhausted,
            visited: [vec![Some(2), Some(3), Some(1)], vec![]],
        };
        let tally = check_empty_interval(&real, &traj).unwrap();
        assert_eq!(tally.violations, 1);
    }

    #[test]
    fn double_point_reached_from_its_copy() {
        // From (-2.83, 0) the copy (-2.83, 1) comes next while (-2.18, 1) and
        // (-1.41, 1) are still pending: the running maximum 0 was attained
        // before the walk was ever left of -2.83, so no instance is recorded.
        let spec = ProcessSpec::new(
            Construction::ParallelDuplicated,
            1.0,
            Space::parallel(1.0, 20.0).unwrap(),
        )
        .unwrap();
        let base = [-6.95, -4.94, -2.83, -2.18, -1.41, 1.53, 4.55];
        let real = Realization::from_lines(spec, base.to_vec(), base.to_vec()).unwrap();
        let traj = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(traj.steps[3], Site::on1(-2.83));
        assert_eq!(traj.visit_time(Line::One, 3), Some(5));
        let tally = check_empty_interval(&real, &traj).unwrap();
        assert_eq!(tally.violations, 0);
    }

    #[test]
    fn intersecting_is_rejected() {
        let spec = ProcessSpec::new(
            Construction::IntersectingIndependent,
            1.0,
            Space::intersecting(1.0, 5.0).unwrap(),
        )
        .unwrap();
        let real = Realization::from_lines(spec, vec![1.0], vec![2.0]).unwrap();
        let traj = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert!(check_lemmas(&real, &traj).is_err());
    }
}
