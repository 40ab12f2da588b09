//! The greedy walk `S_{n+1} = argmin { d(S_n, X) : X unvisited }`.
//!
//! Ties (measure zero for the random models) resolve by the key
//! `(distance, line label, abscissa)`. Under [`StopRule::TruncationSafe`] the
//! walk stops as soon as the chosen step is not strictly shorter than the
//! distance to the outside of the realization's window, so every emitted step
//! coincides with the walk on the untruncated process.

mod index;
mod naive;

use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::geometry::{Line, Metric, Site};
use crate::processes::Realization;
use crate::{Error, Result};

pub use index::{LineIndex, UnvisitedSet};
pub use naive::run_walk_naive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum StopRule {
    RunToExhaustion,
    #[default]
    TruncationSafe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum StopReason {
    /// Every point of the realization was visited.
    Exhausted,
    /// The next step could have been beaten by a point outside the window.
    Truncated,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Exhausted => "exhausted",
            StopReason::Truncated => "truncated",
        }
    }
}

/// The visited sites of one walk, in order.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Trajectory {
    pub start: Site,
    /// `S_1, S_2, ...`
    pub steps: Vec<Site>,
    /// `step_distances[k] = d(S_k, S_{k+1})`, with `S_0 = start`.
    pub step_distances: Vec<f64>,
    pub stop_reason: StopReason,
    /// Per line, the step at which each realization point was visited (`0`
    /// for a start site that is itself a point of the realization).
    pub visited: [Vec<Option<u32>>; 2],
}

impl Trajectory {
    fn begin(real: &Realization, start: Site) -> Trajectory {
        Trajectory {
            start,
            steps: Vec::new(),
            step_distances: Vec::new(),
            stop_reason: StopReason::Exhausted,
            visited: [
                alloc::vec![None; real.line0.len()],
                alloc::vec![None; real.line1.len()],
            ],
        }
    }

    fn push(&mut self, c: Candidate) {
        self.steps.push(c.site);
        self.step_distances.push(c.dist);
        self.visited[c.site.line.index()][c.index] = Some(self.steps.len() as u32);
    }

    /// Number of steps taken.
    #[inline]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `S_n`, with `S_0` the start.
    #[inline]
    pub fn site(&self, n: usize) -> Site {
        if n == 0 {
            self.start
        } else {
            self.steps[n - 1]
        }
    }

    /// The shadow trajectory `Ŝ_0, Ŝ_1, ...`.
    pub fn shadows(&self) -> impl Iterator<Item = f64> + '_ {
        core::iter::once(self.start.u).chain(self.steps.iter().map(|s| s.u))
    }

    /// Step at which the `i`-th point of `line` was visited.
    #[inline]
    pub fn visit_time(&self, line: Line, i: usize) -> Option<usize> {
        self.visited[line.index()][i].map(|t| t as usize)
    }

    /// Step at which `site` was visited, if it is a visited point of `real`.
    pub fn visit_time_of(&self, real: &Realization, site: Site) -> Option<usize> {
        real.index_of(site).and_then(|i| self.visit_time(site.line, i))
    }
}

/// A possible next step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub site: Site,
    /// Position of the site in its line array.
    pub index: usize,
    pub dist: f64,
}

impl Candidate {
    /// Total order used by the argmin: distance, then line label, then abscissa.
    #[inline]
    pub fn key_cmp(&self, other: &Candidate) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.site.line.cmp(&other.site.line))
            .then(self.site.u.total_cmp(&other.site.u))
    }
}

/// At most two candidates per line.
#[derive(Clone, Copy, Debug, Default)]
pub struct CandidateSet {
    items: [Option<Candidate>; 4],
}

impl CandidateSet {
    fn push(&mut self, c: Candidate) {
        let slot = self.items.iter_mut().find(|s| s.is_none()).expect("at most four candidates");
        *slot = Some(c);
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> + '_ {
        self.items.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.items[0].is_none()
    }

    pub fn best(&self) -> Option<Candidate> {
        self.iter().min_by(Candidate::key_cmp)
    }
}

/// Nearest unvisited point on each side of the foot of `at` on every line.
///
/// Computed distances are weakly monotone in the offset from the foot, so the
/// set contains the global argmin. When a farther left point ties the nearest
/// one exactly, the farther one (smaller abscissa) is kept, matching the
/// tie-break of a full scan.
pub fn step_candidates(real: &Realization, unvisited: &mut UnvisitedSet, at: Site) -> CandidateSet {
    let metric = real.space().metric();
    let mut out = CandidateSet::default();
    for line in Line::BOTH {
        line_candidates(&metric, real.line(line), unvisited.line_mut(line), at, line, &mut out);
    }
    out
}

fn line_candidates(
    metric: &Metric,
    pts: &[f64],
    ix: &mut LineIndex,
    at: Site,
    line: Line,
    out: &mut CandidateSet,
) {
    if ix.live() == 0 {
        return;
    }
    let c = metric.center(at, line);
    let split = pts.partition_point(|&v| v < c);
    let make = |i: usize| Candidate {
        site: Site::new(pts[i], line),
        index: i,
        dist: metric.distance_to(at, line, pts[i]),
    };
    if let Some(i) = ix.succ(split) {
        out.push(make(i));
    }
    if let Some(i) = ix.pred_before(split) {
        let mut best = make(i);
        while let Some(j) = ix.pred_before(best.index) {
            let further = make(j);
            if further.dist != best.dist {
                break;
            }
            best = further;
        }
        out.push(best);
    }
}

/// Runs the greedy walk from `start` on `real`.
///
/// A start site that is itself a point of the realization counts as visited
/// at step 0.
pub fn run_walk(real: &Realization, start: Site, rule: StopRule) -> Result<Trajectory> {
    real.space().check_site(start)?;
    let mut traj = Trajectory::begin(real, start);
    let mut unvisited = UnvisitedSet::new(real.line0.len(), real.line1.len());
    if let Some(i) = real.index_of(start) {
        unvisited.line_mut(start.line).remove(i);
        traj.visited[start.line.index()][i] = Some(0);
    }
    let mut at = start;
    while unvisited.remaining() > 0 {
        let next = step_candidates(real, &mut unvisited, at)
            .best()
            .expect("unvisited points give candidates");
        if rule == StopRule::TruncationSafe && next.dist >= real.truncation_margin(at) {
            traj.stop_reason = StopReason::Truncated;
            return Ok(traj);
        }
        unvisited.line_mut(next.site.line).remove(next.index);
        traj.push(next);
        at = next.site;
    }
    traj.stop_reason = StopReason::Exhausted;
    Ok(traj)
}

/// Restricts `real` to the window of half-width `smaller_l`, keeping exactly
/// the points that fall inside the shrunken per-line windows.
pub fn couple_restrict(real: &Realization, smaller_l: f64) -> Result<Realization> {
    let l = real.space().window;
    if !(smaller_l.is_finite() && smaller_l > 0.0) {
        return Err(Error::param("smaller_L", alloc::format!("must be positive, got {smaller_l}")));
    }
    if smaller_l > l {
        return Err(Error::param(
            "smaller_L",
            alloc::format!("{smaller_l} exceeds the realization window {l}"),
        ));
    }
    Ok(real.shrink(l - smaller_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Space;
    use crate::processes::{Construction, ProcessSpec};

    fn single(points: &[f64]) -> Realization {
        let spec = ProcessSpec::new(Construction::SingleLinePoisson, 1.0, Space::single_line(10.0).unwrap())
            .unwrap();
        Realization::from_lines(spec, points.to_vec(), Vec::new()).unwrap()
    }

    fn parallel(c: Construction, line0: &[f64], line1: &[f64]) -> Realization {
        let spec = ProcessSpec::new(c, 1.0, Space::parallel(1.0, 10.0).unwrap()).unwrap();
        Realization::from_lines(spec, line0.to_vec(), line1.to_vec()).unwrap()
    }

    fn order(t: &Trajectory) -> Vec<(f64, usize)> {
        t.steps.iter().map(|s| (s.u, s.line.index())).collect()
    }

    #[test]
    fn single_line_example() {
        let real = single(&[-1.5, 1.0, 2.0, 5.0]);
        for walk in [run_walk, run_walk_naive] {
            let t = walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
            assert_eq!(order(&t), vec![(1.0, 0), (2.0, 0), (5.0, 0), (-1.5, 0)]);
            assert_eq!(t.step_distances, vec![1.0, 1.0, 3.0, 6.5]);
            assert_eq!(t.stop_reason, StopReason::Exhausted);
        }
    }

    #[test]
    fn parallel_example() {
        let real = parallel(Construction::ParallelThinned { p: 1.0 }, &[1.0], &[1.2]);
        let t = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(order(&t), vec![(1.0, 0), (1.2, 1)]);
    }

    #[test]
    fn duplicated_example() {
        let real = parallel(Construction::ParallelDuplicated, &[1.0, 1.5, 4.0], &[1.0, 1.5, 4.0]);
        for walk in [run_walk, run_walk_naive] {
            let t = walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
            assert_eq!(
                order(&t),
                vec![(1.0, 0), (1.5, 0), (1.5, 1), (1.0, 1), (4.0, 1), (4.0, 0)]
            );
        }
    }

    #[test]
    fn empty_and_single_point() {
        let t = run_walk(&single(&[]), Site::ORIGIN, StopRule::TruncationSafe).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.stop_reason, StopReason::Exhausted);
        let real = single(&[3.0]);
        let t = run_walk_naive(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(order(&t), vec![(3.0, 0)]);
    }

    #[test]
    fn ties_prefer_lower_line_then_smaller_abscissa() {
        let real = single(&[-1.0, 1.0]);
        let t = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(t.steps[0].u, -1.0);
        let real = parallel(Construction::ParallelDuplicated, &[2.0], &[2.0]);
        let t = run_walk(&real, Site::on1(1.0), StopRule::RunToExhaustion).unwrap();
        // (2, line 1) at distance 1 beats (2, line 0) at sqrt(2).
        assert_eq!(order(&t), vec![(2.0, 1), (2.0, 0)]);
        let t = run_walk(&real, Site::new(2.0 - 0.5, Line::One), StopRule::RunToExhaustion).unwrap();
        assert_eq!(t.steps[0], Site::on1(2.0));
    }

    #[test]
    fn truncation_stops_before_out_of_reach_steps() {
        // Window [-10, 10]; from 9.5 the edge is 0.5 away, the next point 9.9 - 9.5 = 0.4.
        let real = single(&[-9.0, 9.5, 9.9]);
        let t = run_walk(&real, Site::on0(9.0), StopRule::TruncationSafe).unwrap();
        assert_eq!(order(&t), vec![(9.5, 0), (9.9, 0)]);
        assert_eq!(t.stop_reason, StopReason::Truncated);
        let full = run_walk(&real, Site::on0(9.0), StopRule::RunToExhaustion).unwrap();
        assert_eq!(full.len(), 3);
    }

    #[test]
    fn start_on_a_point_is_visited() {
        let real = single(&[0.0, 1.0]);
        let t = run_walk(&real, Site::ORIGIN, StopRule::RunToExhaustion).unwrap();
        assert_eq!(order(&t), vec![(1.0, 0)]);
        assert_eq!(t.visit_time(Line::Zero, 0), Some(0));
        assert_eq!(t.visit_time(Line::Zero, 1), Some(1));
    }

    #[test]
    fn restrict_examples() {
        let spec = ProcessSpec::new(Construction::SingleLinePoisson, 1.0, Space::single_line(100.0).unwrap())
            .unwrap();
        let real = Realization::from_lines(spec, vec![-60.0, -10.0, 10.0, 60.0], vec![]).unwrap();
        assert_eq!(couple_restrict(&real, 100.0).unwrap(), real);
        let small = couple_restrict(&real, 50.0).unwrap();
        assert_eq!(small.line0, vec![-10.0, 10.0]);
        assert_eq!(small.space().window, 50.0);
        assert!(couple_restrict(&real, 0.0).is_err());
        assert!(couple_restrict(&real, 150.0).is_err());
    }

    #[test]
    fn candidates_on_one_line() {
        let real = single(&[-2.0, -1.0, 1.0, 3.0]);
        let mut unvisited = UnvisitedSet::new(4, 0);
        let set = step_candidates(&real, &mut unvisited, Site::on0(0.5));
        let mut us: Vec<f64> = set.iter().map(|c| c.site.u).collect();
        us.sort_by(f64::total_cmp);
        assert_eq!(us, vec![-1.0, 1.0]);
    }
}
