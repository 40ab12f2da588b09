use alloc::vec;

use super::{Candidate, StopReason, StopRule, Trajectory};
use crate::geometry::{Line, Site};
use crate::processes::Realization;
use crate::Result;

/// Reference walk: a linear scan over every unvisited point at each step.
pub fn run_walk_naive(real: &Realization, start: Site, rule: StopRule) -> Result<Trajectory> {
    real.space().check_site(start)?;
    let metric = real.space().metric();
    let mut traj = Trajectory::begin(real, start);
    let mut seen = [vec![false; real.line0.len()], vec![false; real.line1.len()]];
    let mut remaining = real.point_count();
    for line in Line::BOTH {
        for (i, &u) in real.line(line).iter().enumerate() {
            if Site::new(u, line) == start {
                seen[line.index()][i] = true;
                traj.visited[line.index()][i] = Some(0);
                remaining -= 1;
            }
        }
    }
    let mut at = start;
    while remaining > 0 {
        let mut best: Option<Candidate> = None;
        for line in Line::BOTH {
            for (i, &u) in real.line(line).iter().enumerate() {
                if seen[line.index()][i] {
                    continue;
                }
                let c = Candidate {
                    site: Site::new(u, line),
                    index: i,
                    dist: metric.distance_to(at, line, u),
                };
                if best.is_none_or(|b| c.key_cmp(&b).is_lt()) {
                    best = Some(c);
                }
            }
        }
        let next = best.expect("remaining points");
        if rule == StopRule::TruncationSafe && next.dist >= real.truncation_margin(at) {
            traj.stop_reason = StopReason::Truncated;
            return Ok(traj);
        }
        seen[next.site.line.index()][next.index] = true;
        remaining -= 1;
        traj.push(next);
        at = next.site;
    }
    traj.stop_reason = StopReason::Exhausted;
    Ok(traj)
}
