use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::clusters::{realization_clusters, reduce_to_cluster_leads};
use super::dx::compute_dx_with;
use super::hitting::HittingTimes;
use super::intersect::{extract_uv_sequences, UvVerdict};
use crate::geometry::{Line, Site};
use crate::processes::{Construction, Realization};
use crate::walk::{run_walk, StopRule, Trajectory};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum EventFamily {
    AkThinned,
    AkShifted,
    AmParallel,
    BnIntersect,
    CnIntersect,
}

impl EventFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            EventFamily::AkThinned => "A_k_thinned",
            EventFamily::AkShifted => "A_k_shifted",
            EventFamily::AmParallel => "A_m_parallel",
            EventFamily::BnIntersect => "B_n_intersect",
            EventFamily::CnIntersect => "C_n_intersect",
        }
    }
}

/// Quantities behind an event verdict; fields not used by a family are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Witness {
    pub gap: Option<f64>,
    pub d: Option<f64>,
    pub x_minus1: Option<f64>,
    pub position: Option<f64>,
    pub norm_u: Option<f64>,
    pub norm_v: Option<f64>,
    pub step: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EventRecord {
    pub family: EventFamily,
    pub index: usize,
    /// `None` when the trajectory prefix does not decide the event.
    pub occurred: Option<bool>,
    pub witness: Witness,
}

/// Positive base points `X_1 < X_2 < ...` and `X_{-1}` (largest base point `<= 0`).
struct BaseIndex<'a> {
    pts: &'a [f64],
    first_positive: usize,
}

impl<'a> BaseIndex<'a> {
    fn new(pts: &'a [f64]) -> Self {
        BaseIndex {
            pts,
            first_positive: pts.partition_point(|&v| v <= 0.0),
        }
    }

    fn x(&self, k: usize) -> Option<f64> {
        self.pts.get(self.first_positive + k - 1).copied()
    }

    fn x_minus1(&self) -> Option<f64> {
        self.first_positive.checked_sub(1).map(|i| self.pts[i])
    }

    fn positive_count(&self) -> usize {
        self.pts.len() - self.first_positive
    }
}

/// `a < b` for hitting times where `None` means "after the trajectory ends".
fn earlier(a: Option<usize>, b: Option<usize>) -> Option<bool> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a < b),
        (Some(_), None) => Some(true),
        (None, Some(_)) => Some(false),
        (None, None) => None,
    }
}

/// `X_{k+1} - X_k > D - X_{-1} + r + shift`.
#[inline]
pub fn a_k_holds(gap: f64, d: f64, x_minus1: f64, r: f64, shift: f64) -> bool {
    gap > d - x_minus1 + r + shift
}

/// `A_k = {X_{k+1} - X_k > D_{X_k + shift} - X_{-1} + r + shift}` for every
/// `k >= 1` with `X_{k+1}` in the window.
fn a_k_events(
    real: &Realization,
    traj: &Trajectory,
    hits: &HittingTimes,
    base: &[f64],
    shift: f64,
    family: EventFamily,
) -> Vec<EventRecord> {
    let r = real.spec.separation().expect("parallel lines");
    let ix = BaseIndex::new(base);
    let x_minus1 = ix.x_minus1();
    (1..ix.positive_count())
        .map(|k| {
            let xk = ix.x(k).expect("in range");
            let gap = ix.x(k + 1).expect("in range") - xk;
            let d = compute_dx_with(real, traj, hits, xk + shift).ok().map(|rec| rec.value);
            let occurred = match (d, x_minus1) {
                (Some(d), Some(xm)) => Some(a_k_holds(gap, d, xm, r, shift)),
                _ => None,
            };
            EventRecord {
                family,
                index: k,
                occurred,
                witness: Witness {
                    gap: Some(gap),
                    d,
                    x_minus1,
                    position: Some(xk),
                    ..Witness::default()
                },
            }
        })
        .collect()
}

/// `A_k` events of a thinned realization (base points are the union shadows).
pub fn detect_a_k_thinned(real: &Realization, traj: &Trajectory) -> Vec<EventRecord> {
    let hits = HittingTimes::new(traj);
    a_k_events(real, traj, &hits, &real.base_points, 0.0, EventFamily::AkThinned)
}

/// `A_k` events of a shifted realization with `s > 0` (base points are line 0);
/// empty for `s < 0`.
pub fn detect_a_k_shifted(real: &Realization, traj: &Trajectory) -> Vec<EventRecord> {
    match real.spec.construction {
        Construction::ParallelShifted { s } if s > 0.0 => {
            let hits = HittingTimes::new(traj);
            a_k_events(real, traj, &hits, &real.line0, s, EventFamily::AkShifted)
        }
        _ => Vec::new(),
    }
}

/// `A_m` on the walk over cluster leads started at 0: the reduced walk jumps
/// to the negative side right after a lead in `[rm, r(m+1))`. One record per
/// `m >= 1` with `r(m+1)` inside the window.
pub fn detect_a_m(real: &Realization) -> Result<Vec<EventRecord>> {
    let leads = reduce_to_cluster_leads(real)?;
    let reduced = run_walk(&leads, Site::ORIGIN, StopRule::TruncationSafe)?;
    let r = real.spec.separation().expect("parallel lines");
    let l = real.space().window;
    let pts = &leads.line0;
    let mut out = Vec::new();
    let mut m = 1;
    while r * (m + 1) as f64 <= l {
        let (lo, hi) = (r * m as f64, r * (m + 1) as f64);
        let first = pts.partition_point(|&v| v < lo);
        let last = pts.partition_point(|&v| v < hi);
        let mut occurred = Some(false);
        let mut witness = Witness::default();
        for (i, &v) in pts.iter().enumerate().take(last).skip(first) {
            match reduced.visit_time(Line::Zero, i) {
                Some(t) if t < reduced.len() => {
                    let next = reduced.site(t + 1).u;
                    if next < 0.0 {
                        occurred = Some(true);
                        witness.position = Some(v);
                        witness.step = Some(t);
                        break;
                    }
                }
                _ => occurred = None,
            }
        }
        out.push(EventRecord {
            family: EventFamily::AmParallel,
            index: m,
            occurred,
            witness,
        });
        m += 1;
    }
    Ok(out)
}

/// `B_n` / `C_n` records for `n = 1..=max_n`; a `C_n` record only occurs
/// at a finite `j_n`.
pub fn detect_b_c(real: &Realization, traj: &Trajectory, max_n: usize) -> Result<Vec<EventRecord>> {
    let uv = extract_uv_sequences(traj, real.space(), max_n)?;
    let mut out = Vec::with_capacity(2 * uv.len());
    for rec in uv {
        let witness = Witness {
            norm_u: rec.norm_u,
            norm_v: rec.norm_v,
            step: rec.j,
            ..Witness::default()
        };
        out.push(EventRecord {
            family: EventFamily::BnIntersect,
            index: rec.n,
            occurred: Some(rec.verdict == UvVerdict::B),
            witness,
        });
        out.push(EventRecord {
            family: EventFamily::CnIntersect,
            index: rec.n,
            occurred: Some(rec.verdict == UvVerdict::C),
            witness,
        });
    }
    Ok(out)
}

/// Index range of `B_n` / `C_n` records produced by [`detect_a_events`].
pub const UV_MAX_N: usize = 15;

/// All event records for the construction of `real`.
pub fn detect_a_events(real: &Realization, traj: &Trajectory) -> Result<Vec<EventRecord>> {
    match real.spec.construction {
        Construction::ParallelThinned { .. } => Ok(detect_a_k_thinned(real, traj)),
        Construction::ParallelShifted { .. } => Ok(detect_a_k_shifted(real, traj)),
        Construction::ParallelDuplicated => detect_a_m(real),
        Construction::IntersectingIndependent => detect_b_c(real, traj, UV_MAX_N),
        Construction::SingleLinePoisson => Ok(Vec::new()),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PovratakReport {
    /// `A_k` records that occurred.
    pub occurrences: usize,
    /// Occurrences with `T_{[X_k,∞)} < T_{(-∞,0)}`.
    pub premise_held: usize,
    /// Of those, occurrences followed by `T_{(-∞,0)} < T_{[X_{k+1},∞)}`.
    pub implications_held: usize,
    pub violations: usize,
    /// Occurrences whose premise or conclusion the trajectory does not decide.
    pub undecided: usize,
}

impl PovratakReport {
    pub fn merge(&mut self, other: &PovratakReport) {
        self.occurrences += other.occurrences;
        self.premise_held += other.premise_held;
        self.implications_held += other.implications_held;
        self.violations += other.violations;
        self.undecided += other.undecided;
    }
}

/// Checks that every occurred `A_k` with `T_{[X_k,∞)} < T_{(-∞,0)}` is
/// followed by an entry into `(-∞, 0)` before `[X_{k+1}, ∞)`.
pub fn check_povratak(real: &Realization, traj: &Trajectory, events: &[EventRecord]) -> PovratakReport {
    let hits = HittingTimes::new(traj);
    let base: &[f64] = match real.spec.construction {
        Construction::ParallelShifted { .. } => &real.line0,
        _ => &real.base_points,
    };
    let ix = BaseIndex::new(base);
    let t_neg = hits.t_negative();
    let mut report = PovratakReport::default();
    for ev in events {
        if !matches!(ev.family, EventFamily::AkThinned | EventFamily::AkShifted) || ev.occurred != Some(true) {
            continue;
        }
        report.occurrences += 1;
        let xk = ix.x(ev.index).expect("event index in range");
        let xk1 = ix.x(ev.index + 1).expect("event index in range");
        match earlier(hits.t_at_least(xk), t_neg) {
            None => report.undecided += 1,
            Some(false) => {}
            Some(true) => {
                report.premise_held += 1;
                match earlier(t_neg, hits.t_at_least(xk1)) {
                    None => report.undecided += 1,
                    Some(true) => report.implications_held += 1,
                    Some(false) => report.violations += 1,
                }
            }
        }
    }
    report
}

/// `X_{τ_2} - X_{τ_1}`: the gap between the first two leads right of cluster 0.
pub fn first_lead_gap(real: &Realization) -> Option<f64> {
    let dec = realization_clusters(real).ok()?;
    let o = dec.origin?;
    let c1 = dec.clusters.get(o + 1)?;
    let c2 = dec.clusters.get(o + 2)?;
    Some(dec.points[c2.lead] - dec.points[c1.lead])
}
