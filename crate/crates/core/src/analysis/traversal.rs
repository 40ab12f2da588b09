use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::clusters::{leads_realization, realization_clusters, ClusterDecomposition};
use crate::geometry::{Line, Site};
use crate::processes::{Construction, Realization};
use crate::walk::{run_walk, StopRule, Trajectory};
use crate::{Error, Result};

/// How a trajectory went through one cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum BlockStatus {
    /// All `2|C|` points visited at consecutive steps.
    Consecutive,
    /// Consecutive so far, and the trajectory ends inside the cluster.
    InProgress,
    /// The walk left the cluster before visiting all of its points.
    Broken,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClusterVerdict {
    pub cluster: usize,
    /// Position relative to the origin cluster.
    pub label: isize,
    pub entry_step: usize,
    pub entry_site: Site,
    pub status: BlockStatus,
    /// For complete duplicated blocks: first and last visits at the lead
    /// abscissa on different lines.
    pub ends_at_lead: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClusterReport {
    pub entered: usize,
    pub consecutive: usize,
    pub in_progress: usize,
    pub broken: usize,
    pub bad_ends: usize,
    pub verdicts: Vec<ClusterVerdict>,
}

impl ClusterReport {
    pub fn violations(&self) -> usize {
        self.broken + self.bad_ends
    }

    pub fn merge(&mut self, other: &ClusterReport) {
        self.entered += other.entered;
        self.consecutive += other.consecutive;
        self.in_progress += other.in_progress;
        self.broken += other.broken;
        self.bad_ends += other.bad_ends;
    }
}

/// Visit times of the copies of base indices `start..end` on both lines,
/// sorted, with the number of points in the block.
fn block_times(traj: &Trajectory, start: usize, end: usize) -> (Vec<usize>, usize) {
    let mut times: Vec<usize> = Line::BOTH
        .iter()
        .flat_map(|&line| (start..end).filter_map(move |i| traj.visit_time(line, i)))
        .collect();
    times.sort_unstable();
    (times, 2 * (end - start))
}

fn block_status(times: &[usize], size: usize, traj_len: usize) -> BlockStatus {
    let contiguous = times.windows(2).all(|w| w[1] == w[0] + 1);
    match (contiguous, times.len() == size) {
        (true, true) => BlockStatus::Consecutive,
        (true, false) if times.last() == Some(&traj_len) => BlockStatus::InProgress,
        _ => BlockStatus::Broken,
    }
}

fn parallel_clusters(real: &Realization, op: &'static str, want: fn(&Construction) -> bool) -> Result<ClusterDecomposition> {
    if !want(&real.spec.construction) {
        return Err(Error::WrongKind {
            op,
            what: "this construction",
        });
    }
    realization_clusters(real)
}

/// Checks that every cluster other than the origin cluster of a duplicated
/// realization is visited in one block of `2|C|` steps that starts and ends
/// at the lead abscissa, on different lines.
pub fn check_cluster_consecutive(real: &Realization, traj: &Trajectory) -> Result<ClusterReport> {
    let dec = parallel_clusters(real, "check_cluster_consecutive", |c| {
        *c == Construction::ParallelDuplicated
    })?;
    let mut report = ClusterReport::default();
    for (ci, c) in dec.clusters.iter().enumerate() {
        if Some(ci) == dec.origin {
            continue;
        }
        let (times, size) = block_times(traj, c.start, c.end);
        let Some(&entry) = times.first() else {
            continue;
        };
        let status = block_status(&times, size, traj.len());
        let ends_at_lead = (status == BlockStatus::Consecutive).then(|| {
            let (first, last) = (traj.site(entry), traj.site(*times.last().expect("non-empty")));
            let lead = dec.points[c.lead];
            first.u == lead && last.u == lead && first.line != last.line
        });
        report.entered += 1;
        match status {
            BlockStatus::Consecutive => report.consecutive += 1,
            BlockStatus::InProgress => report.in_progress += 1,
            BlockStatus::Broken => report.broken += 1,
        }
        if ends_at_lead == Some(false) {
            report.bad_ends += 1;
        }
        report.verdicts.push(ClusterVerdict {
            cluster: ci,
            label: dec.label(ci),
            entry_step: entry,
            entry_site: traj.site(entry),
            status,
            ends_at_lead,
        });
    }
    Ok(report)
}

/// Where the walk first enters a regular shifted cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Entry {
    Indented,
    Unindented,
    Other,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IndentedReport {
    /// Regular clusters entered, other than the origin cluster.
    pub entered: usize,
    pub irregular_skipped: usize,
    pub indented_entries: usize,
    /// Indented entries followed by a consecutive block (finished or not).
    pub indented_consecutive: usize,
    /// Indented entries followed by an early exit.
    pub indented_broken: usize,
    pub unindented_entries: usize,
    /// Unindented entries after which the walk leaves early.
    pub unindented_early_exits: usize,
    pub other_entries: usize,
    pub verdicts: Vec<(ClusterVerdict, Entry)>,
}

impl IndentedReport {
    /// Indented entries not followed by a consecutive block.
    pub fn violations(&self) -> usize {
        self.indented_broken
    }

    pub fn merge(&mut self, other: &IndentedReport) {
        self.entered += other.entered;
        self.irregular_skipped += other.irregular_skipped;
        self.indented_entries += other.indented_entries;
        self.indented_consecutive += other.indented_consecutive;
        self.indented_broken += other.indented_broken;
        self.unindented_entries += other.unindented_entries;
        self.unindented_early_exits += other.unindented_early_exits;
        self.other_entries += other.other_entries;
    }
}

/// For shifted realizations: classifies the entry point of every regular
/// cluster other than the origin cluster and checks the block that follows.
pub fn check_indented_entry(real: &Realization, traj: &Trajectory) -> Result<IndentedReport> {
    let dec = parallel_clusters(real, "check_indented_entry", |c| {
        matches!(c, Construction::ParallelShifted { .. })
    })?;
    let mut report = IndentedReport::default();
    for (ci, c) in dec.clusters.iter().enumerate() {
        if Some(ci) == dec.origin {
            continue;
        }
        let (times, size) = block_times(traj, c.start, c.end);
        let Some(&entry) = times.first() else {
            continue;
        };
        let lead = &dec.leading[ci];
        if lead.irregular {
            report.irregular_skipped += 1;
            continue;
        }
        report.entered += 1;
        let site = traj.site(entry);
        let status = block_status(&times, size, traj.len());
        let kind = if Some(site) == lead.indented_site() {
            report.indented_entries += 1;
            if status == BlockStatus::Broken {
                report.indented_broken += 1;
            } else {
                report.indented_consecutive += 1;
            }
            Entry::Indented
        } else if Some(site) == lead.unindented_site() {
            report.unindented_entries += 1;
            if status == BlockStatus::Broken {
                report.unindented_early_exits += 1;
            }
            Entry::Unindented
        } else {
            report.other_entries += 1;
            Entry::Other
        };
        let verdict = ClusterVerdict {
            cluster: ci,
            label: dec.label(ci),
            entry_step: entry,
            entry_site: site,
            status,
            ends_at_lead: None,
        };
        report.verdicts.push((verdict, kind));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AlignmentReport {
    /// Whether the first `2|C_0|` steps visit exactly the origin cluster;
    /// `None` when the trajectory is shorter.
    pub origin_first: Option<bool>,
    /// Cluster entries compared with the walk on the leads.
    pub compared: usize,
    pub mismatches: usize,
}

impl AlignmentReport {
    pub fn violations(&self) -> usize {
        self.mismatches + usize::from(self.origin_first == Some(false))
    }
}

/// Compares the order in which a duplicated walk enters clusters with the
/// walk on the single line of cluster leads, started where the full walk
/// leaves the origin cluster.
pub fn check_reduced_alignment(real: &Realization, traj: &Trajectory) -> Result<AlignmentReport> {
    let dec = parallel_clusters(real, "check_reduced_alignment", |c| {
        *c == Construction::ParallelDuplicated
    })?;
    let mut report = AlignmentReport::default();
    let Some(o) = dec.origin else {
        return Ok(report);
    };
    let c0 = dec.clusters[o];
    let size0 = 2 * c0.len();
    if traj.len() < size0 {
        return Ok(report);
    }
    let first_ok = (1..=size0).all(|n| {
        real.index_of(traj.site(n))
            .is_some_and(|i| c0.contains(i))
    });
    report.origin_first = Some(first_ok);
    if !first_ok {
        return Ok(report);
    }

    let mut entries = Vec::new();
    let mut seen = alloc::vec![false; dec.clusters.len()];
    seen[o] = true;
    for n in size0 + 1..=traj.len() {
        let i = real.index_of(traj.site(n)).expect("trajectory sites are points");
        let ci = dec.cluster_of(i);
        if !seen[ci] {
            seen[ci] = true;
            entries.push(ci);
        }
    }

    let others: Vec<usize> = (0..dec.clusters.len()).filter(|&ci| ci != o).collect();
    let leads: Vec<f64> = others.iter().map(|&ci| dec.points[dec.clusters[ci].lead]).collect();
    let reduced_real = leads_realization(real, leads)?;
    let exit = traj.site(size0).u;
    let reduced = run_walk(&reduced_real, Site::on0(exit), StopRule::TruncationSafe)?;
    let reduced_entries = reduced.steps.iter().map(|s| {
        let k = reduced_real.index_of(*s).expect("reduced sites are leads");
        others[k]
    });
    for (full, red) in entries.iter().zip(reduced_entries) {
        report.compared += 1;
        if *full != red {
            report.mismatches += 1;
        }
    }
    Ok(report)
}
