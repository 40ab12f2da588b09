use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::geometry::{Site, Space};
use crate::processes::{Construction, ProcessSpec, Realization};
use crate::{Error, Result};

/// A maximal run `points[start..end]` of successive points closer than the threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Cluster {
    pub start: usize,
    pub end: usize,
    /// Index of the point closest to 0.
    pub lead: usize,
}

impl Cluster {
    #[inline]
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i < self.end
    }
}

/// Leading sites of a cluster on a shifted pair of lines.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LeadingSites {
    pub sites: [Site; 2],
    pub indented: [bool; 2],
    /// The cluster has points on both sides of 0, or its leads are not one
    /// indented and one unindented point.
    pub irregular: bool,
}

impl LeadingSites {
    pub fn indented_site(&self) -> Option<Site> {
        match self.indented {
            [true, false] => Some(self.sites[0]),
            [false, true] => Some(self.sites[1]),
            _ => None,
        }
    }

    pub fn unindented_site(&self) -> Option<Site> {
        match self.indented {
            [true, false] => Some(self.sites[1]),
            [false, true] => Some(self.sites[0]),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClusterDecomposition {
    pub threshold: f64,
    pub points: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Position in `clusters` of cluster 0, the one holding the point nearest 0.
    pub origin: Option<usize>,
    /// Filled by [`mark_leading_and_indented`]; one entry per cluster.
    pub leading: Vec<LeadingSites>,
}

impl ClusterDecomposition {
    /// Cluster holding `points[i]`.
    pub fn cluster_of(&self, i: usize) -> usize {
        self.clusters.partition_point(|c| c.end <= i)
    }

    /// Signed label relative to cluster 0 (negative to the left).
    pub fn label(&self, cluster: usize) -> isize {
        cluster as isize - self.origin.map_or(0, |o| o as isize)
    }

    /// Abscissas `X_{τ_i}` of the leading points, in increasing order.
    pub fn lead_abscissas(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| self.points[c.lead]).collect()
    }

    /// `(lo, hi)` abscissas of cluster boundaries, for annotations.
    pub fn bounds(&self, cluster: usize) -> (f64, f64) {
        let c = self.clusters[cluster];
        (self.points[c.start], self.points[c.end - 1])
    }
}

fn nearest_to_zero(points: &[f64], range: core::ops::Range<usize>, key: impl Fn(f64) -> f64) -> usize {
    range
        .min_by(|&a, &b| key(points[a]).total_cmp(&key(points[b])).then(a.cmp(&b)))
        .expect("non-empty cluster")
}

/// Splits sorted points into clusters: successive points lie in the same
/// cluster iff their gap is strictly below `threshold`.
pub fn decompose_clusters(points: &[f64], threshold: f64) -> Result<ClusterDecomposition> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::param("threshold", alloc::format!("must be positive, got {threshold}")));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("points", "must be strictly increasing"));
    }
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=points.len() {
        if i == points.len() || points[i] - points[i - 1] >= threshold {
            if i > start {
                let lead = nearest_to_zero(points, start..i, libm::fabs);
                clusters.push(Cluster { start, end: i, lead });
            }
            start = i;
        }
    }
    let origin = (!points.is_empty()).then(|| {
        let nearest = nearest_to_zero(points, 0..points.len(), libm::fabs);
        clusters.partition_point(|c: &Cluster| c.end <= nearest)
    });
    Ok(ClusterDecomposition {
        threshold,
        points: points.to_vec(),
        clusters,
        origin,
        leading: Vec::new(),
    })
}

/// Leading and indented points for line 0 points `dec.points` and their
/// copies shifted by `s` on line 1.
///
/// A point is indented when it lies farther from 0 than its shifted copy.
pub fn mark_leading_and_indented(dec: &ClusterDecomposition, s: f64) -> ClusterDecomposition {
    let pts = &dec.points;
    let leading = dec
        .clusters
        .iter()
        .map(|c| {
            let lead0 = nearest_to_zero(pts, c.start..c.end, libm::fabs);
            let lead1 = nearest_to_zero(pts, c.start..c.end, |x| libm::fabs(x + s));
            let x0 = pts[lead0];
            let x1 = pts[lead1] + s;
            let indented = [libm::fabs(x0) > libm::fabs(x0 + s), libm::fabs(x1) > libm::fabs(pts[lead1])];
            let lo = pts[c.start].min(pts[c.start] + s);
            let hi = pts[c.end - 1].max(pts[c.end - 1] + s);
            let straddles = lo < 0.0 && hi > 0.0;
            LeadingSites {
                sites: [Site::on0(x0), Site::on1(x1)],
                indented,
                irregular: straddles || indented[0] == indented[1],
            }
        })
        .collect();
    ClusterDecomposition {
        leading,
        ..dec.clone()
    }
}

/// Clusters of a parallel realization at the threshold of its construction:
/// `r` for duplicated and thinned base points, `sqrt(r^2 + s^2)` for the
/// line 0 points of a shifted realization (with leads marked).
pub fn realization_clusters(real: &Realization) -> Result<ClusterDecomposition> {
    let r = real.spec.separation().ok_or(Error::WrongKind {
        op: "realization_clusters",
        what: "spaces without parallel lines",
    })?;
    match real.spec.construction {
        Construction::ParallelShifted { s } => {
            let dec = decompose_clusters(&real.line0, libm::sqrt(r * r + s * s))?;
            Ok(mark_leading_and_indented(&dec, s))
        }
        _ => decompose_clusters(&real.base_points, r),
    }
}

/// The single line realization of the leads `X_{τ_i}` of a duplicated realization.
pub fn reduce_to_cluster_leads(real: &Realization) -> Result<Realization> {
    if real.spec.construction != Construction::ParallelDuplicated {
        return Err(Error::WrongKind {
            op: "reduce_to_cluster_leads",
            what: "constructions other than ParallelDuplicated",
        });
    }
    let dec = realization_clusters(real)?;
    leads_realization(real, dec.lead_abscissas())
}

pub(crate) fn leads_realization(real: &Realization, leads: Vec<f64>) -> Result<Realization> {
    let spec = ProcessSpec::new(
        Construction::SingleLinePoisson,
        real.spec.rate_lambda,
        Space::single_line(real.space().window)?,
    )?;
    let mut out = Realization::from_lines(spec, leads, Vec::new())?;
    out.seed = real.seed;
    out.stream = real.stream;
    out.extents[0] = real.extents[0];
    Ok(out)
}
