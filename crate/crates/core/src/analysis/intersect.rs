use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::geometry::{Geometry, Line, Site, Space};
use crate::walk::Trajectory;
use crate::{Error, Result};

/// One of the four half-lines cut out by the intersection point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HalfLine {
    pub line: Line,
    pub positive: bool,
}

/// The half-line holding `a`; the intersection point itself lies on none.
pub fn half_line(a: Site) -> Option<HalfLine> {
    (a.u != 0.0).then_some(HalfLine {
        line: a.line,
        positive: a.u > 0.0,
    })
}

fn same_half_line(a: Site, b: Site) -> bool {
    matches!((half_line(a), half_line(b)), (Some(x), Some(y)) if x == y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HalfLineChange {
    /// The change happens between `S_step` and `S_{step+1}`.
    pub step: usize,
    pub from: Site,
    pub to: Site,
}

fn require_intersecting(space: &Space, op: &'static str) -> Result<()> {
    match space.geometry {
        Geometry::IntersectingLines { .. } => Ok(()),
        _ => Err(Error::WrongKind {
            op,
            what: "spaces other than intersecting lines",
        }),
    }
}

/// Steps at which consecutive sites (from `S_1` on) lie on different half-lines.
pub fn extract_halfline_changes(traj: &Trajectory, space: &Space) -> Result<Vec<HalfLineChange>> {
    require_intersecting(space, "extract_halfline_changes")?;
    Ok(traj
        .steps
        .windows(2)
        .enumerate()
        .filter(|(_, w)| !same_half_line(w[0], w[1]))
        .map(|(i, w)| HalfLineChange {
            step: i + 1,
            from: w[0],
            to: w[1],
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum UvVerdict {
    /// `j_n` is finite and `||U_n|| <= ||V_n||`.
    B,
    /// `j_n` is finite and `||U_n|| > ||V_n||`.
    C,
    /// `j_n` is not reached within the trajectory.
    Absent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct UvRecord {
    pub n: usize,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub norm_u: Option<f64>,
    pub norm_v: Option<f64>,
    pub verdict: UvVerdict,
}

/// The subsequences `j_n`, `k_n`, `U_n = S_{k_n}`, `V_n = S_{j_n}` for
/// `n = 1..=max_n`, evaluated on the finite trajectory.
///
/// `j_n` is the first `k > j_{n-1}` at which the walk leaves its half-line
/// from a site of norm greater than `max(n, ||S_{j_{n-1}}||)`; the index `n`
/// is compared with the norm as a length. `k_n` is the start of the run of
/// steps on the half-line of `S_{j_n}`.
pub fn extract_uv_sequences(traj: &Trajectory, space: &Space, max_n: usize) -> Result<Vec<UvRecord>> {
    require_intersecting(space, "extract_uv_sequences")?;
    let norm = |a: Site| libm::fabs(a.u);
    let len = traj.len();
    let mut out = Vec::with_capacity(max_n);
    let mut prev: Option<usize> = Some(0);
    for n in 1..=max_n {
        let j = prev.and_then(|pj| {
            let threshold = (n as f64).max(norm(traj.site(pj)));
            (pj + 1..len).find(|&k| {
                let (a, b) = (traj.site(k), traj.site(k + 1));
                !same_half_line(a, b) && norm(a) > threshold
            })
        });
        let record = match j {
            Some(j) => {
                let v = traj.site(j);
                let mut k = j;
                while k > 1 && same_half_line(traj.site(k - 1), v) {
                    k -= 1;
                }
                let (nu, nv) = (norm(traj.site(k)), norm(v));
                UvRecord {
                    n,
                    j: Some(j),
                    k: Some(k),
                    norm_u: Some(nu),
                    norm_v: Some(nv),
                    verdict: if nu <= nv { UvVerdict::B } else { UvVerdict::C },
                }
            }
            None => UvRecord {
                n,
                j: None,
                k: None,
                norm_u: None,
                norm_v: None,
                verdict: UvVerdict::Absent,
            },
        };
        out.push(record);
        prev = j;
    }
    Ok(out)
}
