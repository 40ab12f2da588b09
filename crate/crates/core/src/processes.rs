//! Seeded point-process constructions on one or two lines.
//!
//! Every construction starts from homogeneous Poisson samples on a finite
//! window `[-L, L]`:
//!
//! | construction              | line 0                | line 1                         |
//! |---------------------------|-----------------------|--------------------------------|
//! | `SingleLinePoisson`       | Poisson(λ)            | empty                          |
//! | `IntersectingIndependent` | Poisson(λ)            | independent Poisson(λ)         |
//! | `ParallelDuplicated`      | base                  | same points as line 0          |
//! | `ParallelThinned { p }`   | base, thinned         | base, thinned (dependent)      |
//! | `ParallelShifted { s }`   | base                  | base + s, window `[-L+s, L+s]` |
//!
//! Thinning keeps a base point on both lines with probability `1 - p` and
//! otherwise puts it on exactly one line chosen by a fair coin.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::geometry::{Geometry, Line, Site, Space};
use crate::{Error, Result};

/// Identifier of the random number generator, recorded in run manifests.
pub const RNG_ALGORITHM: &str =
    "chacha8/rand_chacha-0.9: ChaCha8Rng::seed_from_u64(seed) + set_stream(stream)";

/// The random stream for replication `stream` of an experiment seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", deny_unknown_fields))]
pub enum Construction {
    SingleLinePoisson,
    IntersectingIndependent,
    ParallelDuplicated,
    ParallelThinned {
        #[cfg_attr(feature = "serde", serde(rename = "thinning_p"))]
        p: f64,
    },
    ParallelShifted {
        #[cfg_attr(feature = "serde", serde(rename = "shift_s"))]
        s: f64,
    },
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::SingleLinePoisson => "single-line",
            Construction::IntersectingIndependent => "intersecting",
            Construction::ParallelDuplicated => "parallel-duplicated",
            Construction::ParallelThinned { .. } => "parallel-thinned",
            Construction::ParallelShifted { .. } => "parallel-shifted",
        }
    }

    pub fn thinning_p(&self) -> Option<f64> {
        match *self {
            Construction::ParallelThinned { p } => Some(p),
            _ => None,
        }
    }

    pub fn shift_s(&self) -> Option<f64> {
        match *self {
            Construction::ParallelShifted { s } => Some(s),
            _ => None,
        }
    }

    fn fits(&self, geometry: &Geometry) -> bool {
        matches!(
            (self, geometry),
            (Construction::SingleLinePoisson, Geometry::SingleLine)
                | (
                    Construction::IntersectingIndependent,
                    Geometry::IntersectingLines { .. }
                )
                | (
                    Construction::ParallelDuplicated
                        | Construction::ParallelThinned { .. }
                        | Construction::ParallelShifted { .. },
                    Geometry::ParallelLines { .. }
                )
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ProcessSpec {
    pub construction: Construction,
    pub rate_lambda: f64,
    pub space: Space,
    /// Lifts the shift bound from `r / sqrt(3)` to `r` (exploratory runs).
    #[cfg_attr(feature = "serde", serde(default))]
    pub allow_unproven_s: bool,
}

impl ProcessSpec {
    pub fn new(construction: Construction, rate_lambda: f64, space: Space) -> Result<ProcessSpec> {
        let spec = ProcessSpec {
            construction,
            rate_lambda,
            space,
            allow_unproven_s: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if !(self.rate_lambda.is_finite() && self.rate_lambda > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "rate_lambda must be positive, got {}",
                self.rate_lambda
            )));
        }
        if !self.construction.fits(&self.space.geometry) {
            return Err(Error::InvalidSpec(format!(
                "construction {} does not live on {}",
                self.construction.name(),
                self.space.geometry.name()
            )));
        }
        match self.construction {
            Construction::ParallelThinned { p } if !(0.0..=1.0).contains(&p) => Err(
                Error::InvalidSpec(format!("thinning_p must lie in [0, 1], got {p}")),
            ),
            Construction::ParallelShifted { s } => {
                let r = self.space.geometry.separation().unwrap_or(0.0);
                let bound = self.shift_bound(r);
                if s != 0.0 && libm::fabs(s) < bound {
                    Ok(())
                } else if self.allow_unproven_s {
                    Err(Error::InvalidSpec(format!("shift_s must satisfy 0 < |s| < r = {r}, got {s}")))
                } else {
                    Err(Error::InvalidSpec(format!(
                        "shift_s must satisfy 0 < |s| < r/sqrt(3) = {bound}, got {s}"
                    )))
                }
            }
            _ => Ok(()),
        }
    }

    fn shift_bound(&self, r: f64) -> f64 {
        if self.allow_unproven_s {
            r
        } else {
            r / libm::sqrt(3.0)
        }
    }

    /// True when the shift lies outside the proven range `|s| < r/sqrt(3)`.
    pub fn is_exploratory(&self) -> bool {
        match (self.construction, self.space.geometry) {
            (Construction::ParallelShifted { s }, Geometry::ParallelLines { separation_r }) => {
                libm::fabs(s) >= separation_r / libm::sqrt(3.0)
            }
            _ => false,
        }
    }

    pub fn separation(&self) -> Option<f64> {
        self.space.geometry.separation()
    }

    /// Default per-line windows for this spec.
    pub fn extents(&self) -> [Extent; 2] {
        let l = self.space.window;
        let base = Extent { lo: -l, hi: l };
        match self.construction {
            Construction::SingleLinePoisson => [base, Extent { lo: 0.0, hi: 0.0 }],
            Construction::ParallelShifted { s } => [base, Extent { lo: -l + s, hi: l + s }],
            _ => [base, base],
        }
    }
}

/// Closed interval of abscissas covered by a line of a realization.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Extent {
    pub lo: f64,
    pub hi: f64,
}

impl Extent {
    #[inline]
    pub fn contains(&self, u: f64) -> bool {
        self.lo <= u && u <= self.hi
    }

    fn shifted(self, by: f64) -> Extent {
        Extent {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }

    fn mirrored(self) -> Extent {
        Extent {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// Where a thinned base point ended up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Assignment {
    Both,
    Line0,
    LineR,
}

impl Assignment {
    fn swapped(self) -> Assignment {
        match self {
            Assignment::Both => Assignment::Both,
            Assignment::Line0 => Assignment::LineR,
            Assignment::LineR => Assignment::Line0,
        }
    }
}

/// A sampled (or hand-built) instance of a [`ProcessSpec`].
///
/// `base_points` is the shadow process: the union of both lines for thinned and
/// intersecting realizations, line 0 for the duplicated and shifted ones.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Realization {
    pub spec: ProcessSpec,
    pub seed: u64,
    pub stream: u64,
    pub base_points: Vec<f64>,
    pub line0: Vec<f64>,
    pub line1: Vec<f64>,
    pub extents: [Extent; 2],
    /// One entry per base point; empty unless the construction is thinned.
    pub flags: Vec<Assignment>,
}

/// Poisson sample of intensity `rate` on `[lo, hi)`, sorted and without repeats.
pub fn sample_poisson<R: Rng + ?Sized>(rate: f64, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    assert!(rate >= 0.0 && rate.is_finite(), "rate must be finite and >= 0");
    assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "malformed window");
    let mean = rate * (hi - lo);
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean)
        .expect("finite positive Poisson mean")
        .sample(rng) as usize;
    let mut points: Vec<f64> = (0..count).map(|_| rng.random_range(lo..hi)).collect();
    points.sort_unstable_by(f64::total_cmp);
    points.dedup();
    points
}

/// Realization for `spec` from stream 0 of `seed`.
pub fn generate(spec: &ProcessSpec, seed: u64) -> Result<Realization> {
    generate_stream(spec, seed, 0)
}

/// Realization for `spec` from stream `stream` of `seed`.
pub fn generate_stream(spec: &ProcessSpec, seed: u64, stream: u64) -> Result<Realization> {
    spec.validate()?;
    let mut rng = rng_stream(seed, stream);
    let l = spec.space.window;
    let rate = spec.rate_lambda;
    let extents = spec.extents();

    let mut flags = Vec::new();
    let (base_points, line0, line1) = match spec.construction {
        Construction::SingleLinePoisson => {
            let pts = sample_poisson(rate, -l, l, &mut rng);
            (pts.clone(), pts, Vec::new())
        }
        Construction::IntersectingIndependent => {
            let a = sample_poisson(rate, -l, l, &mut rng);
            let b = sample_poisson(rate, -l, l, &mut rng);
            (merge_sorted(&a, &b), a, b)
        }
        Construction::ParallelDuplicated => {
            let pts = sample_poisson(rate, -l, l, &mut rng);
            (pts.clone(), pts.clone(), pts)
        }
        Construction::ParallelThinned { p } => {
            let base = sample_poisson(rate, -l, l, &mut rng);
            let mut line0 = Vec::with_capacity(base.len());
            let mut line1 = Vec::with_capacity(base.len());
            flags.reserve(base.len());
            for &x in &base {
                let u: f64 = rng.random();
                let flag = if u < 1.0 - p {
                    Assignment::Both
                } else if u < 1.0 - 0.5 * p {
                    Assignment::Line0
                } else {
                    Assignment::LineR
                };
                if flag != Assignment::LineR {
                    line0.push(x);
                }
                if flag != Assignment::Line0 {
                    line1.push(x);
                }
                flags.push(flag);
            }
            (base, line0, line1)
        }
        Construction::ParallelShifted { s } => {
            let base = sample_poisson(rate, -l, l, &mut rng);
            let line1 = base.iter().map(|&x| x + s).collect();
            (base.clone(), base, line1)
        }
    };

    Ok(Realization {
        spec: *spec,
        seed,
        stream,
        base_points,
        line0,
        line1,
        extents,
        flags,
    })
}

fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable_by(f64::total_cmp);
    out.dedup();
    out
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl Realization {
    /// Builds a realization from explicit per-line points (fixtures, imports).
    ///
    /// Base points and thinning flags are derived from the lines; the per-line
    /// windows are the spec defaults.
    pub fn from_lines(spec: ProcessSpec, line0: Vec<f64>, line1: Vec<f64>) -> Result<Realization> {
        spec.validate()?;
        let extents = spec.extents();
        let (base_points, flags) = match spec.construction {
            Construction::ParallelThinned { .. } => {
                let base = merge_sorted(&line0, &line1);
                let flags = base
                    .iter()
                    .map(|x| {
                        let on0 = line0.binary_search_by(|v| v.total_cmp(x)).is_ok();
                        let on1 = line1.binary_search_by(|v| v.total_cmp(x)).is_ok();
                        match (on0, on1) {
                            (true, true) => Assignment::Both,
                            (true, false) => Assignment::Line0,
                            _ => Assignment::LineR,
                        }
                    })
                    .collect();
                (base, flags)
            }
            Construction::IntersectingIndependent => (merge_sorted(&line0, &line1), Vec::new()),
            _ => (line0.clone(), Vec::new()),
        };
        let real = Realization {
            spec,
            seed: 0,
            stream: 0,
            base_points,
            line0,
            line1,
            extents,
            flags,
        };
        real.validate()?;
        Ok(real)
    }

    /// Checks the structural invariants of the construction.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::InvalidSpec(msg));
        for line in Line::BOTH {
            let pts = self.line(line);
            if !strictly_increasing(pts) {
                return fail(format!("line {} is not strictly increasing", line.index()));
            }
            let ext = self.extents[line.index()];
            if let Some(&bad) = pts.iter().find(|&&u| !ext.contains(u)) {
                return fail(format!("abscissa {bad} outside the window of line {}", line.index()));
            }
        }
        if !strictly_increasing(&self.base_points) {
            return fail("base points are not strictly increasing".to_string());
        }
        match self.spec.construction {
            Construction::SingleLinePoisson if !self.line1.is_empty() => {
                fail("a single line realization has points on line 1".to_string())
            }
            Construction::ParallelDuplicated if self.line0 != self.line1 => {
                fail("duplicated lines differ".to_string())
            }
            Construction::ParallelShifted { s }
                if self.line0.len() != self.line1.len()
                    || self.line0.iter().zip(&self.line1).any(|(a, b)| a + s != *b) =>
            {
                fail(format!("line 1 is not line 0 shifted by {s}"))
            }
            Construction::ParallelThinned { .. } => {
                if self.flags.len() != self.base_points.len() {
                    return fail("one thinning flag per base point is required".to_string());
                }
                let mut n0 = 0;
                let mut n1 = 0;
                for (&x, &flag) in self.base_points.iter().zip(&self.flags) {
                    let on0 = flag != Assignment::LineR;
                    let on1 = flag != Assignment::Line0;
                    if on0 {
                        if self.line0.get(n0) != Some(&x) {
                            return fail(format!("line 0 disagrees with the flags at {x}"));
                        }
                        n0 += 1;
                    }
                    if on1 {
                        if self.line1.get(n1) != Some(&x) {
                            return fail(format!("line 1 disagrees with the flags at {x}"));
                        }
                        n1 += 1;
                    }
                }
                if n0 != self.line0.len() || n1 != self.line1.len() {
                    return fail("lines hold points missing from the base".to_string());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn space(&self) -> &Space {
        &self.spec.space
    }

    #[inline]
    pub fn line(&self, line: Line) -> &[f64] {
        match line {
            Line::Zero => &self.line0,
            Line::One => &self.line1,
        }
    }

    pub fn point_count(&self) -> usize {
        self.line0.len() + self.line1.len()
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        Line::BOTH
            .into_iter()
            .flat_map(move |line| self.line(line).iter().map(move |&u| Site::new(u, line)))
    }

    pub fn contains(&self, site: Site) -> bool {
        self.line(site.line)
            .binary_search_by(|v| v.total_cmp(&site.u))
            .is_ok()
    }

    /// Index of `site` in its line array.
    pub fn index_of(&self, site: Site) -> Option<usize> {
        self.line(site.line)
            .binary_search_by(|v| v.total_cmp(&site.u))
            .ok()
    }

    /// Smallest distance from `a` to any location outside the per-line windows.
    pub fn truncation_margin(&self, a: Site) -> f64 {
        let metric = self.spec.space.metric();
        let lines = &Line::BOTH[..self.spec.space.geometry.line_count()];
        lines
            .iter()
            .map(|&line| {
                let ext = self.extents[line.index()];
                metric.margin_outside(a, line, ext.lo, ext.hi)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Keeps the points lying at least `delta` inside every per-line window.
    pub(crate) fn shrink(&self, delta: f64) -> Realization {
        let extents = self.extents.map(|e| Extent {
            lo: e.lo + delta,
            hi: e.hi - delta,
        });
        let keep = |pts: &[f64], ext: Extent| -> Vec<f64> {
            pts.iter().copied().filter(|&u| ext.contains(u)).collect()
        };
        let base_ext = extents[0];
        let mut base_points = Vec::new();
        let mut flags = Vec::new();
        for (i, &x) in self.base_points.iter().enumerate() {
            if base_ext.contains(x) {
                base_points.push(x);
                if let Some(&f) = self.flags.get(i) {
                    flags.push(f);
                }
            }
        }
        let mut spec = self.spec;
        spec.space.window -= delta;
        Realization {
            spec,
            seed: self.seed,
            stream: self.stream,
            base_points,
            line0: keep(&self.line0, extents[0]),
            line1: keep(&self.line1, extents[1]),
            extents,
            flags,
        }
    }
}

/// The shift operator: translates by `-at.u` and, when `at` lies on line 1,
/// exchanges the two lines so that `at` maps to `(0, line 0)`.
pub fn shift_realization(real: &Realization, at: Site) -> Result<Realization> {
    let space = real.space();
    space.check_site(at)?;
    if let Geometry::IntersectingLines { .. } = space.geometry {
        return Err(Error::WrongKind {
            op: "shift_realization",
            what: "intersecting lines",
        });
    }
    let x = at.u;
    let sub = |pts: &[f64]| -> Vec<f64> { pts.iter().map(|&v| v - x).collect() };
    let mut out = real.clone();
    let mut extents = real.extents.map(|e| e.shifted(-x));
    if at.line == Line::One {
        out.line0 = sub(&real.line1);
        out.line1 = sub(&real.line0);
        extents.swap(0, 1);
        out.flags = real.flags.iter().map(|f| f.swapped()).collect();
        match real.spec.construction {
            Construction::ParallelShifted { s } => {
                out.spec.construction = Construction::ParallelShifted { s: -s };
                out.base_points = out.line0.clone();
            }
            _ => out.base_points = sub(&real.base_points),
        }
    } else {
        out.line0 = sub(&real.line0);
        out.line1 = sub(&real.line1);
        out.base_points = sub(&real.base_points);
    }
    out.extents = extents;
    Ok(out)
}

/// The mirroring operator: negates every abscissa on both lines.
pub fn mirror_realization(real: &Realization) -> Realization {
    let neg = |pts: &[f64]| -> Vec<f64> { pts.iter().rev().map(|&v| -v).collect() };
    let mut out = real.clone();
    out.line0 = neg(&real.line0);
    out.line1 = neg(&real.line1);
    out.base_points = neg(&real.base_points);
    out.flags = real.flags.iter().rev().copied().collect();
    out.extents = real.extents.map(Extent::mirrored);
    if let Construction::ParallelShifted { s } = real.spec.construction {
        out.spec.construction = Construction::ParallelShifted { s: -s };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parallel(construction: Construction, r: f64, l: f64) -> ProcessSpec {
        ProcessSpec::new(construction, 1.0, Space::parallel(r, l).unwrap()).unwrap()
    }

    #[test]
    fn zero_rate_is_empty() {
        let mut rng = rng_stream(1, 0);
        assert!(sample_poisson(0.0, -5.0, 5.0, &mut rng).is_empty());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_poisson(1.0, -50.0, 50.0, &mut rng_stream(9, 4));
        let b = sample_poisson(1.0, -50.0, 50.0, &mut rng_stream(9, 4));
        assert_eq!(a, b);
        let c = sample_poisson(1.0, -50.0, 50.0, &mut rng_stream(9, 5));
        assert_ne!(a, c);
    }

    #[test]
    fn thinned_extremes() {
        let spec = parallel(Construction::ParallelThinned { p: 0.0 }, 1.0, 50.0);
        let real = generate(&spec, 3).unwrap();
        assert_eq!(real.line0, real.base_points);
        assert_eq!(real.line1, real.base_points);
        assert!(real.flags.iter().all(|&f| f == Assignment::Both));

        let spec = parallel(Construction::ParallelThinned { p: 1.0 }, 1.0, 50.0);
        let real = generate(&spec, 3).unwrap();
        assert!(real.line0.iter().all(|x| !real.line1.contains(x)));
        assert_eq!(merge_sorted(&real.line0, &real.line1), real.base_points);
        real.validate().unwrap();
    }

    #[test]
    fn shifted_line_is_translated_copy() {
        let spec = parallel(Construction::ParallelShifted { s: 0.3 }, 1.0, 10.0);
        let real = Realization::from_lines(spec, vec![1.0, 2.5], vec![1.0 + 0.3, 2.5 + 0.3]).unwrap();
        assert_eq!(real.line1, vec![1.3, 2.8]);
        let generated = generate(&spec, 11).unwrap();
        generated.validate().unwrap();
        assert_eq!(generated.extents[1], Extent { lo: -9.7, hi: 10.3 });
    }

    #[test]
    fn spec_validation() {
        let space = Space::parallel(1.0, 10.0).unwrap();
        let bound = 1.0 / 3f64.sqrt();
        assert!(ProcessSpec::new(Construction::ParallelShifted { s: bound }, 1.0, space).is_err());
        assert!(ProcessSpec::new(Construction::ParallelShifted { s: 0.0 }, 1.0, space).is_err());
        assert!(ProcessSpec::new(Construction::ParallelShifted { s: -0.5 }, 1.0, space).is_ok());
        let mut spec = ProcessSpec {
            construction: Construction::ParallelShifted { s: 0.8 },
            rate_lambda: 1.0,
            space,
            allow_unproven_s: true,
        };
        assert!(spec.validate().is_ok());
        assert!(spec.is_exploratory());
        spec.construction = Construction::ParallelShifted { s: 1.0 };
        assert!(spec.validate().is_err());

        assert!(ProcessSpec::new(Construction::ParallelThinned { p: 1.5 }, 1.0, space).is_err());
        assert!(ProcessSpec::new(Construction::SingleLinePoisson, 1.0, space).is_err());
        assert!(ProcessSpec::new(Construction::ParallelDuplicated, 0.0, space).is_err());
        let single = Space::single_line(5.0).unwrap();
        assert!(ProcessSpec::new(Construction::ParallelDuplicated, 1.0, single).is_err());
        assert!(generate(
            &ProcessSpec {
                construction: Construction::ParallelShifted { s: 0.9 },
                rate_lambda: 1.0,
                space,
                allow_unproven_s: false
            },
            1
        )
        .is_err());
    }

    #[test]
    fn shift_operator() {
        let spec = parallel(Construction::ParallelThinned { p: 0.5 }, 1.0, 10.0);
        let real = Realization::from_lines(spec, vec![-2.0, 1.0, 3.0], vec![1.0, 2.0]).unwrap();

        let id = shift_realization(&real, Site::on0(0.0)).unwrap();
        assert_eq!(id, real);

        let moved = shift_realization(&real, Site::on1(2.0)).unwrap();
        assert!(moved.contains(Site::on0(0.0)));
        assert_eq!(moved.line0, vec![-1.0, 0.0]);
        assert_eq!(moved.line1, vec![-4.0, -1.0, 1.0]);
        assert_eq!(moved.extents[0], Extent { lo: -12.0, hi: 8.0 });
        moved.validate().unwrap();

        let back = shift_realization(&moved, Site::on1(-2.0)).unwrap();
        assert_eq!(back, real);
    }

    #[test]
    fn shift_on_shifted_flips_sign() {
        let spec = parallel(Construction::ParallelShifted { s: 0.25 }, 1.0, 10.0);
        let real = Realization::from_lines(spec, vec![1.0, 2.5], vec![1.25, 2.75]).unwrap();
        let moved = shift_realization(&real, Site::on1(1.25)).unwrap();
        assert_eq!(moved.spec.construction, Construction::ParallelShifted { s: -0.25 });
        assert_eq!(moved.line0, vec![0.0, 1.5]);
        moved.validate().unwrap();
        let intersecting = ProcessSpec::new(
            Construction::IntersectingIndependent,
            1.0,
            Space::intersecting(1.0, 5.0).unwrap(),
        )
        .unwrap();
        let ireal = generate(&intersecting, 1).unwrap();
        assert!(shift_realization(&ireal, Site::on0(1.0)).is_err());
    }

    #[test]
    fn mirror_operator() {
        let spec = ProcessSpec::new(Construction::SingleLinePoisson, 1.0, Space::single_line(5.0).unwrap())
            .unwrap();
        let real = Realization::from_lines(spec, vec![1.0, 2.0], vec![]).unwrap();
        let m = mirror_realization(&real);
        assert_eq!(m.line0, vec![-2.0, -1.0]);
        assert_eq!(mirror_realization(&m), real);

        let spec = parallel(Construction::ParallelShifted { s: 0.3 }, 1.0, 20.0);
        let real = generate(&spec, 5).unwrap();
        let m = mirror_realization(&real);
        m.validate().unwrap();
        assert!(m.line0.iter().zip(&m.line1).all(|(a, b)| a + -0.3 == *b));
        assert_eq!(mirror_realization(&m), real);
    }

    #[test]
    fn rejects_broken_fixtures() {
        let spec = parallel(Construction::ParallelDuplicated, 1.0, 10.0);
        assert!(Realization::from_lines(spec, vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(Realization::from_lines(spec, vec![2.0, 1.0], vec![2.0, 1.0]).is_err());
        assert!(Realization::from_lines(spec, vec![11.0], vec![11.0]).is_err());
    }
}
