//! Metric spaces made of one or two lines.
//!
//! A [`Site`] is a signed abscissa plus a line label. On intersecting lines the
//! abscissa is arc length from the intersection point; on parallel lines it is
//! the shadow (first coordinate) of the point.

use alloc::format;
use core::f64::consts::PI;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One of the two lines of a space. `Zero` is the only line of a single line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "u8", try_from = "u8"))]
pub enum Line {
    Zero,
    One,
}

impl Line {
    pub const BOTH: [Line; 2] = [Line::Zero, Line::One];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn other(self) -> Line {
        match self {
            Line::Zero => Line::One,
            Line::One => Line::Zero,
        }
    }
}

impl From<Line> for u8 {
    fn from(line: Line) -> u8 {
        line as u8
    }
}

impl TryFrom<u8> for Line {
    type Error = Error;

    fn try_from(v: u8) -> Result<Line> {
        match v {
            0 => Ok(Line::Zero),
            1 => Ok(Line::One),
            _ => Err(Error::InvalidSite(format!("line label {v}"))),
        }
    }
}

/// A location in a space: signed abscissa along `line`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Site {
    pub u: f64,
    pub line: Line,
}

impl Site {
    pub const ORIGIN: Site = Site {
        u: 0.0,
        line: Line::Zero,
    };

    #[inline]
    pub const fn new(u: f64, line: Line) -> Site {
        Site { u, line }
    }

    #[inline]
    pub const fn on0(u: f64) -> Site {
        Site { u, line: Line::Zero }
    }

    #[inline]
    pub const fn on1(u: f64) -> Site {
        Site { u, line: Line::One }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, line {})", self.u, self.line.index())
    }
}

/// Shape of the space, without the simulation window.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", deny_unknown_fields))]
pub enum Geometry {
    SingleLine,
    /// Two lines through the origin; `alpha` is the angle between their
    /// positive directions.
    IntersectingLines { alpha: f64 },
    /// `R x {0, r}`.
    ParallelLines { separation_r: f64 },
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::SingleLine => "SingleLine",
            Geometry::IntersectingLines { .. } => "IntersectingLines",
            Geometry::ParallelLines { .. } => "ParallelLines",
        }
    }

    pub fn line_count(&self) -> usize {
        match self {
            Geometry::SingleLine => 1,
            _ => 2,
        }
    }

    pub fn separation(&self) -> Option<f64> {
        match *self {
            Geometry::ParallelLines { separation_r } => Some(separation_r),
            _ => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Geometry::IntersectingLines { alpha } => Some(alpha),
            _ => None,
        }
    }
}

/// A geometry together with the simulation half-width `window_L`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Space {
    pub geometry: Geometry,
    #[cfg_attr(feature = "serde", serde(rename = "window_L"))]
    pub window: f64,
}

impl Space {
    pub fn new(geometry: Geometry, window: f64) -> Result<Space> {
        let space = Space { geometry, window };
        space.validate()?;
        Ok(space)
    }

    pub fn single_line(window: f64) -> Result<Space> {
        Space::new(Geometry::SingleLine, window)
    }

    pub fn intersecting(alpha: f64, window: f64) -> Result<Space> {
        Space::new(Geometry::IntersectingLines { alpha }, window)
    }

    pub fn parallel(separation_r: f64, window: f64) -> Result<Space> {
        Space::new(Geometry::ParallelLines { separation_r }, window)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.window.is_finite() && self.window > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "window_L must be a positive finite length, got {}",
                self.window
            )));
        }
        match self.geometry {
            Geometry::SingleLine => Ok(()),
            Geometry::IntersectingLines { alpha } => {
                if alpha > 0.0 && alpha < PI {
                    Ok(())
                } else {
                    Err(Error::InvalidSpace(format!("alpha must lie in (0, pi), got {alpha}")))
                }
            }
            Geometry::ParallelLines { separation_r } => {
                if separation_r.is_finite() && separation_r > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidSpace(format!(
                        "separation_r must be positive, got {separation_r}"
                    )))
                }
            }
        }
    }

    pub fn metric(&self) -> Metric {
        Metric::new(&self.geometry)
    }

    pub fn check_site(&self, a: Site) -> Result<()> {
        if !a.u.is_finite() {
            return Err(Error::InvalidSite(format!("{a}: abscissa is not finite")));
        }
        if self.geometry == Geometry::SingleLine && a.line != Line::Zero {
            return Err(Error::InvalidSite(format!("{a}: a single line has only line 0")));
        }
        Ok(())
    }
}

/// Angle between the positive directions of `y = m1 x` and `y = m2 x`.
pub fn slopes_to_alpha(m1: f64, m2: f64) -> Result<f64> {
    if !(m1.is_finite() && m2.is_finite()) {
        return Err(Error::param("slopes", "slopes must be finite"));
    }
    if m1 == m2 {
        return Err(Error::param("slopes", "the two lines coincide"));
    }
    Ok(libm::atan2(libm::fabs(m2 - m1), 1.0 + m1 * m2))
}

/// Distance kernel specialised for one geometry.
///
/// Cross-line distance is computed as `sqrt(delta^2 + h^2)` where `delta` is
/// the offset from the foot of the perpendicular (the *center*) and `h` the
/// distance to the other line; the rounded value is then non-decreasing in
/// `|delta|`, which the candidate search in [`crate::walk`] relies on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    kind: MetricKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum MetricKind {
    Single,
    Parallel { r2: f64 },
    Intersecting { cos: f64, sin: f64 },
}

impl Metric {
    pub fn new(geometry: &Geometry) -> Metric {
        let kind = match *geometry {
            Geometry::SingleLine => MetricKind::Single,
            Geometry::ParallelLines { separation_r } => MetricKind::Parallel {
                r2: separation_r * separation_r,
            },
            Geometry::IntersectingLines { alpha } => MetricKind::Intersecting {
                cos: libm::cos(alpha),
                sin: libm::sin(alpha),
            },
        };
        Metric { kind }
    }

    /// Abscissa on `target` closest to `a`.
    #[inline]
    pub fn center(&self, a: Site, target: Line) -> f64 {
        match self.kind {
            MetricKind::Intersecting { cos, .. } if a.line != target => a.u * cos,
            _ => a.u,
        }
    }

    /// Squared distance from `a` to the line `target`.
    #[inline]
    fn height2(&self, a: Site, target: Line) -> f64 {
        if a.line == target {
            return 0.0;
        }
        match self.kind {
            MetricKind::Single => 0.0,
            MetricKind::Parallel { r2 } => r2,
            MetricKind::Intersecting { sin, .. } => {
                let h = a.u * sin;
                h * h
            }
        }
    }

    /// Distance from `a` to the point with abscissa `v` on `target`.
    #[inline]
    pub fn distance_to(&self, a: Site, target: Line, v: f64) -> f64 {
        let delta = v - self.center(a, target);
        if a.line == target {
            libm::fabs(delta)
        } else {
            libm::sqrt(delta * delta + self.height2(a, target))
        }
    }

    #[inline]
    pub fn distance(&self, a: Site, b: Site) -> f64 {
        self.distance_to(a, b.line, b.u)
    }

    /// Infimum of the distance from `a` to abscissas on `line` outside `[lo, hi]`.
    pub fn margin_outside(&self, a: Site, line: Line, lo: f64, hi: f64) -> f64 {
        let c = self.center(a, line);
        let v = if c < lo || c > hi {
            c
        } else if c - lo <= hi - c {
            lo
        } else {
            hi
        };
        self.distance_to(a, line, v)
    }
}

pub fn distance(space: &Space, a: Site, b: Site) -> f64 {
    space.metric().distance(a, b)
}

/// Distance from the origin. Parallel lines use the shadow convention `|u|`.
pub fn norm(_space: &Space, a: Site) -> f64 {
    libm::fabs(a.u)
}

/// Smallest possible distance from `a` to any location outside `[-L, L]` on
/// any line of the space.
pub fn boundary_margin(space: &Space, a: Site) -> f64 {
    let metric = space.metric();
    let l = space.window;
    let lines = &Line::BOTH[..space.geometry.line_count()];
    lines
        .iter()
        .map(|&line| metric.margin_outside(a, line, -l, l))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn distance_examples() {
        let par = Space::parallel(4.0, 50.0).unwrap();
        assert_eq!(distance(&par, Site::on0(0.0), Site::on1(3.0)), 5.0);

        let orth = Space::intersecting(FRAC_PI_2, 50.0).unwrap();
        assert!(close(distance(&orth, Site::on0(3.0), Site::on1(4.0)), 5.0));

        let single = Space::single_line(10.0).unwrap();
        assert_eq!(distance(&single, Site::on0(-1.5), Site::on0(2.0)), 3.5);

        for space in [par, orth, single] {
            let a = Site::on0(1.25);
            assert_eq!(distance(&space, a, a), 0.0);
        }
    }

    #[test]
    fn norm_examples() {
        let orth = Space::intersecting(1.0, 50.0).unwrap();
        assert_eq!(norm(&orth, Site::on1(-7.0)), 7.0);
        assert_eq!(norm(&orth, Site::on0(0.0)), 0.0);
        let par = Space::parallel(1.0, 50.0).unwrap();
        assert_eq!(norm(&par, Site::on1(-3.0)), 3.0);
    }

    #[test]
    fn margin_examples() {
        let par = Space::parallel(1.0, 50.0).unwrap();
        assert_eq!(boundary_margin(&par, Site::on0(10.0)), 40.0);
        assert_eq!(boundary_margin(&par, Site::on0(0.0)), 50.0);
        assert_eq!(boundary_margin(&par, Site::on1(0.0)), 50.0);

        // Edge (50, line 0) at 20 beats the cross-line edges at sqrt(30^2 + 50^2).
        let orth = Space::intersecting(FRAC_PI_2, 50.0).unwrap();
        let a = Site::on0(30.0);
        let edges = [
            Site::on0(50.0),
            Site::on0(-50.0),
            Site::on1(50.0),
            Site::on1(-50.0),
        ];
        let by_hand = edges
            .iter()
            .map(|&e| distance(&orth, a, e))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(by_hand, 20.0);
        assert_eq!(boundary_margin(&orth, a), 20.0);
        assert!(close(distance(&orth, a, Site::on1(50.0)), (30.0f64 * 30.0 + 2500.0).sqrt()));
    }

    #[test]
    fn margin_when_center_leaves_other_window() {
        // Line 1 window [-50.3, 49.7]: the foot of (49.9, 0) on line 1 is
        // already outside it, so the margin is the separation itself.
        let metric = Metric::new(&Geometry::ParallelLines { separation_r: 1.0 });
        let a = Site::on0(49.9);
        assert_eq!(metric.margin_outside(a, Line::One, -50.3, 49.7), 1.0);
    }

    #[test]
    fn validation() {
        assert!(Space::single_line(0.0).is_err());
        assert!(Space::single_line(f64::NAN).is_err());
        assert!(Space::intersecting(0.0, 1.0).is_err());
        assert!(Space::intersecting(PI, 1.0).is_err());
        assert!(Space::parallel(-1.0, 1.0).is_err());
        let single = Space::single_line(1.0).unwrap();
        assert!(single.check_site(Site::on1(0.0)).is_err());
        assert!(single.check_site(Site::on0(f64::INFINITY)).is_err());
    }

    #[test]
    fn slopes() {
        assert!(close(slopes_to_alpha(0.0, 1.0).unwrap(), PI / 4.0));
        assert!(close(slopes_to_alpha(1.0, -1.0).unwrap(), FRAC_PI_2));
        // Directions (1, -2) and (1, 0.5) are orthogonal.
        assert!(close(slopes_to_alpha(-2.0, 0.5).unwrap(), FRAC_PI_2));
        // Obtuse between positive directions.
        let a = slopes_to_alpha(3.0, -3.0).unwrap();
        assert!(a > FRAC_PI_2 && a < PI);
        assert!(slopes_to_alpha(2.0, 2.0).is_err());
    }

    #[test]
    fn law_of_cosines_agrees() {
        let alpha = 1.1;
        let space = Space::intersecting(alpha, 10.0).unwrap();
        for &(u, v) in &[(3.0, 4.0), (-2.5, 7.0), (0.1, -9.0), (5.0, 5.0)] {
            let d = distance(&space, Site::on0(u), Site::on1(v));
            let lc = (u * u + v * v - 2.0 * u * v * alpha.cos()).sqrt();
            assert!(close(d, lc), "{d} vs {lc}");
        }
    }
}
