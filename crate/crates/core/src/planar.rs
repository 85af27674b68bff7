//! Planar primitives for one step of the two-walker process.
//!
//! Work in this module happens in two frames. Walk simulation uses raw
//! world coordinates ([`Point`], [`Segment`]). The conditional analysis
//! uses the *canonical frame*: the first walker's step placed on the
//! x-axis with its midpoint at the origin, so the step runs from
//! `(-d1/2, 0)` to `(d1/2, 0)` ([`CanonicalPoint`]).
//!
//! In the canonical frame the second walker, starting at `v2`, crosses
//! the first step only if `v2` lies within `d2` of the segment — the
//! stadium-shaped *feasible domain* — and then does so with probability
//! [`crossing_probability`]: the fraction of headings whose segment of
//! length `d2` meets the canonical segment.

use crate::util::clamp_unit;
use core::f64::consts::PI;
use core::fmt;

/// Tolerance for orientation sign tests in the intersection predicate.
const ORIENT_EPS: f64 = 1e-12;

/// Slack for circle-membership dispatch in [`crossing_probability`].
const MEMBER_EPS: f64 = 1e-12;

/// A position in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[must_use]
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance to `other`.
    #[must_use]
    pub fn distance(&self, other: &Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// The path traced during one step: a closed segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    #[must_use]
    pub fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }
}

/// A position expressed in the canonical frame of the first step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalPoint {
    pub x: f64,
    pub y: f64,
}

impl CanonicalPoint {
    #[must_use]
    pub fn new(x: f64, y: f64) -> Self {
        CanonicalPoint { x, y }
    }
}

/// The two step lengths of the walkers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    d1: f64,
    d2: f64,
}

impl StepParams {
    /// Both step lengths must be finite and strictly positive.
    pub fn new(d1: f64, d2: f64) -> Result<Self, PlanarError> {
        if d1 > 0.0 && d2 > 0.0 && d1.is_finite() && d2.is_finite() {
            Ok(StepParams { d1, d2 })
        } else {
            Err(PlanarError::InvalidStep)
        }
    }

    #[must_use]
    pub fn d1(&self) -> f64 {
        self.d1
    }

    #[must_use]
    pub fn d2(&self) -> f64 {
        self.d2
    }
}

/// Errors from the planar operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarError {
    /// A step length was zero, negative, or not finite.
    InvalidStep,
    /// The queried point lies outside the feasible domain.
    OutsideFeasibleDomain,
    /// A slice offset `y` with `|y| > d2` has no feasible points.
    OffsetOutOfRange,
}

impl fmt::Display for PlanarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarError::InvalidStep => write!(f, "step lengths must be positive and finite"),
            PlanarError::OutsideFeasibleDomain => {
                write!(f, "point lies outside the feasible domain")
            }
            PlanarError::OffsetOutOfRange => write!(f, "slice offset exceeds d2 in magnitude"),
        }
    }
}

impl core::error::Error for PlanarError {}

/// Endpoint of a step of length `d` from `v` at heading `alpha`.
#[must_use]
pub fn endpoint(v: Point, d: f64, alpha: f64) -> Point {
    Point {
        x: v.x + d * libm::cos(alpha),
        y: v.y + d * libm::sin(alpha),
    }
}

/// Sign of the turn `p -> q -> r`: +1 counterclockwise, -1 clockwise,
/// 0 collinear within [`ORIENT_EPS`] on the cross product.
fn orientation(p: Point, q: Point, r: Point) -> i8 {
    let cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    if cross > ORIENT_EPS {
        1
    } else if cross < -ORIENT_EPS {
        -1
    } else {
        0
    }
}

/// Whether `q`, known collinear with `p`-`r`, lies on the closed segment.
fn on_segment(p: Point, q: Point, r: Point) -> bool {
    q.x <= p.x.max(r.x) + ORIENT_EPS
        && q.x >= p.x.min(r.x) - ORIENT_EPS
        && q.y <= p.y.max(r.y) + ORIENT_EPS
        && q.y >= p.y.min(r.y) - ORIENT_EPS
}

/// Whether two closed segments share at least one point.
///
/// Touching at an endpoint and collinear overlap both count.
#[must_use]
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    let (p1, q1) = (s1.start, s1.end);
    let (p2, q2) = (s2.start, s2.end);

    let o1 = orientation(p1, q1, p2);
    let o2 = orientation(p1, q1, q2);
    let o3 = orientation(p2, q2, p1);
    let o4 = orientation(p2, q2, q1);

    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }

    (o1 == 0 && on_segment(p1, p2, q1))
        || (o2 == 0 && on_segment(p1, q2, q1))
        || (o3 == 0 && on_segment(p2, p1, q2))
        || (o4 == 0 && on_segment(p2, q1, q2))
}

/// Distance from a canonical-frame point to the canonical segment.
fn distance_to_canonical_segment(v2: CanonicalPoint, p: &StepParams) -> f64 {
    let half = p.d1 / 2.0;
    if v2.x.abs() <= half {
        v2.y.abs()
    } else {
        libm::hypot(v2.x.abs() - half, v2.y)
    }
}

/// Whether `v2` lies in the feasible domain: within `d2` of the
/// canonical segment. Only such starting points can produce a crossing.
#[must_use]
pub fn in_feasible_domain(v2: CanonicalPoint, p: &StepParams) -> bool {
    distance_to_canonical_segment(v2, p) <= p.d2
}

/// Heading-window fraction when `v2` is in neither endpoint circle.
///
/// The window is the vertex angle of the isosceles triangle with apex
/// `v2` and two sides of length `d2` ending on the axis.
pub(crate) fn window_neither(ay: f64, p: &StepParams) -> f64 {
    libm::acos(clamp_unit(ay / p.d2)) / PI
}

/// Heading-window fraction when `v2` is inside both endpoint circles,
/// so the whole canonical segment is within reach.
pub(crate) fn window_both(x: f64, ay: f64, p: &StepParams) -> f64 {
    let half = p.d1 / 2.0;
    (libm::atan((x + half) / ay) - libm::atan((x - half) / ay)) / (2.0 * PI)
}

/// Heading-window fraction when `v2` is inside exactly the circle
/// around the right endpoint `(d1/2, 0)`; mirror `x` for the left case.
pub(crate) fn window_one(x: f64, ay: f64, p: &StepParams) -> f64 {
    let half = p.d1 / 2.0;
    (libm::acos(clamp_unit(ay / p.d2)) - libm::atan((x - half) / ay)) / (2.0 * PI)
}

/// Probability that the second walker's step crosses the canonical
/// segment, conditional on its starting point `v2`.
///
/// The value is the angular window of crossing headings divided by
/// `2*pi` and always lies in `[0, 1/2]`. The window expression depends
/// on whether `v2` can reach neither, one, or both of the segment
/// endpoints within `d2`; membership ties within [`MEMBER_EPS`] of a
/// circle boundary fall to the earlier-listed branch, where the
/// expressions agree anyway.
///
/// On the axis (`y = 0`) the two-sided limit is used: 1/2 over the
/// segment itself, 0 beyond its ends.
pub fn crossing_probability(v2: CanonicalPoint, p: &StepParams) -> Result<f64, PlanarError> {
    if !in_feasible_domain(v2, p) {
        return Err(PlanarError::OutsideFeasibleDomain);
    }
    let half = p.d1 / 2.0;
    let ay = v2.y.abs();

    if ay == 0.0 {
        return Ok(if v2.x.abs() <= half { 0.5 } else { 0.0 });
    }

    let dist_right = libm::hypot(v2.x - half, v2.y);
    let dist_left = libm::hypot(v2.x + half, v2.y);
    let in_right = dist_right < p.d2 - MEMBER_EPS;
    let in_left = dist_left < p.d2 - MEMBER_EPS;

    let value = match (in_left, in_right) {
        (false, false) => window_neither(ay, p),
        (true, true) => window_both(v2.x, ay, p),
        (false, true) => window_one(v2.x, ay, p),
        (true, false) => window_one(-v2.x, ay, p),
    };
    Ok(value)
}

/// Closed form of the inner integral of [`crossing_probability`] over
/// `x` at fixed offset `y`: `d1 * acos(|y|/d2) / pi`.
pub fn inner_integral(y: f64, p: &StepParams) -> Result<f64, PlanarError> {
    if y.abs() > p.d2 {
        return Err(PlanarError::OffsetOutOfRange);
    }
    Ok(p.d1 * libm::acos(clamp_unit(y.abs() / p.d2)) / PI)
}

/// Integral of [`crossing_probability`] over the whole feasible
/// domain, in closed form: `2 * d1 * d2 / pi`.
#[must_use]
pub fn crossing_integral(p: &StepParams) -> f64 {
    2.0 * p.d1 * p.d2 / PI
}
