//! Spherical primitives for one step of the two-walker process.
//!
//! Positions live on a sphere of radius `rho` and are written as
//! `(rho, theta, phi)` with `theta` the azimuthal angle and `phi` the
//! zenithal angle in `[0, pi]`; the equator is `phi = pi/2`. One step
//! traces a minor geodesic arc of fixed length.
//!
//! The conditional analysis mirrors the planar module in a canonical
//! frame: the first walker's arc is placed on the equator, centred on
//! `(rho, 0, pi/2)`, running from [`canonical_start`] to
//! [`canonical_end`]. Given the second walker's start `v2`, the
//! headings whose arc of length `d2` meets the canonical arc form an
//! angular window delimited by two points on the equator —
//! [`window_right`] and [`window_left`]. Those points are either the
//! canonical arc's endpoints (when within reach of `v2`) or the
//! intersections of the equator with the geodesic circle of radius `d2`
//! around `v2`. [`crossing_probability`] is the window angle over
//! `2*pi`.
//!
//! Arc/arc intersection ([`arcs_intersect`]) uses great-circle normal
//! algebra: the candidate meeting directions are the cross product of
//! the two circle normals, accepted when they fall inside both arcs'
//! angular extents.

use crate::util::clamp_unit;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Tolerance for coplanarity and within-arc tests on unit vectors.
const ARC_EPS: f64 = 1e-12;

/// Relative tolerance when checking that two points share a sphere.
const RADIUS_EPS: f64 = 1e-9;

/// A vector in Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    #[must_use]
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[must_use]
    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[must_use]
    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[must_use]
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    /// Unit vector in the same direction, or `None` when too short to
    /// normalize reliably.
    #[must_use]
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(*self * (1.0 / n))
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A point on a sphere in spherical coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalPoint {
    /// Sphere radius, fixed per sphere.
    pub rho: f64,
    /// Azimuthal angle.
    pub theta: f64,
    /// Zenithal angle in `[0, pi]`.
    pub phi: f64,
}

impl SphericalPoint {
    /// Requires `rho > 0` and `phi` in `[0, pi]`.
    pub fn new(rho: f64, theta: f64, phi: f64) -> Result<Self, SphereError> {
        if rho > 0.0 && rho.is_finite() && theta.is_finite() && (0.0..=PI).contains(&phi) {
            Ok(SphericalPoint { rho, theta, phi })
        } else {
            Err(SphereError::InvalidPoint)
        }
    }
}

/// A minor geodesic arc between two non-antipodal points on one sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicArc {
    start: SphericalPoint,
    end: SphericalPoint,
}

impl GeodesicArc {
    /// Rejects arcs with coincident or antipodal endpoints and
    /// endpoints on different spheres.
    pub fn new(start: SphericalPoint, end: SphericalPoint) -> Result<Self, SphereError> {
        let d = geodesic_distance(&start, &end)?;
        let rho = start.rho;
        if d <= 1e-12 * rho || d >= PI * rho * (1.0 - 1e-12) {
            return Err(SphereError::DegenerateArc);
        }
        Ok(GeodesicArc { start, end })
    }

    #[must_use]
    pub fn start(&self) -> &SphericalPoint {
        &self.start
    }

    #[must_use]
    pub fn end(&self) -> &SphericalPoint {
        &self.end
    }
}

/// Step lengths and sphere radius for the two walkers.
///
/// The constraints `d2/rho < pi/2` and `d1/(2 rho) + d2/rho < pi` keep
/// the feasible domain from wrapping around the sphere; step arcs must
/// also be minor arcs (`d < pi * rho`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereStepParams {
    d1: f64,
    d2: f64,
    rho: f64,
}

impl SphereStepParams {
    pub fn new(d1: f64, d2: f64, rho: f64) -> Result<Self, SphereError> {
        let finite = d1.is_finite() && d2.is_finite() && rho.is_finite();
        if !(finite && d1 > 0.0 && d2 > 0.0 && rho > 0.0) {
            return Err(SphereError::InvalidParams);
        }
        let wrap = d2 / rho >= PI / 2.0 || d1 / (2.0 * rho) + d2 / rho >= PI;
        if wrap || d1 >= PI * rho || d2 >= PI * rho {
            return Err(SphereError::InvalidParams);
        }
        Ok(SphereStepParams { d1, d2, rho })
    }

    #[must_use]
    pub fn d1(&self) -> f64 {
        self.d1
    }

    #[must_use]
    pub fn d2(&self) -> f64 {
        self.d2
    }

    #[must_use]
    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Errors from the spherical operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereError {
    /// Invalid spherical coordinates (non-positive radius or `phi`
    /// outside `[0, pi]`).
    InvalidPoint,
    /// Step parameters violate positivity or the wrap-around bounds.
    InvalidParams,
    /// Two points that must share a sphere have different radii.
    RadiusMismatch,
    /// The zero vector has no spherical coordinates.
    ZeroVector,
    /// Tangent direction undefined for parallel or antiparallel inputs.
    DegenerateTangent,
    /// Arc endpoints coincident or antipodal.
    DegenerateArc,
    /// The queried point lies outside the feasible domain.
    OutsideFeasibleDomain,
    /// The equator-crossing construction is undefined this close to a
    /// pole; cannot occur for feasible-domain points.
    WindowUndefined,
}

impl fmt::Display for SphereError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            SphereError::InvalidPoint => "invalid spherical coordinates",
            SphereError::InvalidParams => "invalid or wrap-around step parameters",
            SphereError::RadiusMismatch => "points lie on different spheres",
            SphereError::ZeroVector => "zero vector has no direction",
            SphereError::DegenerateTangent => "tangent undefined for (anti)parallel points",
            SphereError::DegenerateArc => "arc endpoints coincident or antipodal",
            SphereError::OutsideFeasibleDomain => "point lies outside the feasible domain",
            SphereError::WindowUndefined => "equator window undefined this close to a pole",
        };
        write!(f, "{msg}")
    }
}

impl core::error::Error for SphereError {}

/// Spherical to Cartesian coordinates.
#[must_use]
pub fn cart(p: &SphericalPoint) -> Vec3 {
    cart_raw(p.rho, p.theta, p.phi)
}

/// As [`cart`], but without the `phi` range restriction; used while
/// constructing endpoints whose intermediate zenith may leave `[0, pi]`.
fn cart_raw(rho: f64, theta: f64, phi: f64) -> Vec3 {
    let sin_phi = libm::sin(phi);
    Vec3 {
        x: rho * libm::cos(theta) * sin_phi,
        y: rho * libm::sin(theta) * sin_phi,
        z: rho * libm::cos(phi),
    }
}

/// Cartesian to spherical coordinates; the inverse of [`cart`] up to
/// angle normalization. At the poles the azimuth is fixed to zero.
pub fn sph(v: &Vec3) -> Result<SphericalPoint, SphereError> {
    let rho = v.norm();
    if rho < 1e-300 {
        return Err(SphereError::ZeroVector);
    }
    let rxy = libm::hypot(v.x, v.y);
    let theta = if rxy == 0.0 {
        0.0
    } else {
        libm::atan2(v.y, v.x)
    };
    let phi = libm::atan2(rxy, v.z);
    Ok(SphericalPoint { rho, theta, phi })
}

/// Rotates `v` by `angle` about the axis through the origin along the
/// unit vector `axis`.
#[must_use]
pub fn rotate_about_axis(v: &Vec3, axis: &Vec3, angle: f64) -> Vec3 {
    let (sin_a, cos_a) = (libm::sin(angle), libm::cos(angle));
    let k_cross_v = axis.cross(v);
    let k_dot_v = axis.dot(v);
    *v * cos_a + k_cross_v * sin_a + *axis * (k_dot_v * (1.0 - cos_a))
}

/// Zenith coordinate of the reference endpoint at geodesic distance `d`
/// along the meridian of `phi`, stepping away from the nearer pole.
pub(crate) fn shifted_zenith(phi: f64, d: f64, rho: f64) -> f64 {
    if phi < PI - d / rho {
        phi + d / rho
    } else {
        phi - d / rho
    }
}

/// Endpoint of a geodesic step of length `d` from `v` at heading
/// `alpha`.
///
/// The reference endpoint on `v`'s meridian is rotated about the axis
/// through `v` by `alpha`, so a uniform `alpha` gives a uniform heading.
/// Requires `0 < d < pi * rho`.
#[must_use]
pub fn geodesic_endpoint(v: &SphericalPoint, d: f64, alpha: f64) -> SphericalPoint {
    debug_assert!(d > 0.0 && d < PI * v.rho, "step length {d} out of range");
    let reference = cart_raw(v.rho, v.theta, shifted_zenith(v.phi, d, v.rho));
    let axis = cart(v) * (1.0 / v.rho);
    let rotated = rotate_about_axis(&reference, &axis, alpha);
    // The rotation preserves the radius up to rounding; pin it exactly.
    let s = sph(&rotated).expect("rotated point cannot be the origin");
    SphericalPoint {
        rho: v.rho,
        theta: s.theta,
        phi: s.phi,
    }
}

/// Great-circle distance between two points on the same sphere.
pub fn geodesic_distance(p1: &SphericalPoint, p2: &SphericalPoint) -> Result<f64, SphereError> {
    if (p1.rho - p2.rho).abs() > RADIUS_EPS * p1.rho.max(p2.rho) {
        return Err(SphereError::RadiusMismatch);
    }
    let c = libm::sin(p1.phi) * libm::sin(p2.phi) * libm::cos(p1.theta - p2.theta)
        + libm::cos(p1.phi) * libm::cos(p2.phi);
    Ok(p1.rho * libm::acos(clamp_unit(c)))
}

/// Unit tangent at `x` to the geodesic from `x` towards `y`.
pub fn tangent_toward(x: &Vec3, y: &Vec3) -> Result<Vec3, SphereError> {
    let x_sq = x.dot(x);
    if x_sq < 1e-300 {
        return Err(SphereError::ZeroVector);
    }
    let rejection = *y - *x * (x.dot(y) / x_sq);
    if rejection.norm() <= 1e-12 * y.norm() {
        return Err(SphereError::DegenerateTangent);
    }
    rejection.normalized().ok_or(SphereError::DegenerateTangent)
}

/// Start of the canonical arc: `(rho, -d1/(2 rho), pi/2)`.
#[must_use]
pub fn canonical_start(p: &SphereStepParams) -> SphericalPoint {
    SphericalPoint {
        rho: p.rho,
        theta: -p.d1 / (2.0 * p.rho),
        phi: PI / 2.0,
    }
}

/// End of the canonical arc: `(rho, d1/(2 rho), pi/2)`.
#[must_use]
pub fn canonical_end(p: &SphereStepParams) -> SphericalPoint {
    SphericalPoint {
        rho: p.rho,
        theta: p.d1 / (2.0 * p.rho),
        phi: PI / 2.0,
    }
}

/// The canonical arc itself, on the equator centred on `theta = 0`.
#[must_use]
pub fn canonical_arc(p: &SphereStepParams) -> GeodesicArc {
    GeodesicArc {
        start: canonical_start(p),
        end: canonical_end(p),
    }
}

/// Azimuth normalized to `(-pi, pi]`.
fn normalize_azimuth(theta: f64) -> f64 {
    if (-PI..=PI).contains(&theta) {
        theta
    } else {
        libm::atan2(libm::sin(theta), libm::cos(theta))
    }
}

/// Geodesic distance from `v2` to the canonical arc.
fn distance_to_canonical_arc(v2: &SphericalPoint, p: &SphereStepParams) -> f64 {
    let theta = normalize_azimuth(v2.theta);
    let half = p.d1 / (2.0 * p.rho);
    if theta.abs() <= half {
        p.rho * (v2.phi - PI / 2.0).abs()
    } else {
        let nearer = SphericalPoint {
            rho: p.rho,
            theta: libm::copysign(half, theta),
            phi: PI / 2.0,
        };
        let probe = SphericalPoint { rho: p.rho, ..*v2 };
        geodesic_distance(&probe, &nearer).unwrap_or(f64::INFINITY)
    }
}

/// Whether `v2` lies within `d2` of the canonical arc.
#[must_use]
pub fn in_feasible_domain(v2: &SphericalPoint, p: &SphereStepParams) -> bool {
    distance_to_canonical_arc(v2, p) <= p.d2
}

/// Equator point bounding the heading window of `v2` on the given side
/// (`+1` right, `-1` left). The canonical arc endpoint is returned when
/// within reach; otherwise the equator crossing of the geodesic circle
/// of radius `d2` around `v2`.
fn window_point(v2: &SphericalPoint, p: &SphereStepParams, side: f64) -> Result<Vec3, SphereError> {
    let endpoint = if side > 0.0 {
        canonical_end(p)
    } else {
        canonical_start(p)
    };
    let probe = SphericalPoint { rho: p.rho, ..*v2 };
    if geodesic_distance(&probe, &endpoint)? < p.d2 {
        return Ok(cart(&endpoint));
    }
    let ratio = libm::cos(p.d2 / p.rho) / libm::sin(v2.phi);
    if !(ratio.is_finite() && ratio.abs() <= 1.0 + 1e-9) {
        return Err(SphereError::WindowUndefined);
    }
    let theta = v2.theta + side * libm::acos(clamp_unit(ratio));
    Ok(Vec3 {
        x: p.rho * libm::cos(theta),
        y: p.rho * libm::sin(theta),
        z: 0.0,
    })
}

/// Right limit point of the heading window; see [`window_point`].
pub fn window_right(v2: &SphericalPoint, p: &SphereStepParams) -> Result<Vec3, SphereError> {
    window_point(v2, p, 1.0)
}

/// Left limit point of the heading window.
pub fn window_left(v2: &SphericalPoint, p: &SphereStepParams) -> Result<Vec3, SphereError> {
    window_point(v2, p, -1.0)
}

/// Probability that the second walker's arc crosses the canonical arc,
/// conditional on its starting point `v2` in the feasible domain.
///
/// The value is the angle between the tangents at `v2` towards the two
/// window points, divided by `2*pi`, and lies in `[0, 1/2]`. Two
/// measure-zero cases take their limiting values: on the feasible-domain
/// boundary the window has closed, so the probability is 0; on the
/// equator over the closed canonical arc the window is a half-turn, so
/// the probability is 1/2.
pub fn crossing_probability(v2: &SphericalPoint, p: &SphereStepParams) -> Result<f64, SphereError> {
    let dist = distance_to_canonical_arc(v2, p);
    if dist > p.d2 * (1.0 + 1e-9) {
        return Err(SphereError::OutsideFeasibleDomain);
    }
    if dist >= p.d2 * (1.0 - 1e-12) {
        return Ok(0.0);
    }
    let theta = normalize_azimuth(v2.theta);
    let on_equator = (v2.phi - PI / 2.0).abs() <= 1e-12;
    if on_equator && theta.abs() <= p.d1 / (2.0 * p.rho) {
        return Ok(0.5);
    }

    let h_right = window_right(v2, p)?;
    let h_left = window_left(v2, p)?;
    let at = cart(&SphericalPoint { rho: p.rho, ..*v2 });
    let t_right = tangent_toward(&at, &h_right)?;
    let t_left = tangent_toward(&at, &h_left)?;
    Ok(libm::acos(clamp_unit(t_right.dot(&t_left))) / (2.0 * PI))
}

/// Whether the unit vector `p`, already on the arc's great circle, lies
/// within the arc from `a` to `b` whose circle normal is `n`.
fn within_arc_extent(p: &Vec3, a: &Vec3, b: &Vec3, n: &Vec3) -> bool {
    a.cross(p).dot(n) >= -ARC_EPS && p.cross(b).dot(n) >= -ARC_EPS
}

/// Whether two minor geodesic arcs on the same sphere share a point.
///
/// The candidate meeting directions are the intersection of the two
/// great circles; arcs on one common great circle meet when their
/// angular intervals overlap. Endpoint touching counts.
#[must_use]
pub fn arcs_intersect(a1: &GeodesicArc, a2: &GeodesicArc) -> bool {
    debug_assert!(
        (a1.start.rho - a2.start.rho).abs() <= RADIUS_EPS * a1.start.rho,
        "arcs must lie on the same sphere"
    );
    let inv_r = 1.0 / a1.start.rho;
    let a = cart(&a1.start) * inv_r;
    let b = cart(&a1.end) * inv_r;
    let c = cart(&a2.start) * inv_r;
    let d = cart(&a2.end) * inv_r;

    let n1 = match a.cross(&b).normalized() {
        Some(n) => n,
        None => return false,
    };
    let n2 = match c.cross(&d).normalized() {
        Some(n) => n,
        None => return false,
    };

    let dir = n1.cross(&n2);
    if dir.norm() < ARC_EPS {
        // Same great circle: overlap of angular intervals.
        return within_arc_extent(&c, &a, &b, &n1)
            || within_arc_extent(&d, &a, &b, &n1)
            || within_arc_extent(&a, &c, &d, &n2)
            || within_arc_extent(&b, &c, &d, &n2);
    }
    let candidate = match dir.normalized() {
        Some(e) => e,
        None => return false,
    };
    for point in [candidate, -candidate] {
        if within_arc_extent(&point, &a, &b, &n1) && within_arc_extent(&point, &c, &d, &n2) {
            return true;
        }
    }
    false
}
