//! Closed-form first-step crossing probabilities.
//!
//! For a bounded planar region only the areas matter: the crossing
//! probability is bracketed between `2 d1 d2 A[Ri] / (pi A[R]^2)` and
//! `2 d1 d2 / (pi A[R])`, where the inner region `Ri` is the set of
//! starting points whose feasible domain fits entirely inside `R`. The
//! midpoint of the bracket serves as the working approximation, with a
//! known maximum percentage error. On the sphere there is no border
//! region, which collapses the bracket to the single value
//! `d1 d2 / (2 pi^2 rho^2)`.

use crate::planar::StepParams;
use crate::sphere::SphereStepParams;
use core::f64::consts::PI;
use core::fmt;

/// The arena the walkers move in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// Planar disk of the given radius.
    Disk { radius: f64 },
    /// Sphere of the given radius.
    Sphere { rho: f64 },
}

impl Region {
    /// Total area `A[R]`.
    #[must_use]
    pub fn area(&self) -> f64 {
        match self {
            Region::Disk { radius } => PI * radius * radius,
            Region::Sphere { rho } => 4.0 * PI * rho * rho,
        }
    }

    /// Area of the inner region: points farther than `d1 + d2` from
    /// the outside world. The whole sphere qualifies; a disk smaller
    /// than `d1 + d2` in radius has no inner region at all.
    #[must_use]
    pub fn inner_area(&self, p: &StepParams) -> f64 {
        match self {
            Region::Disk { radius } => {
                let margin = radius - (p.d1() + p.d2());
                if margin > 0.0 {
                    PI * margin * margin
                } else {
                    0.0
                }
            }
            Region::Sphere { .. } => self.area(),
        }
    }

    /// Area of the border region, `A[R] - A[Ri]`.
    #[must_use]
    pub fn border_area(&self, p: &StepParams) -> f64 {
        self.area() - self.inner_area(p)
    }
}

/// Bracket and midpoint approximation for the first-step probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityBounds {
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_star: f64,
    /// Maximum percentage error of `p_star`, in percent.
    pub avmpe_percent: f64,
}

/// Errors from the analytic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticError {
    /// The operation applies to planar disk regions only.
    NotADisk,
    /// The disk radius must exceed `d1 + d2` here.
    RadiusTooSmall,
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::NotADisk => write!(f, "operation defined for disk regions only"),
            AnalyticError::RadiusTooSmall => {
                write!(f, "disk radius must exceed the summed step lengths")
            }
        }
    }
}

impl core::error::Error for AnalyticError {}

/// Bounds from a raw `(A[R], A[Ri])` pair, for regions beyond the disk.
///
/// `p_lo = 2 d1 d2 A[Ri] / (pi A[R]^2)`, `p_hi = 2 d1 d2 / (pi A[R])`,
/// `p_star` their midpoint, and the maximum percentage error
/// `100 (A[R] - A[Ri]) / (A[R] + A[Ri])`.
#[must_use]
pub fn bounds_from_areas(area: f64, inner_area: f64, p: &StepParams) -> ProbabilityBounds {
    let scale = 2.0 * p.d1() * p.d2() / (PI * area);
    let p_lo = scale * inner_area / area;
    let p_hi = scale;
    ProbabilityBounds {
        p_lo,
        p_hi,
        p_star: (p_lo + p_hi) / 2.0,
        avmpe_percent: 100.0 * (area - inner_area) / (area + inner_area),
    }
}

/// First-step probability bounds for a planar disk.
///
/// A disk with `radius <= d1 + d2` is allowed: the lower bound then
/// collapses to zero and the bracket is valid but uninformative.
pub fn plane_bounds(region: &Region, p: &StepParams) -> Result<ProbabilityBounds, AnalyticError> {
    match region {
        Region::Disk { .. } => Ok(bounds_from_areas(region.area(), region.inner_area(p), p)),
        Region::Sphere { .. } => Err(AnalyticError::NotADisk),
    }
}

/// Maximum percentage error of the midpoint approximation on a disk of
/// radius `r`, in closed form; approximately `100 (d1 + d2) / r` when
/// the steps are small against the radius.
pub fn disk_avmpe(radius: f64, p: &StepParams) -> Result<f64, AnalyticError> {
    let ratio = 1.0 - (p.d1() + p.d2()) / radius;
    if ratio <= 0.0 {
        return Err(AnalyticError::RadiusTooSmall);
    }
    Ok(100.0 * (1.0 - ratio * ratio) / (1.0 + ratio * ratio))
}

/// Per-step crossing probability on the sphere:
/// `d1 d2 / (2 pi^2 rho^2)`.
#[must_use]
pub fn sphere_probability(p: &SphereStepParams) -> f64 {
    p.d1() * p.d2() / (2.0 * PI * PI * p.rho() * p.rho())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::crossing_integral;

    fn params(d1: f64, d2: f64) -> StepParams {
        StepParams::new(d1, d2).unwrap()
    }

    #[test]
    fn reference_disk_bounds() {
        let region = Region::Disk { radius: 10.0 };
        let p = params(1.0, 0.7);
        let b = plane_bounds(&region, &p).unwrap();
        assert!((b.p_lo - 0.0009772).abs() < 1e-7, "p_lo = {}", b.p_lo);
        assert!((b.p_hi - 0.001418).abs() < 1e-6, "p_hi = {}", b.p_hi);
        assert!((b.p_star - 0.001198).abs() < 1e-6, "p_star = {}", b.p_star);
        assert!(
            (b.avmpe_percent - 18.42).abs() < 5e-3,
            "avmpe = {}",
            b.avmpe_percent
        );
    }

    #[test]
    fn degenerate_disk_still_bounded() {
        let region = Region::Disk { radius: 1.5 };
        let p = params(1.0, 0.7);
        let b = plane_bounds(&region, &p).unwrap();
        assert_eq!(b.p_lo, 0.0);
        assert!((b.p_hi - 2.0 * 0.7 / (PI * region.area())).abs() < 1e-18);
        assert_eq!(b.avmpe_percent, 100.0);
    }

    #[test]
    fn sphere_region_rejected_by_plane_bounds() {
        let region = Region::Sphere { rho: 10.0 };
        assert_eq!(
            plane_bounds(&region, &params(1.0, 0.7)),
            Err(AnalyticError::NotADisk)
        );
    }

    #[test]
    fn bound_ratio_and_midpoint_identities() {
        let region = Region::Disk { radius: 7.0 };
        let p = params(0.8, 1.1);
        let b = plane_bounds(&region, &p).unwrap();
        let area_ratio = region.inner_area(&p) / region.area();
        assert!((b.p_lo / b.p_hi - area_ratio).abs() < 1e-15);
        assert!((b.p_star - (b.p_lo + b.p_hi) / 2.0).abs() < 1e-18);
        // Relative half-width of the bracket equals avmpe / 100.
        let half_width = (b.p_hi - b.p_lo) / 2.0;
        assert!((half_width / b.p_star - b.avmpe_percent / 100.0).abs() < 1e-12);
    }

    #[test]
    fn disk_avmpe_matches_generic_formula() {
        let p = params(1.0, 0.7);
        let region = Region::Disk { radius: 10.0 };
        let direct = disk_avmpe(10.0, &p).unwrap();
        let generic = plane_bounds(&region, &p).unwrap().avmpe_percent;
        assert!((direct - generic).abs() < 1e-12);
        assert!((direct - 18.42).abs() < 5e-3);
    }

    #[test]
    fn disk_avmpe_small_step_limit() {
        // (d1 + d2) / r = 0.01 gives roughly one percent.
        let p = params(0.006, 0.004);
        let v = disk_avmpe(1.0, &p).unwrap();
        assert!((v - 1.0).abs() / 1.0 < 0.02, "avmpe = {v}");
        // Vanishing steps drive the error to zero.
        let p = params(1e-9, 1e-9);
        assert!(disk_avmpe(1.0, &p).unwrap() < 1e-6);
        // r <= d1 + d2 is rejected.
        assert_eq!(
            disk_avmpe(1.5, &params(1.0, 0.7)),
            Err(AnalyticError::RadiusTooSmall)
        );
    }

    #[test]
    fn sphere_probability_reference_values() {
        let p = SphereStepParams::new(1.0, 0.7, 10.0).unwrap();
        let expected = 0.7 / (2.0 * PI * PI * 100.0);
        assert!((sphere_probability(&p) - expected).abs() < 1e-18);
        assert!((expected - 3.5463e-4).abs() < 1e-8);

        // Doubling the radius divides the probability by four.
        let p2 = SphereStepParams::new(1.0, 0.7, 20.0).unwrap();
        assert!((sphere_probability(&p) / sphere_probability(&p2) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_probability_consistent_with_planar_integral() {
        // probability * A[R] equals the planar feasible-domain integral.
        let p = SphereStepParams::new(1.0, 0.7, 10.0).unwrap();
        let region = Region::Sphere { rho: 10.0 };
        let lhs = sphere_probability(&p) * region.area();
        let rhs = crossing_integral(&params(1.0, 0.7));
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn sphere_bounds_collapse_via_generic_areas() {
        let region = Region::Sphere { rho: 10.0 };
        let p = params(1.0, 0.7);
        let b = bounds_from_areas(region.area(), region.inner_area(&p), &p);
        assert_eq!(b.p_lo, b.p_hi);
        assert_eq!(b.p_star, b.p_hi);
        assert_eq!(b.avmpe_percent, 0.0);
        let sphere = SphereStepParams::new(1.0, 0.7, 10.0).unwrap();
        assert!((b.p_star - sphere_probability(&sphere)).abs() < 1e-18);
    }
}
