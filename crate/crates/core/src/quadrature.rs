//! Numerical double integration of the conditional crossing
//! probabilities over their feasible domains.
//!
//! Both integrands are smooth away from a handful of known curves (the
//! circle-membership switches and the domain boundary), so the driver
//! is a pair of nested adaptive composite Simpson rules with
//! Richardson-style error estimates, seeded with the kink locations as
//! panel boundaries. Evaluation order is fixed, which makes results
//! deterministic for a given [`QuadratureSpec`].
//!
//! [`integrate_plane`] checks the planar closed form `2 d1 d2 / pi`.
//! [`integrate_sphere`] evaluates the spherical analogue over the
//! equatorial feasible domain, exploiting its four-fold symmetry: the
//! integral is four times the rectangle quarter plus four times the
//! half-circle cap around the arc's end.

use crate::planar::{self, CanonicalPoint, StepParams};
use crate::sphere::{self, SphereStepParams, SphericalPoint};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

/// Fraction of the requested absolute tolerance given to each inner
/// (per-slice) integral.
const INNER_TOL_FRACTION: f64 = 0.02;

/// Per-panel acceptance floor, as a fraction of the integral's
/// absolute tolerance: refinement below this chases rounding noise.
const FLOOR_FRACTION: f64 = 1e-2;

/// Tolerance and subdivision budget for the adaptive rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Target relative tolerance, against the closed-form scale.
    pub relative_tolerance: f64,
    /// Maximum bisection depth per one-dimensional integral.
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            relative_tolerance: 1e-10,
            max_subdivisions: 60,
        }
    }
}

/// Value, error estimate, and cost of one numerical integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Errors from the quadrature driver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadratureError {
    /// Tolerance not positive or subdivision budget zero.
    InvalidSpec,
    /// An input lies outside the integrand's domain.
    InvalidInput,
    /// The subdivision budget ran out before the tolerance was met;
    /// carries the best estimate reached.
    DidNotConverge { best: IntegralResult },
}

impl fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureError::InvalidSpec => write!(f, "invalid quadrature specification"),
            QuadratureError::InvalidInput => write!(f, "input outside the integrand's domain"),
            QuadratureError::DidNotConverge { best } => write!(
                f,
                "quadrature did not converge (best value {}, error estimate {})",
                best.value, best.error_estimate
            ),
        }
    }
}

impl core::error::Error for QuadratureError {}

/// Outcome of one adaptive pass: the running sums plus a convergence flag.
#[derive(Clone, Copy, Debug, Default)]
struct Accum {
    value: f64,
    error: f64,
    evaluations: u64,
    converged: bool,
}

/// Adaptive Simpson on `[a, b]` split at `breakpoints`, to absolute
/// tolerance `abs_tol`. Panels are accepted on the Richardson estimate
/// `|S_fine - S_coarse| / 15`, or unconditionally once below `floor`.
fn adaptive_simpson<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    floor: f64,
    max_depth: u32,
) -> Accum {
    let mut acc = Accum {
        converged: true,
        ..Accum::default()
    };
    if b <= a {
        return acc;
    }

    let mut edges: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(a);
    for &x in breakpoints {
        if x > a && x < b {
            edges.push(x);
        }
    }
    edges.push(b);
    edges.sort_by(|p, q| p.partial_cmp(q).expect("finite edges"));
    edges.dedup();

    let width = b - a;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let fa = f(lo);
        let fm = f(0.5 * (lo + hi));
        let fb = f(hi);
        acc.evaluations += 3;
        let s = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        let tol = abs_tol * (hi - lo) / width;
        panel(f, lo, hi, fa, fm, fb, s, tol, floor, max_depth, &mut acc);
    }
    acc
}

/// One recursion step of the adaptive rule over `[a, b]`.
#[allow(clippy::too_many_arguments)]
fn panel<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    s: f64,
    tol: f64,
    floor: f64,
    depth: u32,
    acc: &mut Accum,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    acc.evaluations += 2;

    let s_left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let s_right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let s2 = s_left + s_right;
    let err = (s2 - s) / 15.0;

    if err.abs() <= tol || err.abs() <= floor || m <= a || m >= b {
        acc.value += s2 + err;
        acc.error += err.abs();
        return;
    }
    if depth == 0 {
        acc.value += s2 + err;
        acc.error += err.abs();
        acc.converged = false;
        return;
    }
    panel(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        s_left,
        0.5 * tol,
        floor,
        depth - 1,
        acc,
    );
    panel(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        s_right,
        0.5 * tol,
        floor,
        depth - 1,
        acc,
    );
}

fn check_spec(q: &QuadratureSpec) -> Result<(), QuadratureError> {
    if q.relative_tolerance > 0.0 && q.relative_tolerance.is_finite() && q.max_subdivisions > 0 {
        Ok(())
    } else {
        Err(QuadratureError::InvalidSpec)
    }
}

fn finish(acc: Accum, scale: f64) -> Result<IntegralResult, QuadratureError> {
    let best = IntegralResult {
        value: acc.value * scale,
        error_estimate: acc.error * scale.abs(),
        evaluations: acc.evaluations,
    };
    if acc.converged {
        Ok(best)
    } else {
        Err(QuadratureError::DidNotConverge { best })
    }
}

/// Planar conditional probability as an unchecked function of
/// canonical coordinates; zero outside the feasible domain.
fn planar_integrand(x: f64, y: f64, p: &StepParams) -> f64 {
    planar::crossing_probability(CanonicalPoint::new(x, y), p).unwrap_or(0.0)
}

/// Interior kinks of the planar integrand at height `y`: the x-values
/// where circle membership switches.
fn planar_kinks(y: f64, p: &StepParams) -> [f64; 2] {
    let half = p.d1() / 2.0;
    let s = libm::sqrt((p.d2() * p.d2() - y * y).max(0.0));
    [half - s, s - half]
}

/// Numeric inner integral of the planar conditional probability over
/// `x` at fixed offset `y`; the closed form is
/// [`planar::inner_integral`].
pub fn plane_slice_numeric(
    y: f64,
    p: &StepParams,
    q: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError> {
    check_spec(q)?;
    if y.abs() > p.d2() {
        return Err(QuadratureError::InvalidInput);
    }
    let half = p.d1() / 2.0;
    let s = libm::sqrt((p.d2() * p.d2() - y * y).max(0.0));
    let scale = planar::crossing_integral(p);
    let abs_tol = q.relative_tolerance * scale * INNER_TOL_FRACTION;
    let acc = adaptive_simpson(
        &mut |x| planar_integrand(x, y, p),
        -(half + s),
        half + s,
        &planar_kinks(y, p),
        abs_tol,
        abs_tol * FLOOR_FRACTION,
        q.max_subdivisions,
    );
    finish(acc, 1.0)
}

/// Double integral of the planar conditional probability over the
/// feasible domain; equals `2 d1 d2 / pi` in closed form.
pub fn integrate_plane(
    p: &StepParams,
    q: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError> {
    check_spec(q)?;
    let half = p.d1() / 2.0;
    let d2 = p.d2();
    let scale = planar::crossing_integral(p);
    let inner_tol = q.relative_tolerance * scale * INNER_TOL_FRACTION;
    let outer_tol = q.relative_tolerance * scale * 0.5;

    let mut inner_error = 0.0f64;
    let mut inner_evals = 0u64;
    let mut inner_converged = true;

    let mut outer = |y: f64| -> f64 {
        let s = libm::sqrt((d2 * d2 - y * y).max(0.0));
        let acc = adaptive_simpson(
            &mut |x| planar_integrand(x, y, p),
            -(half + s),
            half + s,
            &planar_kinks(y, p),
            inner_tol,
            inner_tol * FLOOR_FRACTION,
            q.max_subdivisions,
        );
        inner_error = inner_error.max(acc.error);
        inner_evals += acc.evaluations;
        inner_converged &= acc.converged;
        acc.value
    };

    let acc = adaptive_simpson(
        &mut outer,
        -d2,
        d2,
        &[0.0],
        outer_tol,
        outer_tol * FLOOR_FRACTION,
        q.max_subdivisions,
    );

    let result = IntegralResult {
        value: acc.value,
        error_estimate: acc.error + inner_error * 2.0 * d2,
        evaluations: inner_evals,
    };
    if acc.converged && inner_converged {
        Ok(result)
    } else {
        Err(QuadratureError::DidNotConverge { best: result })
    }
}

/// Spherical integrand `F_s(theta, phi) * sin(phi)` in the canonical
/// frame; zero on and outside the feasible-domain boundary.
fn sphere_integrand(theta: f64, phi: f64, p: &SphereStepParams) -> f64 {
    let v2 = SphericalPoint {
        rho: p.rho(),
        theta,
        phi,
    };
    match sphere::crossing_probability(&v2, p) {
        Ok(f) => f * libm::sin(phi),
        Err(_) => 0.0,
    }
}

/// Zenith at which the geodesic circle of radius `d2` around a point on
/// meridian offset `dt` from an arc endpoint crosses into reach.
fn reach_zenith(dt: f64, p: &SphereStepParams) -> Option<f64> {
    let c = libm::cos(dt);
    if c <= 0.0 {
        return None;
    }
    let ratio = libm::cos(p.d2() / p.rho()) / c;
    if ratio.abs() <= 1.0 {
        Some(libm::asin(ratio))
    } else {
        None
    }
}

/// Double integral of the spherical conditional probability over the
/// feasible domain, in the frame with the first arc on the equator.
///
/// By symmetry this is four times the upper-right quarter: a spherical
/// rectangle next to the arc plus the upper half of the reach circle
/// beyond the arc's end.
pub fn integrate_sphere(
    p: &SphereStepParams,
    q: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError> {
    check_spec(q)?;
    let rho = p.rho();
    let half_theta = p.d1() / (2.0 * rho);
    let reach = p.d2() / rho;
    let scale = 2.0 * p.d1() * p.d2() / PI;

    let inner_tol = q.relative_tolerance * scale * INNER_TOL_FRACTION / (4.0 * rho * rho);
    let outer_tol = q.relative_tolerance * scale * 0.25 / (4.0 * rho * rho);

    let mut inner_error = 0.0f64;
    let mut inner_evals = 0u64;
    let mut inner_converged = true;

    let mut inner_at = |theta: f64, phi_lo: f64| -> f64 {
        let mut kinks = [f64::NAN; 2];
        if let Some(z) = reach_zenith(theta - half_theta, p) {
            kinks[0] = z;
        }
        if let Some(z) = reach_zenith(theta + half_theta, p) {
            kinks[1] = z;
        }
        let acc = adaptive_simpson(
            &mut |phi| sphere_integrand(theta, phi, p),
            phi_lo,
            PI / 2.0,
            &kinks,
            inner_tol,
            inner_tol * FLOOR_FRACTION,
            q.max_subdivisions,
        );
        inner_error = inner_error.max(acc.error);
        inner_evals += acc.evaluations;
        inner_converged &= acc.converged;
        acc.value
    };

    // Rectangle quarter: theta in [0, d1/(2 rho)], phi down to the
    // strip edge. Outer kinks where the reach circles of either arc
    // endpoint enter the strip.
    let rect_breaks = [half_theta - reach, reach - half_theta];
    let rect = adaptive_simpson(
        &mut |theta| inner_at(theta, PI / 2.0 - reach),
        0.0,
        half_theta,
        &rect_breaks,
        outer_tol,
        outer_tol * FLOOR_FRACTION,
        q.max_subdivisions,
    );

    // Half-circle cap beyond the arc end: the lower phi limit is the
    // reach circle itself.
    let cap = adaptive_simpson(
        &mut |theta| {
            let phi_lo = reach_zenith(theta - half_theta, p).unwrap_or(PI / 2.0);
            inner_at(theta, phi_lo)
        },
        half_theta,
        half_theta + reach,
        &[],
        outer_tol,
        outer_tol * FLOOR_FRACTION,
        q.max_subdivisions,
    );

    let factor = 4.0 * rho * rho;
    let result = IntegralResult {
        value: factor * (rect.value + cap.value),
        error_estimate: factor * (rect.error + cap.error + inner_error * (half_theta + reach)),
        evaluations: inner_evals,
    };
    if rect.converged && cap.converged && inner_converged {
        Ok(result)
    } else {
        Err(QuadratureError::DidNotConverge { best: result })
    }
}

/// Numeric per-step crossing probability on the sphere: the feasible
/// domain integral divided by the sphere area.
pub fn sphere_probability_numeric(
    p: &SphereStepParams,
    q: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError> {
    let area = 4.0 * PI * p.rho() * p.rho();
    let is = integrate_sphere(p, q)?;
    Ok(IntegralResult {
        value: is.value / area,
        error_estimate: is.error_estimate / area,
        evaluations: is.evaluations,
    })
}

/// Signed percentage deviation of the planar closed form from a
/// computed spherical integral: `100 (2 d1 d2 / pi / I_s - 1)`.
#[must_use]
pub fn percent_error_vs_planar(is_value: f64, p: &SphereStepParams) -> f64 {
    100.0 * (2.0 * p.d1() * p.d2() / PI / is_value - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::sphere_probability;
    use crate::rng::StreamRng;

    fn spec(tol: f64) -> QuadratureSpec {
        QuadratureSpec {
            relative_tolerance: tol,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn plane_integral_matches_closed_form() {
        for (d1, d2) in [(1.0, 0.7), (3.0, 1.0), (2.0, 2.0)] {
            let p = StepParams::new(d1, d2).unwrap();
            let r = integrate_plane(&p, &QuadratureSpec::default()).unwrap();
            let exact = planar::crossing_integral(&p);
            let rel = (r.value - exact).abs() / exact;
            assert!(rel < 1e-5, "({d1},{d2}): rel error {rel}");
            assert!(r.error_estimate >= 0.0);
            assert!(r.evaluations > 0);
        }
    }

    #[test]
    fn plane_integral_symmetric_in_steps() {
        let q = spec(1e-9);
        let a = integrate_plane(&StepParams::new(1.3, 0.6).unwrap(), &q).unwrap();
        let b = integrate_plane(&StepParams::new(0.6, 1.3).unwrap(), &q).unwrap();
        assert!((a.value - b.value).abs() < 1e-8 * a.value);
    }

    #[test]
    fn plane_slice_matches_closed_inner_integral() {
        let p = StepParams::new(1.0, 0.7).unwrap();
        let q = QuadratureSpec::default();
        let mut rng = StreamRng::new(31, 0);
        for _ in 0..50 {
            let y = (2.0 * rng.next_f64() - 1.0) * p.d2();
            let numeric = plane_slice_numeric(y, &p, &q).unwrap().value;
            let exact = planar::inner_integral(y, &p).unwrap();
            assert!(
                (numeric - exact).abs() < 1e-7,
                "y = {y}: {numeric} vs {exact}"
            );
        }
        assert_eq!(
            plane_slice_numeric(0.8, &p, &q),
            Err(QuadratureError::InvalidInput)
        );
    }

    #[test]
    fn refinement_is_monotone_within_error_estimate() {
        let p = StepParams::new(1.0, 0.7).unwrap();
        let mut tol = 1e-4;
        let mut prev = integrate_plane(&p, &spec(tol)).unwrap();
        for _ in 0..10 {
            tol *= 0.5;
            let next = integrate_plane(&p, &spec(tol)).unwrap();
            assert!(
                (next.value - prev.value).abs() <= prev.error_estimate + 1e-15,
                "tol {tol}: moved {} vs estimate {}",
                (next.value - prev.value).abs(),
                prev.error_estimate
            );
            prev = next;
        }
    }

    #[test]
    fn exhausted_budget_reports_best_value() {
        let p = StepParams::new(1.0, 0.7).unwrap();
        let q = QuadratureSpec {
            relative_tolerance: 1e-13,
            max_subdivisions: 2,
        };
        match integrate_plane(&p, &q) {
            Err(QuadratureError::DidNotConverge { best }) => {
                let exact = planar::crossing_integral(&p);
                assert!((best.value - exact).abs() / exact < 0.1);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        let p = StepParams::new(1.0, 0.7).unwrap();
        let q = QuadratureSpec {
            relative_tolerance: 0.0,
            max_subdivisions: 10,
        };
        assert_eq!(integrate_plane(&p, &q), Err(QuadratureError::InvalidSpec));
    }

    #[test]
    fn sphere_integral_close_to_planar_value() {
        // Strongly curved cases still sit within 1e-4 relative.
        for (d1, d2, rho) in [(3.0, 1.0, 2.0), (3.0, 3.0, 2.0), (3.0, 2.0, 4.0)] {
            let p = SphereStepParams::new(d1, d2, rho).unwrap();
            let r = integrate_sphere(&p, &spec(1e-9)).unwrap();
            let rel = (r.value - 2.0 * d1 * d2 / PI).abs() / r.value;
            assert!(rel < 1e-4, "({d1},{d2},{rho}): rel {rel}");
        }
    }

    #[test]
    fn sphere_integral_planar_limit() {
        // Large radius against fixed step lengths approaches the plane.
        let p = SphereStepParams::new(3.0, 1.0, 3000.0).unwrap();
        let r = integrate_sphere(&p, &spec(1e-9)).unwrap();
        let exact = 6.0 / PI;
        assert!((r.value - exact).abs() / exact < 1e-6, "value {}", r.value);
    }

    #[test]
    fn sphere_probability_numeric_matches_analytic() {
        let p = SphereStepParams::new(3.0, 1.0, 2.0).unwrap();
        let r = sphere_probability_numeric(&p, &spec(1e-9)).unwrap();
        let analytic = sphere_probability(&p);
        assert!((r.value - analytic).abs() / analytic < 1e-4);

        // Reference magnitude for this geometry.
        assert!((r.value - 0.0379954).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn sphere_probability_scale_invariant() {
        let q = spec(1e-9);
        let p1 = SphereStepParams::new(1.0, 0.7, 3.0).unwrap();
        let p2 = SphereStepParams::new(2.5, 1.75, 7.5).unwrap();
        let a = sphere_probability_numeric(&p1, &q).unwrap().value;
        let b = sphere_probability_numeric(&p2, &q).unwrap().value;
        assert!((a - b).abs() < 1e-7 * a, "{a} vs {b}");
    }

    #[test]
    fn percent_error_sign_convention() {
        let p = SphereStepParams::new(3.0, 1.0, 2.0).unwrap();
        let planar_value = 6.0 / PI;
        // A spherical integral smaller than the planar one gives a
        // positive percentage.
        assert!(percent_error_vs_planar(planar_value * 0.999, &p) > 0.0);
        assert!(percent_error_vs_planar(planar_value * 1.001, &p) < 0.0);
    }
}
