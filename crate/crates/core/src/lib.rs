//! Crossing-path probabilities for two fixed-step random walkers.
//!
//! Two agents move in discrete time, each travelling a fixed distance
//! (`d1` and `d2`) per step at an independent, uniformly distributed
//! heading. Their paths *cross* during a step when the two segments (or
//! geodesic arcs) traced during that step share a point. This crate
//! computes, bounds, and empirically estimates the probability of such
//! a crossing when the arena is a planar disk or a sphere.
//!
//! The crate is split along the routes to that probability:
//!
//! - [`planar`] — exact planar primitives: endpoints, segment
//!   intersection, the feasible domain for the second walker, and the
//!   conditional crossing probability given the second walker's start.
//! - [`sphere`] — the spherical analogues: coordinate conversions,
//!   rotation-based endpoint construction, geodesic distance, tangent
//!   vectors, heading windows, and geodesic-arc intersection.
//! - [`analytic`] — closed-form bounds and midpoint approximations for
//!   the first-step crossing probability, plus the sphere per-step value.
//! - [`quadrature`] — adaptive double integration that checks the
//!   closed forms against direct numerical integration of the
//!   conditional probabilities.
//! - [`simulation`] — a seeded, reproducible Monte Carlo engine for
//!   whole walks, first-step estimation, and reference confidence bands.
//! - [`rng`] — the splittable counter-based generator that keeps every
//!   simulation bit-reproducible, including under parallel execution.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes
//! through [`libm`] so results do not depend on the platform's libm.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analytic;
pub mod planar;
pub mod quadrature;
pub mod rng;
pub mod simulation;
pub mod sphere;
mod util;

pub use analytic::{ProbabilityBounds, Region};
pub use planar::{CanonicalPoint, Point, Segment, StepParams};
pub use quadrature::{IntegralResult, QuadratureSpec};
pub use simulation::{BandSpec, CrossingSeries, FirstStepEstimate, WalkConfig};
pub use sphere::{GeodesicArc, SphereStepParams, SphericalPoint, Vec3};
