//! Seeded Monte Carlo engine for the two-walker process.
//!
//! Runs are reproducible by construction: every random quantity comes
//! from a [`StreamRng`] stream derived from the run seed, with one
//! stream per agent, replica, and work block. Replicas and first-step
//! blocks can therefore execute in any order (or in parallel) and still
//! produce bit-identical results, since they are combined with integer
//! sums in a fixed order.
//!
//! A walk step works on raw endpoints: the crossing indicator is
//! evaluated on the step as traced, even when it leaves the disk, and
//! only afterwards is the walker pulled back inside by the
//! diametrically-opposed rule (see [`step_plane_with_heading`]). On the
//! sphere there is no boundary and endpoints stay where they land.

use crate::analytic::Region;
use crate::planar::{self, Point, Segment, StepParams};
use crate::rng::StreamRng;
use crate::sphere::{self, GeodesicArc, SphereStepParams, SphericalPoint};
use alloc::vec::Vec;
use core::fmt;

/// Trials per first-step work block; the block is the unit of
/// deterministic parallel decomposition.
pub const FIRST_STEP_BLOCK: u64 = 1 << 14;

/// Streams per replica: agent one, agent two, transmission draws.
const STREAMS_PER_REPLICA: u64 = 4;

/// Errors from simulation configuration and band construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimulationError {
    /// Step lengths must be positive, finite, and fit the region:
    /// `d1 + d2 < r` on the disk, no wrap-around on the sphere.
    InvalidSteps,
    /// At least one time-step is required.
    NoSteps,
    /// The transmission probability must lie in `[0, 1]`.
    InvalidTau,
    /// At least one replica is required.
    NoReplicas,
    /// At least one trial is required.
    NoTrials,
    /// Band references need a probability strictly inside `(0, 1)` and
    /// a confidence level strictly inside `(0, 1)`.
    InvalidBand,
}

impl fmt::Display for SimulationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            SimulationError::InvalidSteps => "step lengths do not fit the region",
            SimulationError::NoSteps => "at least one time-step is required",
            SimulationError::InvalidTau => "transmission probability must be in [0, 1]",
            SimulationError::NoReplicas => "at least one replica is required",
            SimulationError::NoTrials => "at least one trial is required",
            SimulationError::InvalidBand => "band probability and level must be inside (0, 1)",
        };
        write!(f, "{msg}")
    }
}

impl core::error::Error for SimulationError {}

/// Full description of a walk experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    region: Region,
    d1: f64,
    d2: f64,
    steps: u64,
    seed: u64,
    tau: f64,
    replicas: u32,
}

impl WalkConfig {
    /// Validates the geometry: positive step lengths, `d1 + d2 < r` on
    /// the disk, and the no-wrap constraints on the sphere.
    pub fn new(
        region: Region,
        d1: f64,
        d2: f64,
        steps: u64,
        seed: u64,
    ) -> Result<Self, SimulationError> {
        if StepParams::new(d1, d2).is_err() {
            return Err(SimulationError::InvalidSteps);
        }
        match region {
            Region::Disk { radius } => {
                if d1 + d2 >= radius {
                    return Err(SimulationError::InvalidSteps);
                }
            }
            Region::Sphere { rho } => {
                if SphereStepParams::new(d1, d2, rho).is_err() {
                    return Err(SimulationError::InvalidSteps);
                }
            }
        }
        if steps == 0 {
            return Err(SimulationError::NoSteps);
        }
        Ok(WalkConfig {
            region,
            d1,
            d2,
            steps,
            seed,
            tau: 1.0,
            replicas: 1,
        })
    }

    /// Sets the per-crossing transmission probability.
    pub fn with_tau(mut self, tau: f64) -> Result<Self, SimulationError> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(SimulationError::InvalidTau);
        }
        self.tau = tau;
        Ok(self)
    }

    /// Sets the number of independent replicas.
    pub fn with_replicas(mut self, replicas: u32) -> Result<Self, SimulationError> {
        if replicas == 0 {
            return Err(SimulationError::NoReplicas);
        }
        self.replicas = replicas;
        Ok(self)
    }

    #[must_use]
    pub fn region(&self) -> &Region {
        &self.region
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
    pub fn steps(&self) -> u64 {
        self.steps
    }

    #[must_use]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[must_use]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[must_use]
    pub fn replicas(&self) -> u32 {
        self.replicas
    }
}

/// Per-step crossing counts of a walk experiment, pooled over replicas.
///
/// With a single replica the counts are the 0/1 indicators of the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingSeries {
    counts: Vec<u32>,
    replicas: u32,
}

impl CrossingSeries {
    /// Assembles a series from per-step counts computed elsewhere,
    /// e.g. replicas executed in parallel and pooled by the caller.
    #[must_use]
    pub fn from_counts(counts: Vec<u32>, replicas: u32) -> Self {
        debug_assert!(replicas >= 1);
        debug_assert!(counts.iter().all(|&c| c <= replicas));
        CrossingSeries { counts, replicas }
    }

    #[must_use]
    pub fn steps(&self) -> u64 {
        self.counts.len() as u64
    }

    #[must_use]
    pub fn replicas(&self) -> u32 {
        self.replicas
    }

    /// Crossings during step `k` (1-based) across all replicas.
    #[must_use]
    pub fn count_at(&self, k: u64) -> u32 {
        self.counts[(k - 1) as usize]
    }

    #[must_use]
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    #[must_use]
    pub fn crossings_total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Running crossing frequency over the first `k` steps:
    /// cumulative crossings divided by `k * replicas`.
    #[must_use]
    pub fn frequency_at(&self, k: u64) -> f64 {
        let cumulative: u64 = self.counts[..k as usize]
            .iter()
            .map(|&c| u64::from(c))
            .sum();
        cumulative as f64 / (k * u64::from(self.replicas)) as f64
    }

    /// Frequency over the whole run.
    #[must_use]
    pub fn final_frequency(&self) -> f64 {
        self.frequency_at(self.steps())
    }

    /// Running frequencies for k = 1..=steps, in one pass.
    #[must_use]
    pub fn running_frequency(&self) -> Vec<f64> {
        let denominator = f64::from(self.replicas);
        let mut cumulative = 0u64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                cumulative += u64::from(c);
                cumulative as f64 / ((i + 1) as f64 * denominator)
            })
            .collect()
    }
}

/// Uniform point in a disk of the given radius: the radial coordinate
/// is `r sqrt(u)` so area elements are equally likely.
#[must_use]
pub fn uniform_point_disk(rng: &mut StreamRng, radius: f64) -> Point {
    let r = radius * libm::sqrt(rng.next_f64());
    let angle = rng.next_angle();
    Point::new(r * libm::cos(angle), r * libm::sin(angle))
}

/// Uniform point on a sphere: uniform azimuth, uniform cosine of the
/// zenith angle.
#[must_use]
pub fn uniform_point_sphere(rng: &mut StreamRng, rho: f64) -> SphericalPoint {
    let theta = rng.next_angle();
    let cos_phi = 1.0 - 2.0 * rng.next_f64();
    SphericalPoint {
        rho,
        theta,
        phi: libm::acos(cos_phi.clamp(-1.0, 1.0)),
    }
}

/// One planar step: the raw endpoint, and the position after boundary
/// handling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarStep {
    /// Endpoint as traced; crossings are tested against this.
    pub raw: Point,
    /// Position for the next step: the raw endpoint when inside,
    /// otherwise the diametrically opposed point at depth `e` inside
    /// the circle, where `e` is the overshoot beyond the boundary.
    pub inside: Point,
}

/// Planar step with an explicit heading; requires `d < radius` so the
/// reflected point stays inside.
#[must_use]
pub fn step_plane_with_heading(v: Point, d: f64, alpha: f64, radius: f64) -> PlanarStep {
    let raw = planar::endpoint(v, d, alpha);
    let dist = libm::hypot(raw.x, raw.y);
    let inside = if dist <= radius {
        raw
    } else {
        let overshoot = dist - radius;
        let scale = -(radius - overshoot) / dist;
        Point::new(raw.x * scale, raw.y * scale)
    };
    PlanarStep { raw, inside }
}

/// Planar step at a uniformly drawn heading.
#[must_use]
pub fn step_plane(v: Point, d: f64, radius: f64, rng: &mut StreamRng) -> PlanarStep {
    step_plane_with_heading(v, d, rng.next_angle(), radius)
}

/// Spherical step at a uniformly drawn heading.
#[must_use]
pub fn step_sphere(v: &SphericalPoint, d: f64, rng: &mut StreamRng) -> SphericalPoint {
    sphere::geodesic_endpoint(v, d, rng.next_angle())
}

/// Per-step crossing indicators of one replica's walk.
///
/// Streams are derived from `(seed, replica)`, so replicas are
/// independent and can run in any order.
#[must_use]
pub fn walk_indicators(config: &WalkConfig, replica: u32) -> Vec<bool> {
    let base = u64::from(replica) * STREAMS_PER_REPLICA;
    let mut rng1 = StreamRng::new(config.seed, base);
    let mut rng2 = StreamRng::new(config.seed, base + 1);
    let mut tau_rng = StreamRng::new(config.seed, base + 2);
    let gated = config.tau < 1.0;

    let mut indicators = Vec::with_capacity(config.steps as usize);
    match config.region {
        Region::Disk { radius } => {
            let mut v1 = uniform_point_disk(&mut rng1, radius);
            let mut v2 = uniform_point_disk(&mut rng2, radius);
            for _ in 0..config.steps {
                let s1 = step_plane(v1, config.d1, radius, &mut rng1);
                let s2 = step_plane(v2, config.d2, radius, &mut rng2);
                let mut crossed = planar::segments_intersect(
                    &Segment::new(v1, s1.raw),
                    &Segment::new(v2, s2.raw),
                );
                if crossed && gated {
                    crossed = tau_rng.next_bernoulli(config.tau);
                }
                indicators.push(crossed);
                v1 = s1.inside;
                v2 = s2.inside;
            }
        }
        Region::Sphere { rho } => {
            let mut v1 = uniform_point_sphere(&mut rng1, rho);
            let mut v2 = uniform_point_sphere(&mut rng2, rho);
            for _ in 0..config.steps {
                let w1 = step_sphere(&v1, config.d1, &mut rng1);
                let w2 = step_sphere(&v2, config.d2, &mut rng2);
                let arc1 = GeodesicArc::new(v1, w1).expect("steps trace minor arcs");
                let arc2 = GeodesicArc::new(v2, w2).expect("steps trace minor arcs");
                let mut crossed = sphere::arcs_intersect(&arc1, &arc2);
                if crossed && gated {
                    crossed = tau_rng.next_bernoulli(config.tau);
                }
                indicators.push(crossed);
                v1 = w1;
                v2 = w2;
            }
        }
    }
    indicators
}

/// Runs the configured walk: all replicas, pooled per step.
///
/// The result is bit-identical however replicas are scheduled, because
/// each replica derives its own streams and the pooled counts are
/// plain integer sums.
#[must_use]
pub fn run_walk(config: &WalkConfig) -> CrossingSeries {
    let mut counts = alloc::vec![0u32; config.steps as usize];
    for replica in 0..config.replicas {
        for (count, crossed) in counts.iter_mut().zip(walk_indicators(config, replica)) {
            *count += u32::from(crossed);
        }
    }
    CrossingSeries {
        counts,
        replicas: config.replicas,
    }
}

/// Crossings among first-step trials `[block * FIRST_STEP_BLOCK,
/// min((block + 1) * FIRST_STEP_BLOCK, trials))`.
///
/// Each block draws from its own `(seed, block)` stream, which makes
/// the total count independent of how blocks are distributed over
/// threads.
#[must_use]
pub fn first_step_block(config: &WalkConfig, block: u64, trials: u64) -> u64 {
    let begin = block * FIRST_STEP_BLOCK;
    let end = (begin + FIRST_STEP_BLOCK).min(trials);
    if begin >= end {
        return 0;
    }
    let mut rng = StreamRng::new(config.seed, block);
    let mut crossings = 0u64;
    match config.region {
        Region::Disk { radius } => {
            for _ in begin..end {
                let v1 = uniform_point_disk(&mut rng, radius);
                let v2 = uniform_point_disk(&mut rng, radius);
                let w1 = planar::endpoint(v1, config.d1, rng.next_angle());
                let w2 = planar::endpoint(v2, config.d2, rng.next_angle());
                if planar::segments_intersect(&Segment::new(v1, w1), &Segment::new(v2, w2)) {
                    crossings += 1;
                }
            }
        }
        Region::Sphere { rho } => {
            for _ in begin..end {
                let v1 = uniform_point_sphere(&mut rng, rho);
                let v2 = uniform_point_sphere(&mut rng, rho);
                let w1 = step_sphere(&v1, config.d1, &mut rng);
                let w2 = step_sphere(&v2, config.d2, &mut rng);
                let arc1 = GeodesicArc::new(v1, w1).expect("steps trace minor arcs");
                let arc2 = GeodesicArc::new(v2, w2).expect("steps trace minor arcs");
                if sphere::arcs_intersect(&arc1, &arc2) {
                    crossings += 1;
                }
            }
        }
    }
    crossings
}

/// A first-step crossing frequency with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstStepEstimate {
    pub frequency: f64,
    pub std_error: f64,
    pub crossings: u64,
    pub trials: u64,
}

/// Estimates the first-step crossing probability: fresh uniform starts
/// and headings each trial, crossing tested on the raw step.
pub fn estimate_first_step(
    config: &WalkConfig,
    trials: u64,
) -> Result<FirstStepEstimate, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let blocks = trials.div_ceil(FIRST_STEP_BLOCK);
    let crossings = (0..blocks)
        .map(|b| first_step_block(config, b, trials))
        .sum();
    Ok(summarize_first_step(crossings, trials))
}

/// Frequency and binomial standard error from a crossing count.
#[must_use]
pub fn summarize_first_step(crossings: u64, trials: u64) -> FirstStepEstimate {
    let frequency = crossings as f64 / trials as f64;
    FirstStepEstimate {
        frequency,
        std_error: libm::sqrt(frequency * (1.0 - frequency) / trials as f64),
        crossings,
        trials,
    }
}

/// Reference band under the counterfactual assumption of independent
/// per-step crossings with probability `p_ref`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandSpec {
    pub p_ref: f64,
    pub level: f64,
    pub z: f64,
}

impl BandSpec {
    /// Half-width of the band after `k` steps:
    /// `z * sqrt(p_ref (1 - p_ref) / k)`.
    #[must_use]
    pub fn half_width(&self, k: u64) -> f64 {
        self.z * libm::sqrt(self.p_ref * (1.0 - self.p_ref) / k as f64)
    }

    /// The interval within which the hypothetical frequency falls with
    /// the configured probability after `k` steps.
    #[must_use]
    pub fn band(&self, k: u64) -> (f64, f64) {
        let hw = self.half_width(k);
        (self.p_ref - hw, self.p_ref + hw)
    }
}

/// Band specification at the given two-sided confidence level.
pub fn hypothetical_bands(p_ref: f64, level: f64) -> Result<BandSpec, SimulationError> {
    if !(0.0 < p_ref && p_ref < 1.0 && 0.0 < level && level < 1.0) {
        return Err(SimulationError::InvalidBand);
    }
    Ok(BandSpec {
        p_ref,
        level,
        z: normal_quantile(0.5 + level / 2.0),
    })
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// relative error below 1.2e-9).
#[must_use]
pub fn normal_quantile(p: f64) -> f64 {
    debug_assert!(0.0 < p && p < 1.0, "quantile argument {p} outside (0, 1)");
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
