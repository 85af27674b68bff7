use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "pathcross",
    version,
    about = "Crossing-path probabilities for two fixed-step random walkers",
    propagate_version = true
)]
pub struct Cli {
    /// Worker threads for simulate / first-step; must never change
    /// numeric output, only wall-clock time.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionKind {
    Disk,
    Sphere,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form first-step bounds (disk) or the per-step
    /// probability (sphere), as JSON.
    Analytic {
        /// Arena shape.
        #[arg(long, value_enum)]
        region: RegionKind,
        /// Disk radius or sphere radius.
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
        /// Output prefix; writes <out>.json and <out>.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Percentage deviation of the spherical feasible-domain integral
    /// from the planar closed form over a (d2, rho) grid, as CSV.
    Table1 {
        #[arg(long)]
        d1: f64,
        /// Comma-separated list of d2 values.
        #[arg(long, value_delimiter = ',')]
        d2: Vec<f64>,
        /// Comma-separated list of sphere radii.
        #[arg(long, value_delimiter = ',')]
        rho: Vec<f64>,
        /// Relative quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Maximum bisection depth per 1D integral.
        #[arg(long, default_value_t = 60)]
        max_depth: u32,
        /// Output prefix; writes <out>.csv and <out>.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Seeded two-walker walk: per-step crossing indicators, running
    /// frequency, and hypothetical confidence bands, as CSV + JSON.
    Simulate {
        #[command(flatten)]
        walk: WalkArgs,
        /// Number of time-steps.
        #[arg(long)]
        steps: Option<u64>,
        /// Two-sided confidence level for the reference bands.
        #[arg(long)]
        level: Option<f64>,
        /// Output prefix; writes <out>.csv, <out>.summary.json, and
        /// <out>.manifest.json.
        #[arg(long)]
        out: PathBuf,
    },

    /// Monte Carlo estimate of the first-step crossing probability.
    FirstStep {
        #[command(flatten)]
        walk: WalkArgs,
        /// Number of independent trials.
        #[arg(long)]
        trials: Option<u64>,
        /// Output prefix; writes <out>.json and <out>.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Raw access to the numerical double integrals.
    Integrate {
        #[command(subcommand)]
        target: IntegrateTarget,
    },
}

#[derive(Subcommand, Debug)]
pub enum IntegrateTarget {
    /// Planar feasible-domain integral; closed form 2 d1 d2 / pi.
    Plane {
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = 60)]
        max_depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spherical feasible-domain integral.
    Sphere {
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = 60)]
        max_depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Walk geometry shared by `simulate` and `first-step`. Every field is
/// optional on the command line so a config file can supply defaults;
/// explicit flags always win.
#[derive(Args, Debug)]
pub struct WalkArgs {
    /// Arena shape.
    #[arg(long, value_enum)]
    pub region: Option<RegionKind>,
    /// Disk radius or sphere radius.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    /// RNG seed; generated and logged when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-crossing transmission probability.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Independent replicas, pooled per step.
    #[arg(long)]
    pub replicas: Option<u32>,
    /// JSON config file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}
