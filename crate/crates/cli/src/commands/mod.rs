use crate::args::{Cli, Command, RegionKind, WalkArgs};
use crate::error::CliError;
use pathcross::analytic::Region;
use pathcross::planar::StepParams;
use pathcross::sphere::SphereStepParams;
use serde::Deserialize;
use std::hash::{BuildHasher, Hasher};
use std::path::Path;

mod analytic;
mod first_step;
mod integrate;
mod simulate;
mod table1;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let threads = cli.threads.max(1);
    match cli.command {
        Command::Analytic {
            region,
            radius,
            d1,
            d2,
            out,
        } => analytic::run(region, radius, d1, d2, out.as_deref(), threads),
        Command::Table1 {
            d1,
            d2,
            rho,
            tolerance,
            max_depth,
            out,
        } => table1::run(d1, &d2, &rho, tolerance, max_depth, out.as_deref(), threads),
        Command::Simulate {
            walk,
            steps,
            level,
            out,
        } => simulate::run(&walk, steps, level, &out, threads),
        Command::FirstStep { walk, trials, out } => {
            first_step::run(&walk, trials, out.as_deref(), threads)
        }
        Command::Integrate { target } => integrate::run(target, threads),
    }
}

/// Optional JSON config file for the walk commands; command-line flags
/// override any value given here.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    region: Option<String>,
    radius: Option<f64>,
    d1: Option<f64>,
    d2: Option<f64>,
    steps: Option<u64>,
    trials: Option<u64>,
    seed: Option<u64>,
    tau: Option<f64>,
    replicas: Option<u32>,
    level: Option<f64>,
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

/// Fully merged walk parameters: flags over config file over defaults.
pub(crate) struct ResolvedWalk {
    pub region: Region,
    pub region_name: &'static str,
    pub radius: f64,
    pub d1: f64,
    pub d2: f64,
    pub seed: u64,
    pub tau: f64,
    pub replicas: u32,
    pub steps: Option<u64>,
    pub trials: Option<u64>,
    pub level: Option<f64>,
}

pub(crate) fn resolve_walk(args: &WalkArgs) -> Result<ResolvedWalk, CliError> {
    let file = load_file_config(args.config.as_deref())?;

    let region_name = match (args.region, file.region.as_deref()) {
        (Some(RegionKind::Disk), _) => "disk",
        (Some(RegionKind::Sphere), _) => "sphere",
        (None, Some("disk")) => "disk",
        (None, Some("sphere")) => "sphere",
        (None, Some(other)) => {
            return Err(CliError::usage(format!(
                "config region must be \"disk\" or \"sphere\", got \"{other}\""
            )))
        }
        (None, None) => return Err(CliError::usage("missing --region")),
    };
    let radius = args
        .radius
        .or(file.radius)
        .ok_or_else(|| CliError::usage("missing --radius"))?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::usage("radius must be positive and finite"));
    }
    let d1 = args
        .d1
        .or(file.d1)
        .ok_or_else(|| CliError::usage("missing --d1"))?;
    let d2 = args
        .d2
        .or(file.d2)
        .ok_or_else(|| CliError::usage("missing --d2"))?;
    let seed = match args.seed.or(file.seed) {
        Some(seed) => seed,
        None => {
            let seed = generate_seed();
            eprintln!("no seed given; generated seed {seed}");
            seed
        }
    };
    let tau = args.tau.or(file.tau).unwrap_or(1.0);
    let replicas = args.replicas.or(file.replicas).unwrap_or(1);

    let region = match region_name {
        "disk" => Region::Disk { radius },
        _ => Region::Sphere { rho: radius },
    };
    Ok(ResolvedWalk {
        region,
        region_name,
        radius,
        d1,
        d2,
        seed,
        tau,
        replicas,
        steps: file.steps,
        trials: file.trials,
        level: file.level,
    })
}

fn generate_seed() -> u64 {
    std::collections::hash_map::RandomState::new()
        .build_hasher()
        .finish()
}

pub(crate) fn step_params(d1: f64, d2: f64) -> Result<StepParams, CliError> {
    StepParams::new(d1, d2).map_err(|_| CliError::usage("step lengths must be positive and finite"))
}

pub(crate) fn sphere_params(d1: f64, d2: f64, rho: f64) -> Result<SphereStepParams, CliError> {
    SphereStepParams::new(d1, d2, rho).map_err(|_| {
        CliError::usage(
            "invalid sphere parameters: require d2/rho < pi/2 and d1/(2 rho) + d2/rho < pi",
        )
    })
}
