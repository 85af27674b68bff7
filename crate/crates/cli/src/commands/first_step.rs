use super::{resolve_walk, step_params};
use crate::args::WalkArgs;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{json_text, with_suffix, write_text};
use crate::parallel;
use pathcross::analytic::{plane_bounds, sphere_probability, Region};
use pathcross::simulation::{first_step_block, summarize_first_step, WalkConfig, FIRST_STEP_BLOCK};
use std::path::Path;

pub fn run(
    walk: &WalkArgs,
    trials_flag: Option<u64>,
    out: Option<&Path>,
    threads: usize,
) -> Result<(), CliError> {
    let r = resolve_walk(walk)?;
    let trials = trials_flag
        .or(r.trials)
        .ok_or_else(|| CliError::usage("missing --trials"))?;
    if trials == 0 {
        return Err(CliError::usage("at least one trial is required"));
    }

    // Steps play no role here; the config only carries the geometry.
    let config = WalkConfig::new(r.region, r.d1, r.d2, 1, r.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let blocks = trials.div_ceil(FIRST_STEP_BLOCK);
    let crossings = parallel::sum_over(blocks, threads, |block| {
        first_step_block(&config, block, trials)
    });
    let estimate = summarize_first_step(crossings, trials);

    let mut report = serde_json::json!({
        "command": "first-step",
        "region": r.region_name,
        "radius": r.radius,
        "d1": r.d1,
        "d2": r.d2,
        "trials": trials,
        "seed": r.seed,
        "crossings": estimate.crossings,
        "frequency": estimate.frequency,
        "stderr": estimate.std_error,
    });
    let fields = report.as_object_mut().expect("object");
    match r.region {
        Region::Disk { .. } => {
            let bounds = plane_bounds(&r.region, &step_params(r.d1, r.d2)?).expect("disk");
            fields.insert("p_lo".into(), bounds.p_lo.into());
            fields.insert("p_hi".into(), bounds.p_hi.into());
            fields.insert("p_star".into(), bounds.p_star.into());
        }
        Region::Sphere { rho } => {
            let p = super::sphere_params(r.d1, r.d2, rho)?;
            fields.insert("p_sphere".into(), sphere_probability(&p).into());
        }
    }

    let text = json_text(&report);
    match out {
        None => print!("{text}"),
        Some(prefix) => {
            let config_echo = serde_json::json!({
                "region": r.region_name,
                "radius": r.radius,
                "d1": r.d1,
                "d2": r.d2,
                "trials": trials,
                "seed": r.seed,
            });
            let mut manifest = RunManifest::start("first-step", config_echo, threads);
            let json_path = with_suffix(prefix, "json");
            write_text(&json_path, &text)?;
            manifest.record_output(&json_path);
            manifest.write(prefix)?;
            println!(
                "first-step: {} / {} crossings (wrote {})",
                estimate.crossings,
                trials,
                json_path.display()
            );
        }
    }
    Ok(())
}
