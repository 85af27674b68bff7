use super::{resolve_walk, step_params};
use crate::args::WalkArgs;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{json_text, sig12, with_suffix, write_text};
use crate::parallel;
use pathcross::analytic::bounds_from_areas;
use pathcross::simulation::{hypothetical_bands, walk_indicators, CrossingSeries, WalkConfig};
use std::fmt::Write as _;
use std::path::Path;

pub fn run(
    walk: &WalkArgs,
    steps_flag: Option<u64>,
    level_flag: Option<f64>,
    out: &Path,
    threads: usize,
) -> Result<(), CliError> {
    let r = resolve_walk(walk)?;
    let steps = steps_flag
        .or(r.steps)
        .ok_or_else(|| CliError::usage("missing --steps"))?;
    let level = level_flag.or(r.level).unwrap_or(0.95);

    let config = WalkConfig::new(r.region, r.d1, r.d2, steps, r.seed)
        .and_then(|c| c.with_tau(r.tau))
        .and_then(|c| c.with_replicas(r.replicas))
        .map_err(|e| CliError::usage(e.to_string()))?;

    let counts = parallel::pooled_counts(r.replicas, steps as usize, threads, |replica| {
        walk_indicators(&config, replica)
    });
    let series = CrossingSeries::from_counts(counts, r.replicas);

    // Reference bands around the analytic bracket; on the sphere the
    // bracket is a single value and the two bands coincide.
    let p = step_params(r.d1, r.d2)?;
    let bounds = bounds_from_areas(r.region.area(), r.region.inner_area(&p), &p);
    let band_lo =
        hypothetical_bands(bounds.p_lo, level).map_err(|e| CliError::usage(e.to_string()))?;
    let band_hi =
        hypothetical_bands(bounds.p_hi, level).map_err(|e| CliError::usage(e.to_string()))?;

    let mut csv =
        String::from("k,indicator,F_k,lo_band_plo,hi_band_plo,lo_band_phi,hi_band_phi,p_star\n");
    let frequencies = series.running_frequency();
    let p_star = sig12(bounds.p_star);
    for k in 1..=steps {
        let (lo_lo, hi_lo) = band_lo.band(k);
        let (lo_hi, hi_hi) = band_hi.band(k);
        writeln!(
            csv,
            "{k},{},{},{},{},{},{},{p_star}",
            series.count_at(k),
            sig12(frequencies[(k - 1) as usize]),
            sig12(lo_lo),
            sig12(hi_lo),
            sig12(lo_hi),
            sig12(hi_hi),
        )
        .expect("string write");
    }

    let frequency = series.final_frequency();
    let samples = (steps * u64::from(r.replicas)) as f64;
    let summary = serde_json::json!({
        "command": "simulate",
        "region": r.region_name,
        "radius": r.radius,
        "d1": r.d1,
        "d2": r.d2,
        "steps": steps,
        "seed": r.seed,
        "tau": r.tau,
        "replicas": r.replicas,
        "level": level,
        "crossings": series.crossings_total(),
        "frequency": frequency,
        "stderr": (frequency * (1.0 - frequency) / samples).sqrt(),
        "p_lo": bounds.p_lo,
        "p_hi": bounds.p_hi,
        "p_star": bounds.p_star,
    });

    let config_echo = serde_json::json!({
        "region": r.region_name,
        "radius": r.radius,
        "d1": r.d1,
        "d2": r.d2,
        "steps": steps,
        "seed": r.seed,
        "tau": r.tau,
        "replicas": r.replicas,
        "level": level,
    });
    let mut manifest = RunManifest::start("simulate", config_echo, threads);
    let csv_path = with_suffix(out, "csv");
    write_text(&csv_path, &csv)?;
    manifest.record_output(&csv_path);
    let summary_path = with_suffix(out, "summary.json");
    write_text(&summary_path, &json_text(&summary))?;
    manifest.record_output(&summary_path);
    manifest.write(out)?;

    println!(
        "simulate: {} steps x {} replicas, {} crossings, F = {} (wrote {}, {})",
        steps,
        r.replicas,
        series.crossings_total(),
        sig12(frequency),
        csv_path.display(),
        summary_path.display()
    );
    Ok(())
}
