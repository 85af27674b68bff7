use super::{sphere_params, step_params};
use crate::args::RegionKind;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{json_text, with_suffix, write_text};
use pathcross::analytic::{plane_bounds, sphere_probability, Region};
use std::path::Path;

pub fn run(
    region: RegionKind,
    radius: f64,
    d1: f64,
    d2: f64,
    out: Option<&Path>,
    threads: usize,
) -> Result<(), CliError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::usage("radius must be positive and finite"));
    }
    let (report, region_name) = match region {
        RegionKind::Disk => {
            let p = step_params(d1, d2)?;
            let b = plane_bounds(&Region::Disk { radius }, &p).expect("disk region");
            (
                serde_json::json!({
                    "p_lo": b.p_lo,
                    "p_hi": b.p_hi,
                    "p_star": b.p_star,
                    "avmpe": b.avmpe_percent,
                }),
                "disk",
            )
        }
        RegionKind::Sphere => {
            let p = sphere_params(d1, d2, radius)?;
            (serde_json::json!({ "p": sphere_probability(&p) }), "sphere")
        }
    };

    let text = json_text(&report);
    match out {
        None => print!("{text}"),
        Some(prefix) => {
            let config = serde_json::json!({
                "region": region_name,
                "radius": radius,
                "d1": d1,
                "d2": d2,
            });
            let mut manifest = RunManifest::start("analytic", config, threads);
            let json_path = with_suffix(prefix, "json");
            write_text(&json_path, &text)?;
            manifest.record_output(&json_path);
            manifest.write(prefix)?;
            println!("analytic ({region_name}): wrote {}", json_path.display());
        }
    }
    Ok(())
}
