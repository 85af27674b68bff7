use super::sphere_params;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{sig12, with_suffix, write_text};
use pathcross::quadrature::{
    integrate_sphere, percent_error_vs_planar, QuadratureError, QuadratureSpec,
};
use pathcross::sphere::SphereStepParams;
use std::path::Path;

pub fn run(
    d1: f64,
    d2_list: &[f64],
    rho_list: &[f64],
    tolerance: f64,
    max_depth: u32,
    out: Option<&Path>,
    threads: usize,
) -> Result<(), CliError> {
    if !(d1.is_finite() && d1 > 0.0) {
        return Err(CliError::usage("d1 must be positive and finite"));
    }
    let q = QuadratureSpec {
        relative_tolerance: tolerance,
        max_subdivisions: max_depth,
    };

    let mut csv = String::from("d2,rho,percent_error\n");
    for &d2 in d2_list {
        for &rho in rho_list {
            let p: SphereStepParams = match sphere_params(d1, d2, rho) {
                Ok(p) => p,
                Err(_) => {
                    eprintln!("skipping d2={d2} rho={rho}: feasible domain would wrap around");
                    continue;
                }
            };
            let result = match integrate_sphere(&p, &q) {
                Ok(r) => r,
                Err(QuadratureError::InvalidSpec) => {
                    return Err(CliError::usage("tolerance must be positive"))
                }
                Err(e) => return Err(CliError::NonConvergence(e.to_string())),
            };
            let pct = percent_error_vs_planar(result.value, &p);
            csv.push_str(&format!("{d2},{rho},{}\n", sig12(pct)));
        }
    }

    match out {
        None => print!("{csv}"),
        Some(prefix) => {
            let config = serde_json::json!({
                "d1": d1,
                "d2": d2_list,
                "rho": rho_list,
                "tolerance": tolerance,
                "max_depth": max_depth,
            });
            let mut manifest = RunManifest::start("table1", config, threads);
            let csv_path = with_suffix(prefix, "csv");
            write_text(&csv_path, &csv)?;
            manifest.record_output(&csv_path);
            manifest.write(prefix)?;
            println!("table1: wrote {}", csv_path.display());
        }
    }
    Ok(())
}
