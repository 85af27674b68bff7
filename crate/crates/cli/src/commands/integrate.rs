use super::{sphere_params, step_params};
use crate::args::IntegrateTarget;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{json_text, with_suffix, write_text};
use pathcross::planar::crossing_integral;
use pathcross::quadrature::{
    integrate_plane, integrate_sphere, percent_error_vs_planar, IntegralResult, QuadratureError,
    QuadratureSpec,
};
use std::path::Path;

fn map_quadrature_error(e: QuadratureError) -> CliError {
    match e {
        QuadratureError::InvalidSpec => CliError::usage("tolerance must be positive"),
        QuadratureError::InvalidInput => CliError::usage("input outside the integrand's domain"),
        QuadratureError::DidNotConverge { .. } => CliError::NonConvergence(e.to_string()),
    }
}

fn emit(
    command: &'static str,
    report: &serde_json::Value,
    config: serde_json::Value,
    out: Option<&Path>,
    threads: usize,
) -> Result<(), CliError> {
    let text = json_text(report);
    match out {
        None => print!("{text}"),
        Some(prefix) => {
            let mut manifest = RunManifest::start(command, config, threads);
            let json_path = with_suffix(prefix, "json");
            write_text(&json_path, &text)?;
            manifest.record_output(&json_path);
            manifest.write(prefix)?;
            println!("{command}: wrote {}", json_path.display());
        }
    }
    Ok(())
}

fn result_fields(r: &IntegralResult) -> serde_json::Value {
    serde_json::json!({
        "value": r.value,
        "error_estimate": r.error_estimate,
        "evaluations": r.evaluations,
    })
}

pub fn run(target: IntegrateTarget, threads: usize) -> Result<(), CliError> {
    match target {
        IntegrateTarget::Plane {
            d1,
            d2,
            tolerance,
            max_depth,
            out,
        } => {
            let p = step_params(d1, d2)?;
            let q = QuadratureSpec {
                relative_tolerance: tolerance,
                max_subdivisions: max_depth,
            };
            let r = integrate_plane(&p, &q).map_err(map_quadrature_error)?;
            let closed = crossing_integral(&p);
            let mut report = result_fields(&r);
            let fields = report.as_object_mut().expect("object");
            fields.insert("closed_form".into(), closed.into());
            fields.insert(
                "relative_deviation".into(),
                ((r.value - closed) / closed).into(),
            );
            let config = serde_json::json!({
                "d1": d1, "d2": d2, "tolerance": tolerance, "max_depth": max_depth,
            });
            emit("integrate-plane", &report, config, out.as_deref(), threads)
        }
        IntegrateTarget::Sphere {
            d1,
            d2,
            rho,
            tolerance,
            max_depth,
            out,
        } => {
            let p = sphere_params(d1, d2, rho)?;
            let q = QuadratureSpec {
                relative_tolerance: tolerance,
                max_subdivisions: max_depth,
            };
            let r = integrate_sphere(&p, &q).map_err(map_quadrature_error)?;
            let mut report = result_fields(&r);
            let fields = report.as_object_mut().expect("object");
            fields.insert(
                "planar_reference".into(),
                (2.0 * d1 * d2 / std::f64::consts::PI).into(),
            );
            fields.insert(
                "percent_error_vs_planar".into(),
                percent_error_vs_planar(r.value, &p).into(),
            );
            let config = serde_json::json!({
                "d1": d1, "d2": d2, "rho": rho, "tolerance": tolerance, "max_depth": max_depth,
            });
            emit("integrate-sphere", &report, config, out.as_deref(), threads)
        }
    }
}
