use crate::error::CliError;
use crate::output::{json_text, with_suffix, write_text};
use std::path::Path;
use std::time::Instant;

/// Everything needed to reproduce a run bit-exactly, plus timing.
///
/// Written as `<out>.manifest.json` next to the run's artifacts. The
/// wall-clock duration lives here and only here, so the artifacts
/// themselves stay byte-identical under reruns.
pub struct RunManifest {
    command: &'static str,
    config: serde_json::Value,
    threads: usize,
    outputs: Vec<String>,
    started: Instant,
}

impl RunManifest {
    pub fn start(command: &'static str, config: serde_json::Value, threads: usize) -> Self {
        RunManifest {
            command,
            config,
            threads,
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(self, prefix: &Path) -> Result<(), CliError> {
        let value = serde_json::json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "threads": self.threads,
            "outputs": self.outputs,
            "duration_seconds": self.started.elapsed().as_secs_f64(),
        });
        write_text(&with_suffix(prefix, "manifest.json"), &json_text(&value))
    }
}
