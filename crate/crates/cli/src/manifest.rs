use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

/// Provenance record emitted with every command: rerunning with the same
/// manifest parameters reproduces the data output byte for byte (Monte
/// Carlo included, at a fixed worker count). The manifest itself carries
/// the wall-clock duration, which is why it lives next to the data
/// instead of inside it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(
        subcommand: &'static str,
        params: serde_json::Value,
        seed: Option<u64>,
        started: Instant,
    ) -> Self {
        RunManifest {
            subcommand,
            params,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            duration_seconds: started.elapsed().as_secs_f64(),
        }
    }

    /// Writes to `<data path>.manifest.json`, or to stderr when the data
    /// went to stdout.
    pub fn emit(&self, data_path: Option<&Path>) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        match data_path {
            Some(path) => {
                let mut name = path.as_os_str().to_owned();
                name.push(".manifest.json");
                std::fs::write(name, text + "\n")
            }
            None => writeln!(std::io::stderr(), "{text}"),
        }
    }
}
