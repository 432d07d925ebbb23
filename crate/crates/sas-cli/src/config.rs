//! Run configuration: TOML file plus CLI overrides.
//!
//! Seed precedence: `--seed` overrides everything; otherwise `[sas] seed`
//! and `[metrics] boot_seed` from the file apply where present, with the
//! file's top-level `seed` filling whichever of the two was left out.

use anyhow::{bail, Context, Result};
use sas_core::augment::SasConfig;
use sas_core::metrics::MetricConfig;
use sas_core::preprocess::PreprocConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Full run configuration; also the shape of the provenance echo written
/// next to every output tree. Worker count and output paths are execution
/// environment, not provenance, and stay out of the echo.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunConfig {
    /// Master seed: the default for the augmentation seed and the bootstrap
    /// seed.
    pub seed: u64,
    pub preprocess: PreprocConfig,
    pub sas: SasConfig,
    pub metrics: MetricConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate()?;
        self.sas.validate()?;
        self.metrics.validate()?;
        for (name, value) in [
            ("seed", self.seed),
            ("sas.seed", self.sas.seed),
            ("metrics.boot_seed", self.metrics.boot_seed),
        ] {
            if value > i64::MAX as u64 {
                bail!("{name} must fit in a TOML integer (< 2^63), got {value}");
            }
        }
        Ok(())
    }
}

/// Parse a TOML config file, applying the top-level seed to any subsystem
/// seed the file does not set explicitly.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let doc: toml::Table = toml::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let mut cfg: RunConfig = toml::from_str(&text)
        .with_context(|| format!("interpreting config {}", path.display()))?;

    let sas_seed_given = doc.get("sas").and_then(|s| s.get("seed")).is_some();
    let boot_seed_given = doc.get("metrics").and_then(|m| m.get("boot_seed")).is_some();
    if !sas_seed_given {
        cfg.sas.seed = cfg.seed;
    }
    if !boot_seed_given {
        cfg.metrics.boot_seed = cfg.seed;
    }
    Ok(cfg)
}

/// Apply the `--seed` override: it becomes the master seed and replaces both
/// subsystem seeds.
pub fn apply_master_seed(cfg: &mut RunConfig, seed: Option<u64>) {
    if let Some(seed) = seed {
        cfg.seed = seed;
        cfg.sas.seed = seed;
        cfg.metrics.boot_seed = seed;
    }
}

/// Write the resolved config echo into an output tree.
pub fn write_echo(cfg: &RunConfig, dir: &Path) -> Result<()> {
    let text = toml::to_string(cfg).context("serializing config echo")?;
    std::fs::write(dir.join("run_config.toml"), text)
        .with_context(|| format!("writing config echo under {}", dir.display()))?;
    Ok(())
}

/// Resolve the worker count: 0 or unset means all available cores.
pub fn resolve_workers(requested: Option<usize>) -> usize {
    match requested {
        Some(n) if n >= 1 => n,
        _ => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    }
}

/// Build a rayon pool of exactly `workers` threads.
pub fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
}
