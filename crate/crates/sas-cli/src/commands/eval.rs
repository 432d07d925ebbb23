//! `sas eval`: score predicted masks against reference masks, stratified by
//! size class, with bootstrap confidence intervals.

use crate::config::{write_echo, RunConfig};
use crate::manifest::read_index;
use anyhow::{Context, Result};
use sas_core::augment::{classify_fraction, classify_size, SizeClass};
use sas_core::metrics::{evaluate_dataset, AggregateStats, EvalFailure, EvalPair, MetricResult};
use sas_core::png::load_mask;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

fn png_stems(dir: &Path) -> Result<BTreeMap<String, std::path::PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("png") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.insert(stem.to_string(), path.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportConfig {
    seed: u64,
    tau: f64,
    bootstrap_n: usize,
    alpha: f64,
    boot_seed: u64,
    small_threshold: f64,
}

#[derive(Serialize)]
struct Aggregates {
    overall: Option<AggregateStats>,
    small: Option<AggregateStats>,
    large: Option<AggregateStats>,
}

#[derive(Serialize)]
struct EvalReport {
    config: ReportConfig,
    samples: Vec<MetricResult>,
    aggregates: Aggregates,
    failures: Vec<EvalFailure>,
    unmatched_pred: Vec<String>,
    unmatched_ref: Vec<String>,
}

/// Returns the number of failures (unscorable samples plus unmatched ids).
pub fn run(
    pred_dir: &Path,
    ref_dir: &Path,
    index_dir: Option<&Path>,
    cfg: &RunConfig,
    output: &Path,
) -> Result<usize> {
    cfg.validate()?;
    let preds = png_stems(pred_dir)?;
    let refs = png_stems(ref_dir)?;

    let unmatched_pred: Vec<String> = preds.keys().filter(|k| !refs.contains_key(*k)).cloned().collect();
    let unmatched_ref: Vec<String> = refs.keys().filter(|k| !preds.contains_key(*k)).cloned().collect();

    // Original mask fractions from a corpus index, when one is available.
    let fractions: BTreeMap<String, f64> = match index_dir {
        Some(dir) => read_index(dir)?
            .into_iter()
            .map(|r| (r.id, r.mask_fraction))
            .collect(),
        None => BTreeMap::new(),
    };

    let mut pairs = Vec::new();
    let mut load_failures = Vec::new();
    for (id, ref_path) in &refs {
        let Some(pred_path) = preds.get(id) else {
            continue;
        };
        match (load_mask(pred_path), load_mask(ref_path)) {
            (Ok(pred), Ok(rs)) => {
                let size_class: SizeClass = match fractions.get(id) {
                    Some(&fraction) => classify_fraction(fraction, cfg.sas.small_threshold),
                    None => classify_size(&rs, cfg.sas.small_threshold),
                };
                pairs.push(EvalPair {
                    id: id.clone(),
                    pred,
                    rs,
                    size_class,
                });
            }
            (Err(e), _) | (_, Err(e)) => load_failures.push(EvalFailure {
                id: id.clone(),
                reason: e.to_string(),
            }),
        }
    }

    let mut report = evaluate_dataset(&pairs, &cfg.metrics)?;
    report.failures.extend(load_failures);

    super::ensure_dir(output)?;
    let out = EvalReport {
        config: ReportConfig {
            seed: cfg.seed,
            tau: cfg.metrics.tau,
            bootstrap_n: cfg.metrics.bootstrap_n,
            alpha: cfg.metrics.alpha,
            boot_seed: cfg.metrics.boot_seed,
            small_threshold: cfg.sas.small_threshold,
        },
        samples: report.results,
        aggregates: Aggregates {
            overall: report.overall,
            small: report.small,
            large: report.large,
        },
        failures: report.failures,
        unmatched_pred,
        unmatched_ref,
    };
    let json = serde_json::to_string_pretty(&out).context("encoding report")?;
    std::fs::write(output.join("report.json"), json).context("writing report")?;
    write_echo(cfg, output)?;

    let failures = out.failures.len() + out.unmatched_pred.len() + out.unmatched_ref.len();
    println!(
        "eval: {} scored, {} failures/unmatched -> {}",
        out.samples.len(),
        failures,
        output.display()
    );
    Ok(failures)
}
