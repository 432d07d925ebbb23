//! `sas preprocess`: turn a manifest of source PNG pairs into a normalized
//! square corpus plus an index recording size classes.

use crate::config::{write_echo, worker_pool, RunConfig};
use crate::manifest::{load_manifest, write_index, IndexRow, ManifestEntry};
use anyhow::{Context, Result};
use rayon::prelude::*;
use sas_core::augment::{classify_fraction, mask_fraction};
use sas_core::png::{load_byte_image, save_gray_image, save_mask};
use sas_core::preprocess::{preprocess_pair, RawPair};
use sas_core::raster::BinaryMask;
use std::path::Path;

fn process_entry(entry: &ManifestEntry, cfg: &RunConfig, output: &Path) -> Result<IndexRow> {
    let image = load_byte_image(&entry.image_path)?;
    let mask = load_byte_image(&entry.mask_path)?;
    let raw = RawPair::new(entry.id.clone(), image, mask)?;

    // Size class comes from the original mask, before any geometry changes.
    let fraction = mask_fraction(&BinaryMask::from_bytes(&raw.mask));
    let size_class = classify_fraction(fraction, cfg.sas.small_threshold);
    let (orig_w, orig_h) = (raw.image.width(), raw.image.height());

    let (processed_image, processed_mask) = preprocess_pair(&raw, &cfg.preprocess)?;
    let image_rel = format!("images/{}.png", entry.id);
    let mask_rel = format!("masks/{}.png", entry.id);
    save_gray_image(&processed_image, &output.join(&image_rel))?;
    save_mask(&processed_mask, &output.join(&mask_rel))?;

    Ok(IndexRow {
        id: entry.id.clone(),
        image: image_rel,
        mask: mask_rel,
        split: entry.split.name().to_string(),
        orig_width: orig_w,
        orig_height: orig_h,
        mask_fraction: fraction,
        size_class,
    })
}

/// Returns the number of failed entries.
pub fn run(manifest_path: &Path, cfg: &RunConfig, workers: usize, output: &Path) -> Result<usize> {
    cfg.validate()?;
    let entries = load_manifest(manifest_path)?;
    super::ensure_dir(&output.join("images"))?;
    super::ensure_dir(&output.join("masks"))?;

    let pool = worker_pool(workers)?;
    let results: Vec<(String, Result<IndexRow>)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| (e.id.clone(), process_entry(e, cfg, output)))
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (id, result) in results {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((id, format!("{e:#}"))),
        }
    }
    write_index(output, &rows)?;
    if !failures.is_empty() {
        let mut text = String::from("id\treason\n");
        for (id, reason) in &failures {
            eprintln!("preprocess: {id}: {reason}");
            text.push_str(&format!("{id}\t{reason}\n"));
        }
        std::fs::write(output.join("failures.tsv"), text).context("writing failures")?;
    }
    write_echo(cfg, output)?;
    println!(
        "preprocess: {} ok, {} failed -> {}",
        rows.len(),
        failures.len(),
        output.display()
    );
    Ok(failures.len())
}
