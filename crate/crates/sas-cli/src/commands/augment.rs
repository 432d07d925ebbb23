//! `sas augment`: apply the batch augmentation rule to a preprocessed corpus
//! for one or more epochs, with a full provenance log.

use crate::config::{write_echo, worker_pool, RunConfig};
use crate::manifest::read_index;
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sas_core::augment::{augment_one, AugmentOutcome, Sample};
use sas_core::png::{load_byte_image, load_mask, save_gray_image, save_mask};
use sas_core::raster::GrayImage;
use sas_core::stream::derive_seed;
use std::path::Path;

struct ProvRow {
    epoch: u64,
    id: String,
    outcome: AugmentOutcome,
}

const PROVENANCE_HEADER: &str = "epoch\tid\tapplied\tthumb_longest\toffset_x\toffset_y\t\
noise_kind\tnoise_param\tstream_seed\tgeometry_seed\tnoise_seed";

fn provenance_line(row: &ProvRow) -> String {
    match &row.outcome.applied {
        Some(rec) => format!(
            "{}\t{}\ttrue\t{}\t{}\t{}\t{}\t{}\t{:016x}\t{:016x}\t{:016x}",
            row.epoch,
            row.id,
            rec.thumb_longest,
            rec.offset_x,
            rec.offset_y,
            rec.noise_kind,
            rec.noise_param,
            row.outcome.stream_seed,
            rec.geometry_seed,
            rec.noise_seed,
        ),
        None => format!(
            "{}\t{}\tfalse\t\t\t\t\t\t{:016x}\t\t",
            row.epoch, row.id, row.outcome.stream_seed
        ),
    }
}

/// Returns the number of failed entries.
pub fn run(input: &Path, epochs: u64, cfg: &RunConfig, workers: usize, output: &Path) -> Result<usize> {
    cfg.validate()?;
    if epochs == 0 {
        bail!("--epochs must be at least 1");
    }
    let rows = read_index(input)?;
    if rows.is_empty() {
        bail!("corpus index at {} has no entries", input.display());
    }

    // Load and check the whole corpus before writing anything.
    let mut samples = Vec::with_capacity(rows.len());
    for row in &rows {
        let image = GrayImage::from_bytes(&load_byte_image(&input.join(&row.image))?);
        let mask = load_mask(&input.join(&row.mask))?;
        let sample = Sample::new(
            row.id.clone(),
            image,
            mask,
            row.mask_fraction,
            cfg.sas.small_threshold,
        )?;
        if sample.image.width() != cfg.sas.canvas_side || sample.image.height() != cfg.sas.canvas_side
        {
            bail!(
                "sample '{}' is {}x{}, not preprocessed to canvas side {}",
                row.id,
                sample.image.width(),
                sample.image.height(),
                cfg.sas.canvas_side
            );
        }
        samples.push(sample);
    }

    let pool = worker_pool(workers)?;
    let mut provenance: Vec<ProvRow> = Vec::new();
    let mut failures = 0usize;
    for epoch in 0..epochs {
        let epoch_dir = output.join(format!("epoch_{epoch:03}"));
        super::ensure_dir(&epoch_dir.join("images"))?;
        super::ensure_dir(&epoch_dir.join("masks"))?;
        let epoch_seed = derive_seed(cfg.sas.seed, epoch);

        let results: Vec<Result<ProvRow>> = pool.install(|| {
            samples
                .par_iter()
                .enumerate()
                .map(|(i, sample)| {
                    let outcome = augment_one(sample, &cfg.sas, epoch_seed, i as u64)?;
                    save_gray_image(
                        &outcome.sample.image,
                        &epoch_dir.join(format!("images/{}.png", sample.id)),
                    )?;
                    save_mask(
                        &outcome.sample.mask,
                        &epoch_dir.join(format!("masks/{}.png", sample.id)),
                    )?;
                    Ok(ProvRow {
                        epoch,
                        id: sample.id.clone(),
                        outcome,
                    })
                })
                .collect()
        });
        for result in results {
            match result {
                Ok(row) => provenance.push(row),
                Err(e) => {
                    eprintln!("augment: {e:#}");
                    failures += 1;
                }
            }
        }
    }

    let mut log = String::from(PROVENANCE_HEADER);
    log.push('\n');
    for row in &provenance {
        log.push_str(&provenance_line(row));
        log.push('\n');
    }
    std::fs::write(output.join("provenance.tsv"), log).context("writing provenance")?;
    write_echo(cfg, output)?;

    let applied = provenance.iter().filter(|r| r.outcome.applied.is_some()).count();
    println!(
        "augment: {} outputs over {} epochs ({} transformed, {} failed) -> {}",
        provenance.len(),
        epochs,
        applied,
        failures,
        output.display()
    );
    Ok(failures)
}
