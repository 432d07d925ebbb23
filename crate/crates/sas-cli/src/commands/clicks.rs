//! `sas clicks`: simulate iterative click-prompt sessions over a corpus,
//! recording per-click DSC values.

use crate::config::{write_echo, worker_pool, RunConfig};
use crate::manifest::read_index;
use crate::predictor::ExternalPredictor;
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sas_core::clicks::{simulate_session, ClickPrompt, MockPredictor, Predictor};
use sas_core::stream::derive_stream;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PredictorKind {
    /// Deterministic morphological toy model.
    Mock,
    /// External command speaking the JSON-request / PNG-path-response
    /// contract.
    External,
}

/// One line of `sessions.jsonl`.
#[derive(Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub converged: bool,
    pub max_clicks: usize,
    pub clicks: Vec<ClickPrompt>,
    /// DSC of the prediction after each click.
    pub dsc: Vec<f64>,
    /// Failure reason; when set, the other fields describe a partial run.
    pub error: Option<String>,
}

pub struct ClicksOptions<'a> {
    pub predictor: PredictorKind,
    pub predictor_cmd: Option<&'a str>,
    pub max_clicks: usize,
    pub timeout: Duration,
}

/// Returns the number of failed sessions.
pub fn run(
    input: &Path,
    opts: &ClicksOptions,
    cfg: &RunConfig,
    workers: usize,
    output: &Path,
) -> Result<usize> {
    cfg.validate()?;
    if opts.max_clicks == 0 {
        bail!("--max-clicks must be at least 1");
    }
    if opts.predictor == PredictorKind::External && opts.predictor_cmd.is_none() {
        bail!("--predictor external requires --predictor-cmd");
    }
    let rows = read_index(input)?;
    if rows.is_empty() {
        bail!("corpus index at {} has no entries", input.display());
    }
    super::ensure_dir(output)?;

    let pool = worker_pool(workers)?;
    let records: Vec<SessionRecord> = pool.install(|| {
        rows.par_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut record = SessionRecord {
                    id: row.id.clone(),
                    converged: false,
                    max_clicks: opts.max_clicks,
                    clicks: Vec::new(),
                    dsc: Vec::new(),
                    error: None,
                };
                let rs = match sas_core::png::load_mask(&input.join(&row.mask)) {
                    Ok(rs) => rs,
                    Err(e) => {
                        record.error = Some(format!("{e}"));
                        return record;
                    }
                };
                let image_path = input.join(&row.image);
                let mut predictor: Box<dyn Predictor> = match opts.predictor {
                    PredictorKind::Mock => Box::new(MockPredictor::new(rs.clone())),
                    PredictorKind::External => Box::new(ExternalPredictor::new(
                        opts.predictor_cmd.expect("checked above"),
                        image_path,
                        opts.timeout,
                    )),
                };
                let mut rng = derive_stream(cfg.seed, i as u64);
                match simulate_session(&rs, predictor.as_mut(), opts.max_clicks, &mut rng) {
                    Ok(session) => {
                        record.converged = session.converged;
                        record.clicks = session.clicks.clone();
                        match session.dsc_per_click() {
                            Ok(dsc) => record.dsc = dsc,
                            Err(e) => record.error = Some(format!("{e}")),
                        }
                    }
                    Err(e) => record.error = Some(format!("{e}")),
                }
                record
            })
            .collect()
    });

    let mut text = String::new();
    for record in &records {
        text.push_str(&serde_json::to_string(record).context("encoding session record")?);
        text.push('\n');
    }
    std::fs::write(output.join("sessions.jsonl"), text).context("writing sessions")?;
    write_echo(cfg, output)?;

    let failures = records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "clicks: {} sessions ({} converged, {} failed) -> {}",
        records.len(),
        records.iter().filter(|r| r.converged).count(),
        failures,
        output.display()
    );
    Ok(failures)
}
