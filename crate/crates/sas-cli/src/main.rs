//! Batch command-line front door for the ultrasound segmentation toolkit.

mod commands;
mod config;
mod manifest;
mod predictor;

use anyhow::Result;
use clap::{Parser, Subcommand};
use commands::clicks::{ClicksOptions, PredictorKind};
use config::{apply_master_seed, load_config, resolve_workers, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "sas",
    version,
    about = "Deterministic scale-and-noise augmentation, click-prompt simulation, and DSC/NSD evaluation for image/mask corpora"
)]
struct Cli {
    /// TOML run configuration; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed; overrides the augmentation seed and the bootstrap seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, default_value = "sas-out")]
    output: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess a manifest of source PNG pairs into a square corpus.
    Preprocess {
        /// Manifest TSV: id, image_path, mask_path, split.
        #[arg(long)]
        manifest: PathBuf,
        /// Square side of the preprocessed pair.
        #[arg(long)]
        input_side: Option<usize>,
        /// Crop to the bounding box of nonzero image content first.
        #[arg(long)]
        crop_window: Option<bool>,
    },
    /// Augment a preprocessed corpus for one or more epochs.
    Augment {
        /// Preprocessed corpus directory (holds index.tsv).
        #[arg(long)]
        input: PathBuf,
        /// Number of augmentation epochs to emit.
        #[arg(long, default_value_t = 1)]
        epochs: u64,
        #[arg(long)]
        canvas_side: Option<usize>,
        #[arg(long)]
        thumb_min: Option<usize>,
        #[arg(long)]
        thumb_max: Option<usize>,
        #[arg(long)]
        apply_prob: Option<f64>,
        #[arg(long)]
        small_threshold: Option<f64>,
        /// "random" or "centered".
        #[arg(long)]
        placement: Option<String>,
        /// Noise family for direct injection paths: speckle, gaussian,
        /// salt_pepper, or poisson.
        #[arg(long)]
        noise_kind: Option<String>,
        #[arg(long)]
        gaussian_sigma: Option<f64>,
        #[arg(long)]
        speckle_sigma: Option<f64>,
        #[arg(long)]
        sp_fraction: Option<f64>,
        #[arg(long)]
        poisson_scale: Option<f64>,
    },
    /// Simulate iterative click-prompt sessions over a corpus.
    Clicks {
        /// Preprocessed corpus directory (holds index.tsv).
        #[arg(long)]
        input: PathBuf,
        /// Which predictor answers the prompts.
        #[arg(long, value_enum, default_value_t = PredictorKind::Mock)]
        predictor: PredictorKind,
        /// Command line for the external predictor.
        #[arg(long)]
        predictor_cmd: Option<String>,
        /// Click budget per session.
        #[arg(long, default_value_t = 10)]
        max_clicks: usize,
        /// External predictor timeout in seconds.
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
    },
    /// Score predictions against references and report DSC/NSD with CIs.
    Eval {
        /// Directory of predicted mask PNGs.
        #[arg(long)]
        pred: PathBuf,
        /// Directory of reference mask PNGs.
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Corpus directory whose index supplies original mask fractions.
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        bootstrap_n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
    },
}

fn resolved_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    apply_master_seed(&mut cfg, cli.seed);

    match &cli.command {
        Command::Preprocess {
            input_side,
            crop_window,
            ..
        } => {
            if let Some(v) = input_side {
                cfg.preprocess.input_side = *v;
            }
            if let Some(v) = crop_window {
                cfg.preprocess.crop_window = *v;
            }
        }
        Command::Augment {
            canvas_side,
            thumb_min,
            thumb_max,
            apply_prob,
            small_threshold,
            placement,
            noise_kind,
            gaussian_sigma,
            speckle_sigma,
            sp_fraction,
            poisson_scale,
            ..
        } => {
            if let Some(v) = canvas_side {
                cfg.sas.canvas_side = *v;
            }
            if let Some(v) = thumb_min {
                cfg.sas.thumb_min = *v;
            }
            if let Some(v) = thumb_max {
                cfg.sas.thumb_max = *v;
            }
            if let Some(v) = apply_prob {
                cfg.sas.apply_prob = *v;
            }
            if let Some(v) = small_threshold {
                cfg.sas.small_threshold = *v;
            }
            if let Some(v) = placement {
                cfg.sas.placement = v.parse()?;
            }
            if let Some(v) = noise_kind {
                cfg.sas.noise.kind = v.parse()?;
            }
            if let Some(v) = gaussian_sigma {
                cfg.sas.noise.gaussian_sigma = *v;
            }
            if let Some(v) = speckle_sigma {
                cfg.sas.noise.speckle_sigma = *v;
            }
            if let Some(v) = sp_fraction {
                cfg.sas.noise.sp_fraction = *v;
            }
            if let Some(v) = poisson_scale {
                cfg.sas.noise.poisson_scale = *v;
            }
        }
        Command::Eval {
            tau,
            bootstrap_n,
            alpha,
            ..
        } => {
            if let Some(v) = tau {
                cfg.metrics.tau = *v;
            }
            if let Some(v) = bootstrap_n {
                cfg.metrics.bootstrap_n = *v;
            }
            if let Some(v) = alpha {
                cfg.metrics.alpha = *v;
            }
        }
        Command::Clicks { .. } => {}
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<usize> {
    let cfg = resolved_config(cli)?;
    let workers = resolve_workers(cli.workers);
    match &cli.command {
        Command::Preprocess { manifest, .. } => {
            commands::preprocess::run(manifest, &cfg, workers, &cli.output)
        }
        Command::Augment { input, epochs, .. } => {
            commands::augment::run(input, *epochs, &cfg, workers, &cli.output)
        }
        Command::Clicks {
            input,
            predictor,
            predictor_cmd,
            max_clicks,
            timeout_secs,
        } => {
            let opts = ClicksOptions {
                predictor: *predictor,
                predictor_cmd: predictor_cmd.as_deref(),
                max_clicks: *max_clicks,
                timeout: Duration::from_secs(*timeout_secs),
            };
            commands::clicks::run(input, &opts, &cfg, workers, &cli.output)
        }
        Command::Eval {
            pred,
            reference,
            index,
            ..
        } => commands::eval::run(pred, reference, index.as_deref(), &cfg, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
