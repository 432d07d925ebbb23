//! Segmentation metrics: Dice similarity coefficient, normalized surface
//! distance at a pixel tolerance, and percentile-bootstrap confidence
//! intervals over per-sample values.

use crate::augment::SizeClass;
use crate::error::{Error, Result};
use crate::raster::{boundary_pixels, dilate_disk, BinaryMask, Connectivity};
use crate::stream::{derive_seed, ChaCha8Rng};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// Metric parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    /// Boundary tolerance in pixels for the surface metric.
    pub tau: f64,
    /// Number of bootstrap resamples.
    pub bootstrap_n: usize,
    /// Two-sided miss probability of the confidence interval.
    pub alpha: f64,
    /// Seed of the bootstrap resampling stream.
    pub boot_seed: u64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            tau: 2.0,
            bootstrap_n: 10_000,
            alpha: 0.05,
            boot_seed: 0,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau.is_nan() || self.tau < 0.0 {
            return Err(Error::InvalidInput("tau must be >= 0".into()));
        }
        if self.bootstrap_n < 1 {
            return Err(Error::InvalidInput("bootstrap_n must be >= 1".into()));
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 || self.alpha >= 1.0 {
            return Err(Error::InvalidInput("alpha must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

fn check_dims(pred: &BinaryMask, rs: &BinaryMask) -> Result<()> {
    if !pred.same_dims(rs) {
        return Err(Error::InvalidInput(format!(
            "prediction {}x{} and reference {}x{} differ in size",
            pred.width(),
            pred.height(),
            rs.width(),
            rs.height()
        )));
    }
    Ok(())
}

/// Dice similarity coefficient `2|P n R| / (|P| + |R|)`.
///
/// Conventions for degenerate masks: both empty scores 1.0, exactly one
/// empty scores 0.0.
pub fn dsc(pred: &BinaryMask, rs: &BinaryMask) -> Result<f64> {
    check_dims(pred, rs)?;
    let p = pred.foreground_area();
    let r = rs.foreground_area();
    if p == 0 && r == 0 {
        return Ok(1.0);
    }
    let intersection = pred
        .data()
        .iter()
        .zip(rs.data())
        .filter(|&(&a, &b)| a && b)
        .count();
    Ok(2.0 * intersection as f64 / (p + r) as f64)
}

/// Normalized surface distance at tolerance `tau`: the fraction of boundary
/// pixels of each mask lying within `tau` of the other mask's boundary.
/// Boundaries are 4-connected; degenerate-mask conventions match [`dsc`].
pub fn nsd(pred: &BinaryMask, rs: &BinaryMask, tau: f64) -> Result<f64> {
    check_dims(pred, rs)?;
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidInput("tau must be >= 0".into()));
    }
    let p_empty = pred.foreground_area() == 0;
    let r_empty = rs.foreground_area() == 0;
    if p_empty && r_empty {
        return Ok(1.0);
    }
    if p_empty || r_empty {
        return Ok(0.0);
    }

    let surface_pred = boundary_pixels(pred, Connectivity::Four);
    let surface_rs = boundary_pixels(rs, Connectivity::Four);
    let border_pred = dilate_disk(&surface_pred, tau)?;
    let border_rs = dilate_disk(&surface_rs, tau)?;

    let count_in = |surface: &BinaryMask, border: &BinaryMask| {
        surface
            .data()
            .iter()
            .zip(border.data())
            .filter(|&(&s, &b)| s && b)
            .count()
    };
    let matched = count_in(&surface_pred, &border_rs) + count_in(&surface_rs, &border_pred);
    let total = surface_pred.foreground_area() + surface_rs.foreground_area();
    Ok(matched as f64 / total as f64)
}

/// Percentile-bootstrap confidence interval around an arithmetic mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCI {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub n_resamples: usize,
}

fn percentile_index(p: f64, n: usize) -> usize {
    let rank = (p * n as f64).ceil() as usize;
    rank.clamp(1, n) - 1
}

/// Neumaier-compensated mean, so constant inputs average to themselves
/// exactly.
fn mean_of(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    (sum + compensation) / values.len() as f64
}

/// Percentile-method bootstrap over the mean: resample with replacement
/// `bootstrap_n` times from a stream seeded by `boot_seed`, then take the
/// `alpha/2` and `1 - alpha/2` nearest-rank percentiles of the resampled
/// means.
pub fn bootstrap_ci(values: &[f64], cfg: &MetricConfig) -> Result<BootstrapCI> {
    cfg.validate()?;
    if values.is_empty() {
        return Err(Error::InvalidInput(
            "bootstrap needs at least one value".into(),
        ));
    }
    let n = values.len();
    let mean = mean_of(values);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.boot_seed);
    let mut resample = vec![0.0; n];
    let mut means = Vec::with_capacity(cfg.bootstrap_n);
    for _ in 0..cfg.bootstrap_n {
        for slot in resample.iter_mut() {
            *slot = values[rng.random_range(0..n)];
        }
        means.push(mean_of(&resample));
    }
    means.sort_by(f64::total_cmp);
    let lo = means[percentile_index(cfg.alpha / 2.0, means.len())];
    let hi = means[percentile_index(1.0 - cfg.alpha / 2.0, means.len())];
    Ok(BootstrapCI {
        mean,
        lo,
        hi,
        n_resamples: cfg.bootstrap_n,
    })
}

/// Per-sample metric values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricResult {
    pub sample_id: String,
    pub dsc: f64,
    pub nsd: f64,
    pub pred_area: usize,
    pub rs_area: usize,
    pub size_class: SizeClass,
}

/// One evaluation input: matched prediction and reference with an identity
/// and a size class (the class comes from the original mask fraction when
/// the corpus index is available).
#[derive(Clone, Debug)]
pub struct EvalPair {
    pub id: String,
    pub pred: BinaryMask,
    pub rs: BinaryMask,
    pub size_class: SizeClass,
}

/// A sample that could not be scored, with the reason.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalFailure {
    pub id: String,
    pub reason: String,
}

/// Aggregate over one stratum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AggregateStats {
    pub n: usize,
    pub dsc: BootstrapCI,
    pub nsd: BootstrapCI,
}

/// Full evaluation output: per-sample rows plus overall and per-size-class
/// aggregates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetReport {
    pub results: Vec<MetricResult>,
    pub failures: Vec<EvalFailure>,
    pub overall: Option<AggregateStats>,
    pub small: Option<AggregateStats>,
    pub large: Option<AggregateStats>,
}

fn aggregate(results: &[&MetricResult], cfg: &MetricConfig, stream_tag: u64) -> Option<AggregateStats> {
    if results.is_empty() {
        return None;
    }
    let dscs: Vec<f64> = results.iter().map(|r| r.dsc).collect();
    let nsds: Vec<f64> = results.iter().map(|r| r.nsd).collect();
    let dsc_cfg = MetricConfig {
        boot_seed: derive_seed(cfg.boot_seed, stream_tag),
        ..cfg.clone()
    };
    let nsd_cfg = MetricConfig {
        boot_seed: derive_seed(cfg.boot_seed, stream_tag + 1),
        ..cfg.clone()
    };
    Some(AggregateStats {
        n: results.len(),
        dsc: bootstrap_ci(&dscs, &dsc_cfg).expect("nonempty values"),
        nsd: bootstrap_ci(&nsds, &nsd_cfg).expect("nonempty values"),
    })
}

/// Score every pair and aggregate overall and per size class. Per-sample
/// failures are collected, not fatal.
pub fn evaluate_dataset(pairs: &[EvalPair], cfg: &MetricConfig) -> Result<DatasetReport> {
    cfg.validate()?;
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for pair in pairs {
        match (dsc(&pair.pred, &pair.rs), nsd(&pair.pred, &pair.rs, cfg.tau)) {
            (Ok(d), Ok(s)) => results.push(MetricResult {
                sample_id: pair.id.clone(),
                dsc: d,
                nsd: s,
                pred_area: pair.pred.foreground_area(),
                rs_area: pair.rs.foreground_area(),
                size_class: pair.size_class,
            }),
            (Err(e), _) | (_, Err(e)) => failures.push(EvalFailure {
                id: pair.id.clone(),
                reason: e.to_string(),
            }),
        }
    }

    let all: Vec<&MetricResult> = results.iter().collect();
    let small: Vec<&MetricResult> = results
        .iter()
        .filter(|r| r.size_class == SizeClass::Small)
        .collect();
    let large: Vec<&MetricResult> = results
        .iter()
        .filter(|r| r.size_class == SizeClass::Large)
        .collect();
    Ok(DatasetReport {
        overall: aggregate(&all, cfg, 0),
        small: aggregate(&small, cfg, 2),
        large: aggregate(&large, cfg, 4),
        results,
        failures,
    })
}
