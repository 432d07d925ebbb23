//! Scale-and-noise augmentation (SAS): step 1 shrinks a sample into a
//! thumbnail placed on a black canvas, step 2 injects one randomly chosen
//! noise family into the transformed mask's region. The batch rule applies
//! the transform to large-structure samples with a configured probability.

use crate::error::{Error, Result};
use crate::noise::{draw_noise_kind, inject_noise, NoiseKind, NoiseSpec};
use crate::raster::{resize_bilinear, resize_nearest, BinaryMask, GrayImage};
use crate::stream::{derive_stream, ChaCha8Rng};
use rand::{Rng, RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Structure size relative to the original image: at most the configured
/// area fraction is small, anything larger is large.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    Small,
    Large,
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeClass::Small => "small",
            SizeClass::Large => "large",
        })
    }
}

impl std::str::FromStr for SizeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(SizeClass::Small),
            "large" => Ok(SizeClass::Large),
            other => Err(Error::InvalidInput(format!("unknown size class '{other}'"))),
        }
    }
}

/// Foreground fraction of a mask.
pub fn mask_fraction(mask: &BinaryMask) -> f64 {
    let total = mask.width() * mask.height();
    if total == 0 {
        return 0.0;
    }
    mask.foreground_area() as f64 / total as f64
}

/// Classify a fraction against the small-structure threshold; the boundary
/// is inclusive ("up to" the threshold is small).
pub fn classify_fraction(fraction: f64, threshold: f64) -> SizeClass {
    if fraction <= threshold {
        SizeClass::Small
    } else {
        SizeClass::Large
    }
}

/// Classify a mask by its foreground fraction.
pub fn classify_size(mask: &BinaryMask, threshold: f64) -> SizeClass {
    classify_fraction(mask_fraction(mask), threshold)
}

/// An image/mask pair with identity, size class, and the mask fraction
/// measured on the original (pre-preprocessing) mask.
#[derive(Clone, Debug)]
pub struct Sample {
    pub id: String,
    pub image: GrayImage,
    pub mask: BinaryMask,
    pub size_class: SizeClass,
    pub original_mask_fraction: f64,
}

impl Sample {
    pub fn new(
        id: impl Into<String>,
        image: GrayImage,
        mask: BinaryMask,
        original_mask_fraction: f64,
        small_threshold: f64,
    ) -> Result<Self> {
        if image.width() != mask.width() || image.height() != mask.height() {
            return Err(Error::InvalidInput(format!(
                "image {}x{} and mask {}x{} differ in size",
                image.width(),
                image.height(),
                mask.width(),
                mask.height()
            )));
        }
        if !(0.0..=1.0).contains(&original_mask_fraction) {
            return Err(Error::InvalidInput(
                "original_mask_fraction must lie in [0, 1]".into(),
            ));
        }
        Ok(Self {
            id: id.into(),
            image,
            mask,
            size_class: classify_fraction(original_mask_fraction, small_threshold),
            original_mask_fraction,
        })
    }
}

/// Where a thumbnail lands on the canvas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Random,
    Centered,
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Placement::Random),
            "centered" => Ok(Placement::Centered),
            other => Err(Error::InvalidInput(format!("unknown placement '{other}'"))),
        }
    }
}

/// Augmentation parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SasConfig {
    /// Side of the square canvas (the network input size).
    pub canvas_side: usize,
    /// Smallest thumbnail longest edge.
    pub thumb_min: usize,
    /// Largest thumbnail longest edge.
    pub thumb_max: usize,
    /// Probability that a large-structure sample is transformed.
    pub apply_prob: f64,
    /// Inclusive small-structure area-fraction threshold.
    pub small_threshold: f64,
    /// Thumbnail placement mode.
    pub placement: Placement,
    /// Noise magnitudes; the family is drawn uniformly per transform.
    pub noise: NoiseSpec,
    /// Master seed for per-sample stream derivation.
    pub seed: u64,
}

impl Default for SasConfig {
    fn default() -> Self {
        Self {
            canvas_side: 256,
            thumb_min: 64,
            thumb_max: 256,
            apply_prob: 0.5,
            small_threshold: 0.03,
            placement: Placement::Random,
            noise: NoiseSpec::default(),
            seed: 0,
        }
    }
}

impl SasConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thumb_min == 0 || self.thumb_min > self.thumb_max || self.thumb_max > self.canvas_side {
            return Err(Error::InvalidInput(format!(
                "thumbnail range [{}, {}] must satisfy 1 <= min <= max <= canvas {}",
                self.thumb_min, self.thumb_max, self.canvas_side
            )));
        }
        if !(0.0..=1.0).contains(&self.apply_prob) {
            return Err(Error::InvalidInput("apply_prob must lie in [0, 1]".into()));
        }
        if self.small_threshold.is_nan()
            || self.small_threshold <= 0.0
            || self.small_threshold >= 1.0
        {
            return Err(Error::InvalidInput(
                "small_threshold must lie in (0, 1)".into(),
            ));
        }
        self.noise.validate()
    }
}

/// What one transform actually did; enough to replay it exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SasRecord {
    pub thumb_longest: usize,
    pub offset_x: usize,
    pub offset_y: usize,
    pub noise_kind: NoiseKind,
    pub noise_param: f64,
    pub geometry_seed: u64,
    pub noise_seed: u64,
}

/// Draw the thumbnail longest edge uniformly from the configured range.
pub fn draw_thumb_longest(cfg: &SasConfig, rng: &mut dyn RngCore) -> usize {
    rng.random_range(cfg.thumb_min..=cfg.thumb_max)
}

/// Shrink a sample so its longest edge equals `target_longest`; the image
/// resamples bilinearly and the mask by nearest sampling, with identical
/// geometry.
pub fn make_thumbnail(sample: &Sample, target_longest: usize, cfg: &SasConfig) -> Result<Sample> {
    if target_longest < cfg.thumb_min || target_longest > cfg.canvas_side {
        return Err(Error::InvalidInput(format!(
            "thumbnail size {target_longest} outside configured range [{}, {}]",
            cfg.thumb_min, cfg.canvas_side
        )));
    }
    Ok(Sample {
        id: sample.id.clone(),
        image: resize_bilinear(&sample.image, target_longest)?,
        mask: resize_nearest(&sample.mask, target_longest)?,
        size_class: sample.size_class,
        original_mask_fraction: sample.original_mask_fraction,
    })
}

/// Place a thumbnail at a fixed offset on a black canvas.
pub fn place_at(thumb: &Sample, canvas_side: usize, offset_x: usize, offset_y: usize) -> Result<Sample> {
    let (tw, th) = (thumb.image.width(), thumb.image.height());
    if offset_x + tw > canvas_side || offset_y + th > canvas_side {
        return Err(Error::InvalidInput(format!(
            "thumbnail {tw}x{th} at ({offset_x},{offset_y}) exceeds canvas {canvas_side}"
        )));
    }
    let mut image = vec![0.0; canvas_side * canvas_side];
    let mut mask = vec![false; canvas_side * canvas_side];
    for y in 0..th {
        for x in 0..tw {
            let dst = (offset_y + y) * canvas_side + offset_x + x;
            image[dst] = thumb.image.at(x, y);
            mask[dst] = thumb.mask.at(x, y);
        }
    }
    Ok(Sample {
        id: thumb.id.clone(),
        image: GrayImage::new(canvas_side, canvas_side, image)?,
        mask: BinaryMask::new(canvas_side, canvas_side, mask)?,
        size_class: thumb.size_class,
        original_mask_fraction: thumb.original_mask_fraction,
    })
}

/// Place a thumbnail on a black canvas; random mode draws the offset
/// uniformly over all fully-contained positions (x first, then y).
pub fn place_on_canvas(
    thumb: &Sample,
    cfg: &SasConfig,
    rng: &mut dyn RngCore,
) -> Result<(Sample, (usize, usize))> {
    let (tw, th) = (thumb.image.width(), thumb.image.height());
    if tw > cfg.canvas_side || th > cfg.canvas_side {
        return Err(Error::InvalidInput(format!(
            "thumbnail {tw}x{th} larger than canvas {}",
            cfg.canvas_side
        )));
    }
    let (ox, oy) = match cfg.placement {
        Placement::Random => (
            rng.random_range(0..=cfg.canvas_side - tw),
            rng.random_range(0..=cfg.canvas_side - th),
        ),
        Placement::Centered => ((cfg.canvas_side - tw) / 2, (cfg.canvas_side - th) / 2),
    };
    Ok((place_at(thumb, cfg.canvas_side, ox, oy)?, (ox, oy)))
}

/// Full transform with explicit geometry and noise streams. The output mask
/// is a function of the geometry stream alone; noise never touches it.
pub fn sas_transform_seeded(
    sample: &Sample,
    cfg: &SasConfig,
    geometry_seed: u64,
    noise_seed: u64,
) -> Result<(Sample, SasRecord)> {
    cfg.validate()?;
    if sample.image.width() != cfg.canvas_side || sample.image.height() != cfg.canvas_side {
        return Err(Error::InvalidInput(format!(
            "sample {}x{} is not preprocessed to canvas side {}",
            sample.image.width(),
            sample.image.height(),
            cfg.canvas_side
        )));
    }
    let mut geometry_rng = ChaCha8Rng::seed_from_u64(geometry_seed);
    let target = draw_thumb_longest(cfg, &mut geometry_rng);
    let thumb = make_thumbnail(sample, target, cfg)?;
    let (placed, (offset_x, offset_y)) = place_on_canvas(&thumb, cfg, &mut geometry_rng)?;

    let mut noise_rng = ChaCha8Rng::seed_from_u64(noise_seed);
    let noise_kind = draw_noise_kind(&mut noise_rng);
    let spec = NoiseSpec {
        kind: noise_kind,
        ..cfg.noise.clone()
    };
    let image = inject_noise(&placed.image, &placed.mask, &spec, &mut noise_rng)?;

    let record = SasRecord {
        thumb_longest: target,
        offset_x,
        offset_y,
        noise_kind,
        noise_param: spec.param_for(noise_kind),
        geometry_seed,
        noise_seed,
    };
    Ok((
        Sample {
            image,
            ..placed
        },
        record,
    ))
}

/// Full transform: scale simulation followed by in-mask noise injection.
pub fn sas_transform(
    sample: &Sample,
    cfg: &SasConfig,
    rng: &mut dyn RngCore,
) -> Result<(Sample, SasRecord)> {
    let geometry_seed = rng.next_u64();
    let noise_seed = rng.next_u64();
    sas_transform_seeded(sample, cfg, geometry_seed, noise_seed)
}

/// One batch entry: the (possibly transformed) sample plus what was done.
#[derive(Clone, Debug)]
pub struct AugmentOutcome {
    pub sample: Sample,
    pub applied: Option<SasRecord>,
    /// Seed of this sample's derived stream, for provenance.
    pub stream_seed: u64,
}

/// Augment one sample of a batch. The sample's stream is derived from
/// `(seed, index)`, so outcomes do not depend on evaluation order.
pub fn augment_one(sample: &Sample, cfg: &SasConfig, seed: u64, index: u64) -> Result<AugmentOutcome> {
    cfg.validate()?;
    let mut rng = derive_stream(seed, index);
    let stream_seed = crate::stream::derive_seed(seed, index);
    if sample.size_class == SizeClass::Large && rng.random::<f64>() < cfg.apply_prob {
        let (transformed, record) = sas_transform(sample, cfg, &mut rng)?;
        Ok(AugmentOutcome {
            sample: transformed,
            applied: Some(record),
            stream_seed,
        })
    } else {
        Ok(AugmentOutcome {
            sample: sample.clone(),
            applied: None,
            stream_seed,
        })
    }
}

/// Apply the batch rule to every sample: large-structure samples are
/// transformed with probability `apply_prob`, small ones pass through.
pub fn augment_batch(samples: &[Sample], cfg: &SasConfig) -> Result<Vec<AugmentOutcome>> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| augment_one(s, cfg, cfg.seed, i as u64))
        .collect()
}
