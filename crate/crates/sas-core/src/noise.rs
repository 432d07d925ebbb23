//! Noise models for in-mask texture perturbation.
//!
//! Each model is one strategy behind [`NoiseModel`]. The registry exposes the
//! models by name and in a pinned order so that uniform random selection and
//! config-driven selection go through the same table.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage};
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The available noise families, in the pinned selection order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Speckle,
    Gaussian,
    SaltPepper,
    Poisson,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [
        NoiseKind::Speckle,
        NoiseKind::Gaussian,
        NoiseKind::SaltPepper,
        NoiseKind::Poisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Speckle => "speckle",
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::SaltPepper => "salt_pepper",
            NoiseKind::Poisson => "poisson",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown noise kind '{s}'")))
    }
}

/// Noise family selection plus the magnitude of each family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSpec {
    /// Family applied by [`inject_noise`]. Batch augmentation draws the
    /// family uniformly at random instead of using this field.
    pub kind: NoiseKind,
    /// Standard deviation of additive zero-mean Gaussian noise.
    pub gaussian_sigma: f64,
    /// Standard deviation of the multiplicative speckle factor.
    pub speckle_sigma: f64,
    /// Fraction of ROI pixels forced to black or white.
    pub sp_fraction: f64,
    /// Intensity-to-count scale for Poisson resampling.
    pub poisson_scale: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            kind: NoiseKind::Speckle,
            gaussian_sigma: 0.05,
            speckle_sigma: 0.1,
            sp_fraction: 0.02,
            poisson_scale: 255.0,
        }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gaussian_sigma.is_nan() || self.gaussian_sigma < 0.0 {
            return Err(Error::InvalidInput("gaussian_sigma must be >= 0".into()));
        }
        if self.speckle_sigma.is_nan() || self.speckle_sigma < 0.0 {
            return Err(Error::InvalidInput("speckle_sigma must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.sp_fraction) {
            return Err(Error::InvalidInput("sp_fraction must lie in [0, 1]".into()));
        }
        if self.poisson_scale.is_nan() || self.poisson_scale <= 0.0 {
            return Err(Error::InvalidInput("poisson_scale must be > 0".into()));
        }
        Ok(())
    }

    /// Magnitude parameter of the given family.
    pub fn param_for(&self, kind: NoiseKind) -> f64 {
        match kind {
            NoiseKind::Speckle => self.speckle_sigma,
            NoiseKind::Gaussian => self.gaussian_sigma,
            NoiseKind::SaltPepper => self.sp_fraction,
            NoiseKind::Poisson => self.poisson_scale,
        }
    }
}

/// A noise strategy: perturbs `img` inside `roi` and leaves every other
/// pixel bit-identical.
pub trait NoiseModel {
    fn name(&self) -> &'static str;
    fn apply(&self, img: &GrayImage, roi: &BinaryMask, rng: &mut dyn RngCore)
        -> Result<GrayImage>;
}

fn check_roi(img: &GrayImage, roi: &BinaryMask) -> Result<()> {
    if img.width() != roi.width() || img.height() != roi.height() {
        return Err(Error::InvalidInput(format!(
            "image {}x{} and roi {}x{} differ in size",
            img.width(),
            img.height(),
            roi.width(),
            roi.height()
        )));
    }
    Ok(())
}

fn roi_indices(roi: &BinaryMask) -> Vec<usize> {
    roi.data()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| v.then_some(i))
        .collect()
}

/// Additive zero-mean Gaussian noise.
pub struct GaussianNoise {
    pub sigma: f64,
}

impl NoiseModel for GaussianNoise {
    fn name(&self) -> &'static str {
        NoiseKind::Gaussian.name()
    }

    fn apply(
        &self,
        img: &GrayImage,
        roi: &BinaryMask,
        rng: &mut dyn RngCore,
    ) -> Result<GrayImage> {
        check_roi(img, roi)?;
        let normal = Normal::new(0.0, self.sigma)
            .map_err(|e| Error::InvalidInput(format!("gaussian sigma: {e}")))?;
        let mut data = img.data().to_vec();
        for idx in roi_indices(roi) {
            data[idx] = (data[idx] + normal.sample(&mut *rng)).clamp(0.0, 1.0);
        }
        GrayImage::new(img.width(), img.height(), data)
    }
}

/// Multiplicative speckle: `x * (1 + n)` with `n ~ N(0, sigma^2)`.
pub struct SpeckleNoise {
    pub sigma: f64,
}

impl NoiseModel for SpeckleNoise {
    fn name(&self) -> &'static str {
        NoiseKind::Speckle.name()
    }

    fn apply(
        &self,
        img: &GrayImage,
        roi: &BinaryMask,
        rng: &mut dyn RngCore,
    ) -> Result<GrayImage> {
        check_roi(img, roi)?;
        let normal = Normal::new(0.0, self.sigma)
            .map_err(|e| Error::InvalidInput(format!("speckle sigma: {e}")))?;
        let mut data = img.data().to_vec();
        for idx in roi_indices(roi) {
            data[idx] = (data[idx] * (1.0 + normal.sample(&mut *rng))).clamp(0.0, 1.0);
        }
        GrayImage::new(img.width(), img.height(), data)
    }
}

/// Salt-and-pepper: exactly `round(fraction * |roi|)` distinct ROI pixels,
/// chosen without replacement, are set to 0 or 1 with equal probability.
/// Exact-count sampling keeps the number of altered pixels assertable.
pub struct SaltPepperNoise {
    pub fraction: f64,
}

impl NoiseModel for SaltPepperNoise {
    fn name(&self) -> &'static str {
        NoiseKind::SaltPepper.name()
    }

    fn apply(
        &self,
        img: &GrayImage,
        roi: &BinaryMask,
        rng: &mut dyn RngCore,
    ) -> Result<GrayImage> {
        check_roi(img, roi)?;
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::InvalidInput("sp fraction must lie in [0, 1]".into()));
        }
        let mut indices = roi_indices(roi);
        let count = ((self.fraction * indices.len() as f64).round() as usize).min(indices.len());
        // Partial Fisher-Yates: the first `count` entries become the sample.
        for i in 0..count {
            let j = rng.random_range(i..indices.len());
            indices.swap(i, j);
        }
        let mut data = img.data().to_vec();
        for &idx in &indices[..count] {
            data[idx] = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        }
        GrayImage::new(img.width(), img.height(), data)
    }
}

/// Poisson resampling: `x' = Poisson(x * scale) / scale`.
pub struct PoissonNoise {
    pub scale: f64,
}

impl NoiseModel for PoissonNoise {
    fn name(&self) -> &'static str {
        NoiseKind::Poisson.name()
    }

    fn apply(
        &self,
        img: &GrayImage,
        roi: &BinaryMask,
        rng: &mut dyn RngCore,
    ) -> Result<GrayImage> {
        check_roi(img, roi)?;
        if self.scale.is_nan() || self.scale <= 0.0 {
            return Err(Error::InvalidInput("poisson scale must be > 0".into()));
        }
        let mut data = img.data().to_vec();
        for idx in roi_indices(roi) {
            let lambda = data[idx] * self.scale;
            // Poisson(0) is degenerate at zero.
            let counts = if lambda > 0.0 {
                Poisson::new(lambda)
                    .map_err(|e| Error::InvalidInput(format!("poisson lambda: {e}")))?
                    .sample(&mut *rng)
            } else {
                0.0
            };
            data[idx] = (counts / self.scale).clamp(0.0, 1.0);
        }
        GrayImage::new(img.width(), img.height(), data)
    }
}

/// All noise models built from one spec, in the pinned selection order.
pub struct NoiseRegistry {
    models: Vec<Box<dyn NoiseModel>>,
}

impl NoiseRegistry {
    pub fn from_spec(spec: &NoiseSpec) -> Self {
        let models: Vec<Box<dyn NoiseModel>> = vec![
            Box::new(SpeckleNoise {
                sigma: spec.speckle_sigma,
            }),
            Box::new(GaussianNoise {
                sigma: spec.gaussian_sigma,
            }),
            Box::new(SaltPepperNoise {
                fraction: spec.sp_fraction,
            }),
            Box::new(PoissonNoise {
                scale: spec.poisson_scale,
            }),
        ];
        Self { models }
    }

    pub fn by_kind(&self, kind: NoiseKind) -> &dyn NoiseModel {
        let idx = NoiseKind::ALL
            .iter()
            .position(|&k| k == kind)
            .expect("kind is a registry member");
        self.models[idx].as_ref()
    }

    pub fn by_name(&self, name: &str) -> Option<&dyn NoiseModel> {
        self.models
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.models.iter().map(|m| m.name())
    }
}

/// Draw one of the four families uniformly at random.
pub fn draw_noise_kind(rng: &mut dyn RngCore) -> NoiseKind {
    NoiseKind::ALL[rng.random_range(0..NoiseKind::ALL.len())]
}

/// Apply the family selected by `spec.kind` inside `roi`. Only one family is
/// applied per call.
pub fn inject_noise(
    img: &GrayImage,
    roi: &BinaryMask,
    spec: &NoiseSpec,
    rng: &mut dyn RngCore,
) -> Result<GrayImage> {
    spec.validate()?;
    NoiseRegistry::from_spec(spec)
        .by_kind(spec.kind)
        .apply(img, roi, rng)
}
