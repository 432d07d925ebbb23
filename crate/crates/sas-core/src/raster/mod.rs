//! Raster primitives: the image and mask containers plus the exact geometric
//! operations (resampling, distance transform, morphology, labeling) that the
//! rest of the toolkit builds on.
//!
//! All operations are pure functions of their inputs; the containers are
//! immutable after construction unless explicitly mutated through `set`.

mod components;
mod distance;
mod morph;
mod resize;

pub use components::{connected_components, ComponentLabels};
pub use distance::{distance_transform, interior_depth};
pub use morph::{boundary_pixels, dilate_disk, erode_disk};
pub use resize::{resize_bilinear, resize_nearest, resized_dims};

use crate::error::{Error, Result};

/// Pixel connectivity for neighborhood operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (0, -1),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (0, 1),
                (1, 1),
            ],
        }
    }
}

fn check_len(kind: &str, width: usize, height: usize, len: usize) -> Result<()> {
    if len != width * height {
        return Err(Error::InvalidInput(format!(
            "{kind} buffer length {len} does not match {width}x{height}"
        )));
    }
    Ok(())
}

/// Grayscale image with row-major intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Build an image, validating the buffer length and the `[0, 1]` range.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_len("image", width, height, data.len())?;
        if data.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput(
                "image intensities must lie in [0, 1]".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Constant-valued image.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Map 8-bit intensities into `[0, 1]` by dividing by 255.
    pub fn from_bytes(bytes: &ByteImage) -> Self {
        let data = bytes.data().iter().map(|&v| f64::from(v) / 255.0).collect();
        Self {
            width: bytes.width(),
            height: bytes.height(),
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Quantize back to 8 bits (rounding), for PNG export.
    pub fn to_bytes(&self) -> ByteImage {
        let data = self
            .data
            .iter()
            .map(|v| (v * 255.0).round() as u8)
            .collect();
        ByteImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// 8-bit grayscale grid as read from source files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ByteImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ByteImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_len("byte image", width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Binary mask with row-major booleans; `true` is foreground.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_len("mask", width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Binarize an 8-bit grid: any nonzero value is foreground.
    pub fn from_bytes(bytes: &ByteImage) -> Self {
        Self {
            width: bytes.width(),
            height: bytes.height(),
            data: bytes.data().iter().map(|&v| v != 0).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    /// Number of foreground pixels.
    pub fn foreground_area(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn same_dims(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Non-negative Euclidean pixel distances, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl DistanceField {
    /// Build a field from raw distances, validating length and sign.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_len("distance field", width, height, data.len())?;
        if data.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "distances must be non-negative".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Rescale intensities so the minimum maps to 0 and the maximum to 1.
///
/// A constant input maps to all zeros; this is a convention, not an error.
pub fn minmax_normalize(img: &GrayImage) -> GrayImage {
    minmax_normalize_raw(img.width(), img.height(), img.data())
        .expect("dimensions already validated")
}

/// Min-max normalize arbitrary raw intensities into a `[0, 1]` image.
pub fn minmax_normalize_raw(width: usize, height: usize, raw: &[f64]) -> Result<GrayImage> {
    check_len("image", width, height, raw.len())?;
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "intensities must be finite for normalization".into(),
        ));
    }
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let data = if raw.is_empty() || max == min {
        vec![0.0; raw.len()]
    } else {
        let span = max - min;
        raw.iter().map(|v| ((v - min) / span).clamp(0.0, 1.0)).collect()
    };
    Ok(GrayImage {
        width,
        height,
        data,
    })
}

/// Pad an image to `side`x`side`; content stays at the top-left corner.
pub fn pad_to_square(img: &GrayImage, side: usize, fill: f64) -> Result<GrayImage> {
    if img.width() > side || img.height() > side {
        return Err(Error::InvalidInput(format!(
            "image {}x{} does not fit in a {side}x{side} square",
            img.width(),
            img.height()
        )));
    }
    if !(0.0..=1.0).contains(&fill) {
        return Err(Error::InvalidInput("pad fill must lie in [0, 1]".into()));
    }
    let mut data = vec![fill; side * side];
    for y in 0..img.height() {
        let src = &img.data()[y * img.width()..(y + 1) * img.width()];
        data[y * side..y * side + img.width()].copy_from_slice(src);
    }
    Ok(GrayImage {
        width: side,
        height: side,
        data,
    })
}

/// Mask counterpart of [`pad_to_square`]; padding is background.
pub fn pad_mask_to_square(mask: &BinaryMask, side: usize) -> Result<BinaryMask> {
    if mask.width() > side || mask.height() > side {
        return Err(Error::InvalidInput(format!(
            "mask {}x{} does not fit in a {side}x{side} square",
            mask.width(),
            mask.height()
        )));
    }
    let mut data = vec![false; side * side];
    for y in 0..mask.height() {
        let src = &mask.data()[y * mask.width()..(y + 1) * mask.width()];
        data[y * side..y * side + mask.width()].copy_from_slice(src);
    }
    Ok(BinaryMask {
        width: side,
        height: side,
        data,
    })
}
