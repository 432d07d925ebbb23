//! End-to-end preprocessing: from an 8-bit source image/mask pair to the
//! square normalized network-input pair.
//!
//! Pipeline order is crop (optional) -> longest-edge resize -> min-max
//! normalize -> zero pad. Normalizing before padding keeps the pad value at
//! the normalized minimum, so padding never pollutes the intensity span.

use crate::error::{Error, Result};
use crate::raster::{
    minmax_normalize, pad_mask_to_square, pad_to_square, resize_bilinear, resize_nearest,
    BinaryMask, ByteImage, GrayImage,
};
use serde::{Deserialize, Serialize};

/// Source image and mask as read from disk, before any processing.
#[derive(Clone, Debug)]
pub struct RawPair {
    pub id: String,
    pub image: ByteImage,
    pub mask: ByteImage,
}

impl RawPair {
    pub fn new(id: impl Into<String>, image: ByteImage, mask: ByteImage) -> Result<Self> {
        if image.width() != mask.width() || image.height() != mask.height() {
            return Err(Error::InvalidInput(format!(
                "image {}x{} and mask {}x{} differ in size",
                image.width(),
                image.height(),
                mask.width(),
                mask.height()
            )));
        }
        Ok(Self {
            id: id.into(),
            image,
            mask,
        })
    }
}

/// Preprocessing parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocConfig {
    /// Side of the square network input.
    pub input_side: usize,
    /// Crop to the bounding box of nonzero image content first.
    pub crop_window: bool,
}

impl Default for PreprocConfig {
    fn default() -> Self {
        Self {
            input_side: 256,
            crop_window: false,
        }
    }
}

impl PreprocConfig {
    pub fn validate(&self) -> Result<()> {
        if self.input_side < 16 {
            return Err(Error::InvalidInput(format!(
                "input_side must be at least 16, got {}",
                self.input_side
            )));
        }
        Ok(())
    }
}

/// Crop a pair to the tight bounding box of nonzero image intensities.
/// Stands in for scanner-side window extraction when no source metadata is
/// available.
pub fn crop_us_window(pair: &RawPair) -> Result<RawPair> {
    let img = &pair.image;
    let (w, h) = (img.width(), img.height());
    let mut min_x = w;
    let mut max_x = 0usize;
    let mut min_y = h;
    let mut max_y = 0usize;
    let mut found = false;
    for y in 0..h {
        for x in 0..w {
            if img.at(x, y) != 0 {
                found = true;
                min_x = min_x.min(x);
                max_x = max_x.max(x);
                min_y = min_y.min(y);
                max_y = max_y.max(y);
            }
        }
    }
    if !found {
        return Err(Error::EmptyWindow);
    }
    let cw = max_x - min_x + 1;
    let ch = max_y - min_y + 1;
    let mut img_data = Vec::with_capacity(cw * ch);
    let mut mask_data = Vec::with_capacity(cw * ch);
    for y in min_y..=max_y {
        for x in min_x..=max_x {
            img_data.push(img.at(x, y));
            mask_data.push(pair.mask.at(x, y));
        }
    }
    Ok(RawPair {
        id: pair.id.clone(),
        image: ByteImage::new(cw, ch, img_data)?,
        mask: ByteImage::new(cw, ch, mask_data)?,
    })
}

/// Run the full pipeline on one pair. The mask follows the same geometry as
/// the image, with nearest sampling after nonzero binarization.
pub fn preprocess_pair(raw: &RawPair, cfg: &PreprocConfig) -> Result<(GrayImage, BinaryMask)> {
    cfg.validate()?;
    if raw.image.width() == 0 || raw.image.height() == 0 {
        return Err(Error::InvalidInput("source pair is empty".into()));
    }
    let cropped;
    let working = if cfg.crop_window {
        cropped = crop_us_window(raw)?;
        &cropped
    } else {
        raw
    };

    let image = GrayImage::from_bytes(&working.image);
    let image = resize_bilinear(&image, cfg.input_side)?;
    let image = minmax_normalize(&image);
    let image = pad_to_square(&image, cfg.input_side, 0.0)?;

    let mask = BinaryMask::from_bytes(&working.mask);
    let mask = resize_nearest(&mask, cfg.input_side)?;
    let mask = pad_mask_to_square(&mask, cfg.input_side)?;

    Ok((image, mask))
}
