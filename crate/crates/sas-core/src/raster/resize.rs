//! Longest-edge resampling with half-pixel-center alignment.
//!
//! Half-pixel centers make a same-size resize bit-identical to its input and
//! keep constant fields exactly constant, which the rest of the pipeline
//! relies on.

use super::{BinaryMask, GrayImage};
use crate::error::{Error, Result};

/// Output dimensions for a longest-edge resize with the aspect ratio
/// preserved to within one pixel of rounding. Ties (square inputs) keep both
/// edges at `target_longest`.
pub fn resized_dims(width: usize, height: usize, target_longest: usize) -> (usize, usize) {
    if width >= height {
        let h = (height as f64 * target_longest as f64 / width as f64)
            .round()
            .max(1.0) as usize;
        (target_longest, h)
    } else {
        let w = (width as f64 * target_longest as f64 / height as f64)
            .round()
            .max(1.0) as usize;
        (w, target_longest)
    }
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Bilinear resize so that the longest edge equals `target_longest`.
pub fn resize_bilinear(img: &GrayImage, target_longest: usize) -> Result<GrayImage> {
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::InvalidInput("cannot resize an empty image".into()));
    }
    if target_longest == 0 {
        return Err(Error::InvalidInput("target size must be at least 1".into()));
    }
    let (ow, oh) = resized_dims(img.width(), img.height(), target_longest);
    let x_ratio = img.width() as f64 / ow as f64;
    let y_ratio = img.height() as f64 / oh as f64;
    let max_x = img.width() as isize - 1;
    let max_y = img.height() as isize - 1;

    let mut data = Vec::with_capacity(ow * oh);
    for yo in 0..oh {
        let sy = (yo as f64 + 0.5) * y_ratio - 0.5;
        let y_floor = sy.floor();
        let fy = sy - y_floor;
        let y0 = (y_floor as isize).clamp(0, max_y) as usize;
        let y1 = (y_floor as isize + 1).clamp(0, max_y) as usize;
        for xo in 0..ow {
            let sx = (xo as f64 + 0.5) * x_ratio - 0.5;
            let x_floor = sx.floor();
            let fx = sx - x_floor;
            let x0 = (x_floor as isize).clamp(0, max_x) as usize;
            let x1 = (x_floor as isize + 1).clamp(0, max_x) as usize;

            let top = lerp(img.at(x0, y0), img.at(x1, y0), fx);
            let bottom = lerp(img.at(x0, y1), img.at(x1, y1), fx);
            data.push(lerp(top, bottom, fy).clamp(0.0, 1.0));
        }
    }
    GrayImage::new(ow, oh, data)
}

/// Nearest resize of a mask so that the longest edge equals `target_longest`.
///
/// Samples the source pixel whose center is nearest to each output pixel
/// center, so no interpolated fractional values ever materialize.
pub fn resize_nearest(mask: &BinaryMask, target_longest: usize) -> Result<BinaryMask> {
    if mask.width() == 0 || mask.height() == 0 {
        return Err(Error::InvalidInput("cannot resize an empty mask".into()));
    }
    if target_longest == 0 {
        return Err(Error::InvalidInput("target size must be at least 1".into()));
    }
    let (ow, oh) = resized_dims(mask.width(), mask.height(), target_longest);
    let x_ratio = mask.width() as f64 / ow as f64;
    let y_ratio = mask.height() as f64 / oh as f64;

    let mut data = Vec::with_capacity(ow * oh);
    for yo in 0..oh {
        let sy = (((yo as f64 + 0.5) * y_ratio).floor() as usize).min(mask.height() - 1);
        for xo in 0..ow {
            let sx = (((xo as f64 + 0.5) * x_ratio).floor() as usize).min(mask.width() - 1);
            data.push(mask.at(sx, sy));
        }
    }
    BinaryMask::new(ow, oh, data)
}
