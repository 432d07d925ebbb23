//! Boundary extraction and Euclidean disk morphology.

use super::distance::{distance_transform_squared, interior_depth_squared};
use super::{BinaryMask, Connectivity};
use crate::error::{Error, Result};

/// Foreground pixels with at least one background neighbor under `conn`.
/// Out-of-bounds neighbors count as background, so pixels on the image
/// border are boundary.
pub fn boundary_pixels(mask: &BinaryMask, conn: Connectivity) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut out = BinaryMask::filled(w, h, false);
    for y in 0..h {
        for x in 0..w {
            if !mask.at(x, y) {
                continue;
            }
            let touches_background = conn.offsets().iter().any(|&(dx, dy)| {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    true
                } else {
                    !mask.at(nx as usize, ny as usize)
                }
            });
            if touches_background {
                out.set(x, y, true);
            }
        }
    }
    out
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidInput(format!(
            "disk radius must be non-negative, got {radius}"
        )));
    }
    Ok(())
}

/// All pixels within Euclidean distance `radius` of the set. An empty set
/// dilates to an empty set.
pub fn dilate_disk(set: &BinaryMask, radius: f64) -> Result<BinaryMask> {
    check_radius(radius)?;
    if set.foreground_area() == 0 {
        return Ok(BinaryMask::filled(set.width(), set.height(), false));
    }
    let sq = distance_transform_squared(set)?;
    let limit = radius * radius;
    let data = sq.into_iter().map(|d| d <= limit).collect();
    BinaryMask::new(set.width(), set.height(), data)
}

/// Pixels of the set strictly deeper than `radius` (disk erosion). The image
/// border erodes like background.
pub fn erode_disk(set: &BinaryMask, radius: f64) -> Result<BinaryMask> {
    check_radius(radius)?;
    if set.foreground_area() == 0 {
        return Ok(BinaryMask::filled(set.width(), set.height(), false));
    }
    let sq = interior_depth_squared(set);
    let limit = radius * radius;
    let data = sq.into_iter().map(|d| d > limit).collect();
    BinaryMask::new(set.width(), set.height(), data)
}
