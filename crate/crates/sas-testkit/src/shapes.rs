//! Synthetic mask generators for randomized suites.

use crate::draw_range;
use rand::{Rng, RngCore};
use sas_core::raster::BinaryMask;

/// Disk of the given radius; pixels at distance exactly `radius` belong to
/// the disk.
pub fn disk_mask(width: usize, height: usize, cx: usize, cy: usize, radius: f64) -> BinaryMask {
    let mut mask = BinaryMask::filled(width, height, false);
    let limit = radius * radius;
    for y in 0..height {
        for x in 0..width {
            let dx = x as f64 - cx as f64;
            let dy = y as f64 - cy as f64;
            if dx * dx + dy * dy <= limit {
                mask.set(x, y, true);
            }
        }
    }
    mask
}

/// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y).
pub fn ellipse_mask(
    width: usize,
    height: usize,
    cx: usize,
    cy: usize,
    a: f64,
    b: f64,
) -> BinaryMask {
    let mut mask = BinaryMask::filled(width, height, false);
    for y in 0..height {
        for x in 0..width {
            let dx = (x as f64 - cx as f64) / a;
            let dy = (y as f64 - cy as f64) / b;
            if dx * dx + dy * dy <= 1.0 {
                mask.set(x, y, true);
            }
        }
    }
    mask
}

/// Independent per-pixel Bernoulli mask.
pub fn random_mask(width: usize, height: usize, density: f64, rng: &mut dyn RngCore) -> BinaryMask {
    let data = (0..width * height)
        .map(|_| rng.random::<f64>() < density)
        .collect();
    BinaryMask::new(width, height, data).expect("generated length is exact")
}

/// Union of a few random rectangles and disks plus pixel noise; produces
/// masks with islands, holes, and border contact.
pub fn random_blob_mask(width: usize, height: usize, rng: &mut dyn RngCore) -> BinaryMask {
    let mut mask = BinaryMask::filled(width, height, false);
    let rects = draw_range(rng, 1, 3);
    for _ in 0..rects {
        let x0 = draw_range(rng, 0, width - 1);
        let y0 = draw_range(rng, 0, height - 1);
        let x1 = draw_range(rng, x0, width - 1);
        let y1 = draw_range(rng, y0, height - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                mask.set(x, y, true);
            }
        }
    }
    let disks = draw_range(rng, 0, 2);
    for _ in 0..disks {
        let cx = draw_range(rng, 0, width - 1);
        let cy = draw_range(rng, 0, height - 1);
        let r = draw_range(rng, 1, (width.max(height) / 3).max(1)) as f64;
        let limit = r * r;
        for y in 0..height {
            for x in 0..width {
                let dx = x as f64 - cx as f64;
                let dy = y as f64 - cy as f64;
                if dx * dx + dy * dy <= limit {
                    mask.set(x, y, true);
                }
            }
        }
    }
    // Sprinkle flips for holes and islands.
    let flips = (width * height) / 10;
    for _ in 0..flips {
        let x = draw_range(rng, 0, width - 1);
        let y = draw_range(rng, 0, height - 1);
        let v = mask.at(x, y);
        mask.set(x, y, !v);
    }
    mask
}
