//! Exact Euclidean distance transform.
//!
//! Two-pass decomposition: each column is first reduced to squared vertical
//! distances to its nearest source row, then each row is swept with the
//! lower-envelope-of-parabolas recurrence. All intermediate squared distances
//! are integers representable exactly in f64, so the result matches an
//! all-pairs brute force bit for bit (up to the final square root).

use super::{BinaryMask, DistanceField};
use crate::error::{Error, Result};

/// Euclidean distance from every pixel to the nearest `true` pixel.
pub fn distance_transform(sources: &BinaryMask) -> Result<DistanceField> {
    let mut sq = distance_transform_squared(sources)?;
    for v in &mut sq {
        *v = v.sqrt();
    }
    Ok(DistanceField::from_parts(
        sources.width(),
        sources.height(),
        sq,
    ))
}

/// Squared-distance variant; used internally where exact integer comparisons
/// matter (disk dilation and erosion).
pub(crate) fn distance_transform_squared(sources: &BinaryMask) -> Result<Vec<f64>> {
    if sources.foreground_area() == 0 {
        return Err(Error::EmptySourceSet);
    }
    let (w, h) = (sources.width(), sources.height());
    // Larger than any attainable squared distance, so empty columns never win.
    let big = ((w * w + h * h) + 1) as f64;

    // Column pass: squared distance to the nearest source row in each column.
    let mut field = vec![big; w * h];
    for x in 0..w {
        let mut nearest: Option<usize> = None;
        for y in 0..h {
            if sources.at(x, y) {
                nearest = Some(y);
            }
            if let Some(sy) = nearest {
                let d = (y - sy) as f64;
                field[y * w + x] = d * d;
            }
        }
        nearest = None;
        for y in (0..h).rev() {
            if sources.at(x, y) {
                nearest = Some(y);
            }
            if let Some(sy) = nearest {
                let d = (sy - y) as f64;
                let sq = d * d;
                if sq < field[y * w + x] {
                    field[y * w + x] = sq;
                }
            }
        }
    }

    // Row pass: lower envelope over parabolas rooted at the column distances.
    let mut row_in = vec![0.0; w];
    let mut row_out = vec![0.0; w];
    let mut hull_x = vec![0usize; w];
    let mut bounds = vec![0.0; w + 1];
    for y in 0..h {
        row_in.copy_from_slice(&field[y * w..(y + 1) * w]);
        envelope_1d(&row_in, &mut row_out, &mut hull_x, &mut bounds);
        field[y * w..(y + 1) * w].copy_from_slice(&row_out);
    }
    Ok(field)
}

/// One-dimensional squared distance transform of a sampled function:
/// `out[q] = min_p ((q - p)^2 + f[p])`.
fn envelope_1d(f: &[f64], out: &mut [f64], hull_x: &mut [usize], bounds: &mut [f64]) {
    let n = f.len();
    if n == 1 {
        out[0] = f[0];
        return;
    }
    let mut k = 0usize;
    hull_x[0] = 0;
    bounds[0] = f64::NEG_INFINITY;
    bounds[1] = f64::INFINITY;
    for q in 1..n {
        let fq = f[q] + (q * q) as f64;
        loop {
            let p = hull_x[k];
            let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= bounds[k] {
                k -= 1;
                continue;
            }
            k += 1;
            hull_x[k] = q;
            bounds[k] = s;
            bounds[k + 1] = f64::INFINITY;
            break;
        }
    }
    let mut k = 0usize;
    for (q, slot) in out.iter_mut().enumerate() {
        while bounds[k + 1] < q as f64 {
            k += 1;
        }
        let p = hull_x[k];
        let d = q as f64 - p as f64;
        *slot = d * d + f[p];
    }
}

/// Depth of each foreground pixel: Euclidean distance to the nearest
/// background pixel, with the image border counting as background.
/// Background pixels get depth 0.
pub fn interior_depth(mask: &BinaryMask) -> DistanceField {
    let sq = interior_depth_squared(mask);
    DistanceField::from_parts(
        mask.width(),
        mask.height(),
        sq.into_iter().map(f64::sqrt).collect(),
    )
}

pub(crate) fn interior_depth_squared(mask: &BinaryMask) -> Vec<f64> {
    let (w, h) = (mask.width(), mask.height());
    if w == 0 || h == 0 {
        return Vec::new();
    }
    // Pad with a one-pixel background ring so the border acts as background.
    let (pw, ph) = (w + 2, h + 2);
    let mut padded = vec![true; pw * ph];
    for y in 0..h {
        for x in 0..w {
            padded[(y + 1) * pw + (x + 1)] = !mask.at(x, y);
        }
    }
    let padded = BinaryMask::new(pw, ph, padded).expect("padded dims are consistent");
    let sq = distance_transform_squared(&padded).expect("ring guarantees sources");
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = sq[(y + 1) * pw + (x + 1)];
        }
    }
    out
}
