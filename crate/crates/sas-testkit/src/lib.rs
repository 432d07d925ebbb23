//! Brute-force oracles and statistical validators for the test suites.
//!
//! Everything here is deliberately slow and obviously correct: all-pairs
//! scans and literal formula evaluation, sharing no algorithmic code with
//! the production implementations it checks. Keep it that way.

use rand::{Rng, RngCore};
use sas_core::error::{Error, Result};
use sas_core::raster::{BinaryMask, Connectivity, DistanceField};
use statrs::distribution::{ChiSquared, ContinuousCDF};

mod shapes;

pub use shapes::{disk_mask, ellipse_mask, random_blob_mask, random_mask};

/// All-pairs minimum Euclidean distance; O(N^2) in the pixel count.
pub fn brute_force_distance_transform(sources: &BinaryMask) -> Result<DistanceField> {
    let (w, h) = (sources.width(), sources.height());
    let mut source_pixels = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if sources.at(x, y) {
                source_pixels.push((x as f64, y as f64));
            }
        }
    }
    if source_pixels.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut best = f64::INFINITY;
            for &(sx, sy) in &source_pixels {
                let dx = x as f64 - sx;
                let dy = y as f64 - sy;
                let sq = dx * dx + dy * dy;
                if sq < best {
                    best = sq;
                }
            }
            data.push(best.sqrt());
        }
    }
    DistanceField::new(w, h, data)
}

/// Boundary by literal neighbor scan: foreground with a 4-neighbor that is
/// background or out of bounds.
fn scan_boundary(mask: &BinaryMask) -> Vec<(i64, i64)> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.at(x as usize, y as usize) {
                continue;
            }
            let mut edge = false;
            for (dx, dy) in [(0i64, -1i64), (-1, 0), (1, 0), (0, 1)] {
                let (nx, ny) = (x + dx, y + dy);
                let outside = nx < 0 || ny < 0 || nx >= w || ny >= h;
                if outside || !mask.at(nx as usize, ny as usize) {
                    edge = true;
                }
            }
            if edge {
                out.push((x, y));
            }
        }
    }
    out
}

/// Literal evaluation of the normalized surface distance: boundaries by
/// neighbor scan, border membership by explicit pairwise distance checks.
pub fn brute_force_nsd(pred: &BinaryMask, rs: &BinaryMask, tau: f64) -> Result<f64> {
    if pred.width() != rs.width() || pred.height() != rs.height() {
        return Err(Error::InvalidInput("mask sizes differ".into()));
    }
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
    let surface_p = scan_boundary(pred);
    let surface_r = scan_boundary(rs);
    let limit = tau * tau;
    let within = |p: (i64, i64), surface: &[(i64, i64)]| {
        surface.iter().any(|&(sx, sy)| {
            let dx = (p.0 - sx) as f64;
            let dy = (p.1 - sy) as f64;
            dx * dx + dy * dy <= limit
        })
    };
    let matched_p = surface_p.iter().filter(|&&p| within(p, &surface_r)).count();
    let matched_r = surface_r.iter().filter(|&&p| within(p, &surface_p)).count();
    Ok((matched_p + matched_r) as f64 / (surface_p.len() + surface_r.len()) as f64)
}

/// Depth of each pixel by explicit scan: distance to the nearest background
/// pixel or to the border ring, zero on background. Row-major.
pub fn brute_force_interior_depth(mask: &BinaryMask) -> Vec<f64> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut background = Vec::new();
    for y in -1..=h {
        for x in -1..=w {
            let outside = x < 0 || y < 0 || x >= w || y >= h;
            if outside || !mask.at(x as usize, y as usize) {
                background.push((x, y));
            }
        }
    }
    let mut out = Vec::with_capacity((w * h) as usize);
    for y in 0..h {
        for x in 0..w {
            if !mask.at(x as usize, y as usize) {
                out.push(0.0);
                continue;
            }
            let mut best = f64::INFINITY;
            for &(bx, by) in &background {
                let dx = (x - bx) as f64;
                let dy = (y - by) as f64;
                let sq = dx * dx + dy * dy;
                if sq < best {
                    best = sq;
                }
            }
            out.push(best.sqrt());
        }
    }
    out
}

/// Candidate set for the initial click, recomputed from scratch: foreground
/// pixels whose depth reaches the 70th nearest-rank percentile.
pub fn brute_force_initial_candidates(rs: &BinaryMask) -> Vec<(usize, usize)> {
    let depth = brute_force_interior_depth(rs);
    let w = rs.width();
    let mut fg_depths: Vec<f64> = Vec::new();
    for (i, &d) in depth.iter().enumerate() {
        if rs.at(i % w, i / w) {
            fg_depths.push(d);
        }
    }
    if fg_depths.is_empty() {
        return Vec::new();
    }
    fg_depths.sort_by(f64::total_cmp);
    let rank = (70 * fg_depths.len()).div_ceil(100).max(1);
    let cutoff = fg_depths[rank - 1];
    let mut out = Vec::new();
    for (i, &d) in depth.iter().enumerate() {
        let (x, y) = (i % w, i / w);
        if rs.at(x, y) && d >= cutoff {
            out.push((x, y));
        }
    }
    out
}

/// Component count by recursive flood fill over a visited grid.
pub fn flood_fill_component_count(mask: &BinaryMask, conn: Connectivity) -> usize {
    let (w, h) = (mask.width(), mask.height());
    let mut visited = vec![false; w * h];
    let offsets: &[(i64, i64)] = match conn {
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
    };
    let mut count = 0;
    for y in 0..h {
        for x in 0..w {
            if !mask.at(x, y) || visited[y * w + x] {
                continue;
            }
            count += 1;
            let mut stack = vec![(x, y)];
            visited[y * w + x] = true;
            while let Some((cx, cy)) = stack.pop() {
                for &(dx, dy) in offsets {
                    let nx = cx as i64 + dx;
                    let ny = cy as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if mask.at(nx, ny) && !visited[ny * w + nx] {
                        visited[ny * w + nx] = true;
                        stack.push((nx, ny));
                    }
                }
            }
        }
    }
    count
}

/// Outcome of a goodness-of-fit check.
#[derive(Clone, Copy, Debug)]
pub struct UniformityCheck {
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

/// Pearson chi-square test of uniformity over category counts, at
/// significance `alpha`.
pub fn chi_square_uniformity(counts: &[u64], alpha: f64) -> Result<UniformityCheck> {
    if counts.len() < 2 {
        return Err(Error::InvalidInput(
            "uniformity needs at least two categories".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput("alpha must lie in (0, 1)".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("no observations".into()));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let critical = dist.inverse_cdf(1.0 - alpha);
    Ok(UniformityCheck {
        statistic,
        critical,
        pass: statistic <= critical,
    })
}

/// Summary of an oracle-vs-production sweep.
#[derive(Clone, Debug)]
pub struct OracleReport {
    tolerance: f64,
    case_count: usize,
    max_abs_error: f64,
    failures: Vec<String>,
}

impl OracleReport {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            case_count: 0,
            max_abs_error: 0.0,
            failures: Vec::new(),
        }
    }

    /// Record one case's absolute error.
    pub fn record(&mut self, case_id: impl Into<String>, abs_error: f64) {
        self.case_count += 1;
        if abs_error > self.max_abs_error {
            self.max_abs_error = abs_error;
        }
        if abs_error.is_nan() || abs_error > self.tolerance {
            self.failures.push(case_id.into());
        }
    }

    pub fn case_count(&self) -> usize {
        self.case_count
    }

    pub fn max_abs_error(&self) -> f64 {
        self.max_abs_error
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Uniform random draw helper used by the generators.
pub(crate) fn draw_range(rng: &mut dyn RngCore, lo: usize, hi_inclusive: usize) -> usize {
    rng.random_range(lo..=hi_inclusive)
}
