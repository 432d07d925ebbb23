//! Iterative click-prompt simulation.
//!
//! The first click lands uniformly inside the deepest 30% of the reference
//! mask (depth = Euclidean distance to the nearest background pixel, with
//! the image border counting as background). Every later click targets the
//! largest connected component of the prediction error map, at that
//! component's deepest pixel, labeled positive inside the reference mask and
//! negative outside it.

use crate::error::{Error, Result};
use crate::metrics::dsc;
use crate::raster::{
    connected_components, erode_disk, interior_depth, BinaryMask, Connectivity,
};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

/// Click polarity: positive marks foreground to add, negative marks
/// background to remove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClickLabel {
    Positive,
    Negative,
}

/// A labeled point prompt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickPrompt {
    pub x: usize,
    pub y: usize,
    pub label: ClickLabel,
    /// 1-based position within the session.
    pub ordinal: usize,
}

/// One simulated interaction run.
#[derive(Clone, Debug)]
pub struct PromptSession {
    pub rs_mask: BinaryMask,
    pub clicks: Vec<ClickPrompt>,
    /// Prediction after each click; same length as `clicks`.
    pub predictions: Vec<BinaryMask>,
    pub converged: bool,
}

impl PromptSession {
    /// DSC of each prediction against the reference mask.
    pub fn dsc_per_click(&self) -> Result<Vec<f64>> {
        self.predictions
            .iter()
            .map(|p| dsc(p, &self.rs_mask))
            .collect()
    }
}

/// Anything that can produce a mask from the clicks issued so far: the toy
/// model below, an external process, or a real network.
pub trait Predictor {
    fn predict(&mut self, clicks: &[ClickPrompt]) -> Result<BinaryMask>;
}

/// Nearest-rank index cutoff: smallest value with at least 70% of the sorted
/// sample at or below it. Computed in integers to keep the rank exact.
fn top_depth_cutoff(sorted_depths: &[f64]) -> f64 {
    let n = sorted_depths.len();
    let rank = (70 * n).div_ceil(100).max(1);
    sorted_depths[rank - 1]
}

/// First click: drawn uniformly from the foreground pixels whose depth
/// reaches the 70th nearest-rank percentile of all foreground depths.
pub fn initial_click(rs: &BinaryMask, rng: &mut dyn RngCore) -> Result<ClickPrompt> {
    if rs.foreground_area() == 0 {
        return Err(Error::EmptyMask);
    }
    let depth = interior_depth(rs);
    let mut depths: Vec<f64> = Vec::new();
    for y in 0..rs.height() {
        for x in 0..rs.width() {
            if rs.at(x, y) {
                depths.push(depth.at(x, y));
            }
        }
    }
    depths.sort_by(f64::total_cmp);
    let cutoff = top_depth_cutoff(&depths);

    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for y in 0..rs.height() {
        for x in 0..rs.width() {
            if rs.at(x, y) && depth.at(x, y) >= cutoff {
                candidates.push((x, y));
            }
        }
    }
    let (x, y) = candidates[rng.random_range(0..candidates.len())];
    Ok(ClickPrompt {
        x,
        y,
        label: ClickLabel::Positive,
        ordinal: 1,
    })
}

/// Pixelwise XOR of prediction and reference.
pub fn error_map(rs: &BinaryMask, pred: &BinaryMask) -> Result<BinaryMask> {
    if !rs.same_dims(pred) {
        return Err(Error::InvalidInput(format!(
            "reference {}x{} and prediction {}x{} differ in size",
            rs.width(),
            rs.height(),
            pred.width(),
            pred.height()
        )));
    }
    let data = rs
        .data()
        .iter()
        .zip(pred.data())
        .map(|(&a, &b)| a ^ b)
        .collect();
    BinaryMask::new(rs.width(), rs.height(), data)
}

/// Either a corrective click or the signal that prediction and reference
/// already agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NextClick {
    Click(ClickPrompt),
    Converged,
}

/// Corrective click: the deepest pixel of the largest error component
/// (8-connected; all ties resolve to the lowest row-major index).
pub fn next_click(rs: &BinaryMask, pred: &BinaryMask, ordinal: usize) -> Result<NextClick> {
    let err = error_map(rs, pred)?;
    if err.foreground_area() == 0 {
        return Ok(NextClick::Converged);
    }
    let labels = connected_components(&err, Connectivity::Eight);
    let target = labels.largest_label().expect("error map is nonempty");
    let component = labels.component_mask(target);
    let depth = interior_depth(&component);

    let mut best: Option<(f64, usize, usize)> = None;
    for y in 0..component.height() {
        for x in 0..component.width() {
            if !component.at(x, y) {
                continue;
            }
            let d = depth.at(x, y);
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, x, y));
            }
        }
    }
    let (_, x, y) = best.expect("component has pixels");
    let label = if rs.at(x, y) {
        ClickLabel::Positive
    } else {
        ClickLabel::Negative
    };
    Ok(NextClick::Click(ClickPrompt {
        x,
        y,
        label,
        ordinal,
    }))
}

/// Run the interaction loop: initial click, then alternate prediction and
/// corrective clicks until convergence or the click budget is spent. Every
/// intermediate prediction is recorded.
pub fn simulate_session(
    rs: &BinaryMask,
    predictor: &mut dyn Predictor,
    max_clicks: usize,
    rng: &mut dyn RngCore,
) -> Result<PromptSession> {
    if max_clicks < 1 {
        return Err(Error::InvalidInput("max_clicks must be at least 1".into()));
    }
    let mut clicks = vec![initial_click(rs, rng)?];
    let mut predictions: Vec<BinaryMask> = Vec::new();
    let mut converged = false;
    loop {
        let pred = predictor.predict(&clicks)?;
        if !pred.same_dims(rs) {
            return Err(Error::PredictorContractViolation(format!(
                "prediction {}x{} does not match reference {}x{}",
                pred.width(),
                pred.height(),
                rs.width(),
                rs.height()
            )));
        }
        predictions.push(pred);
        let last = predictions.last().expect("just pushed");
        if error_map(rs, last)?.foreground_area() == 0 {
            converged = true;
            break;
        }
        if clicks.len() >= max_clicks {
            break;
        }
        match next_click(rs, last, clicks.len() + 1)? {
            NextClick::Converged => {
                converged = true;
                break;
            }
            NextClick::Click(c) => clicks.push(c),
        }
    }
    Ok(PromptSession {
        rs_mask: rs.clone(),
        clicks,
        predictions,
        converged,
    })
}

/// Erosion radius of the toy predictor's starting mask.
pub const MOCK_ERODE_RADIUS: f64 = 3.0;
/// Disk radius of each click's effect in the toy predictor.
pub const MOCK_CLICK_RADIUS: f64 = 5.0;

fn click_disk(width: usize, height: usize, cx: usize, cy: usize, radius: f64) -> BinaryMask {
    let mut disk = BinaryMask::filled(width, height, false);
    let limit = radius * radius;
    for y in 0..height {
        for x in 0..width {
            let dx = x as f64 - cx as f64;
            let dy = y as f64 - cy as f64;
            if dx * dx + dy * dy <= limit {
                disk.set(x, y, true);
            }
        }
    }
    disk
}

/// Deterministic morphological stand-in for a real model: starts from the
/// eroded reference, positive clicks restore the reference within a disk,
/// negative clicks carve a disk out.
pub fn mock_predictor(rs: &BinaryMask, clicks: &[ClickPrompt]) -> BinaryMask {
    let mut pred = erode_disk(rs, MOCK_ERODE_RADIUS).expect("radius is non-negative");
    for click in clicks {
        let disk = click_disk(rs.width(), rs.height(), click.x, click.y, MOCK_CLICK_RADIUS);
        for y in 0..rs.height() {
            for x in 0..rs.width() {
                if !disk.at(x, y) {
                    continue;
                }
                match click.label {
                    ClickLabel::Positive => {
                        if rs.at(x, y) {
                            pred.set(x, y, true);
                        }
                    }
                    ClickLabel::Negative => pred.set(x, y, false),
                }
            }
        }
    }
    pred
}

/// [`Predictor`] wrapper around [`mock_predictor`].
pub struct MockPredictor {
    rs: BinaryMask,
}

impl MockPredictor {
    pub fn new(rs: BinaryMask) -> Self {
        Self { rs }
    }
}

impl Predictor for MockPredictor {
    fn predict(&mut self, clicks: &[ClickPrompt]) -> Result<BinaryMask> {
        Ok(mock_predictor(&self.rs, clicks))
    }
}

/// Predictor that always returns a fixed mask; handy in tests.
pub struct ConstantPredictor(pub BinaryMask);

impl Predictor for ConstantPredictor {
    fn predict(&mut self, _clicks: &[ClickPrompt]) -> Result<BinaryMask> {
        Ok(self.0.clone())
    }
}
