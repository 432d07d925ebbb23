//! Deterministic, seedable toolkit for ultrasound segmentation experiments:
//! scale-and-noise augmentation, iterative click-prompt simulation, corpus
//! preprocessing, and DSC/NSD evaluation with bootstrap confidence intervals.
//!
//! Everything is a pure function of its inputs and, where randomness is
//! involved, of an explicit seed; batch operations derive one stream per
//! sample so outputs never depend on scheduling.

pub mod augment;
pub mod clicks;
pub mod error;
pub mod metrics;
pub mod noise;
pub mod png;
pub mod preprocess;
pub mod raster;
pub mod stream;

pub use error::{Error, Result};
