pub mod augment;
pub mod clicks;
pub mod eval;
pub mod preprocess;

use anyhow::{Context, Result};
use std::path::Path;

pub(crate) fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}
