//! Tab-separated corpus manifests and index files.
//!
//! A manifest names the source files: header `id image_path mask_path split`
//! (tab-separated), one entry per row, paths relative to the manifest's
//! directory. The preprocess command writes an index in the same style that
//! downstream commands read back.

use anyhow::{bail, Context, Result};
use sas_core::augment::SizeClass;
use std::collections::HashSet;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => bail!("unknown split '{other}' (expected train, val, or test)"),
        }
    }
}

/// One manifest row with paths resolved against the manifest directory.
#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub id: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
    pub split: Split,
}

fn header_index(header: &str, required: &[&str]) -> Result<Vec<usize>> {
    let cols: Vec<&str> = header.trim_end_matches(['\r', '\n']).split('\t').collect();
    required
        .iter()
        .map(|name| {
            cols.iter()
                .position(|c| c == name)
                .with_context(|| format!("manifest header is missing column '{name}'"))
        })
        .collect()
}

/// Parse a manifest file; ids must be unique.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading manifest {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut lines = text.lines();
    let header = lines.next().context("manifest is empty")?;
    let idx = header_index(header, &["id", "image_path", "mask_path", "split"])?;

    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let field = |i: usize| -> Result<&str> {
            fields
                .get(idx[i])
                .copied()
                .with_context(|| format!("manifest line {} is short", lineno + 2))
        };
        let id = field(0)?.to_string();
        if !seen.insert(id.clone()) {
            bail!("duplicate manifest id '{id}'");
        }
        entries.push(ManifestEntry {
            image_path: base.join(field(1)?),
            mask_path: base.join(field(2)?),
            split: Split::parse(field(3)?)?,
            id,
        });
    }
    Ok(entries)
}

/// One row of a preprocessed-corpus index.
#[derive(Clone, Debug)]
pub struct IndexRow {
    pub id: String,
    pub image: String,
    pub mask: String,
    pub split: String,
    pub orig_width: usize,
    pub orig_height: usize,
    pub mask_fraction: f64,
    pub size_class: SizeClass,
}

pub const INDEX_FILE: &str = "index.tsv";
const INDEX_HEADER: &str =
    "id\timage\tmask\tsplit\torig_width\torig_height\tmask_fraction\tsize_class";

/// Write an index file under `dir`.
pub fn write_index(dir: &Path, rows: &[IndexRow]) -> Result<()> {
    let mut out = String::from(INDEX_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.id,
            r.image,
            r.mask,
            r.split,
            r.orig_width,
            r.orig_height,
            r.mask_fraction,
            r.size_class
        ));
    }
    std::fs::write(dir.join(INDEX_FILE), out)
        .with_context(|| format!("writing index under {}", dir.display()))?;
    Ok(())
}

/// Read an index file from a corpus directory.
pub fn read_index(dir: &Path) -> Result<Vec<IndexRow>> {
    let path = dir.join(INDEX_FILE);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading corpus index {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("index is empty")?;
    let idx = header_index(
        header,
        &[
            "id",
            "image",
            "mask",
            "split",
            "orig_width",
            "orig_height",
            "mask_fraction",
            "size_class",
        ],
    )?;
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let field = |i: usize| -> Result<&str> {
            fields
                .get(idx[i])
                .copied()
                .with_context(|| format!("index line {} is short", lineno + 2))
        };
        rows.push(IndexRow {
            id: field(0)?.to_string(),
            image: field(1)?.to_string(),
            mask: field(2)?.to_string(),
            split: field(3)?.to_string(),
            orig_width: field(4)?.parse().context("orig_width")?,
            orig_height: field(5)?.parse().context("orig_height")?,
            mask_fraction: field(6)?.parse().context("mask_fraction")?,
            size_class: field(7)?
                .parse()
                .map_err(|e| anyhow::anyhow!("size_class: {e}"))?,
        });
    }
    Ok(rows)
}
