//! 8-bit grayscale PNG ingestion and emission.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, ByteImage, GrayImage};
use std::path::Path;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Load any PNG as an 8-bit grayscale grid.
pub fn load_byte_image(path: &Path) -> Result<ByteImage> {
    let img = image::open(path).map_err(|e| io_err(path, e))?.into_luma8();
    let (w, h) = img.dimensions();
    ByteImage::new(w as usize, h as usize, img.into_raw())
}

/// Load a mask PNG; any nonzero pixel is foreground.
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    Ok(BinaryMask::from_bytes(&load_byte_image(path)?))
}

fn save_bytes(width: usize, height: usize, data: Vec<u8>, path: &Path) -> Result<()> {
    let buf: image::GrayImage =
        image::ImageBuffer::from_raw(width as u32, height as u32, data)
            .ok_or_else(|| Error::Io(format!("{}: buffer size mismatch", path.display())))?;
    buf.save(path).map_err(|e| io_err(path, e))
}

/// Write a `[0,1]` image as 8-bit PNG (rounded).
pub fn save_gray_image(img: &GrayImage, path: &Path) -> Result<()> {
    let bytes = img.to_bytes();
    save_bytes(bytes.width(), bytes.height(), bytes.data().to_vec(), path)
}

/// Write a mask as a 0/255 PNG.
pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    let data = mask.data().iter().map(|&v| if v { 255 } else { 0 }).collect();
    save_bytes(mask.width(), mask.height(), data, path)
}
