//! The IDX binary format used by the MNIST distribution.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! images: u32 magic 0x00000803 | u32 count | u32 rows | u32 cols | count*rows*cols u8
//! labels: u32 magic 0x00000801 | u32 count | count u8
//! ```

use std::fs;
use std::path::Path;

use jdd_core::mnist::{ImageSet, Raster, PIXELS, SIDE};

use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

fn be_u32(bytes: &[u8], at: usize) -> Option<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes(b.try_into().unwrap()))
}

fn header(bytes: &[u8], words: usize, magic: u32, path: &Path) -> Result<Vec<u32>> {
    if let Some(found) = be_u32(bytes, 0).filter(|&f| f != magic) {
        return Err(Error::format(
            path,
            format!("bad magic number: expected {magic:#010x}, got {found:#010x}"),
        ));
    }
    if bytes.len() < 4 * words {
        return Err(Error::format(
            path,
            format!(
                "truncated header: expected {} bytes, got {}",
                4 * words,
                bytes.len()
            ),
        ));
    }
    Ok((0..words).map(|i| be_u32(bytes, 4 * i).unwrap()).collect())
}

fn check_payload(bytes: &[u8], offset: usize, expected: usize, path: &Path) -> Result<()> {
    let actual = bytes.len() - offset;
    if actual != expected {
        let what = if actual < expected {
            "truncated"
        } else {
            "oversized"
        };
        return Err(Error::format(
            path,
            format!("{what} payload: expected {expected} bytes, got {actual}"),
        ));
    }
    Ok(())
}

/// Parses an IDX image file of 28×28 rasters. `path` only labels errors.
pub fn parse_images(bytes: &[u8], path: &Path) -> Result<Vec<Raster>> {
    let h = header(bytes, 4, IMAGES_MAGIC, path)?;
    let (count, rows, cols) = (h[1] as usize, h[2] as usize, h[3] as usize);
    if (rows, cols) != (SIDE, SIDE) {
        return Err(Error::format(
            path,
            format!("expected {SIDE}x{SIDE} images, got {rows}x{cols}"),
        ));
    }
    check_payload(bytes, 16, count * PIXELS, path)?;
    bytes[16..]
        .chunks_exact(PIXELS)
        .map(|px| Raster::from_pixels(px).map_err(Error::from))
        .collect()
}

pub fn parse_labels(bytes: &[u8], path: &Path) -> Result<Vec<u8>> {
    let h = header(bytes, 2, LABELS_MAGIC, path)?;
    check_payload(bytes, 8, h[1] as usize, path)?;
    Ok(bytes[8..].to_vec())
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Loads an image file and its label file, cross-checking the counts.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<ImageSet> {
    let images = parse_images(&read(images_path)?, images_path)?;
    let labels = parse_labels(&read(labels_path)?, labels_path)?;
    if images.len() != labels.len() {
        return Err(Error::Format {
            path: labels_path.into(),
            message: format!(
                "inconsistent with {}: {} images but {} labels",
                images_path.display(),
                images.len(),
                labels.len()
            ),
        });
    }
    Ok(ImageSet::new(images, labels)?)
}

pub fn encode_images(images: &[Raster]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.len() * PIXELS);
    for word in [IMAGES_MAGIC, images.len() as u32, SIDE as u32, SIDE as u32] {
        out.extend_from_slice(&word.to_be_bytes());
    }
    for img in images {
        out.extend_from_slice(img.pixels());
    }
    out
}

pub fn encode_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Writes `set` as an image file and a label file.
pub fn write_idx(set: &ImageSet, images_path: &Path, labels_path: &Path) -> Result<()> {
    fs::write(images_path, encode_images(set.images())).map_err(|e| Error::io(images_path, e))?;
    fs::write(labels_path, encode_labels(set.labels())).map_err(|e| Error::io(labels_path, e))
}
