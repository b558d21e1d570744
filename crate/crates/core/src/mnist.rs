//! Joint observations built from MNIST digits.
//!
//! An image yields the pair `(x, y)` where `x` holds its 28 row sums and `y`
//! its 28 column sums. Drawing images of one class, optionally rotated,
//! gives a paired sample whose two coordinates are clearly dependent.
//!
//! File parsing lives in the `jdd` crate; everything here is pure.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sample::{PairedSample, Vector};

pub const SIDE: usize = 28;
pub const PIXELS: usize = SIDE * SIDE;
/// Rotation center in pixel coordinates, `(SIDE - 1) / 2` on both axes.
pub const CENTER: f64 = 13.5;

/// A 28×28 grayscale image, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Raster([u8; PIXELS]);

impl core::fmt::Debug for Raster {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Raster")
            .field("intensity", &self.total_intensity())
            .finish()
    }
}

impl Default for Raster {
    fn default() -> Self {
        Self([0; PIXELS])
    }
}

impl Raster {
    pub fn from_pixels(pixels: &[u8]) -> Result<Self> {
        let arr: [u8; PIXELS] = pixels.try_into().map_err(|_| Error::RasterSize {
            expected: PIXELS,
            actual: pixels.len(),
        })?;
        Ok(Self(arr))
    }

    pub fn pixels(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.0[row * SIDE + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.0[row * SIDE + col] = value;
    }

    pub fn total_intensity(&self) -> u32 {
        self.0.iter().map(|&p| u32::from(p)).sum()
    }
}

/// Images with their digit labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSet {
    images: Vec<Raster>,
    labels: Vec<u8>,
}

impl ImageSet {
    pub fn new(images: Vec<Raster>, labels: Vec<u8>) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::CountMismatch {
                images: images.len(),
                labels: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 9) {
            return Err(Error::InvalidLabel(bad));
        }
        Ok(Self { images, labels })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[Raster] {
        &self.images
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Positions of all images labelled `digit`, in file order.
    pub fn class_indices(&self, digit: u8) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == digit)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Per-row sums (`x`) and per-column sums (`y`) of the raw pixel values.
pub fn projection_counts(image: &Raster) -> ([u32; SIDE], [u32; SIDE]) {
    let mut rows = [0u32; SIDE];
    let mut cols = [0u32; SIDE];
    for (r, row) in image.0.chunks_exact(SIDE).enumerate() {
        for (c, &p) in row.iter().enumerate() {
            rows[r] += u32::from(p);
            cols[c] += u32::from(p);
        }
    }
    (rows, cols)
}

/// An observation pair: `x` from row sums, `y` from column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub x: Vector,
    pub y: Vector,
}

/// Projection histograms of `image`.
///
/// With `normalize`, each histogram is divided by the total intensity and
/// sums to one. Without it, pixels are rescaled to `[0, 1]` (divided by
/// 255) before summing.
pub fn project(image: &Raster, normalize: bool) -> Result<ProjectionPair> {
    let (rows, cols) = projection_counts(image);
    let scale = if normalize {
        let total = image.total_intensity();
        if total == 0 {
            return Err(Error::BlankImage);
        }
        f64::from(total)
    } else {
        255.0
    };
    let to_vec = |h: [u32; SIDE]| Vector::new(h.iter().map(|&v| f64::from(v) / scale).collect());
    Ok(ProjectionPair {
        x: to_vec(rows)?,
        y: to_vec(cols)?,
    })
}

/// Exact `(sin, cos)` for quarter turns, `libm` otherwise.
fn sin_cos_degrees(degrees: f64) -> (f64, f64) {
    match degrees {
        0.0 => (0.0, 1.0),
        90.0 => (1.0, 0.0),
        180.0 => (0.0, -1.0),
        270.0 => (-1.0, 0.0),
        d => libm::sincos(d.to_radians()),
    }
}

/// Rotates `image` by `rho_degrees` about [`CENTER`].
///
/// Positive angles turn the content clockwise as displayed (rows grow
/// downward). Each output pixel is sampled from the inverse-rotated source
/// position with bilinear interpolation; source pixels outside the frame
/// count as 0. Results are rounded and clamped to `[0, 255]`.
///
/// # Panics
///
/// If `rho_degrees` is not finite.
pub fn rotate(image: &Raster, rho_degrees: f64) -> Raster {
    assert!(rho_degrees.is_finite(), "rotation angle must be finite");
    let mut angle = libm::fmod(rho_degrees, 360.0);
    if angle < 0.0 {
        angle += 360.0;
    }
    if angle == 0.0 {
        return image.clone();
    }
    let (sin, cos) = sin_cos_degrees(angle);
    let fetch = |r: isize, c: isize| -> f64 {
        if (0..SIDE as isize).contains(&r) && (0..SIDE as isize).contains(&c) {
            f64::from(image.0[r as usize * SIDE + c as usize])
        } else {
            0.0
        }
    };
    let mut out = Raster::default();
    for r in 0..SIDE {
        let dy = r as f64 - CENTER;
        for c in 0..SIDE {
            let dx = c as f64 - CENTER;
            let sx = cos * dx + sin * dy + CENTER;
            let sy = -sin * dx + cos * dy + CENTER;
            let (x0, y0) = (libm::floor(sx), libm::floor(sy));
            let (fx, fy) = (sx - x0, sy - y0);
            let (x0, y0) = (x0 as isize, y0 as isize);
            let value = fetch(y0, x0) * (1.0 - fx) * (1.0 - fy)
                + fetch(y0, x0 + 1) * fx * (1.0 - fy)
                + fetch(y0 + 1, x0) * (1.0 - fx) * fy
                + fetch(y0 + 1, x0 + 1) * fx * fy;
            out.0[r * SIDE + c] = libm::round(value).clamp(0.0, 255.0) as u8;
        }
    }
    out
}

/// Draws `m` images of class `digit` uniformly with replacement, rotates
/// each by `rho` degrees and returns their projection pairs.
///
/// Deterministic in `seed`: the draws come from ChaCha8 stream 0 of `seed`.
pub fn sample_class(
    set: &ImageSet,
    digit: u8,
    m: usize,
    rho: f64,
    seed: u64,
    normalize: bool,
) -> Result<PairedSample> {
    if digit > 9 {
        return Err(Error::InvalidLabel(digit));
    }
    if m == 0 {
        return Err(Error::ZeroSampleSize);
    }
    let pool = set.class_indices(digit);
    if pool.is_empty() {
        return Err(Error::MissingClass(digit));
    }
    let mut rng = substream(seed, 0);
    let chosen: Vec<usize> = (0..m)
        .map(|_| pool[rng.random_range(0..pool.len())])
        .collect();
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for i in chosen {
        let pair = project(&rotate(&set.images[i], rho), normalize)?;
        xs.push(pair.x);
        ys.push(pair.y);
    }
    PairedSample::new(xs, ys)
}
