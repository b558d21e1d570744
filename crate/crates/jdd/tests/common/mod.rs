#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jdd::idx::write_idx;
use jdd::sample_csv::write_sample;
use jdd_core::mnist::{ImageSet, Raster};
use jdd_core::PairedSample;

pub fn jdd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jdd"))
}

pub fn run(args: &[&str]) -> Output {
    jdd().args(args).output().expect("spawn jdd")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data lines of a CSV output (manifest comments dropped).
pub fn data_lines(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn write_csv(dir: &Path, name: &str, sample: &PairedSample) -> PathBuf {
    let path = dir.join(name);
    let mut file = std::fs::File::create(&path).unwrap();
    write_sample(&mut file, sample).unwrap();
    path
}

/// Stroke images: an ellipse with a vertical bar, parameters varied by `i`.
pub fn glyph(i: usize) -> Raster {
    let rx = 5.0 + (i % 4) as f64;
    let ry = 7.0 + (i % 3) as f64;
    let bar = 10 + (i % 7);
    let mut img = Raster::default();
    for r in 0..28 {
        for c in 0..28 {
            let (u, v) = ((c as f64 - 13.5) / rx, (r as f64 - 13.5) / ry);
            let d = (u * u + v * v).sqrt();
            let ring = (1.0 - (d - 1.0).abs() * 4.0).max(0.0);
            let stroke = if c == bar && (5..23).contains(&r) {
                1.0
            } else {
                0.0
            };
            img.set(r, c, (ring.max(stroke) * 255.0).round() as u8);
        }
    }
    img
}

/// Writes a synthetic IDX pair: 60 images of digit 3 and 20 of digit 7.
pub fn synthetic_mnist(dir: &Path) -> (PathBuf, PathBuf) {
    let images: Vec<Raster> = (0..80).map(glyph).collect();
    let labels: Vec<u8> = (0..80).map(|i| if i < 60 { 3 } else { 7 }).collect();
    let set = ImageSet::new(images, labels).unwrap();
    let (img, lab) = (dir.join("images-idx3-ubyte"), dir.join("labels-idx1-ubyte"));
    write_idx(&set, &img, &lab).unwrap();
    (img, lab)
}

/// Local MNIST files, if `MNIST_DIR` points at a directory holding
/// `train-images-idx3-ubyte` and `train-labels-idx1-ubyte`.
pub fn local_mnist() -> Option<(PathBuf, PathBuf)> {
    let dir = PathBuf::from(std::env::var_os("MNIST_DIR")?);
    let images = dir.join("train-images-idx3-ubyte");
    let labels = dir.join("train-labels-idx1-ubyte");
    (images.is_file() && labels.is_file()).then_some((images, labels))
}
