#![allow(dead_code)]

use std::path::PathBuf;

use fourier_llf::image::{read_pnm, AnyImage};
use fourier_llf::Image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRAY_CORPUS: [&str; 6] = ["camera", "moon", "brick", "grass", "gravel", "coins"];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load_gray(name: &str) -> Image {
    let bytes = std::fs::read(data_path(&format!("{name}.pgm"))).unwrap();
    match read_pnm(&bytes).unwrap() {
        AnyImage::Gray(img) => img,
        AnyImage::Color(_) => panic!("{name} is not grayscale"),
    }
}

/// Center crops of the grayscale corpus.
pub fn corpus(size: usize) -> Vec<(&'static str, Image)> {
    GRAY_CORPUS.iter().map(|&n| (n, load_gray(n).center_crop(size))).collect()
}

pub fn random_image(size: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image::from_fn(size, size, |_, _| rng.gen_range(0.0..=255.0)).unwrap()
}

pub fn max_abs_diff(a: &Image, b: &Image) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
