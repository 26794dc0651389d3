//! PSNR and wall-clock timing.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsnrResult {
    /// `f64::INFINITY` when the images are identical.
    pub psnr_db: f64,
    pub mse: f64,
}

impl PsnrResult {
    pub fn is_infinite(&self) -> bool {
        self.psnr_db.is_infinite()
    }
}

impl fmt::Display for PsnrResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "psnr_db=inf mse={}", self.mse)
        } else {
            write!(f, "psnr_db={:.6} mse={}", self.psnr_db, self.mse)
        }
    }
}

/// PSNR with peak 255 over every pixel.
pub fn psnr(a: &Image, b: &Image) -> Result<PsnrResult> {
    psnr_with_peak(a, b, 255.0)
}

pub fn psnr_with_peak(a: &Image, b: &Image, peak: f64) -> Result<PsnrResult> {
    Error::check_dims(a.dims(), b.dims())?;
    let sum: f64 = a.data().iter().zip(b.data()).map(|(&x, &y)| (x - y) * (x - y)).sum();
    let mse = sum / a.len() as f64;
    let psnr_db = if mse == 0.0 { f64::INFINITY } else { 10.0 * (peak * peak / mse).log10() };
    Ok(PsnrResult { psnr_db, mse })
}

/// PSNR after quantizing both images to 8 bits; infinite exactly when the
/// quantized outputs agree everywhere.
pub fn psnr_quantized(a: &Image, b: &Image) -> Result<PsnrResult> {
    psnr(&a.quantized(), &b.quantized())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingStats {
    pub mean_ms: f64,
    pub median_ms: f64,
    pub min_ms: f64,
    pub trials: usize,
}

/// Runs `op` once untimed, then `trials` timed runs.
pub fn time_op<T>(trials: usize, mut op: impl FnMut() -> T) -> Result<TimingStats> {
    if trials == 0 {
        return Err(Error::invalid("trials", "need at least one"));
    }
    std::hint::black_box(op());
    let mut samples: Vec<f64> = (0..trials)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(op());
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let mid = trials / 2;
    let median_ms = if trials % 2 == 1 { samples[mid] } else { 0.5 * (samples[mid - 1] + samples[mid]) };
    Ok(TimingStats { mean_ms: samples.iter().sum::<f64>() / trials as f64, median_ms, min_ms: samples[0], trials })
}
