//! Local Laplacian filtering engines.
//!
//! All engines share the binomial kernel and reflect-101 borders of
//! [`crate::pyramid`], so differences between their outputs measure
//! approximation error only.

mod fast;
mod fourier;
mod naive;

pub use fast::{llf_fast, llf_fast_with_stats, FastStats};
pub use fourier::{llf_fourier, llf_fourier_adaptive};
pub use naive::{llf_naive, llf_naive_adaptive, llf_naive_full_frame};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::pyramid::{self, Kernel, Pyramid};
use crate::remap::{self, FourierExpansion, RemapParams, DEFAULT_ORDER};
use crate::TONES;

/// Default sample count of the fast engine (25 pyramids).
pub const DEFAULT_SAMPLES: usize = 24;

/// Variance at which [`compute_gain_map`] saturates to the high gain.
pub const DEFAULT_VARIANCE_REF: f64 = 900.0;

/// Period of the Fourier expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Period {
    /// Minimize the period error functional for the configured order.
    Auto,
    Fixed(f64),
}

/// Parameters shared by every engine plus the method-specific knobs.
/// The fast engine uses `samples + 1` pyramids, the Fourier engine
/// `2 * order + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LlfConfig {
    pub num_levels: usize,
    pub remap: RemapParams,
    /// Sampled reference intensities of the fast engine, `|I|`.
    pub samples: usize,
    /// Cosine terms `K` of the Fourier engine.
    pub order: usize,
    pub period: Period,
}

impl LlfConfig {
    pub fn new(num_levels: usize, gain: f64, sigma_r: f64) -> Result<Self> {
        Ok(Self {
            num_levels,
            remap: RemapParams::new(gain, sigma_r)?,
            samples: DEFAULT_SAMPLES,
            order: DEFAULT_ORDER,
            period: Period::Auto,
        })
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_period(mut self, period: Period) -> Self {
        self.period = period;
        self
    }

    pub fn with_gain(mut self, gain: f64) -> Self {
        self.remap.gain = gain;
        self
    }

    pub fn fast_pyramids(&self) -> usize {
        self.samples + 1
    }

    pub fn fourier_pyramids(&self) -> usize {
        2 * self.order + 1
    }

    /// The period the Fourier engine will use.
    pub fn resolved_period(&self) -> Result<f64> {
        match self.period {
            Period::Auto => remap::optimize_period(self.remap.sigma_r, self.order, TONES),
            Period::Fixed(t) => Ok(t),
        }
    }

    pub fn expansion(&self) -> Result<FourierExpansion> {
        remap::build_expansion(&self.remap, self.order, self.resolved_period()?)
    }

    pub(crate) fn validate(&self, img: &Image) -> Result<()> {
        self.remap.validate()?;
        pyramid::check_levels(img, self.num_levels)
    }
}

/// Per-pixel gain `m_p`, same size as the image it modulates.
#[derive(Clone, Debug, PartialEq)]
pub struct GainMap(Image);

impl GainMap {
    pub fn new(gains: Image) -> Self {
        Self(gains)
    }

    pub fn constant(width: usize, height: usize, gain: f64) -> Result<Self> {
        Ok(Self(Image::filled(width, height, gain)?))
    }

    pub fn image(&self) -> &Image {
        &self.0
    }

    pub fn dims(&self) -> (usize, usize) {
        self.0.dims()
    }

    /// Gains at every pyramid level: the map smoothed and decimated by the
    /// same operator as the image, so coarse coefficients see the gain of
    /// the region they summarize.
    pub(crate) fn pyramid(&self, num_levels: usize) -> Pyramid {
        pyramid::gaussian_unchecked(self.0.clone(), num_levels, &Kernel::binomial())
    }
}

/// Variance-driven gains: `m_lo + (m_hi - m_lo) * min(1, v_p / v_ref)` with
/// `v_p` the population variance of the `(2r + 1)^2` window around `p`
/// (reflect-101 borders) and `v_ref` = [`DEFAULT_VARIANCE_REF`].
pub fn compute_gain_map(img: &Image, window_radius: usize, m_lo: f64, m_hi: f64) -> Result<GainMap> {
    compute_gain_map_with_reference(img, window_radius, m_lo, m_hi, DEFAULT_VARIANCE_REF)
}

pub fn compute_gain_map_with_reference(
    img: &Image,
    window_radius: usize,
    m_lo: f64,
    m_hi: f64,
    variance_ref: f64,
) -> Result<GainMap> {
    if window_radius == 0 {
        return Err(Error::invalid("window_radius", "must be at least 1"));
    }
    if variance_ref.is_nan() || variance_ref <= 0.0 {
        return Err(Error::invalid("variance_ref", "must be positive"));
    }
    let variance = local_variance(img, window_radius);
    Ok(GainMap(variance.map(|v| m_lo + (m_hi - m_lo) * (v / variance_ref).min(1.0))))
}

/// Window variance computed on samples shifted by the center value, which
/// keeps flat regions at exactly zero.
pub fn local_variance(img: &Image, radius: usize) -> Image {
    let (w, h) = img.dims();
    let r = radius as isize;
    let count = ((2 * radius + 1) * (2 * radius + 1)) as f64;
    let mut out = Image::from_parts(w, h, vec![0.0; w * h]);
    crate::par::for_each_row(out.data_mut(), w, |y, row| {
        for (x, dst) in row.iter_mut().enumerate() {
            let center = img.get(x, y);
            let (mut s, mut s2) = (0.0, 0.0);
            for dy in -r..=r {
                let yy = pyramid::reflect101(y as isize + dy, h);
                for dx in -r..=r {
                    let xx = pyramid::reflect101(x as isize + dx, w);
                    let v = img.get(xx, yy) - center;
                    s += v;
                    s2 += v * v;
                }
            }
            let mean = s / count;
            *dst = (s2 / count - mean * mean).max(0.0);
        }
    });
    out
}

/// Plain Laplacian-pyramid enhancement: every detail level is passed
/// through `r(., 0)` and the pyramid is collapsed. Produces halos at strong
/// edges; kept as the baseline LLF improves on.
pub fn enhance_pyramid_baseline(img: &Image, cfg: &LlfConfig) -> Result<Image> {
    cfg.validate(img)?;
    let kernel = Kernel::binomial();
    let lap = pyramid::build_laplacian_with(img, cfg.num_levels, &kernel)?;
    let top = lap.top();
    let levels: Vec<Image> = lap
        .into_levels()
        .into_iter()
        .enumerate()
        .map(|(l, level)| if l == top { level } else { level.map(|v| remap::remap_exact(v, 0.0, &cfg.remap)) })
        .collect();
    Ok(pyramid::collapse_levels(&levels, &kernel))
}

pub(crate) fn check_gains(img: &Image, gains: &GainMap) -> Result<()> {
    Error::check_dims(img.dims(), gains.dims())
}
