use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Result;
use fourier_llf::image::{rgb_to_yuv, yuv_to_rgb, AnyImage};
use fourier_llf::llf::{
    compute_gain_map, enhance_pyramid_baseline, llf_fast, llf_fourier, llf_fourier_adaptive, llf_naive,
    llf_naive_adaptive, DEFAULT_SAMPLES,
};
use fourier_llf::remap::DEFAULT_ORDER;
use fourier_llf::{Image, LlfConfig, Period};

use crate::{io, usage, Method};

#[derive(Debug, clap::Args)]
pub struct EnhanceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "fourier")]
    pub method: Method,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 30.0)]
    pub sigma_r: f64,
    #[arg(long, default_value_t = 7.0, allow_negative_numbers = true)]
    pub gain: f64,
    /// Fourier order K (2K + 1 pyramids).
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Fourier period, or `auto` to minimize the truncation error.
    #[arg(long, default_value = "auto")]
    pub period: PeriodArg,
    /// Fast-engine sample intervals (samples + 1 pyramids).
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Variance-driven per-pixel gain (with --method fourier or naive).
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gain_lo: f64,
    /// Defaults to --gain.
    #[arg(long, allow_negative_numbers = true)]
    pub gain_hi: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodArg(pub Period);

impl FromStr for PeriodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(PeriodArg(Period::Auto));
        }
        match s.parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(PeriodArg(Period::Fixed(t))),
            _ => Err(format!("expected `auto` or a positive number, got `{s}`")),
        }
    }
}

impl EnhanceArgs {
    pub fn config(&self) -> Result<LlfConfig> {
        Ok(LlfConfig::new(self.levels, self.gain, self.sigma_r)?
            .with_order(self.order)
            .with_samples(self.samples)
            .with_period(self.period.0))
    }

    /// The engine after folding `--adaptive` into the method.
    pub fn resolved_method(&self) -> Result<Method> {
        Ok(match (self.method, self.adaptive) {
            (m, false) => m,
            (Method::Fourier | Method::FourierAdaptive, true) => Method::FourierAdaptive,
            (Method::Naive | Method::NaiveAdaptive, true) => Method::NaiveAdaptive,
            (m, true) => return Err(usage(format!("--adaptive is not supported by --method {}", m.name()))),
        })
    }
}

pub fn run(args: &EnhanceArgs) -> Result<()> {
    let method = args.resolved_method()?;
    let cfg = args.config()?;
    let out = match io::read_image(&args.input)? {
        AnyImage::Gray(gray) => AnyImage::Gray(filter(&gray, method, &cfg, args)?),
        AnyImage::Color(color) => {
            let (y, u, v) = rgb_to_yuv(&color);
            let y = filter(&y, method, &cfg, args)?;
            AnyImage::Color(yuv_to_rgb(&y, &u, &v)?)
        }
    };
    io::write_image(&args.output, &out)
}

pub fn filter(img: &Image, method: Method, cfg: &LlfConfig, args: &EnhanceArgs) -> Result<Image> {
    let gains = || compute_gain_map(img, args.window, args.gain_lo, args.gain_hi.unwrap_or(args.gain));
    Ok(match method {
        Method::Naive => llf_naive(img, cfg)?,
        Method::Fast => llf_fast(img, cfg)?,
        Method::Fourier => llf_fourier(img, cfg)?,
        Method::FourierAdaptive => llf_fourier_adaptive(img, cfg, &gains()?)?,
        Method::NaiveAdaptive => llf_naive_adaptive(img, cfg, &gains()?)?,
        Method::PyramidBaseline => enhance_pyramid_baseline(img, cfg)?,
    })
}
