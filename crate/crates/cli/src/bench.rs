use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fourier_llf::llf::{compute_gain_map, llf_fast, llf_fourier, llf_fourier_adaptive, llf_naive, llf_naive_adaptive};
use fourier_llf::metrics::{psnr, time_op};
use fourier_llf::{GainMap, Image, LlfConfig};
use serde::Serialize;

use crate::cache::{AdaptiveKey, OracleCache, OracleKey};
use crate::{io, usage, Method};

pub const CSV_HEADER: &str = "image_id,method,levels,pyramids,k_or_samples,sigma_r,m,T,psnr_db,runtime_ms";

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Directory of PGM/PPM images (color images are benchmarked on luma).
    #[arg(long)]
    pub images: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub levels: Vec<usize>,
    /// Pyramid budgets; the Fourier engine uses K = (P - 1) / 2.
    #[arg(long, value_delimiter = ',', default_value = "9,13,17,21,25")]
    pub pyramids: Vec<usize>,
    #[arg(long, default_value_t = 30.0)]
    pub sigma_r: f64,
    #[arg(long, default_value_t = 7.0, allow_negative_numbers = true)]
    pub gain: f64,
    /// Compare fourier-adaptive against naive-adaptive with a
    /// variance-driven gain map from --gain-lo to --gain.
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gain_lo: f64,
    #[arg(long)]
    pub csv: PathBuf,
    /// Center-crop every image to SIZE x SIZE first.
    #[arg(long)]
    pub crop: Option<usize>,
    /// Timed runs per measurement (after one warm-up).
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value = "cache")]
    pub cache: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub image_id: String,
    pub method: &'static str,
    pub levels: usize,
    pub pyramids: usize,
    pub k_or_samples: usize,
    pub sigma_r: f64,
    pub m: f64,
    #[serde(rename = "T")]
    pub period: Option<f64>,
    pub psnr_db: f64,
    pub runtime_ms: f64,
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let rows = collect_rows(args)?;
    let mut out = csv::Writer::from_path(&args.csv).with_context(|| format!("creating {}", args.csv.display()))?;
    for row in &rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn collect_rows(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    validate(args)?;
    let paths = image_paths(&args.images)?;
    if paths.is_empty() {
        bail!("no PGM/PPM images in {}", args.images.display());
    }
    let cache = OracleCache::new(&args.cache);
    let mut rows = Vec::new();
    for path in &paths {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let mut img = io::luma(io::read_image(path)?);
        if let Some(size) = args.crop {
            img = img.center_crop(size);
        }
        rows.extend(bench_image(&id, &img, args, &cache).with_context(|| format!("benchmarking {}", path.display()))?);
    }
    Ok(rows)
}

fn validate(args: &BenchArgs) -> Result<()> {
    if args.levels.is_empty() || args.pyramids.is_empty() {
        return Err(usage("--levels and --pyramids need at least one value"));
    }
    if let Some(&p) = args.pyramids.iter().find(|&&p| p < 3) {
        return Err(usage(format!("pyramid budget {p} is below the minimum of 3")));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if args.crop == Some(0) {
        return Err(usage("--crop must be positive"));
    }
    Ok(())
}

fn image_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry?.path();
        let is_pnm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "ppm" | "pnm"));
        if is_pnm && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn bench_image(id: &str, img: &Image, args: &BenchArgs, cache: &OracleCache) -> Result<Vec<BenchRow>> {
    let gains = if args.adaptive { Some(compute_gain_map(img, args.window, args.gain_lo, args.gain)?) } else { None };
    let adaptive_key =
        gains.as_ref().map(|_| AdaptiveKey { window: args.window, gain_lo: args.gain_lo, gain_hi: args.gain });

    let mut oracles = Vec::with_capacity(args.levels.len());
    for &levels in &args.levels {
        let cfg = LlfConfig::new(levels, args.gain, args.sigma_r)?;
        let key = OracleKey::new(img, levels, args.sigma_r, args.gain, adaptive_key.clone());
        let (oracle, _) = cache.get_or_compute(&key, || {
            Ok(match &gains {
                Some(g) => llf_naive_adaptive(img, &cfg, g)?,
                None => llf_naive(img, &cfg)?,
            })
        })?;
        oracles.push(oracle);
    }

    let methods: &[Method] = if args.adaptive { &[Method::FourierAdaptive] } else { &[Method::Fast, Method::Fourier] };
    let mut rows = Vec::new();
    for &method in methods {
        for (&levels, oracle) in args.levels.iter().zip(&oracles) {
            for &budget in &args.pyramids {
                rows.push(measure(id, img, method, levels, budget, oracle, gains.as_ref(), args)?);
            }
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn measure(
    id: &str,
    img: &Image,
    method: Method,
    levels: usize,
    budget: usize,
    oracle: &Image,
    gains: Option<&GainMap>,
    args: &BenchArgs,
) -> Result<BenchRow> {
    let base = LlfConfig::new(levels, args.gain, args.sigma_r)?;
    let (cfg, k_or_samples, pyramids, period) = match method {
        Method::Fast => {
            let cfg = base.with_samples(budget - 1);
            (cfg, cfg.samples, cfg.fast_pyramids(), None)
        }
        _ => {
            let cfg = base.with_order((budget - 1) / 2);
            (cfg, cfg.order, cfg.fourier_pyramids(), Some(cfg.resolved_period()?))
        }
    };
    let engine = || -> Result<Image> {
        Ok(match (method, gains) {
            (Method::Fast, _) => llf_fast(img, &cfg)?,
            (Method::FourierAdaptive, Some(g)) => llf_fourier_adaptive(img, &cfg, g)?,
            _ => llf_fourier(img, &cfg)?,
        })
    };
    let output = engine()?;
    let timing = time_op(args.trials, engine)?;
    Ok(BenchRow {
        image_id: id.to_string(),
        method: method.name(),
        levels,
        pyramids,
        k_or_samples,
        sigma_r: args.sigma_r,
        m: args.gain,
        period,
        psnr_db: psnr(&output, oracle)?.psnr_db,
        runtime_ms: timing.median_ms,
    })
}
