//! Exact LLF: every output coefficient `L_l[O]_p` is the level-`l`
//! coefficient at `p` of the Laplacian pyramid of `r(I, G_l[I]_p)`.
//!
//! The full-frame definition builds one pyramid per coefficient. The default
//! path instead evaluates only the dependency footprint of the coefficient,
//! through the same patch kernels the full-frame pyramid uses, which gives
//! bit-identical results at a fraction of the cost.

use super::{check_gains, GainMap, LlfConfig};
use crate::error::Result;
use crate::image::Image;
use crate::par;
use crate::pyramid::{
    self, collapse_levels, down_source_rect, downsample_patch, up_source_rect, upsample_patch, Kernel, Patch, Pyramid,
    Rect,
};
use crate::remap::remap_exact_with_gain;

pub fn llf_naive(img: &Image, cfg: &LlfConfig) -> Result<Image> {
    cfg.validate(img)?;
    let gain = cfg.remap.gain;
    Ok(naive_engine(img, cfg, |_, _, _| gain))
}

/// Naive LLF with the gain of each coefficient read from the Gaussian
/// pyramid of `gains` at the coefficient's own level and position.
pub fn llf_naive_adaptive(img: &Image, cfg: &LlfConfig, gains: &GainMap) -> Result<Image> {
    cfg.validate(img)?;
    check_gains(img, gains)?;
    let gain_pyr = gains.pyramid(cfg.num_levels);
    Ok(naive_engine(img, cfg, |l, x, y| gain_pyr.level(l).get(x, y)))
}

/// The literal definition: a full-frame remap and Laplacian pyramid per
/// coefficient. Quadratic in the pixel count; use it on small images only.
pub fn llf_naive_full_frame(img: &Image, cfg: &LlfConfig) -> Result<Image> {
    cfg.validate(img)?;
    let kernel = Kernel::binomial();
    let gauss = pyramid::gaussian_unchecked(img.clone(), cfg.num_levels, &kernel);
    let top = gauss.top();
    let (sigma_r, gain) = (cfg.remap.sigma_r, cfg.remap.gain);
    let mut levels: Vec<Image> = (0..top)
        .map(|l| {
            let g_l = gauss.level(l);
            Image::from_fn(g_l.width(), g_l.height(), |x, y| {
                let g = g_l.get(x, y);
                let remapped = img.map(|i| remap_exact_with_gain(i, g, sigma_r, gain));
                let sub = pyramid::gaussian_unchecked(remapped, l + 2, &kernel);
                pyramid::laplacian_level(&sub, l, &kernel).get(x, y)
            })
            .expect("level dims are positive")
        })
        .collect();
    levels.push(gauss.level(top).clone());
    Ok(collapse_levels(&levels, &kernel))
}

fn naive_engine(img: &Image, cfg: &LlfConfig, gain_at: impl Fn(usize, usize, usize) -> f64 + Sync) -> Image {
    let kernel = Kernel::binomial();
    let gauss = pyramid::gaussian_unchecked(img.clone(), cfg.num_levels, &kernel);
    let top = gauss.top();
    let sigma_r = cfg.remap.sigma_r;

    let mut levels: Vec<Image> = (0..top)
        .map(|l| {
            let (w, h) = gauss.level(l).dims();
            let mut out = vec![0.0; w * h];
            par::for_each_row(&mut out, w, |y, row| {
                for (x, dst) in row.iter_mut().enumerate() {
                    let g = gauss.level(l).get(x, y);
                    let gain = gain_at(l, x, y);
                    *dst = coefficient(img, &gauss, l, x, y, &kernel, |i| remap_exact_with_gain(i, g, sigma_r, gain));
                }
            });
            Image::from_parts(w, h, out)
        })
        .collect();
    levels.push(gauss.level(top).clone());
    collapse_levels(&levels, &kernel)
}

/// `L_l[remap(I)]` at `(x, y)`, evaluated on the smallest rectangles that
/// feed it.
fn coefficient(
    img: &Image,
    gauss: &Pyramid,
    l: usize,
    x: usize,
    y: usize,
    kernel: &Kernel,
    remap: impl Fn(f64) -> f64,
) -> f64 {
    let dims = |j: usize| gauss.level(j).dims();
    let pixel = Rect::pixel(x, y);
    let next = up_source_rect(pixel, dims(l), kernel);

    let mut need = vec![pixel; l + 1];
    need[l] = pixel.union(down_source_rect(next, dims(l)));
    for j in (0..l).rev() {
        need[j] = down_source_rect(need[j + 1], dims(j));
    }

    let mut patch = Patch::from_fn(need[0], |px, py| remap(img.get(px, py)));
    for (j, &rect) in need.iter().enumerate().skip(1) {
        patch = downsample_patch(&patch, dims(j - 1), rect, kernel);
    }
    let coarse = downsample_patch(&patch, dims(l), next, kernel);
    let up = upsample_patch(&coarse, dims(l), pixel, kernel);
    patch.at(x, y) - up.data[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texture(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |x, y| {
            let (xf, yf) = (x as f64, y as f64);
            let edge = if x + y / 2 > w / 2 { 90.0 } else { 0.0 };
            (60.0 + edge + 40.0 * (0.7 * xf).sin() * (0.45 * yf).cos() + ((x * 31 + y * 17) % 23) as f64)
                .clamp(0.0, 255.0)
        })
        .unwrap()
    }

    #[test]
    fn footprint_matches_full_frame_bitwise() {
        for (w, h, levels) in [(16, 16, 2), (13, 11, 3), (17, 9, 4), (8, 8, 4)] {
            let img = texture(w, h);
            let cfg = LlfConfig::new(levels, 3.0, 30.0).unwrap();
            let fast = llf_naive(&img, &cfg).unwrap();
            let full = llf_naive_full_frame(&img, &cfg).unwrap();
            assert!(
                fast.data().iter().zip(full.data()).all(|(a, b)| a.to_bits() == b.to_bits()),
                "{w}x{h} with {levels} levels"
            );
        }
    }

    #[test]
    fn zero_gain_and_constant_images() {
        let img = texture(20, 14);
        let cfg = LlfConfig::new(3, 0.0, 30.0).unwrap();
        let out = llf_naive(&img, &cfg).unwrap();
        assert!(img.data().iter().zip(out.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let flat = Image::filled(12, 10, 77.0).unwrap();
        let cfg = LlfConfig::new(3, 7.0, 30.0).unwrap();
        assert_eq!(llf_naive(&flat, &cfg).unwrap(), flat);
    }

    #[test]
    fn adaptive_with_constant_map_is_fixed_engine() {
        let img = texture(15, 12);
        let cfg = LlfConfig::new(3, 2.7, 30.0).unwrap();
        let gains = GainMap::constant(15, 12, 2.7).unwrap();
        assert_eq!(llf_naive_adaptive(&img, &cfg, &gains).unwrap(), llf_naive(&img, &cfg).unwrap());

        let zero = GainMap::constant(15, 12, 0.0).unwrap();
        let out = llf_naive_adaptive(&img, &cfg, &zero).unwrap();
        assert!(img.data().iter().zip(out.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let wrong = GainMap::constant(14, 12, 1.0).unwrap();
        assert!(llf_naive_adaptive(&img, &cfg, &wrong).is_err());
    }
}
