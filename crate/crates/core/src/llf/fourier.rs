//! Fourier LLF ("Gaussian Fourier pyramids").
//!
//! With the series remap, the Gaussian pyramid of `r(I, g)` is
//! `G_l[I] + m * sum_k a~_k (sin(w_k g) C_{l,k} - cos(w_k g) S_{l,k})` where
//! `C_{l,k} = G_l[cos(w_k I)]` and `S_{l,k} = G_l[sin(w_k I)]` do not depend
//! on `g`. The output coefficient at level `l` with `g = G_l[I]_p` is
//!
//! ```text
//! L_l[O] = L_l[I] + m * sum_k a~_k [ (sin(w_k g) C_{l,k}   - cos(w_k g) S_{l,k})
//!                                  - (sin(w_k g) C_{l+1,k}^ - cos(w_k g) S_{l+1,k}^) ]
//! ```
//!
//! where `^` is upsampling to level `l`. At level 0 the same-level bracket is
//! `sin(w I) cos(w I) - cos(w I) sin(w I) = 0` and is dropped. The top level
//! is `G_top[I]`. Only the `2K + 1` pyramids `G[I]`, `C_k`, `S_k` are built.

use super::{check_gains, GainMap, LlfConfig};
use crate::error::Result;
use crate::image::Image;
use crate::par;
use crate::pyramid::{self, collapse_levels, upsample_unchecked, Kernel, Pyramid};
use crate::remap::FourierExpansion;

pub fn llf_fourier(img: &Image, cfg: &LlfConfig) -> Result<Image> {
    cfg.validate(img)?;
    let exp = cfg.expansion()?;
    let gain = cfg.remap.gain;
    Ok(fourier_engine(img, cfg.num_levels, &exp, |_, _| gain))
}

/// Fourier LLF with per-pixel gains. The gain at level `l` is read from the
/// Gaussian pyramid of `gains`; the Fourier pyramids are the same `2K + 1`
/// as in the fixed case.
pub fn llf_fourier_adaptive(img: &Image, cfg: &LlfConfig, gains: &GainMap) -> Result<Image> {
    cfg.validate(img)?;
    check_gains(img, gains)?;
    let exp = cfg.expansion()?;
    let gain_pyr = gains.pyramid(cfg.num_levels);
    Ok(fourier_engine(img, cfg.num_levels, &exp, |l, i| gain_pyr.level(l).data()[i]))
}

fn fourier_engine(
    img: &Image,
    num_levels: usize,
    exp: &FourierExpansion,
    gain_at: impl Fn(usize, usize) -> f64 + Sync,
) -> Image {
    let kernel = Kernel::binomial();
    let gauss = pyramid::gaussian_unchecked(img.clone(), num_levels, &kernel);
    let top = gauss.top();
    let order = exp.order();

    let mut acc: Vec<Image> = (0..top)
        .map(|l| {
            let (w, h) = gauss.level(l).dims();
            Image::from_parts(w, h, vec![0.0; w * h])
        })
        .collect();

    // sin/cos of w_k * G_l[I] for the current k, stepped down from k = K by
    // rotating through -w_1. Level 0 doubles as the trig images of I.
    let mut phases: Vec<Phase> = (0..top).map(|l| Phase::new(gauss.level(l), exp.omega()[0], order)).collect();

    for k in (0..order).rev() {
        let weight = exp.alpha_tilde()[k];
        let (w, h) = img.dims();
        let cos_pyr = pyramid::gaussian_unchecked(Image::from_parts(w, h, phases[0].cos.clone()), num_levels, &kernel);
        let sin_pyr = pyramid::gaussian_unchecked(Image::from_parts(w, h, phases[0].sin.clone()), num_levels, &kernel);
        for (l, out) in acc.iter_mut().enumerate() {
            accumulate_term(out, &phases[l], &cos_pyr, &sin_pyr, l, weight, &kernel);
        }
        if k > 0 {
            phases.iter_mut().for_each(Phase::step_down);
        }
    }

    let mut levels: Vec<Image> = acc
        .into_iter()
        .enumerate()
        .map(|(l, sum)| {
            let detail = pyramid::laplacian_level(&gauss, l, &kernel);
            let w = detail.width();
            let mut out = detail.into_vec();
            par::for_each_row(&mut out, w, |y, row| {
                for (x, dst) in row.iter_mut().enumerate() {
                    let i = y * w + x;
                    *dst += gain_at(l, i) * sum.data()[i];
                }
            });
            Image::from_parts(w, sum.height(), out)
        })
        .collect();
    levels.push(gauss.level(top).clone());
    collapse_levels(&levels, &kernel)
}

struct Phase {
    width: usize,
    sin: Vec<f64>,
    cos: Vec<f64>,
    sin1: Vec<f64>,
    cos1: Vec<f64>,
}

impl Phase {
    fn new(g: &Image, omega1: f64, order: usize) -> Self {
        let (sin1, cos1): (Vec<f64>, Vec<f64>) = g.data().iter().map(|&v| (omega1 * v).sin_cos()).unzip();
        let top = order as f64 * omega1;
        let (sin, cos) = g.data().iter().map(|&v| (top * v).sin_cos()).unzip();
        Self { width: g.width(), sin, cos, sin1, cos1 }
    }

    fn step_down(&mut self) {
        let (sin1, cos1) = (&self.sin1, &self.cos1);
        for i in 0..self.sin.len() {
            let (s, c) = (self.sin[i], self.cos[i]);
            self.sin[i] = s * cos1[i] - c * sin1[i];
            self.cos[i] = c * cos1[i] + s * sin1[i];
        }
    }
}

fn accumulate_term(
    out: &mut Image,
    phase: &Phase,
    cos_pyr: &Pyramid,
    sin_pyr: &Pyramid,
    l: usize,
    weight: f64,
    kernel: &Kernel,
) {
    let dims = cos_pyr.level(l).dims();
    let cos_up = upsample_unchecked(cos_pyr.level(l + 1), dims, kernel);
    let sin_up = upsample_unchecked(sin_pyr.level(l + 1), dims, kernel);
    let (c, s) = (cos_pyr.level(l), sin_pyr.level(l));
    let w = phase.width;
    par::for_each_row(out.data_mut(), w, |y, row| {
        for (x, dst) in row.iter_mut().enumerate() {
            let i = y * w + x;
            let (sg, cg) = (phase.sin[i], phase.cos[i]);
            let coarse = sg * cos_up.data()[i] - cg * sin_up.data()[i];
            let term = if l == 0 { -coarse } else { (sg * c.data()[i] - cg * s.data()[i]) - coarse };
            *dst += weight * term;
        }
    });
}

#[cfg(test)]
mod tests {
    use super::super::{llf_naive, Period};
    use super::*;
    use crate::metrics::psnr;

    fn texture(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |x, y| {
            let (xf, yf) = (x as f64, y as f64);
            let edge = if x > w / 3 { 110.0 } else { 10.0 };
            (edge + 35.0 * (0.9 * xf).sin() * (0.6 * yf).cos() + ((x * 13 + y * 29) % 19) as f64).clamp(0.0, 255.0)
        })
        .unwrap()
    }

    #[test]
    fn zero_gain_and_constant_images() {
        let img = texture(23, 18);
        let cfg = LlfConfig::new(3, 0.0, 30.0).unwrap().with_order(6);
        let out = llf_fourier(&img, &cfg).unwrap();
        assert!(img.data().iter().zip(out.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let flat = Image::filled(16, 12, 93.0).unwrap();
        let cfg = LlfConfig::new(3, 7.0, 30.0).unwrap().with_order(6);
        let out = llf_fourier(&flat, &cfg).unwrap();
        assert!(out.data().iter().all(|&v| (v - 93.0).abs() < 1e-9));
    }

    #[test]
    fn converges_to_naive() {
        let img = texture(32, 32);
        let cfg = LlfConfig::new(3, 3.0, 30.0).unwrap();
        let oracle = llf_naive(&img, &cfg).unwrap();
        let p4 = psnr(&llf_fourier(&img, &cfg.with_order(4)).unwrap(), &oracle).unwrap().psnr_db;
        let p20 = psnr(&llf_fourier(&img, &cfg.with_order(20)).unwrap(), &oracle).unwrap().psnr_db;
        assert!(p20 > p4, "{p4} {p20}");
        assert!(p20 > 100.0, "{p20}");
    }

    #[test]
    fn adaptive_reductions() {
        let img = texture(21, 17);
        let cfg = LlfConfig::new(3, 4.5, 30.0).unwrap().with_order(8).with_period(Period::Fixed(390.0));
        let constant = GainMap::constant(21, 17, 4.5).unwrap();
        assert_eq!(llf_fourier_adaptive(&img, &cfg, &constant).unwrap(), llf_fourier(&img, &cfg).unwrap());
        let zero = GainMap::constant(21, 17, 0.0).unwrap();
        let out = llf_fourier_adaptive(&img, &cfg, &zero).unwrap();
        assert!(img.data().iter().zip(out.data()).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(llf_fourier_adaptive(&img, &cfg, &GainMap::constant(20, 17, 1.0).unwrap()).is_err());
    }
}
