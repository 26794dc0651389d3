//! Sample-and-interpolate LLF. Reference intensities sit at `tau * k` for
//! `k = 0..=S` with `tau = (R - 1) / S`; each coefficient interpolates
//! linearly between the two Laplacian pyramids bracketing `G_l[I]_p`.

use super::LlfConfig;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::par;
use crate::pyramid::{self, collapse_levels, Kernel};
use crate::remap::remap_exact;
use crate::MAX_INTENSITY;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FastStats {
    /// Coefficients whose reference fell outside the node range and was
    /// clamped to the nearest node.
    pub saturated: usize,
}

pub fn llf_fast(img: &Image, cfg: &LlfConfig) -> Result<Image> {
    llf_fast_with_stats(img, cfg).map(|(out, _)| out)
}

pub fn llf_fast_with_stats(img: &Image, cfg: &LlfConfig) -> Result<(Image, FastStats)> {
    cfg.validate(img)?;
    let samples = cfg.samples;
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample interval"));
    }
    let kernel = Kernel::binomial();
    let gauss = pyramid::gaussian_unchecked(img.clone(), cfg.num_levels, &kernel);
    let top = gauss.top();
    let tau = MAX_INTENSITY / samples as f64;

    let mut stats = FastStats::default();
    let brackets: Vec<Vec<(usize, f64)>> = (0..top)
        .map(|l| {
            gauss
                .level(l)
                .data()
                .iter()
                .map(|&g| {
                    if !(0.0..=MAX_INTENSITY).contains(&g) {
                        stats.saturated += 1;
                    }
                    bracket(g, tau, samples)
                })
                .collect()
        })
        .collect();

    let mut acc: Vec<Image> = (0..top)
        .map(|l| {
            let (w, h) = gauss.level(l).dims();
            Image::from_parts(w, h, vec![0.0; w * h])
        })
        .collect();

    for node in 0..=samples {
        let reference = tau * node as f64;
        let remapped = img.map(|i| remap_exact(i, reference, &cfg.remap));
        let sub = pyramid::gaussian_unchecked(remapped, cfg.num_levels, &kernel);
        for (l, out) in acc.iter_mut().enumerate() {
            let lap = pyramid::laplacian_level(&sub, l, &kernel);
            let w = out.width();
            let brackets = &brackets[l];
            par::for_each_row(out.data_mut(), w, |y, row| {
                for (x, dst) in row.iter_mut().enumerate() {
                    let (k, a) = brackets[y * w + x];
                    if k == node {
                        *dst += (1.0 - a) * lap.get(x, y);
                    } else if k + 1 == node {
                        *dst += a * lap.get(x, y);
                    }
                }
            });
        }
    }

    acc.push(gauss.level(top).clone());
    Ok((collapse_levels(&acc, &kernel), stats))
}

/// Lower node index and interpolation weight toward the upper node. A value
/// sitting on a node (up to a few ulps of `g / tau`) yields weight zero.
fn bracket(g: f64, tau: f64, samples: usize) -> (usize, f64) {
    let t = (g / tau).clamp(0.0, samples as f64);
    let nearest = t.round();
    let t = if (t - nearest).abs() <= 8.0 * f64::EPSILON * nearest.max(1.0) { nearest } else { t };
    let k = (t.floor() as usize).min(samples - 1);
    (k, t - k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_on_and_between_nodes() {
        let tau = 255.0 / 9.0;
        for k in 0..9 {
            assert_eq!(bracket(tau * k as f64, tau, 9), (k, 0.0));
        }
        assert_eq!(bracket(255.0, tau, 9), (8, 1.0));
        let (k, a) = bracket(1.5 * tau, tau, 9);
        assert_eq!(k, 1);
        assert!((a - 0.5).abs() < 1e-12);
        assert_eq!(bracket(-4.0, tau, 9), (0, 0.0));
        assert_eq!(bracket(300.0, tau, 9), (8, 1.0));
    }

    #[test]
    fn knot_reference_copies_the_node_pyramid() {
        // Every pixel equals node 3 of 5 intervals except one bright dot, so
        // most coefficients sit exactly on a node.
        let tau = 255.0 / 5.0;
        let mut img = Image::filled(16, 16, 3.0 * tau).unwrap();
        img.set(8, 8, 250.0);
        let cfg = LlfConfig::new(2, 2.0, 30.0).unwrap().with_samples(5);
        let fast = llf_fast(&img, &cfg).unwrap();
        let naive = super::super::llf_naive(&img, &cfg).unwrap();
        // Far from the dot both engines reproduce the flat value exactly.
        assert_eq!(fast.get(0, 0), naive.get(0, 0));
        assert_eq!(fast.get(0, 0), 3.0 * tau);
    }

    #[test]
    fn identities() {
        let img = Image::from_fn(19, 13, |x, y| ((x * 11 + y * 5) % 37) as f64 * 6.5).unwrap();
        let cfg = LlfConfig::new(3, 0.0, 30.0).unwrap().with_samples(8);
        let out = llf_fast(&img, &cfg).unwrap();
        assert!(img.data().iter().zip(out.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let flat = Image::filled(10, 10, 201.0).unwrap();
        let cfg = LlfConfig::new(3, 7.0, 30.0).unwrap().with_samples(8);
        let out = llf_fast(&flat, &cfg).unwrap();
        assert!(out.data().iter().all(|&v| (v - 201.0).abs() < 1e-9));

        assert!(llf_fast(&flat, &cfg.with_samples(0)).is_err());
    }

    #[test]
    fn saturation_is_counted() {
        let img = Image::from_fn(8, 8, |x, _| if x < 4 { -20.0 } else { 100.0 }).unwrap();
        let cfg = LlfConfig::new(2, 1.0, 30.0).unwrap().with_samples(4);
        let (_, stats) = llf_fast_with_stats(&img, &cfg).unwrap();
        assert!(stats.saturated > 0);
        let (_, stats) = llf_fast_with_stats(&img.map(|v| v.max(0.0)), &cfg).unwrap();
        assert_eq!(stats.saturated, 0);
    }
}
