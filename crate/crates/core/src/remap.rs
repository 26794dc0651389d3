//! Detail remapping curves and their truncated Fourier-series surrogate.
//!
//! The exact curve is `r(i, g) = i - (i - g) * m * exp(-(i - g)^2 / (2 sigma_r^2))`.
//! Writing `(i - g) * w(i - g)` as `-sigma_r^2 * w'(i - g)` and expanding the
//! Gaussian `w` in `K` cosine terms of period `T` turns the curve into
//!
//! ```text
//! r(i, g) ~ i - m * sum_k a~_k * (sin(w_k i) cos(w_k g) - cos(w_k i) sin(w_k g))
//! ```
//!
//! with `w_k = 2 pi k / T`, `a_k = sigma_r sqrt(2 pi) / T * exp(-(w_k sigma_r)^2 / 2)`
//! and `a~_k = 2 sigma_r^2 a_k w_k`. Each term separates into a function of
//! `i` times a function of `g`, which is what lets the Fourier engine share
//! pyramids across every reference intensity.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default number of cosine terms.
pub const DEFAULT_ORDER: usize = 10;

/// Gain `m` and range scale `sigma_r` of the Gaussian detail curve.
/// `m > 0` pulls intensities near the reference toward it (and, for `m > 1`,
/// past it with amplified amplitude); `m < 0` pushes them away.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemapParams {
    pub gain: f64,
    pub sigma_r: f64,
}

impl RemapParams {
    pub fn new(gain: f64, sigma_r: f64) -> Result<Self> {
        let params = Self { gain, sigma_r };
        params.validate()?;
        Ok(params)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.sigma_r > 0.0 && self.sigma_r.is_finite()) {
            return Err(Error::invalid("sigma_r", format!("must be positive, got {}", self.sigma_r)));
        }
        if !self.gain.is_finite() {
            return Err(Error::invalid("gain", "must be finite"));
        }
        Ok(())
    }
}

#[inline]
pub fn remap_exact(i: f64, g: f64, params: &RemapParams) -> f64 {
    remap_exact_with_gain(i, g, params.sigma_r, params.gain)
}

#[inline]
pub(crate) fn remap_exact_with_gain(i: f64, g: f64, sigma_r: f64, gain: f64) -> f64 {
    let d = i - g;
    i - d * gain * (-(d * d) / (2.0 * sigma_r * sigma_r)).exp()
}

/// Truncated Fourier expansion of the Gaussian range kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    sigma_r: f64,
    period: f64,
    /// `w_k` for `k = 1..=K` (index `k - 1`).
    omega: Vec<f64>,
    /// `a_k` for `k = 0..=K`.
    alpha: Vec<f64>,
    /// `a~_k` for `k = 1..=K` (index `k - 1`).
    alpha_tilde: Vec<f64>,
}

impl FourierExpansion {
    pub fn new(sigma_r: f64, order: usize, period: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("order", "need at least one term"));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::invalid("period", format!("must be positive, got {period}")));
        }
        if !(sigma_r > 0.0 && sigma_r.is_finite()) {
            return Err(Error::invalid("sigma_r", format!("must be positive, got {sigma_r}")));
        }
        let scale = sigma_r * (2.0 * PI).sqrt() / period;
        let omega_of = |k: usize| 2.0 * PI * k as f64 / period;
        let alpha: Vec<f64> = (0..=order)
            .map(|k| {
                let ws = omega_of(k) * sigma_r;
                scale * (-0.5 * ws * ws).exp()
            })
            .collect();
        let omega: Vec<f64> = (1..=order).map(omega_of).collect();
        let alpha_tilde = omega.iter().zip(&alpha[1..]).map(|(&w, &a)| 2.0 * sigma_r * sigma_r * a * w).collect();
        Ok(Self { sigma_r, period, omega, alpha, alpha_tilde })
    }

    pub fn order(&self) -> usize {
        self.omega.len()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn sigma_r(&self) -> f64 {
        self.sigma_r
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha_tilde(&self) -> &[f64] {
        &self.alpha_tilde
    }
}

pub fn build_expansion(params: &RemapParams, order: usize, period: f64) -> Result<FourierExpansion> {
    params.validate()?;
    FourierExpansion::new(params.sigma_r, order, period)
}

/// `m * (a_0 + 2 sum_k a_k cos(w_k d))`, the series value of the kernel at
/// displacement `d`.
pub fn gauss_approx(d: f64, exp: &FourierExpansion, gain: f64) -> f64 {
    let mut acc = 0.0;
    for k in (0..exp.order()).rev() {
        acc += exp.alpha[k + 1] * (exp.omega[k] * d).cos();
    }
    gain * (exp.alpha[0] + 2.0 * acc)
}

/// Series form of [`remap_exact`]. `remap_fourier(g, g, ..) == g` exactly.
pub fn remap_fourier(i: f64, g: f64, exp: &FourierExpansion, gain: f64) -> f64 {
    let mut acc = 0.0;
    for k in (0..exp.order()).rev() {
        let w = exp.omega[k];
        let (si, ci) = (w * i).sin_cos();
        let (sg, cg) = (w * g).sin_cos();
        acc += exp.alpha_tilde[k] * (si * cg - ci * sg);
    }
    i - gain * acc
}

/// Error functional whose minimizer is the series period:
/// `erfc(pi sigma (2K + 1) / T) + erfc((T - R) / sigma)`. The first term is
/// the truncation error, the second the overlap of neighboring periods.
pub fn period_error(period: f64, sigma_r: f64, order: usize, tones: usize) -> f64 {
    erfc(PI * sigma_r * (2 * order + 1) as f64 / period) + erfc((period - tones as f64) / sigma_r)
}

/// Search bracket for the period: `[R, R + 8 sigma_r]`.
pub fn period_bracket(sigma_r: f64, tones: usize) -> (f64, f64) {
    let lo = tones as f64;
    (lo, lo + 8.0 * sigma_r)
}

/// Minimizes [`period_error`] over [`period_bracket`]: a coarse grid locates
/// the basin, golden-section search refines it to 1e-6.
pub fn optimize_period(sigma_r: f64, order: usize, tones: usize) -> Result<f64> {
    if !(sigma_r > 0.0 && sigma_r.is_finite()) {
        return Err(Error::invalid("sigma_r", format!("must be positive, got {sigma_r}")));
    }
    if order == 0 {
        return Err(Error::invalid("order", "need at least one term"));
    }
    if tones < 2 {
        return Err(Error::invalid("tones", format!("need at least 2, got {tones}")));
    }
    let f = |t: f64| period_error(t, sigma_r, order, tones);
    let (lo, hi) = period_bracket(sigma_r, tones);

    const STEPS: usize = 2048;
    let step = (hi - lo) / STEPS as f64;
    let best = (0..=STEPS).map(|i| (i, f(lo + step * i as f64))).fold((0, f64::INFINITY), |acc, (i, e)| {
        if e < acc.1 {
            (i, e)
        } else {
            acc
        }
    });
    let mut a = lo + step * best.0.saturating_sub(1) as f64;
    let mut b = (lo + step * (best.0 + 1) as f64).min(hi);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-6 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    // The grid point may still beat the refined one on a flat, underflowing tail.
    let grid_t = lo + step * best.0 as f64;
    Ok(if f(grid_t) < f(t) { grid_t } else { t })
}

/// Complementary error function, accurate to a few ulps in relative terms
/// over the whole real line (the period search compares values near 1e-30).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        return 1.0 - erf_series(x);
    }
    erfc_continued_fraction(x)
}

/// Maclaurin series `2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// Laplace continued fraction, `x > 0`:
/// `erfc(x) = exp(-x^2) / sqrt(pi) / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))`,
/// evaluated with the modified Lentz method.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(m: f64, s: f64) -> RemapParams {
        RemapParams::new(m, s).unwrap()
    }

    #[test]
    fn exact_curve_values() {
        assert_eq!(remap_exact(73.0, 73.0, &p(5.0, 30.0)), 73.0);
        assert_eq!(remap_exact(12.0, 200.0, &p(0.0, 30.0)), 12.0);
        // 100 - 50 exp(-2500 / 1800)
        assert_abs_diff_eq!(remap_exact(100.0, 50.0, &p(1.0, 30.0)), 87.532_39, epsilon = 1e-4);
    }

    #[test]
    fn params_validation() {
        assert!(RemapParams::new(1.0, 0.0).is_err());
        assert!(RemapParams::new(1.0, -2.0).is_err());
        assert!(RemapParams::new(f64::NAN, 2.0).is_err());
        assert!(FourierExpansion::new(30.0, 0, 400.0).is_err());
        assert!(FourierExpansion::new(30.0, 3, 0.0).is_err());
    }

    #[test]
    fn coefficients_for_reference_period() {
        let exp = build_expansion(&p(1.0, 30.0), 10, 405.9).unwrap();
        // 2 pi / 405.9
        assert_abs_diff_eq!(exp.omega()[0], 0.015479_6, epsilon = 1e-6);
        // 30 sqrt(2 pi) / 405.9 * exp(-(30 w_1)^2 / 2)
        assert_abs_diff_eq!(exp.alpha()[1], 0.16633, epsilon = 1e-5);
        // 2 * 900 * a_1 * w_1
        assert_abs_diff_eq!(exp.alpha_tilde()[0], 4.634, epsilon = 1e-3);
    }

    #[test]
    fn coefficient_shapes() {
        let exp = FourierExpansion::new(30.0, 20, 492.7).unwrap();
        assert_eq!(exp.alpha().len(), 21);
        assert_eq!(exp.alpha_tilde().len(), 20);
        assert!(exp.omega().windows(2).all(|w| w[0] < w[1]));
        assert!(exp.alpha().windows(2).all(|w| w[0] > w[1]));
        assert!(exp.alpha_tilde().iter().all(|&a| a > 0.0));
        // a_k / a_0 = exp(-(w_k sigma)^2 / 2): log-ratio is quadratic in k.
        let log_ratio = |k: usize| (exp.alpha()[k] / exp.alpha()[0]).ln();
        let w1s = exp.omega()[0] * 30.0;
        for k in 1..=20 {
            assert_abs_diff_eq!(log_ratio(k), -0.5 * (k as f64 * w1s).powi(2), epsilon = 1e-9);
        }
        // Past the spectrum peak a~_k decays.
        let peak = (0..19).find(|&k| exp.alpha_tilde()[k + 1] < exp.alpha_tilde()[k]).unwrap();
        for k in peak..19 {
            assert!(exp.alpha_tilde()[k + 1] < exp.alpha_tilde()[k]);
        }
    }

    #[test]
    fn kernel_series_at_zero() {
        let t = optimize_period(30.0, 10, 256).unwrap();
        let exp = FourierExpansion::new(30.0, 10, t).unwrap();
        assert!((gauss_approx(0.0, &exp, 2.5) - 2.5).abs() < 1e-3 * 2.5);
        assert_eq!(gauss_approx(17.0, &exp, 0.0), 0.0);
    }

    #[test]
    fn kernel_series_sup_error_shrinks_with_order() {
        let sup = |k: usize| {
            let t = optimize_period(30.0, k, 256).unwrap();
            let exp = FourierExpansion::new(30.0, k, t).unwrap();
            (-2550..=2550)
                .map(|j| {
                    let d = j as f64 / 10.0;
                    (gauss_approx(d, &exp, 1.0) - (-d * d / 1800.0).exp()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e2, e4, e8) = (sup(2), sup(4), sup(8));
        assert!(e2 > e4 && e4 > e8, "{e2} {e4} {e8}");
    }

    #[test]
    fn fourier_identity_cases() {
        let exp = FourierExpansion::new(30.0, 7, 380.0).unwrap();
        for g in [0.0, 1.5, 127.0, 254.9] {
            assert_eq!(remap_fourier(g, g, &exp, 7.0), g);
        }
        assert_eq!(remap_fourier(40.0, 200.0, &exp, 0.0), 40.0);
    }

    #[test]
    fn fourier_matches_exact_on_unit_grid() {
        let t = optimize_period(30.0, 20, 256).unwrap();
        let exp = FourierExpansion::new(30.0, 20, t).unwrap();
        let params = p(1.0, 30.0);
        let mut worst: f64 = 0.0;
        for i in 0..=255 {
            for g in 0..=255 {
                let (i, g) = (i as f64, g as f64);
                worst = worst.max((remap_fourier(i, g, &exp, 1.0) - remap_exact(i, g, &params)).abs());
            }
        }
        assert!(worst < 0.5, "{worst}");
    }

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert_abs_diff_eq!(erfc(1.0), 0.157_299_207_050_285_1, epsilon = 1e-15);
        assert_abs_diff_eq!(erfc(-1.0), 1.842_700_792_949_715, epsilon = 1e-15);
        // Tabulated: erfc(3) = 2.209049699858544e-5, erfc(5) = 1.537459794428035e-12.
        assert_abs_diff_eq!(erfc(3.0) / 2.209_049_699_858_544e-5, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(erfc(5.0) / 1.537_459_794_428_035e-12, 1.0, epsilon = 1e-13);
        assert_eq!(erfc(40.0), 0.0);
        assert_eq!(erfc(-40.0), 2.0);
    }

    #[test]
    fn erfc_agrees_with_statrs() {
        for j in -600..=600 {
            let x = j as f64 / 100.0;
            let oracle = statrs::function::erf::erfc(x);
            assert!((erfc(x) - oracle).abs() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn erfc_relative_accuracy_in_tail() {
        // Reference values from a 30-digit evaluation, rounded to f64.
        let table = [
            (0.51, 0.470_756_380_158_829_56),
            (1.99, 0.004_888_586_800_383_003),
            (2.0, 0.004_677_734_981_047_266),
            (2.5, 0.000_406_952_017_444_959),
            (10.0, 2.088_487_583_762_545e-45),
            (20.0, 5.395_865_611_607_901e-176),
        ];
        for (x, expected) in table {
            assert!(((erfc(x) - expected) / expected).abs() < 1e-13, "x = {x}: {}", erfc(x));
        }
    }

    #[test]
    fn period_for_reference_setup() {
        let t = optimize_period(30.0, DEFAULT_ORDER, 256).unwrap();
        assert!((400.0..=412.0).contains(&t), "{t}");
        let (lo, hi) = period_bracket(30.0, 256);
        let e = |t| period_error(t, 30.0, DEFAULT_ORDER, 256);
        assert!(e(t) < e(lo).min(e(hi)));
    }

    #[test]
    fn period_grows_with_order() {
        let mut prev = 0.0;
        for k in 2..=20 {
            let t = optimize_period(30.0, k, 256).unwrap();
            // Brute-force reference on a 0.01 grid.
            let (lo, hi) = period_bracket(30.0, 256);
            let n = ((hi - lo) / 0.01) as usize;
            let grid = (0..=n)
                .map(|i| lo + 0.01 * i as f64)
                .min_by(|a, b| period_error(*a, 30.0, k, 256).total_cmp(&period_error(*b, 30.0, k, 256)))
                .unwrap();
            assert!((t - grid).abs() < 0.02, "K = {k}: {t} vs {grid}");
            assert!(t >= prev - 1e-3, "K = {k}");
            prev = t;
        }
    }

    #[test]
    fn period_rejects_bad_input() {
        assert!(optimize_period(0.0, 3, 256).is_err());
        assert!(optimize_period(30.0, 0, 256).is_err());
        assert!(optimize_period(30.0, 3, 1).is_err());
    }

    proptest! {
        #[test]
        fn erfc_symmetry(x in -8.0f64..8.0) {
            prop_assert!((erfc(-x) - (2.0 - erfc(x))).abs() < 1e-15);
        }

        #[test]
        fn remap_is_odd_about_reference(g in 0.0f64..255.0, d in 0.0f64..255.0, m in -8.0f64..8.0) {
            let params = p(m, 30.0);
            let up = remap_exact(g + d, g, &params) - g;
            let down = remap_exact(g - d, g, &params) - g;
            prop_assert!((up + down).abs() < 1e-9);

            let exp = FourierExpansion::new(30.0, 12, 424.9).unwrap();
            let up = remap_fourier(g + d, g, &exp, m) - g;
            let down = remap_fourier(g - d, g, &exp, m) - g;
            prop_assert!((up + down).abs() < 1e-9);
        }
    }
}
