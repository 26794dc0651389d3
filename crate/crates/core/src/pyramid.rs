//! Gaussian and Laplacian pyramids over a separable 5-tap kernel.
//!
//! Borders use reflect-101 (mirror without repeating the edge sample).
//! Odd sizes halve with `ceil`, and upsampling always targets the recorded
//! finer dimensions, so any image size is accepted.
//!
//! Every full-frame operation here is a special case of a rectangle-restricted
//! one ([`Patch`] in, [`Patch`] out). The naive engine evaluates single
//! coefficients through the same code path on small rectangles, which makes
//! its footprint evaluation bit-identical to the full-frame definition.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::par;

/// Symmetric, normalized 5-tap smoothing kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel {
    taps: [f64; 5],
}

impl Default for Kernel {
    fn default() -> Self {
        Self::binomial()
    }
}

impl Kernel {
    /// `[1, 4, 6, 4, 1] / 16`, a Gaussian of standard deviation close to 1.
    pub const fn binomial() -> Self {
        Self { taps: [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0] }
    }

    pub fn new(taps: [f64; 5]) -> Result<Self> {
        if taps[0] != taps[4] || taps[1] != taps[3] {
            return Err(Error::invalid("kernel", "taps must be symmetric"));
        }
        let sum: f64 = taps.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("kernel", format!("taps sum to {sum}, not 1")));
        }
        Ok(Self { taps })
    }

    pub fn taps(&self) -> [f64; 5] {
        self.taps
    }

    /// Weighted sum written relative to the center sample. Because the taps
    /// sum to one this equals `sum(taps[t] * v[t])`, and constant input is
    /// reproduced exactly.
    #[inline]
    fn blend(&self, v: [f64; 5]) -> f64 {
        let c = v[2];
        c + self.taps[0] * ((v[0] - c) + (v[4] - c)) + self.taps[1] * ((v[1] - c) + (v[3] - c))
    }
}

/// Mirror `i` into `[0, n)` without repeating the edge sample.
#[inline]
pub(crate) fn reflect101(mut i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i;
        } else if i >= n {
            i = 2 * n - 2 - i;
        } else {
            return i as usize;
        }
    }
}

/// Size of the next coarser level.
#[inline]
pub fn half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Axis-aligned rectangle in the coordinates of one pyramid level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn full((w, h): (usize, usize)) -> Self {
        Self { x0: 0, y0: 0, w, h }
    }

    pub fn pixel(x: usize, y: usize) -> Self {
        Self { x0: x, y0: y, w: 1, h: 1 }
    }

    pub fn union(self, other: Rect) -> Rect {
        let x0 = self.x0.min(other.x0);
        let y0 = self.y0.min(other.y0);
        let x1 = (self.x0 + self.w).max(other.x0 + other.w);
        let y1 = (self.y0 + self.h).max(other.y0 + other.h);
        Rect { x0, y0, w: x1 - x0, h: y1 - y0 }
    }

    fn from_spans((x0, x1): (usize, usize), (y0, y1): (usize, usize)) -> Rect {
        Rect { x0, y0, w: x1 - x0 + 1, h: y1 - y0 + 1 }
    }
}

/// Values of one pyramid level restricted to `rect`.
#[derive(Clone, Debug)]
pub(crate) struct Patch {
    pub rect: Rect,
    pub data: Vec<f64>,
}

impl Patch {
    #[cfg(test)]
    pub fn from_image(img: Image) -> Self {
        Self { rect: Rect::full(img.dims()), data: img.into_vec() }
    }

    /// Evaluates `f(x, y)` over `rect` in level coordinates.
    pub fn from_fn(rect: Rect, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rect.w * rect.h);
        for y in rect.y0..rect.y0 + rect.h {
            for x in rect.x0..rect.x0 + rect.w {
                data.push(f(x, y));
            }
        }
        Self { rect, data }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x >= self.rect.x0 && x < self.rect.x0 + self.rect.w);
        debug_assert!(y >= self.rect.y0 && y < self.rect.y0 + self.rect.h);
        self.data[(y - self.rect.y0) * self.rect.w + (x - self.rect.x0)]
    }

    pub fn into_image(self) -> Image {
        debug_assert_eq!((self.rect.x0, self.rect.y0), (0, 0));
        Image::from_parts(self.rect.w, self.rect.h, self.data)
    }
}

/// Source indices feeding each decimated output sample along one axis.
fn down_axis(start: usize, len: usize, src_len: usize) -> Vec<[usize; 5]> {
    (start..start + len)
        .map(|o| {
            let c = 2 * o as isize;
            std::array::from_fn(|t| reflect101(c + t as isize - 2, src_len))
        })
        .collect()
}

/// Non-zero contributions to one upsampled sample: coarse indices and their
/// normalized weights, in tap order with duplicates merged.
#[derive(Clone, Copy, Debug)]
struct UpTap {
    idx: [usize; 5],
    w: [f64; 5],
    n: usize,
}

impl UpTap {
    #[inline]
    fn blend(&self, value: impl Fn(usize) -> f64) -> f64 {
        let v0 = value(self.idx[0]);
        let mut acc = v0;
        for i in 1..self.n {
            acc += self.w[i] * (value(self.idx[i]) - v0);
        }
        acc
    }
}

/// Zero insertion followed by the kernel scaled by two, expressed per output
/// sample. The weight sum is exactly one for every length above one; the
/// normalization only matters for a length-1 axis.
fn up_axis(start: usize, len: usize, fine_len: usize, kernel: &Kernel) -> Vec<UpTap> {
    (start..start + len)
        .map(|o| {
            let mut tap = UpTap { idx: [0; 5], w: [0.0; 5], n: 0 };
            for t in 0..5 {
                let j = reflect101(o as isize + t as isize - 2, fine_len);
                if !j.is_multiple_of(2) {
                    continue;
                }
                let weight = 2.0 * kernel.taps[t];
                match tap.idx[..tap.n].iter().position(|&i| i == j / 2) {
                    Some(k) => tap.w[k] += weight,
                    None => {
                        tap.idx[tap.n] = j / 2;
                        tap.w[tap.n] = weight;
                        tap.n += 1;
                    }
                }
            }
            let sum: f64 = tap.w[..tap.n].iter().sum();
            if sum != 1.0 {
                tap.w[..tap.n].iter_mut().for_each(|w| *w /= sum);
            }
            tap
        })
        .collect()
}

fn span(indices: impl IntoIterator<Item = usize>) -> (usize, usize) {
    indices.into_iter().fold((usize::MAX, 0), |(lo, hi), i| (lo.min(i), hi.max(i)))
}

/// Rectangle of the finer level needed to decimate into `out`.
pub(crate) fn down_source_rect(out: Rect, src_dims: (usize, usize)) -> Rect {
    let xs = span(down_axis(out.x0, out.w, src_dims.0).into_iter().flatten());
    let ys = span(down_axis(out.y0, out.h, src_dims.1).into_iter().flatten());
    Rect::from_spans(xs, ys)
}

/// Rectangle of the coarser level needed to upsample into `out`.
pub(crate) fn up_source_rect(out: Rect, fine_dims: (usize, usize), kernel: &Kernel) -> Rect {
    let coarse = |taps: Vec<UpTap>| span(taps.iter().flat_map(|t| t.idx[..t.n].to_vec()));
    let xs = coarse(up_axis(out.x0, out.w, fine_dims.0, kernel));
    let ys = coarse(up_axis(out.y0, out.h, fine_dims.1, kernel));
    Rect::from_spans(xs, ys)
}

/// Blur-and-decimate `src` (a patch of a level of size `src_dims`) into `out`.
pub(crate) fn downsample_patch(src: &Patch, src_dims: (usize, usize), out: Rect, kernel: &Kernel) -> Patch {
    let cols = down_axis(out.x0, out.w, src_dims.0);
    let rows = down_axis(out.y0, out.h, src_dims.1);
    let (r_lo, r_hi) = span(rows.iter().flatten().copied());

    let mut tmp = vec![0.0; (r_hi - r_lo + 1) * out.w];
    par::for_each_row(&mut tmp, out.w, |i, row| {
        let y = r_lo + i;
        for (dst, c) in row.iter_mut().zip(&cols) {
            *dst = kernel.blend(c.map(|x| src.at(x, y)));
        }
    });

    let mut data = vec![0.0; out.w * out.h];
    par::for_each_row(&mut data, out.w, |oy, row| {
        let r = rows[oy];
        for (ox, dst) in row.iter_mut().enumerate() {
            *dst = kernel.blend(r.map(|y| tmp[(y - r_lo) * out.w + ox]));
        }
    });
    Patch { rect: out, data }
}

/// Upsample `coarse` (a patch of the level below `fine_dims`) into `out`.
pub(crate) fn upsample_patch(coarse: &Patch, fine_dims: (usize, usize), out: Rect, kernel: &Kernel) -> Patch {
    let cols = up_axis(out.x0, out.w, fine_dims.0, kernel);
    let rows = up_axis(out.y0, out.h, fine_dims.1, kernel);
    let (r_lo, r_hi) = span(rows.iter().flat_map(|t| t.idx[..t.n].to_vec()));

    let mut tmp = vec![0.0; (r_hi - r_lo + 1) * out.w];
    par::for_each_row(&mut tmp, out.w, |i, row| {
        let cy = r_lo + i;
        for (dst, tap) in row.iter_mut().zip(&cols) {
            *dst = tap.blend(|cx| coarse.at(cx, cy));
        }
    });

    let mut data = vec![0.0; out.w * out.h];
    par::for_each_row(&mut data, out.w, |oy, row| {
        let tap = &rows[oy];
        for (ox, dst) in row.iter_mut().enumerate() {
            *dst = tap.blend(|cy| tmp[(cy - r_lo) * out.w + ox]);
        }
    });
    Patch { rect: out, data }
}

/// Separable blur followed by keeping even rows and columns.
pub fn downsample(img: &Image, kernel: &Kernel) -> Image {
    let out = Rect::full((half(img.width()), half(img.height())));
    let src = Patch { rect: Rect::full(img.dims()), data: img.data().to_vec() };
    downsample_patch(&src, img.dims(), out, kernel).into_image()
}

/// Zero insertion to `target_w x target_h` followed by the kernel scaled by
/// two per axis, so constant images are fixed points.
pub fn upsample(img: &Image, target_w: usize, target_h: usize, kernel: &Kernel) -> Result<Image> {
    if target_w == 0 || target_h == 0 || half(target_w) != img.width() || half(target_h) != img.height() {
        return Err(Error::invalid(
            "upsample target",
            format!("{target_w}x{target_h} does not halve to {}x{}", img.width(), img.height()),
        ));
    }
    Ok(upsample_unchecked(img, (target_w, target_h), kernel))
}

pub(crate) fn upsample_unchecked(img: &Image, fine_dims: (usize, usize), kernel: &Kernel) -> Image {
    let src = Patch { rect: Rect::full(img.dims()), data: img.data().to_vec() };
    upsample_patch(&src, fine_dims, Rect::full(fine_dims), kernel).into_image()
}

/// Largest level count for which every level but the last can still be
/// halved (a 1x1 level ends the chain).
pub fn max_levels(width: usize, height: usize) -> usize {
    let mut n = 1;
    let (mut w, mut h) = (width, height);
    while w > 1 || h > 1 {
        w = half(w);
        h = half(h);
        n += 1;
    }
    n
}

pub(crate) fn check_levels(img: &Image, num_levels: usize) -> Result<()> {
    if num_levels < 2 {
        return Err(Error::invalid("num_levels", format!("need at least 2, got {num_levels}")));
    }
    let max = max_levels(img.width(), img.height());
    if num_levels > max {
        return Err(Error::TooManyLevels { requested: num_levels, max, width: img.width(), height: img.height() });
    }
    Ok(())
}

/// An ordered stack of levels, finest first. Holds either a Gaussian or a
/// Laplacian decomposition; the level dimensions always follow the
/// `ceil(n / 2)` chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Pyramid {
    levels: Vec<Image>,
}

impl Pyramid {
    pub fn from_levels(levels: Vec<Image>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::invalid("pyramid", "need at least 2 levels"));
        }
        for pair in levels.windows(2) {
            let (w, h) = pair[0].dims();
            Error::check_dims((half(w), half(h)), pair[1].dims())?;
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[Image] {
        &self.levels
    }

    pub fn level(&self, l: usize) -> &Image {
        &self.levels[l]
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Index of the coarsest level.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn into_levels(self) -> Vec<Image> {
        self.levels
    }
}

pub fn build_gaussian(img: &Image, num_levels: usize) -> Result<Pyramid> {
    build_gaussian_with(img, num_levels, &Kernel::binomial())
}

pub fn build_gaussian_with(img: &Image, num_levels: usize, kernel: &Kernel) -> Result<Pyramid> {
    check_levels(img, num_levels)?;
    Ok(gaussian_unchecked(img.clone(), num_levels, kernel))
}

pub(crate) fn gaussian_unchecked(img: Image, num_levels: usize, kernel: &Kernel) -> Pyramid {
    let mut levels = Vec::with_capacity(num_levels);
    levels.push(img);
    for l in 1..num_levels {
        let next = downsample(&levels[l - 1], kernel);
        levels.push(next);
    }
    Pyramid { levels }
}

pub fn build_laplacian(img: &Image, num_levels: usize) -> Result<Pyramid> {
    build_laplacian_with(img, num_levels, &Kernel::binomial())
}

pub fn build_laplacian_with(img: &Image, num_levels: usize, kernel: &Kernel) -> Result<Pyramid> {
    let gauss = build_gaussian_with(img, num_levels, kernel)?;
    Ok(laplacian_from_gaussian(&gauss, kernel))
}

/// `L_l = G_l - up(G_{l+1})` below the top, `L_top = G_top`.
pub fn laplacian_from_gaussian(gauss: &Pyramid, kernel: &Kernel) -> Pyramid {
    let top = gauss.top();
    let mut levels: Vec<Image> = (0..top).map(|l| laplacian_level(gauss, l, kernel)).collect();
    levels.push(gauss.levels[top].clone());
    Pyramid { levels }
}

pub(crate) fn laplacian_level(gauss: &Pyramid, l: usize, kernel: &Kernel) -> Image {
    let fine = &gauss.levels[l];
    let up = upsample_unchecked(&gauss.levels[l + 1], fine.dims(), kernel);
    Image::from_parts(fine.width(), fine.height(), fine.data().iter().zip(up.data()).map(|(&g, &u)| g - u).collect())
}

/// Upsample from the coarsest level, adding each finer level in turn.
/// The level chain was validated when the pyramid was built.
pub fn collapse(pyr: &Pyramid) -> Image {
    collapse_with(pyr, &Kernel::binomial())
}

pub fn collapse_with(pyr: &Pyramid, kernel: &Kernel) -> Image {
    collapse_levels(&pyr.levels, kernel)
}

pub(crate) fn collapse_levels(levels: &[Image], kernel: &Kernel) -> Image {
    let mut out = levels[levels.len() - 1].clone();
    for level in levels[..levels.len() - 1].iter().rev() {
        let up = upsample_unchecked(&out, level.dims(), kernel);
        out = Image::from_parts(
            level.width(),
            level.height(),
            level.data().iter().zip(up.data()).map(|(&d, &u)| d + u).collect(),
        );
    }
    out
}
