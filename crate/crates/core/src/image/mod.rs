//! Image containers, PNM codec and color conversion.

pub mod color;
pub mod pnm;

pub use color::{rgb_to_yuv, yuv_to_rgb};
pub use pnm::{read_pnm, write_pnm, AnyImage};

use crate::error::{Error, Result};

/// A single-channel image of real-valued samples stored row-major:
/// pixel `(x, y)` lives at `data[y * width + x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        Ok(Self { width, height, data: vec![value; width * height] })
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height {
            return Err(Error::BufferSize { width, height, expected: width * height, actual: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut img = Self::new(width, height)?;
        for y in 0..height {
            for x in 0..width {
                img.data[y * width + x] = f(x, y);
            }
        }
        Ok(img)
    }

    /// Internal constructor for buffers whose size is known to be right.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert!(width > 0 && height > 0 && data.len() == width * height);
        Self { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image::from_parts(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Pixel-wise combination of two equally sized images.
    pub fn zip_map(&self, other: &Image, f: impl Fn(f64, f64) -> f64) -> Result<Image> {
        Error::check_dims(self.dims(), other.dims())?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Image::from_parts(self.width, self.height, data))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Copies the `w x h` block whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Image> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::invalid(
                "crop",
                format!("{w}x{h}+{x0}+{y0} does not fit in {}x{}", self.width, self.height),
            ));
        }
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            data.extend_from_slice(&self.row(y)[x0..x0 + w]);
        }
        Ok(Image::from_parts(w, h, data))
    }

    /// Centered `size x size` crop, or the whole image when it is smaller.
    pub fn center_crop(&self, size: usize) -> Image {
        let w = size.min(self.width).max(1);
        let h = size.min(self.height).max(1);
        self.crop((self.width - w) / 2, (self.height - h) / 2, w, h).expect("centered crop always fits")
    }

    /// Rounds to the nearest 8-bit level after clamping to `[0, 255]`.
    pub fn quantized(&self) -> Image {
        self.map(|v| quantize(v) as f64)
    }
}

/// Clamp to `[0, 255]`, then round half away from zero.
#[inline]
pub fn quantize(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, 255.0).round() as u8
}

/// Three full-resolution planes in red, green, blue order.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage {
    planes: [Image; 3],
}

impl ColorImage {
    pub fn from_planes(r: Image, g: Image, b: Image) -> Result<Self> {
        Error::check_dims(r.dims(), g.dims())?;
        Error::check_dims(r.dims(), b.dims())?;
        Ok(Self { planes: [r, g, b] })
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.planes[0].dims()
    }

    pub fn planes(&self) -> &[Image; 3] {
        &self.planes
    }

    pub fn into_planes(self) -> [Image; 3] {
        self.planes
    }

    pub fn center_crop(&self, size: usize) -> ColorImage {
        let [r, g, b] = &self.planes;
        ColorImage { planes: [r.center_crop(size), g.center_crop(size), b.center_crop(size)] }
    }
}
