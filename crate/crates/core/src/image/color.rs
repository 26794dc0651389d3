//! Full-range BT.601 YUV. Chroma planes are zero-centered and kept at full
//! resolution.

use super::{ColorImage, Image};
use crate::error::{Error, Result};

const KR: f64 = 0.299;
const KB: f64 = 0.114;
const KG: f64 = 1.0 - KR - KB;
const U_SCALE: f64 = 2.0 * (1.0 - KB);
const V_SCALE: f64 = 2.0 * (1.0 - KR);

/// Splits into `(Y, U, V)`. For in-gamut input `Y` is in `[0, 255]` and the
/// chroma planes in `[-127.5, 127.5]`, neutral at zero.
pub fn rgb_to_yuv(img: &ColorImage) -> (Image, Image, Image) {
    let [r, g, b] = img.planes();
    let (w, h) = img.dims();
    let n = w * h;
    let (mut y, mut u, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let (rv, gv, bv) = (r.data()[i], g.data()[i], b.data()[i]);
        let luma = KR * rv + KG * gv + KB * bv;
        y.push(luma);
        u.push((bv - luma) / U_SCALE);
        v.push((rv - luma) / V_SCALE);
    }
    (Image::from_parts(w, h, y), Image::from_parts(w, h, u), Image::from_parts(w, h, v))
}

pub fn yuv_to_rgb(y: &Image, u: &Image, v: &Image) -> Result<ColorImage> {
    Error::check_dims(y.dims(), u.dims())?;
    Error::check_dims(y.dims(), v.dims())?;
    let (w, h) = y.dims();
    let n = w * h;
    let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let luma = y.data()[i];
        let rv = luma + V_SCALE * v.data()[i];
        let bv = luma + U_SCALE * u.data()[i];
        r.push(rv);
        g.push((luma - KR * rv - KB * bv) / KG);
        b.push(bv);
    }
    ColorImage::from_planes(Image::from_parts(w, h, r), Image::from_parts(w, h, g), Image::from_parts(w, h, b))
}
