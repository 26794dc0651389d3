use std::path::Path;

use anyhow::{Context, Result};
use fourier_llf::image::{read_pnm, rgb_to_yuv, write_pnm, AnyImage};
use fourier_llf::Image;

pub fn read_image(path: &Path) -> Result<AnyImage> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pnm(&bytes).with_context(|| format!("decoding {}", path.display()))
}

pub fn write_image(path: &Path, img: &AnyImage) -> Result<()> {
    std::fs::write(path, write_pnm(img)).with_context(|| format!("writing {}", path.display()))
}

/// The plane the filters run on: the image itself, or luma for color.
pub fn luma(img: AnyImage) -> Image {
    match img {
        AnyImage::Gray(gray) => gray,
        AnyImage::Color(color) => rgb_to_yuv(&color).0,
    }
}

/// Every sample of the image as one plane plus the channel count; color
/// planes are stacked vertically so PSNR runs over all channels.
pub fn read_samples(path: &Path) -> Result<(Image, usize)> {
    Ok(match read_image(path)? {
        AnyImage::Gray(gray) => (gray, 1),
        AnyImage::Color(color) => {
            let (w, h) = color.dims();
            let data = color.into_planes().into_iter().flat_map(Image::into_vec).collect();
            (Image::from_vec(w, 3 * h, data)?, 3)
        }
    })
}
