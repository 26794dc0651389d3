//! Binary PGM (`P5`) and PPM (`P6`) with maxval 255.

use thiserror::Error;

use super::{quantize, ColorImage, Image};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PnmError {
    #[error("bad magic number: expected P5 or P6")]
    BadMagic,
    #[error("malformed {field}: {reason}")]
    BadField { field: &'static str, reason: String },
    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u64),
    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
}

/// A decoded anymap: `P5` yields a gray image, `P6` a color one.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyImage {
    Gray(Image),
    Color(ColorImage),
}

impl AnyImage {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            AnyImage::Gray(img) => img.dims(),
            AnyImage::Color(img) => img.dims(),
        }
    }
}

impl From<Image> for AnyImage {
    fn from(img: Image) -> Self {
        AnyImage::Gray(img)
    }
}

impl From<ColorImage> for AnyImage {
    fn from(img: ColorImage) -> Self {
        AnyImage::Color(img)
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &'static str) -> Result<u64, PnmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            let reason = match self.bytes.get(self.pos) {
                None => "unexpected end of header".to_string(),
                Some(b) => format!("unexpected byte {b:#04x}"),
            };
            return Err(PnmError::BadField { field, reason });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|e| PnmError::BadField { field, reason: format!("{e}") })
    }
}

fn positive_dim(value: u64, field: &'static str) -> Result<usize, PnmError> {
    match usize::try_from(value) {
        Ok(v) if v > 0 && v <= 1 << 24 => Ok(v),
        _ => Err(PnmError::BadField { field, reason: format!("{value} is out of range") }),
    }
}

/// Decodes a binary PGM or PPM. Header comments (`#` to end of line) are
/// accepted anywhere whitespace is.
pub fn read_pnm(bytes: &[u8]) -> Result<AnyImage, PnmError> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(PnmError::BadMagic),
    };
    let mut header = Header { bytes, pos: 2 };
    let width = positive_dim(header.number("width")?, "width")?;
    let height = positive_dim(header.number("height")?, "height")?;
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }
    match bytes.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        _ => {
            return Err(PnmError::BadField {
                field: "maxval",
                reason: "expected a single whitespace byte before the raster".into(),
            })
        }
    }

    let payload = &bytes[header.pos..];
    let expected = width * height * channels;
    if payload.len() < expected {
        return Err(PnmError::Truncated { expected, actual: payload.len() });
    }
    let payload = &payload[..expected];

    if channels == 1 {
        let data = payload.iter().map(|&b| f64::from(b)).collect();
        return Ok(AnyImage::Gray(Image::from_parts(width, height, data)));
    }
    let plane = |c: usize| {
        let data = payload.iter().skip(c).step_by(3).map(|&b| f64::from(b)).collect();
        Image::from_parts(width, height, data)
    };
    let color = ColorImage::from_planes(plane(0), plane(1), plane(2)).expect("planes share dims");
    Ok(AnyImage::Color(color))
}

/// Encodes as `P5` or `P6`. Samples are clamped to `[0, 255]` and rounded
/// half away from zero.
pub fn write_pnm(img: &AnyImage) -> Vec<u8> {
    match img {
        AnyImage::Gray(gray) => {
            let mut out = format!("P5\n{} {}\n255\n", gray.width(), gray.height()).into_bytes();
            out.extend(gray.data().iter().map(|&v| quantize(v)));
            out
        }
        AnyImage::Color(color) => {
            let mut out = format!("P6\n{} {}\n255\n", color.width(), color.height()).into_bytes();
            let [r, g, b] = color.planes();
            out.reserve(3 * r.len());
            for ((&r, &g), &b) in r.data().iter().zip(g.data()).zip(b.data()) {
                out.extend_from_slice(&[quantize(r), quantize(g), quantize(b)]);
            }
            out
        }
    }
}
