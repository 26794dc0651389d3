//! Local Laplacian filtering with three interchangeable engines.
//!
//! * [`llf::llf_naive`] rebuilds a Laplacian pyramid of the remapped image for
//!   every output coefficient. It is exact and slow and serves as the oracle.
//! * [`llf::llf_fast`] precomputes pyramids at sampled reference intensities and
//!   interpolates linearly between them.
//! * [`llf::llf_fourier`] expands the Gaussian range kernel in a truncated
//!   Fourier series, so the output pyramid becomes a product-sum of `2K + 1`
//!   Gaussian pyramids (`G[I]`, `G[cos(w_k I)]`, `G[sin(w_k I)]`) whose
//!   coefficients depend only on the reference intensity. Swapping the gain
//!   per pixel ([`llf::llf_fourier_adaptive`]) costs no extra pyramids.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default). Per-pixel arithmetic order never depends on the thread
//! count, so results are bit-identical with and without the feature.

pub mod error;
pub mod image;
pub mod llf;
pub mod metrics;
pub mod pyramid;
pub mod remap;

mod par;

pub use error::{Error, Result};
pub use image::{ColorImage, Image};
pub use llf::{GainMap, LlfConfig, Period};
pub use pyramid::{Kernel, Pyramid};
pub use remap::{FourierExpansion, RemapParams};

/// Number of tones of 8-bit input (`R`); intensities live in `[0, R - 1]`.
pub const TONES: usize = 256;

/// Largest representable intensity, `R - 1`.
pub const MAX_INTENSITY: f64 = (TONES - 1) as f64;
