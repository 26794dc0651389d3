//! On-disk cache of naive-oracle outputs: `<dir>/<key>.f32` holds the
//! samples as little-endian `f32`, `<dir>/<key>.json` the configuration the
//! key was derived from. The key is the SHA-256 of that configuration.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fourier_llf::Image;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveKey {
    pub window: usize,
    pub gain_lo: f64,
    pub gain_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleKey {
    pub version: u32,
    /// SHA-256 of the input samples (little-endian `f64`).
    pub image_sha256: String,
    pub width: usize,
    pub height: usize,
    pub levels: usize,
    pub sigma_r: f64,
    pub gain: f64,
    pub adaptive: Option<AdaptiveKey>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    key: String,
    config: OracleKey,
}

impl OracleKey {
    pub fn new(img: &Image, levels: usize, sigma_r: f64, gain: f64, adaptive: Option<AdaptiveKey>) -> Self {
        let mut hasher = Sha256::new();
        for v in img.data() {
            hasher.update(v.to_le_bytes());
        }
        Self {
            version: FORMAT_VERSION,
            image_sha256: hex::encode(hasher.finalize()),
            width: img.width(),
            height: img.height(),
            levels,
            sigma_r,
            gain,
            adaptive,
        }
    }

    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("key serializes");
        hex::encode(Sha256::digest(&json))
    }
}

pub struct OracleCache {
    dir: PathBuf,
}

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn paths(&self, key: &OracleKey) -> (PathBuf, PathBuf) {
        let digest = key.digest();
        (self.dir.join(format!("{digest}.f32")), self.dir.join(format!("{digest}.json")))
    }

    /// Cached output for `key`, or `compute()` stored and returned. Both
    /// paths return the `f32`-rounded samples so hits and misses agree
    /// bit for bit.
    pub fn get_or_compute(&self, key: &OracleKey, compute: impl FnOnce() -> Result<Image>) -> Result<(Image, bool)> {
        if let Some(img) = self.load(key) {
            return Ok((img, true));
        }
        let img = round_to_f32(&compute()?);
        self.store(key, &img)?;
        Ok((img, false))
    }

    fn load(&self, key: &OracleKey) -> Option<Image> {
        let (data_path, meta_path) = self.paths(key);
        let sidecar: Sidecar = serde_json::from_slice(&std::fs::read(meta_path).ok()?).ok()?;
        if sidecar.config != *key || sidecar.key != key.digest() {
            return None;
        }
        let bytes = std::fs::read(data_path).ok()?;
        if bytes.len() != 4 * key.width * key.height {
            return None;
        }
        let data = bytes.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64).collect();
        Image::from_vec(key.width, key.height, data).ok()
    }

    fn store(&self, key: &OracleKey, img: &Image) -> Result<()> {
        std::fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let (data_path, meta_path) = self.paths(key);
        let bytes: Vec<u8> = img.data().iter().flat_map(|&v| (v as f32).to_le_bytes()).collect();
        write(&data_path, &bytes)?;
        let sidecar = Sidecar { key: key.digest(), config: key.clone() };
        write(&meta_path, &serde_json::to_vec_pretty(&sidecar)?)
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn round_to_f32(img: &Image) -> Image {
    img.map(|v| v as f32 as f64)
}
