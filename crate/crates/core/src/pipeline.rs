//! End-to-end compression and evaluation with a single configuration value.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::bezier::{fit_error, fit_ridge, CubicBezier, FitError};
use crate::codec::{self, CodecError, CompressedFingerprint};
use crate::preprocess::{self, OrientationField, PreprocessError, Threshold};
use crate::raster::{BinaryImage, GrayImage, RasterError};
use crate::reconstruct::{self, OverlapReport};
use crate::ridge::{self, RidgePath};
use crate::skeleton::{self, MinutiaPoint};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

/// Which intensity the ridges have in the input image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RidgePolarity {
    /// Dark ridges on a light background, as scanned prints look.
    #[default]
    Dark,
    Bright,
}

impl FromStr for RidgePolarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dark" => Ok(RidgePolarity::Dark),
            "bright" => Ok(RidgePolarity::Bright),
            _ => Err(format!("ridge polarity must be dark or bright, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub fft_block: usize,
    pub fft_k: f64,
    pub threshold: Threshold,
    pub orientation_block: usize,
    pub spur_iters: usize,
    /// Longest skeleton side branch removed before minutiae detection.
    pub prune_len: usize,
    pub min_ridge_px: usize,
    pub tol: f64,
    pub ridge_polarity: RidgePolarity,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            fft_block: 32,
            fft_k: 0.45,
            threshold: Threshold::Auto,
            orientation_block: 16,
            spur_iters: 3,
            prune_len: 3,
            min_ridge_px: 4,
            tol: 2.0,
            ridge_polarity: RidgePolarity::Dark,
        }
    }
}

impl PipelineConfig {
    /// Sets one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("invalid value {v:?} for {key}"))
        }
        match key {
            "fft_block" => self.fft_block = num(key, value)?,
            "fft_k" => self.fft_k = num(key, value)?,
            "threshold" => self.threshold = value.parse()?,
            "orientation_block" => self.orientation_block = num(key, value)?,
            "spur_iters" => self.spur_iters = num(key, value)?,
            "prune_len" => self.prune_len = num(key, value)?,
            "min_ridge_px" => self.min_ridge_px = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "ridge_polarity" => self.ridge_polarity = value.parse()?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Applies a `key = value` file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), PipelineError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PipelineError::Config {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key=value".into()))?;
            self.set(key.trim(), value.trim()).map_err(err)?;
        }
        self.validate()
            .map_err(|message| PipelineError::Config { line: 0, message })
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.fft_block == 0 {
            return Err("fft_block must be >= 1".into());
        }
        if !(self.fft_k.is_finite() && self.fft_k >= 0.0) {
            return Err("fft_k must be finite and >= 0".into());
        }
        if self.orientation_block < 3 {
            return Err("orientation_block must be >= 3".into());
        }
        if self.min_ridge_px < 2 {
            return Err("min_ridge_px must be >= 2".into());
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err("tol must be finite and >= 0".into());
        }
        Ok(())
    }
}

/// Every intermediate product of one compression run.
#[derive(Debug, Clone)]
pub struct Stages {
    pub equalized: Option<GrayImage>,
    pub enhanced: Option<GrayImage>,
    pub binary: BinaryImage,
    pub orientation: Option<OrientationField>,
    pub cleaned: BinaryImage,
    pub skeleton: BinaryImage,
    pub pruned: BinaryImage,
    pub minutiae: Vec<MinutiaPoint>,
    pub disconnected: BinaryImage,
}

#[derive(Debug, Clone)]
pub struct Compression {
    pub stages: Stages,
    pub paths: Vec<RidgePath>,
    /// Fitted curves before fixed-point quantization.
    pub curves: Vec<CubicBezier>,
    pub fingerprint: CompressedFingerprint,
    pub encoded: Vec<u8>,
}

impl Compression {
    pub fn ridge_count(&self) -> usize {
        self.fingerprint.ridges.len()
    }

    /// Ridge pixels as traced, before curve fitting.
    pub fn extracted_image(&self) -> BinaryImage {
        let (w, h) = (self.stages.skeleton.width(), self.stages.skeleton.height());
        ridge::paths_to_image(&self.paths, w, h)
    }
}

fn finish(
    binary: BinaryImage,
    equalized: Option<GrayImage>,
    enhanced: Option<GrayImage>,
    orientation: Option<OrientationField>,
    cfg: &PipelineConfig,
    cleanup: bool,
) -> Result<Compression, PipelineError> {
    let cleaned = if cleanup {
        preprocess::morph_cleanup(&binary, cfg.spur_iters)
    } else {
        binary.clone()
    };
    let skeleton = skeleton::skeletonize(&cleaned);
    let pruned = skeleton::prune_spurs(&skeleton, cfg.prune_len);
    let minutiae = skeleton::find_minutiae(&pruned);
    let disconnected = ridge::disconnect_at_minutiae(&pruned, &minutiae);
    let paths = ridge::extract_ridges(&disconnected, cfg.min_ridge_px);
    let curves: Vec<CubicBezier> = paths.iter().map(fit_ridge).collect();
    let raw = CompressedFingerprint::new(binary.width(), binary.height(), curves.clone())?;
    let encoded = codec::encode(&raw)?;
    let fingerprint = codec::decode(&encoded)?;
    Ok(Compression {
        stages: Stages {
            equalized,
            enhanced,
            binary,
            orientation,
            cleaned,
            skeleton,
            pruned,
            minutiae,
            disconnected,
        },
        paths,
        curves,
        fingerprint,
        encoded,
    })
}

/// equalize → enhance → binarize → orientation (diagnostic) → cleanup →
/// skeletonize → prune → minutiae → disconnect → label/order → fit → encode.
pub fn compress(img: &GrayImage, cfg: &PipelineConfig) -> Result<Compression, PipelineError> {
    cfg.validate()
        .map_err(|message| PipelineError::Config { line: 0, message })?;
    let equalized = preprocess::histogram_equalize(img);
    let enhanced = preprocess::fft_enhance(&equalized, cfg.fft_block, cfg.fft_k)?;
    let oriented = match cfg.ridge_polarity {
        RidgePolarity::Dark => enhanced.map(|p| 255 - p),
        RidgePolarity::Bright => enhanced.clone(),
    };
    let binary = preprocess::binarize(&oriented, cfg.threshold);
    let orientation = preprocess::estimate_orientation(&enhanced, cfg.orientation_block)?;
    finish(
        binary,
        Some(equalized),
        Some(enhanced),
        Some(orientation),
        cfg,
        true,
    )
}

/// Starts from an already-binary ridge image: pixels below 128 are ridges.
/// Cleanup is skipped; thinning onward runs as usual.
pub fn compress_binary(img: &GrayImage, cfg: &PipelineConfig) -> Result<Compression, PipelineError> {
    cfg.validate()
        .map_err(|message| PipelineError::Config { line: 0, message })?;
    let binary = BinaryImage::from_gray(img, |p| p < 128);
    finish(binary, None, None, None, cfg, false)
}

/// Ridges black on white.
pub fn decompress(cf: &CompressedFingerprint) -> Result<GrayImage, PipelineError> {
    Ok(crate::raster::binary_to_gray(
        &reconstruct::rasterize(cf),
        0,
        255,
    )?)
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub compression: Compression,
    pub reconstructed: BinaryImage,
    pub overlay: GrayImage,
    pub overlap: OverlapReport,
    pub fit_errors: Vec<FitError>,
    pub original_bytes: usize,
}

impl Evaluation {
    pub fn ratio(&self) -> f64 {
        self.original_bytes as f64 / self.compression.encoded.len() as f64
    }

    /// `key: value` lines followed by one line per ridge.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let c = &self.compression;
        let _ = writeln!(s, "ridges: {}", c.ridge_count());
        let _ = writeln!(s, "original_bytes: {}", self.original_bytes);
        let _ = writeln!(s, "compressed_bytes: {}", c.encoded.len());
        let _ = writeln!(s, "ratio: {:.4}", self.ratio());
        let _ = writeln!(s, "minutiae: {}", c.stages.minutiae.len());
        s.push_str(&self.overlap.to_string());
        for (i, (e, p)) in self.fit_errors.iter().zip(&c.paths).enumerate() {
            let _ = writeln!(
                s,
                "ridge {i}: pixels={} rms={:.4} max={:.4}",
                p.len(),
                e.rms,
                e.max
            );
        }
        s
    }
}

/// Compresses in memory, reconstructs from the decoded file and compares the
/// result with the traced ridge pixels.
pub fn evaluate(
    compression: Compression,
    original_bytes: usize,
    tol: f64,
) -> Result<Evaluation, PipelineError> {
    let extracted = compression.extracted_image();
    let reconstructed = reconstruct::rasterize(&compression.fingerprint);
    let overlay = reconstruct::superimpose(&extracted, &reconstructed)?;
    let overlap = reconstruct::overlap_metrics(&extracted, &reconstructed, tol)?;
    let fit_errors = compression
        .paths
        .iter()
        .zip(&compression.fingerprint.ridges)
        .map(|(p, c)| fit_error(c, p))
        .collect();
    Ok(Evaluation {
        compression,
        reconstructed,
        overlay,
        overlap,
        fit_errors,
        original_bytes,
    })
}
