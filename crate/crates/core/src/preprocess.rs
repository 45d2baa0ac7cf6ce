//! Grayscale preprocessing: histogram equalization, block FFT enhancement,
//! global binarization, gradient orientation field, and the clean / hbreak /
//! spur morphological cleanup applied before thinning.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

use crate::raster::{BinaryImage, GrayImage};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreprocessError {
    #[error("block size must be at least {min}, got {got}")]
    BlockTooSmall { min: usize, got: usize },
    #[error("enhancement exponent must be finite and non-negative, got {0}")]
    BadExponent(f64),
}

/// Maps grey levels through the normalized cumulative histogram.
///
/// `q = round(255 · (cdf(p) − cdf_min) / (N − cdf_min))`, where `cdf_min` is
/// the count of the darkest occupied level. An image with a single occupied
/// level is returned unchanged.
pub fn histogram_equalize(img: &GrayImage) -> GrayImage {
    let mut hist = [0usize; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.pixels().len();
    let mut cdf = [0usize; 256];
    let mut acc = 0;
    for (level, &count) in hist.iter().enumerate() {
        acc += count;
        cdf[level] = acc;
    }
    let cdf_min = hist.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if total == cdf_min {
        return img.clone();
    }
    let denom = (total - cdf_min) as f64;
    let mut lut = [0u8; 256];
    for level in 0..256 {
        let num = cdf[level].saturating_sub(cdf_min) as f64;
        lut[level] = (255.0 * num / denom).round() as u8;
    }
    img.map(|p| lut[p as usize])
}

/// Reusable square 2-D FFT of a fixed side length.
struct BlockFft {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    column: Vec<Complex64>,
}

impl BlockFft {
    fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
            column: vec![Complex64::default(); size],
        }
    }

    fn transform(&mut self, data: &mut [Complex64], inverse: bool) {
        let n = self.size;
        let fft = if inverse { &self.inverse } else { &self.forward };
        for row in data.chunks_exact_mut(n) {
            fft.process(row);
        }
        for x in 0..n {
            for y in 0..n {
                self.column[y] = data[y * n + x];
            }
            fft.process(&mut self.column);
            for y in 0..n {
                data[y * n + x] = self.column[y];
            }
        }
        if inverse {
            let scale = 1.0 / (n * n) as f64;
            data.iter_mut().for_each(|c| *c *= scale);
        }
    }

    /// Replaces each spectral coefficient `F` by `F · |F|^k` and returns the
    /// real part of the inverse transform.
    fn enhance(&mut self, block: &[f64], k: f64) -> Vec<f64> {
        let mut data: Vec<Complex64> = block.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, false);
        if k != 0.0 {
            for c in data.iter_mut() {
                *c *= c.norm().powf(k);
            }
        }
        self.transform(&mut data, true);
        data.into_iter().map(|c| c.re).collect()
    }
}

/// Spectral enhancement of one `size × size` block (row-major), without any
/// intensity renormalization: `real(IFFT(F · |F|^k))`.
pub fn enhance_block(block: &[f64], size: usize, k: f64) -> Vec<f64> {
    assert_eq!(block.len(), size * size, "block must be size x size");
    BlockFft::new(size).enhance(block, k)
}

/// Block-wise FFT enhancement.
///
/// The image is tiled into `block × block` squares (edge tiles zero-padded).
/// Each tile goes through [`enhance_block`], then the tile's in-image output is
/// mapped affinely back onto the input tile's `[min, max]` intensity range,
/// rounded and clamped.
pub fn fft_enhance(img: &GrayImage, block: usize, k: f64) -> Result<GrayImage, PreprocessError> {
    if block == 0 {
        return Err(PreprocessError::BlockTooSmall { min: 1, got: 0 });
    }
    if !k.is_finite() || k < 0.0 {
        return Err(PreprocessError::BadExponent(k));
    }
    let (w, h) = (img.width(), img.height());
    let mut out = img.clone();
    let mut fft = BlockFft::new(block);
    let mut tile = vec![0.0; block * block];

    for by in (0..h).step_by(block) {
        for bx in (0..w).step_by(block) {
            let (tw, th) = (block.min(w - bx), block.min(h - by));
            tile.iter_mut().for_each(|v| *v = 0.0);
            let (mut in_min, mut in_max) = (u8::MAX, u8::MIN);
            for y in 0..th {
                for x in 0..tw {
                    let v = img.get(bx + x, by + y);
                    in_min = in_min.min(v);
                    in_max = in_max.max(v);
                    tile[y * block + x] = f64::from(v);
                }
            }
            if in_min == in_max {
                continue;
            }
            let enhanced = fft.enhance(&tile, k);
            let (mut out_min, mut out_max) = (f64::INFINITY, f64::NEG_INFINITY);
            for y in 0..th {
                for x in 0..tw {
                    let v = enhanced[y * block + x];
                    out_min = out_min.min(v);
                    out_max = out_max.max(v);
                }
            }
            let span = out_max - out_min;
            if !(span > 1e-9 * out_max.abs().max(1.0)) {
                continue;
            }
            let scale = f64::from(in_max - in_min) / span;
            for y in 0..th {
                for x in 0..tw {
                    let v = f64::from(in_min) + (enhanced[y * block + x] - out_min) * scale;
                    out.set(bx + x, by + y, v.round().clamp(0.0, 255.0) as u8);
                }
            }
        }
    }
    Ok(out)
}

/// Global threshold selection for [`binarize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threshold {
    /// Maximize between-class variance over all 256 candidates.
    #[default]
    Auto,
    Fixed(u8),
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Auto => f.write_str("auto"),
            Threshold::Fixed(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Threshold::Auto);
        }
        s.parse::<u8>()
            .map(Threshold::Fixed)
            .map_err(|_| format!("threshold must be \"auto\" or 0..=255, got {s:?}"))
    }
}

/// Between-class variance score (up to the constant factor 1/N²) of splitting
/// into `{≤ t}` with `n0` pixels summing to `s0` and `{> t}` with `n1`, `s1`.
/// An empty class scores zero.
pub(crate) fn between_class_score(n0: u64, s0: u64, n1: u64, s1: u64) -> f64 {
    if n0 == 0 || n1 == 0 {
        return 0.0;
    }
    let (n0, n1) = (n0 as f64, n1 as f64);
    let mean_diff = s0 as f64 / n0 - s1 as f64 / n1;
    n0 * n1 * mean_diff * mean_diff
}

/// Threshold `t` maximizing between-class variance of `{≤ t}` vs `{> t}`;
/// the lowest maximizer wins ties.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total_n: u64 = hist.iter().sum();
    let total_s: u64 = hist.iter().enumerate().map(|(l, &c)| l as u64 * c).sum();
    let (mut n0, mut s0) = (0u64, 0u64);
    let mut best = (0u8, f64::NEG_INFINITY);
    for t in 0..256usize {
        n0 += hist[t];
        s0 += t as u64 * hist[t];
        let score = between_class_score(n0, s0, total_n - n0, total_s - s0);
        if score > best.1 {
            best = (t as u8, score);
        }
    }
    best.0
}

/// Pixels strictly brighter than the threshold become foreground.
pub fn binarize(img: &GrayImage, threshold: Threshold) -> BinaryImage {
    let t = match threshold {
        Threshold::Auto => otsu_threshold(img),
        Threshold::Fixed(t) => t,
    };
    BinaryImage::from_gray(img, |p| p > t)
}

/// Per-block ridge-flow direction in radians, each in `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationField {
    pub block_size: usize,
    pub cols: usize,
    pub rows: usize,
    pub angles: Vec<f64>,
}

impl OrientationField {
    pub fn angle(&self, col: usize, row: usize) -> f64 {
        self.angles[row * self.cols + col]
    }

    /// One gray pixel per block, angle scaled linearly from `[0, π)` to 0..=255.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(self.cols, self.rows, |c, r| {
            (self.angle(c, r) / PI * 255.0).round().clamp(0.0, 255.0) as u8
        })
        .expect("orientation field has at least one block")
    }
}

/// Gradient-based orientation estimate.
///
/// Gradients are central differences with edge replication. Per block,
/// `θ = ½·atan2(Σ 2·gx·gy, Σ (gx² − gy²)) + π/2` reduced into `[0, π)`, which
/// is perpendicular to the dominant gradient. Blocks without gradient energy
/// report 0.
pub fn estimate_orientation(
    img: &GrayImage,
    block: usize,
) -> Result<OrientationField, PreprocessError> {
    if block < 3 {
        return Err(PreprocessError::BlockTooSmall { min: 3, got: block });
    }
    let (w, h) = (img.width(), img.height());
    let cols = w.div_ceil(block);
    let rows = h.div_ceil(block);
    let mut angles = Vec::with_capacity(cols * rows);
    for row in 0..rows {
        for col in 0..cols {
            let (mut sxy, mut sxx_yy, mut energy) = (0.0, 0.0, 0.0);
            for y in row * block..((row + 1) * block).min(h) {
                for x in col * block..((col + 1) * block).min(w) {
                    let (xi, yi) = (x as isize, y as isize);
                    let gx = (f64::from(img.get_clamped(xi + 1, yi))
                        - f64::from(img.get_clamped(xi - 1, yi)))
                        / 2.0;
                    let gy = (f64::from(img.get_clamped(xi, yi + 1))
                        - f64::from(img.get_clamped(xi, yi - 1)))
                        / 2.0;
                    sxy += 2.0 * gx * gy;
                    sxx_yy += gx * gx - gy * gy;
                    energy += gx * gx + gy * gy;
                }
            }
            let theta = if energy == 0.0 {
                0.0
            } else {
                (0.5 * sxy.atan2(sxx_yy) + PI / 2.0).rem_euclid(PI)
            };
            // rem_euclid can round up to exactly π
            angles.push(if theta >= PI { 0.0 } else { theta });
        }
    }
    Ok(OrientationField {
        block_size: block,
        cols,
        rows,
        angles,
    })
}

/// 8-neighbor offsets in scan order.
const RING: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

fn neighbor_count(img: &BinaryImage, x: usize, y: usize) -> usize {
    RING.iter()
        .filter(|(dx, dy)| img.get_or_zero(x as isize + dx, y as isize + dy))
        .count()
}

/// Removes isolated foreground pixels (no 8-neighbors).
pub fn clean(img: &BinaryImage) -> BinaryImage {
    let mut out = img.clone();
    for (x, y) in img.foreground() {
        if neighbor_count(img, x, y) == 0 {
            out.set(x, y, false);
        }
    }
    out
}

/// Removes the center of H-shaped bridges:
///
/// ```text
/// # # #      # . #
/// . # .      # # #
/// # # #      # . #
/// ```
pub fn hbreak(img: &BinaryImage) -> BinaryImage {
    // Row-major 3x3 patterns including the center.
    const H_MASKS: [[bool; 9]; 2] = [
        [true, true, true, false, true, false, true, true, true],
        [true, false, true, true, true, true, true, false, true],
    ];
    let mut out = img.clone();
    for (x, y) in img.foreground() {
        let mut window = [false; 9];
        for (i, cell) in window.iter_mut().enumerate() {
            let (dx, dy) = ((i % 3) as isize - 1, (i / 3) as isize - 1);
            *cell = img.get_or_zero(x as isize + dx, y as isize + dy);
        }
        if H_MASKS.contains(&window) {
            out.set(x, y, false);
        }
    }
    out
}

/// Removes endpoint pixels (exactly one 8-neighbor), `iterations` times.
pub fn spur(img: &BinaryImage, iterations: usize) -> BinaryImage {
    let mut cur = img.clone();
    for _ in 0..iterations {
        let ends: Vec<_> = cur
            .foreground()
            .filter(|&(x, y)| neighbor_count(&cur, x, y) == 1)
            .collect();
        if ends.is_empty() {
            break;
        }
        for (x, y) in ends {
            cur.set(x, y, false);
        }
    }
    cur
}

/// `clean`, then `hbreak`, then `spur` repeated `spur_iters` times.
pub fn morph_cleanup(img: &BinaryImage, spur_iters: usize) -> BinaryImage {
    spur(&hbreak(&clean(img)), spur_iters)
}
