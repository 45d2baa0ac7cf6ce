//! Rasterizing stored curves and scoring them against the extracted ridges.

use std::fmt;

use crate::bezier::CubicBezier;
use crate::codec::CompressedFingerprint;
use crate::raster::{BinaryImage, GrayImage, RasterError};

/// Number of parameter steps for one curve: `6·L` for control-polygon length
/// `L`, which keeps consecutive samples within 0.5 px.
pub fn sample_steps(c: &CubicBezier) -> usize {
    let steps = (6.0 * c.control_polygon_length()).ceil();
    if steps.is_finite() {
        (steps as usize).max(2)
    } else {
        2
    }
}

/// Marks the nearest pixel of each curve sample, clipping anything outside
/// the image.
pub fn rasterize_curve(c: &CubicBezier, img: &mut BinaryImage) {
    let steps = sample_steps(c);
    for j in 0..=steps {
        let q = c.point_at(j as f64 / steps as f64);
        let (x, y) = ((q.x + 0.5).floor(), (q.y + 0.5).floor());
        if x >= 0.0 && y >= 0.0 && x < img.width() as f64 && y < img.height() as f64 {
            img.set(x as usize, y as usize, true);
        }
    }
}

pub fn rasterize(cf: &CompressedFingerprint) -> BinaryImage {
    let mut img = BinaryImage::new(cf.width.into(), cf.height.into());
    for c in &cf.ridges {
        rasterize_curve(c, &mut img);
    }
    img
}

/// Three-level overlay: 255 where neither image is set, 128 where exactly
/// one is, 0 where both are.
pub fn superimpose(
    extracted: &BinaryImage,
    reconstructed: &BinaryImage,
) -> Result<GrayImage, RasterError> {
    extracted.same_dims(reconstructed)?;
    let pixels = extracted
        .bits()
        .iter()
        .zip(reconstructed.bits())
        .map(|(&a, &b)| match (a, b) {
            (true, true) => 0,
            (false, false) => 255,
            _ => 128,
        })
        .collect();
    GrayImage::new(extracted.width(), extracted.height(), pixels)
}

/// Agreement between extracted and reconstructed ridge pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapReport {
    /// Fraction of extracted pixels within `tol` of a reconstructed pixel.
    pub forward_cover: f64,
    /// Fraction of reconstructed pixels within `tol` of an extracted pixel.
    pub reverse_cover: f64,
    /// Mean distance from extracted pixels to the nearest reconstructed pixel.
    pub mean_dist: f64,
    pub max_dist: f64,
    pub tol: f64,
}

impl fmt::Display for OverlapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "forward_cover: {:.6}", self.forward_cover)?;
        writeln!(f, "reverse_cover: {:.6}", self.reverse_cover)?;
        writeln!(f, "mean_dist: {:.6}", self.mean_dist)?;
        writeln!(f, "max_dist: {:.6}", self.max_dist)?;
        writeln!(f, "tol: {:.6}", self.tol)
    }
}

/// 1-D squared distance transform of a sampled function (lower envelope of
/// parabolas).
fn edt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        if f[q].is_infinite() {
            continue;
        }
        if f[v[0]].is_infinite() {
            v[0] = q;
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    if f[v[0]].is_infinite() {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

/// Exact squared Euclidean distance from every pixel to the nearest
/// foreground pixel; infinite everywhere when there is no foreground.
pub fn squared_distance_transform(img: &BinaryImage) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let mut grid: Vec<f64> = img
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { f64::INFINITY })
        .collect();
    let n = w.max(h);
    let (mut f, mut out) = (vec![0.0; n], vec![0.0; n]);
    let (mut v, mut z) = (vec![0usize; n], vec![0.0; n + 1]);
    for x in 0..w {
        for y in 0..h {
            f[y] = grid[y * w + x];
        }
        edt_1d(&f[..h], &mut out[..h], &mut v, &mut z);
        for y in 0..h {
            grid[y * w + x] = out[y];
        }
    }
    for y in 0..h {
        let row = &mut grid[y * w..(y + 1) * w];
        f[..w].copy_from_slice(row);
        edt_1d(&f[..w], &mut out[..w], &mut v, &mut z);
        row.copy_from_slice(&out[..w]);
    }
    grid
}

/// Distances from each foreground pixel of `from` to the nearest foreground
/// pixel of `to`.
fn directed_distances(from: &BinaryImage, to: &BinaryImage) -> Vec<f64> {
    let dt = squared_distance_transform(to);
    from.bits()
        .iter()
        .zip(&dt)
        .filter(|(&b, _)| b)
        .map(|(_, &d2)| d2.sqrt())
        .collect()
}

fn cover(distances: &[f64], tol: f64) -> f64 {
    if distances.is_empty() {
        return 1.0;
    }
    distances.iter().filter(|&&d| d <= tol).count() as f64 / distances.len() as f64
}

/// Cover fractions in both directions plus forward mean/max distance.
/// An empty source set counts as fully covered with zero distances.
pub fn overlap_metrics(
    extracted: &BinaryImage,
    reconstructed: &BinaryImage,
    tol: f64,
) -> Result<OverlapReport, RasterError> {
    extracted.same_dims(reconstructed)?;
    let forward = directed_distances(extracted, reconstructed);
    let reverse = directed_distances(reconstructed, extracted);
    let (mean_dist, max_dist) = if forward.is_empty() {
        (0.0, 0.0)
    } else {
        (
            forward.iter().sum::<f64>() / forward.len() as f64,
            forward.iter().copied().fold(0.0, f64::max),
        )
    };
    Ok(OverlapReport {
        forward_cover: cover(&forward, tol),
        reverse_cover: cover(&reverse, tol),
        mean_dist,
        max_dist,
        tol,
    })
}
