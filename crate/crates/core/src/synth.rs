//! Deterministic synthetic fingerprints built from a sinusoidal phase field.
//!
//! Intensity is `128 − amplitude·cos(2π·φ(x, y))` plus Gaussian noise, so
//! ridges (integer phase) are dark. The phase combines a tilted plane wave,
//! a gentle long-wavelength bend, and ±1 phase singularities that create
//! ridge endings and bifurcations.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::raster::GrayImage;

pub const CORPUS_WIDTH: usize = 256;
pub const CORPUS_HEIGHT: usize = 288;

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    /// Nearly straight, gently bent ridges with scattered minutiae.
    Flow {
        /// Ridge direction in radians (0 = horizontal ridges).
        angle: f64,
        /// Peak lateral displacement of the bend, pixels.
        bend_amplitude: f64,
        /// Wavelength of the bend along the ridges, pixels.
        bend_wavelength: f64,
        bend_phase: f64,
        /// `(x, y, charge)` phase singularities.
        singularities: Vec<(f64, f64, f64)>,
    },
    /// Concentric rings around a core, a high-curvature whorl.
    Whorl { cx: f64, cy: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub width: usize,
    pub height: usize,
    /// Ridge-to-ridge distance in pixels.
    pub period: f64,
    pub amplitude: f64,
    pub noise_sigma: f64,
    pub pattern: Pattern,
    pub seed: u64,
}

impl SynthParams {
    /// Randomized low-curvature print for corpus slot `index`.
    pub fn low_curvature(index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 + index);
        let (w, h) = (CORPUS_WIDTH as f64, CORPUS_HEIGHT as f64);
        let count = rng.random_range(20..=32);
        let singularities = (0..count)
            .map(|_| {
                let x = rng.random_range(0.12 * w..0.88 * w);
                let y = rng.random_range(0.12 * h..0.88 * h);
                let charge = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                (x, y, charge)
            })
            .collect();
        Self {
            width: CORPUS_WIDTH,
            height: CORPUS_HEIGHT,
            period: rng.random_range(5.2..6.2),
            amplitude: 90.0,
            noise_sigma: 12.0,
            pattern: Pattern::Flow {
                angle: rng.random_range(-FRAC_PI_2..FRAC_PI_2),
                bend_amplitude: rng.random_range(3.0..10.0),
                bend_wavelength: rng.random_range(380.0..600.0),
                bend_phase: rng.random_range(0.0..TAU),
                singularities,
            },
            seed: index,
        }
    }

    /// Whorl centered near the image middle.
    pub fn whorl(index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3A0B_0000 + index);
        Self {
            width: CORPUS_WIDTH,
            height: CORPUS_HEIGHT,
            period: rng.random_range(5.2..6.2),
            amplitude: 90.0,
            noise_sigma: 10.0,
            pattern: Pattern::Whorl {
                cx: CORPUS_WIDTH as f64 * rng.random_range(0.4..0.6),
                cy: CORPUS_HEIGHT as f64 * rng.random_range(0.4..0.6),
            },
            seed: index,
        }
    }

    /// Phase in ridge periods at `(x, y)`.
    pub fn phase(&self, x: f64, y: f64) -> f64 {
        match &self.pattern {
            Pattern::Flow {
                angle,
                bend_amplitude,
                bend_wavelength,
                bend_phase,
                singularities,
            } => {
                let (s, c) = angle.sin_cos();
                let along = x * c + y * s;
                let across = -x * s + y * c;
                let bend = bend_amplitude * (TAU * along / bend_wavelength + bend_phase).sin();
                let twist: f64 = singularities
                    .iter()
                    .map(|&(sx, sy, q)| q * (y - sy).atan2(x - sx) / TAU)
                    .sum();
                (across + bend) / self.period + twist
            }
            Pattern::Whorl { cx, cy } => (x - cx).hypot(y - cy) / self.period,
        }
    }
}

pub fn synthetic_fingerprint(params: &SynthParams) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x0015_E0F5);
    let noise = Normal::new(0.0, params.noise_sigma.max(0.0)).expect("finite sigma");
    GrayImage::from_fn(params.width, params.height, |x, y| {
        let phi = params.phase(x as f64, y as f64);
        let v = 128.0 - params.amplitude * (TAU * phi).cos() + noise.sample(&mut rng);
        v.round().clamp(0.0, 255.0) as u8
    })
    .expect("valid synthetic dimensions")
}

/// `count` low-curvature prints of the default corpus size.
pub fn low_curvature_corpus(count: usize) -> Vec<GrayImage> {
    (0..count as u64)
        .map(|i| synthetic_fingerprint(&SynthParams::low_curvature(i)))
        .collect()
}
