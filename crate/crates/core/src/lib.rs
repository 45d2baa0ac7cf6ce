//! Fingerprint compression with one cubic Bézier curve per ridge.
//!
//! The pipeline stages are:
//!
//! 1. [`preprocess`]: histogram equalization, block FFT enhancement, global
//!    binarization, orientation field, and clean/hbreak/spur cleanup.
//! 2. [`skeleton`]: two-subiteration checkerboard thinning and
//!    crossing-number minutiae.
//! 3. [`ridge`]: cutting the skeleton at bifurcations, labeling components
//!    and ordering each ridge's pixels.
//! 4. [`bezier`]: fitting and evaluating one cubic per ridge.
//! 5. [`codec`]: the bit-exact `.fbz` container (14-byte header plus 32 bytes
//!    per ridge).
//! 6. [`reconstruct`]: rasterizing curves back to a ridge image and scoring
//!    the overlay against the extracted ridges.
//!
//! [`pipeline`] chains them, and [`synth`] generates deterministic synthetic
//! prints for testing.

pub mod bezier;
pub mod codec;
pub mod pipeline;
pub mod preprocess;
pub mod raster;
pub mod reconstruct;
pub mod ridge;
pub mod skeleton;
pub mod synth;

pub use bezier::{CubicBezier, FitError, Point2};
pub use codec::{CodecError, CompressedFingerprint};
pub use pipeline::{PipelineConfig, PipelineError};
pub use raster::{BinaryImage, GrayImage};
pub use ridge::{Pixel, RidgePath};
