//! The `.fbz` container: a 14-byte header followed by four control points per
//! ridge, every coordinate a signed 24.8 fixed-point little-endian `i32`.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "FPBZ"
//! 4       1     version (1)
//! 5       1     reserved (0)
//! 6       2     width, u16 LE
//! 8       2     height, u16 LE
//! 10      4     ridge count n, u32 LE
//! 14      32·n  per ridge: p0.x p0.y p1.x p1.y p2.x p2.y p3.x p3.y, i32 LE
//! ```

use thiserror::Error;

use crate::bezier::{CubicBezier, Point2};

pub const MAGIC: [u8; 4] = *b"FPBZ";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 14;
pub const RIDGE_LEN: usize = 32;
/// Fixed-point scale: 8 fractional bits.
pub const FIXED_ONE: f64 = 256.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("bad magic {0:02X?} (expected \"FPBZ\")")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("reserved byte must be 0, found {0}")]
    ReservedNonZero(u8),
    #[error("truncated stream at offset {offset}: need {needed} bytes, have {available}")]
    Truncated {
        offset: usize,
        needed: usize,
        available: usize,
    },
    #[error("{0} trailing bytes after the last ridge")]
    TrailingBytes(usize),
    #[error("coordinate {0} not representable in signed 24.8 fixed point")]
    CoordinateOverflow(f64),
    #[error("image dimensions must be 1..=65535, got {0}x{1}")]
    InvalidDimensions(usize, usize),
    #[error("too many ridges ({0})")]
    TooManyRidges(usize),
    #[error("sizes must be positive (original {0}, compressed {1})")]
    ZeroSize(u64, u64),
}

/// Decoded file contents: image size plus one cubic per ridge.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompressedFingerprint {
    pub width: u16,
    pub height: u16,
    pub ridges: Vec<CubicBezier>,
}

impl CompressedFingerprint {
    pub fn new(width: usize, height: usize, ridges: Vec<CubicBezier>) -> Result<Self, CodecError> {
        let ok = |d: usize| (1..=u16::MAX as usize).contains(&d);
        if !ok(width) || !ok(height) {
            return Err(CodecError::InvalidDimensions(width, height));
        }
        Ok(Self {
            width: width as u16,
            height: height as u16,
            ridges,
        })
    }

    /// Rounds every coordinate to the 24.8 grid, as a round trip would.
    pub fn quantized(&self) -> Result<Self, CodecError> {
        let q = |v: f64| to_fixed(v).map(from_fixed);
        let mut ridges = Vec::with_capacity(self.ridges.len());
        for c in &self.ridges {
            let mut pts = [Point2::default(); 4];
            for (dst, src) in pts.iter_mut().zip(c.points()) {
                *dst = Point2::new(q(src.x)?, q(src.y)?);
            }
            ridges.push(CubicBezier::new(pts[0], pts[1], pts[2], pts[3]));
        }
        Ok(Self {
            width: self.width,
            height: self.height,
            ridges,
        })
    }
}

/// `round(v · 256)` as `i32`.
pub fn to_fixed(v: f64) -> Result<i32, CodecError> {
    let scaled = (v * FIXED_ONE).round();
    if !scaled.is_finite() || scaled < i32::MIN as f64 || scaled > i32::MAX as f64 {
        return Err(CodecError::CoordinateOverflow(v));
    }
    Ok(scaled as i32)
}

pub fn from_fixed(q: i32) -> f64 {
    f64::from(q) / FIXED_ONE
}

/// Exact size of an encoded file holding `ridges` curves.
pub fn encoded_len(ridges: usize) -> usize {
    HEADER_LEN + RIDGE_LEN * ridges
}

pub fn encode(cf: &CompressedFingerprint) -> Result<Vec<u8>, CodecError> {
    let count =
        u32::try_from(cf.ridges.len()).map_err(|_| CodecError::TooManyRidges(cf.ridges.len()))?;
    let mut out = Vec::with_capacity(encoded_len(cf.ridges.len()));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(0);
    out.extend_from_slice(&cf.width.to_le_bytes());
    out.extend_from_slice(&cf.height.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    for c in &cf.ridges {
        for p in c.points() {
            out.extend_from_slice(&to_fixed(p.x)?.to_le_bytes());
            out.extend_from_slice(&to_fixed(p.y)?.to_le_bytes());
        }
    }
    Ok(out)
}

/// Header fields, validated independently of the body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub version: u8,
    pub width: u16,
    pub height: u16,
    pub ridge_count: u32,
}

impl Header {
    pub fn expected_len(&self) -> usize {
        encoded_len(self.ridge_count as usize)
    }
}

fn take<'a>(bytes: &'a [u8], offset: usize, len: usize) -> Result<&'a [u8], CodecError> {
    bytes
        .get(offset..offset + len)
        .ok_or(CodecError::Truncated {
            offset,
            needed: len,
            available: bytes.len().saturating_sub(offset),
        })
}

pub fn decode_header(bytes: &[u8]) -> Result<Header, CodecError> {
    let magic: [u8; 4] = take(bytes, 0, 4)?.try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(CodecError::BadMagic(magic));
    }
    let version = take(bytes, 4, 1)?[0];
    if version != VERSION {
        return Err(CodecError::UnsupportedVersion(version));
    }
    let reserved = take(bytes, 5, 1)?[0];
    if reserved != 0 {
        return Err(CodecError::ReservedNonZero(reserved));
    }
    let u16_at = |off| take(bytes, off, 2).map(|b| u16::from_le_bytes([b[0], b[1]]));
    let width = u16_at(6)?;
    let height = u16_at(8)?;
    let count = take(bytes, 10, 4)?;
    let ridge_count = u32::from_le_bytes([count[0], count[1], count[2], count[3]]);
    if width == 0 || height == 0 {
        return Err(CodecError::InvalidDimensions(width.into(), height.into()));
    }
    Ok(Header {
        version,
        width,
        height,
        ridge_count,
    })
}

pub fn decode(bytes: &[u8]) -> Result<CompressedFingerprint, CodecError> {
    let header = decode_header(bytes)?;
    let n = header.ridge_count as usize;
    let mut ridges = Vec::with_capacity(n.min(bytes.len() / RIDGE_LEN));
    for r in 0..n {
        let offset = HEADER_LEN + r * RIDGE_LEN;
        let body = take(bytes, offset, RIDGE_LEN)?;
        let mut coords = body
            .chunks_exact(4)
            .map(|b| from_fixed(i32::from_le_bytes([b[0], b[1], b[2], b[3]])));
        let mut next = || {
            let x = coords.next().expect("8 coordinates per ridge");
            let y = coords.next().expect("8 coordinates per ridge");
            Point2::new(x, y)
        };
        ridges.push(CubicBezier::new(next(), next(), next(), next()));
    }
    let end = encoded_len(n);
    if bytes.len() > end {
        return Err(CodecError::TrailingBytes(bytes.len() - end));
    }
    Ok(CompressedFingerprint {
        width: header.width,
        height: header.height,
        ridges,
    })
}

/// Compression ratio `original / compressed`.
pub fn compression_stats(original_bytes: u64, compressed_bytes: u64) -> Result<f64, CodecError> {
    if original_bytes == 0 || compressed_bytes == 0 {
        return Err(CodecError::ZeroSize(original_bytes, compressed_bytes));
    }
    Ok(original_bytes as f64 / compressed_bytes as f64)
}
