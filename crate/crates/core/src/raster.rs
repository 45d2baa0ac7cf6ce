//! Grayscale and binary raster types plus PGM (P5/P2) reading and writing.
//!
//! Coordinates are `x` = column (rightward) and `y` = row (downward) with the
//! origin at the top-left corner. Pixels are stored row-major, so
//! `pixel(x, y) == pixels[y * width + x]`.

use thiserror::Error;

/// Largest width or height accepted by [`GrayImage`].
pub const MAX_DIMENSION: usize = 65535;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RasterError {
    #[error("invalid dimensions {width}x{height} (each must be in 1..=65535)")]
    InvalidDimensions { width: usize, height: usize },
    #[error("pixel buffer holds {found} samples, expected {expected}")]
    BufferSize { expected: usize, found: usize },
    #[error("foreground and background levels must differ (both {0})")]
    SameLevels(u8),
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("bad magic number (expected P5 or P2)")]
    BadMagic,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("zero dimension in header ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("dimension too large ({width}x{height}, limit 65535)")]
    DimensionTooLarge { width: usize, height: usize },
    #[error("unsupported maxval {0} (must be 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
}

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(RasterError::BufferSize {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, level: u8) -> Result<Self, RasterError> {
        Self::new(width, height, vec![level; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, RasterError> {
        check_dims(width, height)?;
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    /// Sample with edge replication for out-of-range coordinates.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    /// Pixelwise map preserving dimensions.
    pub fn map(&self, f: impl Fn(u8) -> u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<(), RasterError> {
    if width == 0 || height == 0 || width > MAX_DIMENSION || height > MAX_DIMENSION {
        return Err(RasterError::InvalidDimensions { width, height });
    }
    Ok(())
}

/// 1-bit raster; `true` marks a foreground (ridge) pixel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryImage {}x{}", self.width, self.height)?;
        for y in 0..self.height {
            let row: String = (0..self.width)
                .map(|x| if self.get(x, y) { '#' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, RasterError> {
        if bits.len() != width * height {
            return Err(RasterError::BufferSize {
                expected: width * height,
                found: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Builds an image from rows of `'#'` (foreground) and any other char.
    /// Handy for hand-drawn fixtures.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
        let mut img = Self::new(width, height);
        for (y, row) in rows.iter().enumerate() {
            for (x, ch) in row.chars().enumerate() {
                if ch == '#' {
                    img.set(x, y, true);
                }
            }
        }
        img
    }

    /// Foreground wherever `pred` holds for the gray level.
    pub fn from_gray(img: &GrayImage, pred: impl Fn(u8) -> bool) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            bits: img.pixels().iter().map(|&p| pred(p)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Out-of-image coordinates read as background.
    #[inline]
    pub fn get_or_zero(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Foreground pixels in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// True when every foreground pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryImage) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn same_dims(&self, other: &BinaryImage) -> Result<(), RasterError> {
        if self.width != other.width || self.height != other.height {
            return Err(RasterError::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// Renders set bits as `fg` and clear bits as `bg`.
pub fn binary_to_gray(img: &BinaryImage, fg: u8, bg: u8) -> Result<GrayImage, RasterError> {
    if fg == bg {
        return Err(RasterError::SameLevels(fg));
    }
    GrayImage::new(
        img.width(),
        img.height(),
        img.bits().iter().map(|&b| if b { fg } else { bg }).collect(),
    )
}

/// Header tokenizer that skips whitespace and `#` comments.
struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64, PgmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::BadHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PgmError::BadHeader(format!("{what} out of range")))
    }
}

/// Parses a binary (P5) or ASCII (P2) PGM with maxval ≤ 255.
///
/// Samples are returned as stored; a maxval below 255 is not rescaled.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(PgmError::BadMagic),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::ZeroDimension { width, height });
    }
    if width > MAX_DIMENSION || height > MAX_DIMENSION {
        return Err(PgmError::DimensionTooLarge { width, height });
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval.min(u32::MAX as u64) as u32));
    }
    let maxval = maxval as u32;
    let expected = width * height;

    let pixels = if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(PgmError::BadHeader("missing whitespace after maxval".into())),
        }
        let data = &bytes[cur.pos..];
        if data.len() < expected {
            return Err(PgmError::Truncated {
                expected,
                found: data.len(),
            });
        }
        let data = &data[..expected];
        if let Some(&v) = data.iter().find(|&&v| u32::from(v) > maxval) {
            return Err(PgmError::SampleOutOfRange {
                value: v.into(),
                maxval,
            });
        }
        data.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            cur.skip_space_and_comments();
            if cur.pos >= bytes.len() {
                return Err(PgmError::Truncated {
                    expected,
                    found: pixels.len(),
                });
            }
            let v = cur.number("sample")?;
            if v > u64::from(maxval) {
                return Err(PgmError::SampleOutOfRange {
                    value: v.min(u32::MAX as u64) as u32,
                    maxval,
                });
            }
            pixels.push(v as u8);
        }
        pixels
    };

    Ok(GrayImage {
        width,
        height,
        pixels,
    })
}

/// Serializes as binary P5 with maxval 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}
