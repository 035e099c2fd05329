//! Binary PGM (P5, maxval 255) reading and writing.
//!
//! The writer emits one header comment recording the bitmap polarity, so the
//! output for a given bitmap is always the same bytes. The reader accepts any
//! comments and whitespace the netpbm format allows.

use thiserror::Error;

use crate::raster::{Bitmap, Polarity};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("PGM error at byte {offset}: {message}")]
pub struct PgmError {
    pub offset: usize,
    pub message: String,
}

pub fn encode(bitmap: &Bitmap) -> Vec<u8> {
    let header = format!(
        "P5\n# polarity {}\n{} {}\n255\n",
        bitmap.polarity().name(),
        bitmap.width(),
        bitmap.height()
    );
    let mut out = Vec::with_capacity(header.len() + bitmap.samples().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(bitmap.samples());
    out
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    polarity: Option<Polarity>,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> PgmError {
        PgmError { offset: self.pos, message: message.into() }
    }

    /// Skips whitespace and `#` comments, noting a polarity comment if present.
    fn skip_space(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    let start = self.pos + 1;
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                    let comment = String::from_utf8_lossy(&self.data[start..self.pos]);
                    if let Some(p) = comment.trim().strip_prefix("polarity ") {
                        if let Ok(p) = p.trim().parse() {
                            self.polarity = Some(p);
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, PgmError> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError { offset: start, message: format!("expected {what}") });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError { offset: start, message: format!("{what} out of range") })
    }
}

/// Parses a P5 image, returning the bitmap and the number of bytes consumed.
pub fn decode_prefix(data: &[u8]) -> Result<(Bitmap, usize), PgmError> {
    let mut c = Cursor { data, pos: 0, polarity: None };
    if !data.starts_with(b"P5") {
        return Err(c.err("missing P5 magic"));
    }
    c.pos = 2;
    let width = c.number("width")?;
    let height = c.number("height")?;
    let maxval_at = {
        c.skip_space();
        c.pos
    };
    let maxval = c.number("maxval")?;
    if maxval != 255 {
        return Err(PgmError { offset: maxval_at, message: format!("unsupported maxval {maxval}, expected 255") });
    }
    match data.get(c.pos) {
        Some(b) if b.is_ascii_whitespace() => c.pos += 1,
        _ => return Err(c.err("expected a single whitespace byte after maxval")),
    }
    if width == 0 || height == 0 {
        return Err(PgmError { offset: 2, message: format!("empty image {width}x{height}") });
    }
    let n = width
        .checked_mul(height)
        .ok_or(PgmError { offset: 2, message: "image dimensions overflow".into() })?;
    let end = c.pos + n;
    if data.len() < end {
        return Err(PgmError {
            offset: data.len(),
            message: format!("truncated raster: need {n} bytes, {} available", data.len() - c.pos),
        });
    }
    let bmp = Bitmap::new(width, height, data[c.pos..end].to_vec(), c.polarity.unwrap_or_default())
        .map_err(|e| PgmError { offset: c.pos, message: e.to_string() })?;
    Ok((bmp, end))
}

/// Parses a complete P5 file. Trailing bytes are an error.
pub fn decode(data: &[u8]) -> Result<Bitmap, PgmError> {
    let (bmp, used) = decode_prefix(data)?;
    if used != data.len() {
        return Err(PgmError { offset: used, message: format!("{} trailing bytes", data.len() - used) });
    }
    Ok(bmp)
}
