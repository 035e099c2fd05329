//! Grayscale bitmaps and text layout on the p-grid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::font::Font;
use crate::glyph::{GlyphDef, GlyphError, GridParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    /// Black ink (0) on white (255).
    #[default]
    DarkOnLight,
    /// White ink (255) on black (0). Emission images use this.
    LightOnDark,
}

impl Polarity {
    pub fn ink(self) -> u8 {
        match self {
            Polarity::DarkOnLight => 0,
            Polarity::LightOnDark => 255,
        }
    }

    pub fn background(self) -> u8 {
        255 - self.ink()
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarity::DarkOnLight => "dark-on-light",
            Polarity::LightOnDark => "light-on-dark",
        }
    }
}

impl FromStr for Polarity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dark-on-light" => Ok(Polarity::DarkOnLight),
            "light-on-dark" => Ok(Polarity::LightOnDark),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}

/// Row-major 8-bit luminance image.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    width: usize,
    height: usize,
    samples: Vec<u8>,
    polarity: Polarity,
}

impl fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bitmap")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("polarity", &self.polarity)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitmapError {
    #[error("bitmap dimensions must be positive, got {0}x{1}")]
    Empty(usize, usize),
    #[error("expected {expected} samples for the dimensions, got {actual}")]
    Length { expected: usize, actual: usize },
}

impl Bitmap {
    pub fn new(width: usize, height: usize, samples: Vec<u8>, polarity: Polarity) -> Result<Self, BitmapError> {
        if width == 0 || height == 0 {
            return Err(BitmapError::Empty(width, height));
        }
        if samples.len() != width * height {
            return Err(BitmapError::Length { expected: width * height, actual: samples.len() });
        }
        Ok(Bitmap { width, height, samples, polarity })
    }

    /// A constant image. Panics on a zero dimension.
    pub fn filled(width: usize, height: usize, value: u8, polarity: Polarity) -> Self {
        assert!(width > 0 && height > 0, "bitmap dimensions must be positive");
        Bitmap { width, height, samples: vec![value; width * height], polarity }
    }

    /// A blank canvas in the background colour of `polarity`.
    pub fn blank(width: usize, height: usize, polarity: Polarity) -> Self {
        Self::filled(width, height, polarity.background(), polarity)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.samples.chunks_exact(self.width)
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    /// Whether the sample at `(x, y)` is ink under this bitmap's polarity.
    pub fn is_ink(&self, x: usize, y: usize) -> bool {
        let v = self.get(x, y);
        match self.polarity {
            Polarity::DarkOnLight => v < 128,
            Polarity::LightOnDark => v >= 128,
        }
    }

    /// Fills `[x0, x1) x [y0, y1)`, clipped to the image.
    pub fn fill_rect(&mut self, x0: usize, y0: usize, x1: usize, y1: usize, v: u8) {
        let (x1, y1) = (x1.min(self.width), y1.min(self.height));
        for y in y0..y1 {
            if x0 < x1 {
                self.samples[y * self.width + x0..y * self.width + x1].fill(v);
            }
        }
    }

    /// Copies `src` with its top-left corner at `(x, y)`, clipped.
    pub fn blit(&mut self, src: &Bitmap, x: usize, y: usize) {
        for sy in 0..src.height {
            let ty = y + sy;
            if ty >= self.height {
                break;
            }
            let n = src.width.min(self.width.saturating_sub(x));
            if n == 0 {
                break;
            }
            let dst = ty * self.width + x;
            self.samples[dst..dst + n].copy_from_slice(&src.row(sy)[..n]);
        }
    }

    /// Copies ink samples of `src` only; background samples leave `self` untouched.
    pub fn blit_ink(&mut self, src: &Bitmap, x: usize, y: usize) {
        for sy in 0..src.height.min(self.height.saturating_sub(y)) {
            for sx in 0..src.width.min(self.width.saturating_sub(x)) {
                if src.is_ink(sx, sy) {
                    self.set(x + sx, y + sy, src.get(sx, sy));
                }
            }
        }
    }

    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Bitmap {
        assert!(x + w <= self.width && y + h <= self.height && w > 0 && h > 0, "crop out of bounds");
        let mut samples = Vec::with_capacity(w * h);
        for row in y..y + h {
            samples.extend_from_slice(&self.row(row)[x..x + w]);
        }
        Bitmap { width: w, height: h, samples, polarity: self.polarity }
    }

    /// Nearest-neighbour enlargement by an integer factor.
    pub fn upscale(&self, factor: usize) -> Bitmap {
        assert!(factor > 0);
        let (w, h) = (self.width * factor, self.height * factor);
        let mut samples = Vec::with_capacity(w * h);
        for y in 0..h {
            let src = self.row(y / factor);
            samples.extend(src.iter().flat_map(|&v| std::iter::repeat_n(v, factor)));
        }
        Bitmap { width: w, height: h, samples, polarity: self.polarity }
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> u64 {
        self.samples.iter().map(|&v| (v as u64) * (v as u64)).sum()
    }
}

#[derive(Debug, Error)]
pub enum RasterError {
    #[error(transparent)]
    Glyph(#[from] GlyphError),
    #[error("scale must be at least 1")]
    Scale,
    #[error("scale {requested} is not a multiple of the raster atlas scale {native}")]
    ScaleMismatch { requested: u32, native: u32 },
    #[error("no glyph for {}", format_missing(.0))]
    MissingGlyphs(Vec<char>),
}

fn format_missing(chars: &[char]) -> String {
    chars.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(", ")
}

/// Renders one glyph into a `(advance*s) x (h2*s)` binary image.
pub fn rasterize_glyph(glyph: &GlyphDef, params: &GridParams, s: u32) -> Result<Bitmap, RasterError> {
    if s == 0 {
        return Err(RasterError::Scale);
    }
    glyph.check_well_formed(params.h2)?;
    let s = s as usize;
    let pol = Polarity::DarkOnLight;
    let mut bmp = Bitmap::blank(glyph.advance as usize * s, params.h2 as usize * s, pol);
    for st in &glyph.strokes {
        bmp.fill_rect(
            st.x as usize * s,
            st.y as usize * s,
            st.right() as usize * s,
            st.bottom() as usize * s,
            pol.ink(),
        );
    }
    Ok(bmp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingGlyph {
    #[default]
    Fail,
    /// Draw a hollow box in place of the missing character.
    Tofu,
}

/// Layout parameters; distances in p-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub scale: u32,
    pub tracking: u32,
    pub leading: u32,
    pub margin: u32,
    #[serde(default)]
    pub missing: MissingGlyph,
}

impl Default for LayoutSpec {
    fn default() -> Self {
        LayoutSpec { scale: 1, tracking: 3, leading: 3, margin: 4, missing: MissingGlyph::Fail }
    }
}

/// Pixel cell occupied by one rendered glyph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtCell {
    pub ch: char,
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

#[derive(Debug, Clone)]
pub struct Rendered {
    pub bitmap: Bitmap,
    pub truth: Vec<GtCell>,
}

/// Lays `text` out left to right and top down. `'\n'` starts a new line;
/// spaces advance the cursor and are not recorded in the ground truth.
pub fn rasterize_text(text: &str, font: &Font, layout: &LayoutSpec) -> Result<Rendered, RasterError> {
    let s = layout.scale;
    if s == 0 {
        return Err(RasterError::Scale);
    }
    let su = s as usize;
    let metrics = font.metrics();
    let missing: Vec<char> = {
        let mut m: Vec<char> = text.chars().filter(|&c| c != '\n' && !font.has_glyph(c)).collect();
        m.sort_unstable();
        m.dedup();
        m
    };
    if !missing.is_empty() && layout.missing == MissingGlyph::Fail {
        return Err(RasterError::MissingGlyphs(missing));
    }

    struct Placed {
        ch: char,
        x: usize,
        y: usize,
        bitmap: Option<Bitmap>,
    }

    let line_h = metrics.line_height as usize * su;
    let line_step = line_h + layout.leading as usize * su;
    let tracking = layout.tracking as usize * su;
    let margin = layout.margin as usize * su;
    let mut placed = Vec::new();
    let mut max_right = 0usize;
    let mut lines = 0usize;

    if !text.is_empty() {
        for (li, line) in text.split('\n').enumerate() {
            lines = li + 1;
            let top = margin + li * line_step;
            let mut x = margin;
            for (ci, ch) in line.chars().enumerate() {
                if ci > 0 {
                    x += tracking;
                }
                let (bitmap, advance, desc) = match font.glyph(ch, s)? {
                    Some(g) => (g.bitmap, g.advance_px, g.has_descender),
                    None => {
                        let tofu = tofu_box(&metrics, s);
                        let w = tofu.width();
                        (Some(tofu), w, false)
                    }
                };
                let y = top + if desc { metrics.descender_shift as usize * su } else { 0 };
                placed.push(Placed { ch, x, y, bitmap });
                x += advance;
                max_right = max_right.max(x);
            }
        }
    }

    let width = if lines == 0 { 2 * margin } else { max_right + margin };
    let height = if lines == 0 { 2 * margin } else { margin * 2 + lines * line_h + (lines - 1) * layout.leading as usize * su };
    let mut canvas = Bitmap::blank(width.max(1), height.max(1), Polarity::DarkOnLight);
    let mut truth = Vec::new();
    for p in placed {
        if let Some(bmp) = p.bitmap {
            canvas.blit_ink(&bmp, p.x, p.y);
            if !p.ch.is_whitespace() {
                truth.push(GtCell { ch: p.ch, x: p.x, y: p.y, w: bmp.width(), h: bmp.height() });
            }
        }
    }
    Ok(Rendered { bitmap: canvas, truth })
}

fn tofu_box(metrics: &crate::font::LineMetrics, s: u32) -> Bitmap {
    let s = s as usize;
    let pol = Polarity::DarkOnLight;
    let (w, h) = (metrics.space_advance as usize * s, metrics.cell_height as usize * s);
    let mut b = Bitmap::blank(w, h, pol);
    let top = metrics.descender_shift as usize * s;
    b.fill_rect(0, top, w, top + s, pol.ink());
    b.fill_rect(0, h - s, w, h, pol.ink());
    b.fill_rect(0, top, s, h, pol.ink());
    b.fill_rect(w - s, top, w, h, pol.ink());
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    HBar,
    VBar,
    Checker,
    Flat,
}

/// Channel-validation fixtures, `(w*s) x (h*s)` pixels.
pub fn test_pattern(kind: PatternKind, w: usize, h: usize, s: usize, params: &GridParams) -> Bitmap {
    let pol = Polarity::DarkOnLight;
    let (w, h) = (w * s, h * s);
    let mut b = Bitmap::blank(w, h, pol);
    match kind {
        PatternKind::Flat => {}
        PatternKind::HBar => {
            let t = params.k as usize * s;
            let y0 = (h - t) / 2;
            b.fill_rect(0, y0, w, y0 + t, pol.ink());
        }
        PatternKind::VBar => {
            let t = params.stem_width() as usize * s;
            let x0 = (w - t) / 2;
            b.fill_rect(x0, 0, x0 + t, h, pol.ink());
        }
        PatternKind::Checker => {
            for y in 0..h {
                for x in 0..w {
                    if ((x / s) + (y / s)) % 2 == 1 {
                        b.set(x, y, pol.ink());
                    }
                }
            }
        }
    }
    b
}

/// Ground-truth sidecar: one `U+XXXX x y w h` record per line.
pub fn write_ground_truth(cells: &[GtCell]) -> String {
    let mut out = String::new();
    for c in cells {
        out.push_str(&format!("U+{:04X} {} {} {} {}\n", c.ch as u32, c.x, c.y, c.w, c.h));
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("ground truth line {line}: {message}")]
pub struct GroundTruthError {
    pub line: usize,
    pub message: String,
}

pub fn parse_ground_truth(text: &str) -> Result<Vec<GtCell>, GroundTruthError> {
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| GroundTruthError { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let hex = fields[0].strip_prefix("U+").ok_or_else(|| err("codepoint must look like U+0061".into()))?;
        let ch = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| err(format!("bad codepoint {}", fields[0])))?;
        let mut nums = [0usize; 4];
        for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| err(format!("bad number {f:?}")))?;
        }
        cells.push(GtCell { ch, x: nums[0], y: nums[1], w: nums[2], h: nums[3] });
    }
    Ok(cells)
}
