//! Fonts the pipeline can render: stroke atlases on the p-grid, and
//! pre-rendered raster atlases for comparison fonts that need diagonals and
//! curves.
//!
//! Raster atlas layout (text header, binary payloads):
//!
//! ```text
//! FONTLAB-RASTER 1
//! name sans-like
//! scale 2
//! cell 9 18
//! line 23 5
//! count 36
//! glyph U+0061 advance 9 descender 0
//! P5 ...one PGM image, (advance*scale) x (18*scale)...
//! glyph U+0062 advance 9 descender 0
//! ...
//! ```
//!
//! `cell` gives the nominal advance and the cell height in p-units, `line` the
//! line height and the downward shift applied to descender glyphs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::atlas::{self, AtlasError};
use crate::glyph::{builtin_glyphset, Family, GlyphSet, GridParams};
use crate::pgm::{self, PgmError};
use crate::raster::{rasterize_glyph, Bitmap, Polarity, RasterError};

pub const RASTER_MAGIC: &str = "FONTLAB-RASTER";

/// Vertical metrics shared by every glyph of a font, in p-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineMetrics {
    pub cell_height: u32,
    pub line_height: u32,
    pub descender_shift: u32,
    pub space_advance: u32,
}

impl LineMetrics {
    pub fn from_params(p: &GridParams) -> Self {
        LineMetrics { cell_height: p.h2, line_height: p.line_height(), descender_shift: p.w_asc, space_advance: p.w_std }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterGlyph {
    /// Advance in p-units.
    pub advance: u32,
    pub has_descender: bool,
    /// `(advance*scale) x (cell_height*scale)`, dark on light.
    pub bitmap: Bitmap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterAtlas {
    pub name: String,
    /// Pixels per p-unit of the stored bitmaps.
    pub scale: u32,
    pub metrics: LineMetrics,
    pub glyphs: BTreeMap<char, RasterGlyph>,
}

#[derive(Debug, Error)]
pub enum FontError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("raster atlas: {0}")]
    RasterFormat(String),
    #[error("raster atlas glyph payload: {0}")]
    Pgm(#[from] PgmError),
}

impl RasterAtlas {
    pub fn encode(&self) -> Vec<u8> {
        let m = &self.metrics;
        let mut out = format!(
            "{RASTER_MAGIC} 1\nname {}\nscale {}\ncell {} {}\nline {} {}\ncount {}\n",
            self.name,
            self.scale,
            m.space_advance,
            m.cell_height,
            m.line_height,
            m.descender_shift,
            self.glyphs.len()
        )
        .into_bytes();
        for (c, g) in &self.glyphs {
            out.extend_from_slice(
                format!("glyph U+{:04X} advance {} descender {}\n", *c as u32, g.advance, g.has_descender as u8).as_bytes(),
            );
            out.extend_from_slice(&pgm::encode(&g.bitmap));
            out.push(b'\n');
        }
        out
    }

    pub fn decode(data: &[u8]) -> Result<Self, FontError> {
        let bad = |m: String| FontError::RasterFormat(m);
        let mut pos = 0usize;
        let next_line = |pos: &mut usize| -> Result<String, FontError> {
            let rest = &data[*pos..];
            let end = rest.iter().position(|&b| b == b'\n').ok_or_else(|| bad(format!("unterminated line at byte {pos}")))?;
            let line = std::str::from_utf8(&rest[..end]).map_err(|_| bad(format!("non-UTF-8 header at byte {pos}")))?;
            *pos += end + 1;
            Ok(line.to_string())
        };
        let field = |line: &str, key: &str| -> Result<Vec<String>, FontError> {
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(bad(format!("expected `{key}` line, found {line:?}")));
            }
            Ok(parts.map(str::to_string).collect())
        };
        let num = |s: &str| -> Result<u32, FontError> { s.parse().map_err(|_| bad(format!("bad number {s:?}"))) };

        let magic = next_line(&mut pos)?;
        if magic != format!("{RASTER_MAGIC} 1") {
            return Err(bad(format!("bad magic line {magic:?}")));
        }
        let name = field(&next_line(&mut pos)?, "name")?.join(" ");
        let scale = num(field(&next_line(&mut pos)?, "scale")?.first().map(String::as_str).unwrap_or(""))?;
        let cell = field(&next_line(&mut pos)?, "cell")?;
        let line = field(&next_line(&mut pos)?, "line")?;
        let count = num(field(&next_line(&mut pos)?, "count")?.first().map(String::as_str).unwrap_or(""))?;
        if cell.len() != 2 || line.len() != 2 || scale == 0 {
            return Err(bad("malformed cell/line/scale header".into()));
        }
        let metrics = LineMetrics {
            space_advance: num(&cell[0])?,
            cell_height: num(&cell[1])?,
            line_height: num(&line[0])?,
            descender_shift: num(&line[1])?,
        };
        let mut glyphs = BTreeMap::new();
        for _ in 0..count {
            let header = field(&next_line(&mut pos)?, "glyph")?;
            if header.len() != 5 || header[1] != "advance" || header[3] != "descender" {
                return Err(bad(format!("malformed glyph header {header:?}")));
            }
            let ch = header[0]
                .strip_prefix("U+")
                .and_then(|h| u32::from_str_radix(h, 16).ok())
                .and_then(char::from_u32)
                .ok_or_else(|| bad(format!("bad codepoint {}", header[0])))?;
            let advance = num(&header[2])?;
            let has_descender = match header[4].as_str() {
                "0" => false,
                "1" => true,
                other => return Err(bad(format!("descender flag must be 0 or 1, got {other}"))),
            };
            let (bitmap, used) = pgm::decode_prefix(&data[pos..]).map_err(|e| PgmError { offset: e.offset + pos, ..e })?;
            pos += used;
            if data.get(pos) == Some(&b'\n') {
                pos += 1;
            }
            let expect = ((advance * scale) as usize, (metrics.cell_height * scale) as usize);
            if (bitmap.width(), bitmap.height()) != expect {
                return Err(bad(format!(
                    "glyph {ch:?} is {}x{}, expected {}x{}",
                    bitmap.width(),
                    bitmap.height(),
                    expect.0,
                    expect.1
                )));
            }
            if glyphs.insert(ch, RasterGlyph { advance, has_descender, bitmap }).is_some() {
                return Err(bad(format!("duplicate glyph {ch:?}")));
            }
        }
        if pos != data.len() {
            return Err(bad(format!("{} trailing bytes", data.len() - pos)));
        }
        Ok(RasterAtlas { name, scale, metrics, glyphs })
    }
}

/// A glyph ready to be placed on a line.
#[derive(Debug, Clone)]
pub struct FontGlyph {
    /// `None` for blank glyphs such as space.
    pub bitmap: Option<Bitmap>,
    pub advance_px: usize,
    pub has_descender: bool,
}

#[derive(Debug, Clone)]
pub enum Font {
    Stroke { label: String, set: GlyphSet, params: GridParams },
    Raster(RasterAtlas),
}

impl Font {
    pub fn builtin(family: Family) -> Self {
        Font::Stroke { label: family.name().to_string(), set: builtin_glyphset(family), params: family.params() }
    }

    /// Loads a stroke atlas or a raster atlas, told apart by the magic line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, FontError> {
        let path = path.as_ref();
        let data = fs::read(path).map_err(|source| FontError::Io { path: path.display().to_string(), source })?;
        if data.starts_with(RASTER_MAGIC.as_bytes()) {
            return Ok(Font::Raster(RasterAtlas::decode(&data)?));
        }
        let text = String::from_utf8(data).map_err(|_| FontError::RasterFormat("atlas is neither raster nor UTF-8 text".into()))?;
        let (set, params) = atlas::from_atlas_str(&text)?;
        let label = match params.family {
            Some(f) => f.name().to_string(),
            None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "atlas".into()),
        };
        Ok(Font::Stroke { label, set, params })
    }

    pub fn label(&self) -> &str {
        match self {
            Font::Stroke { label, .. } => label,
            Font::Raster(a) => &a.name,
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Font::Stroke { params, .. } => params.family,
            Font::Raster(_) => None,
        }
    }

    pub fn metrics(&self) -> LineMetrics {
        match self {
            Font::Stroke { params, .. } => LineMetrics::from_params(params),
            Font::Raster(a) => a.metrics,
        }
    }

    /// Characters with a glyph, in codepoint order.
    pub fn chars(&self) -> Vec<char> {
        match self {
            Font::Stroke { set, .. } => set.keys().copied().collect(),
            Font::Raster(a) => a.glyphs.keys().copied().collect(),
        }
    }

    pub fn has_glyph(&self, c: char) -> bool {
        c == ' '
            || match self {
                Font::Stroke { set, .. } => set.contains_key(&c),
                Font::Raster(a) => a.glyphs.contains_key(&c),
            }
    }

    /// Renders `c` at `s` pixels per p-unit.
    pub fn glyph(&self, c: char, s: u32) -> Result<Option<FontGlyph>, RasterError> {
        if s == 0 {
            return Err(RasterError::Scale);
        }
        let space = |advance: u32| FontGlyph { bitmap: None, advance_px: (advance * s) as usize, has_descender: false };
        match self {
            Font::Stroke { set, params, .. } => match set.get(&c) {
                Some(g) if g.strokes.is_empty() => Ok(Some(space(g.advance))),
                Some(g) => Ok(Some(FontGlyph {
                    bitmap: Some(rasterize_glyph(g, params, s)?),
                    advance_px: (g.advance * s) as usize,
                    has_descender: g.has_descender,
                })),
                None if c == ' ' => Ok(Some(space(params.w_std))),
                None => Ok(None),
            },
            Font::Raster(a) => {
                if !s.is_multiple_of(a.scale) {
                    return Err(RasterError::ScaleMismatch { requested: s, native: a.scale });
                }
                let factor = (s / a.scale) as usize;
                match a.glyphs.get(&c) {
                    Some(g) => {
                        let blank = g.bitmap.samples().iter().all(|&v| v == Polarity::DarkOnLight.background());
                        Ok(Some(FontGlyph {
                            bitmap: if blank { None } else { Some(g.bitmap.upscale(factor)) },
                            advance_px: (g.advance * s) as usize,
                            has_descender: g.has_descender,
                        }))
                    }
                    None if c == ' ' => Ok(Some(space(a.metrics.space_advance))),
                    None => Ok(None),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standin::{standin_atlas, StandIn};

    #[test]
    fn raster_atlas_round_trip() {
        let a = standin_atlas(StandIn::SansLike, 1);
        let bytes = a.encode();
        assert!(bytes.starts_with(b"FONTLAB-RASTER 1\nname sans-like\nscale 1\n"));
        assert_eq!(RasterAtlas::decode(&bytes).unwrap(), a);
    }

    #[test]
    fn raster_atlas_rejects_trailing_garbage() {
        let mut bytes = standin_atlas(StandIn::SerifLike, 1).encode();
        bytes.extend_from_slice(b"junk");
        assert!(RasterAtlas::decode(&bytes).is_err());
    }

    #[test]
    fn raster_font_upscales_by_integer_factor() {
        let font = Font::Raster(standin_atlas(StandIn::SansLike, 1));
        let g1 = font.glyph('o', 1).unwrap().unwrap().bitmap.unwrap();
        let g3 = font.glyph('o', 3).unwrap().unwrap().bitmap.unwrap();
        assert_eq!(g1.upscale(3), g3);
        let font2 = Font::Raster(standin_atlas(StandIn::SansLike, 2));
        assert!(matches!(font2.glyph('o', 3), Err(RasterError::ScaleMismatch { .. })));
    }

    #[test]
    fn stroke_font_space_is_blank() {
        let f = Font::builtin(Family::Asymmetrical);
        let g = f.glyph(' ', 2).unwrap().unwrap();
        assert!(g.bitmap.is_none());
        assert_eq!(g.advance_px, 20);
        assert!(f.glyph('?', 1).unwrap().is_none());
    }
}
