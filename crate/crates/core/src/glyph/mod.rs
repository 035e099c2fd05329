//! The p-grid construction system for the two safe font families.
//!
//! Every dimension here is an integer number of grid units `p`. A glyph lives
//! in a cell `advance` units wide and `h2` units tall. Cell rows are counted
//! from the top. For glyphs without a descender the baseline sits at row `h2`
//! and the lowercase band occupies rows `[h2 - h1, h2)`; for glyphs with a
//! descender the cell is shifted down by `w_asc` on the text line, so the
//! lowercase band occupies rows `[0, h1)` and the descender rows `[h1, h2)`.

mod builtin;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builtin::builtin_glyphset;
pub use validate::{validate_glyph, validate_set, Rule, ValidationReport, Violation};

/// Glyphs keyed by the character they draw.
pub type GlyphSet = BTreeMap<char, GlyphDef>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Symmetrical,
    Asymmetrical,
}

impl Family {
    pub fn params(self) -> GridParams {
        match self {
            Family::Symmetrical => symmetrical_params(),
            Family::Asymmetrical => asymmetrical_params(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Symmetrical => "symmetrical",
            Family::Asymmetrical => "asymmetrical",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Construction constants of one font family, in p-units.
///
/// `family == None` marks a comparison font: the metrics still drive layout
/// but no proportion rule is enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    /// Lowercase height.
    pub h1: u32,
    /// Height with ascender or descender; also digits and capitals.
    pub h2: u32,
    /// Standard character width.
    pub w_std: u32,
    /// Width of "m" and "M".
    pub w_wide: u32,
    /// Allowed vertical stroke widths, widest first.
    pub v_widths: Vec<u32>,
    /// Minimum clearance between vertical strokes.
    pub v_clear: u32,
    /// Horizontal stroke width.
    pub k: u32,
    /// Ascender and descender extent.
    pub w_asc: u32,
}

impl GridParams {
    /// The widest allowed vertical stroke (`d` or `d1`).
    pub fn stem_width(&self) -> u32 {
        self.v_widths.iter().copied().max().unwrap_or(self.k)
    }

    /// The narrowest allowed vertical stroke (`d` or `d2`).
    pub fn thin_width(&self) -> u32 {
        self.v_widths.iter().copied().min().unwrap_or(self.k)
    }

    /// Height of a full text line: ascender zone, lowercase band, descender zone.
    pub fn line_height(&self) -> u32 {
        self.h1 + 2 * self.w_asc
    }
}

pub fn symmetrical_params() -> GridParams {
    GridParams {
        family: Some(Family::Symmetrical),
        h1: 13,
        h2: 18,
        w_std: 9,
        w_wide: 15,
        v_widths: vec![3],
        v_clear: 3,
        k: 1,
        w_asc: 5,
    }
}

pub fn asymmetrical_params() -> GridParams {
    GridParams {
        family: Some(Family::Asymmetrical),
        h1: 13,
        h2: 18,
        w_std: 10,
        w_wide: 15,
        v_widths: vec![5, 1],
        v_clear: 1,
        k: 1,
        w_asc: 5,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// An axis-aligned bar on the p-grid. `length` runs along the orientation,
/// `width` across it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stroke {
    pub orientation: Orientation,
    pub x: u32,
    pub y: u32,
    pub length: u32,
    pub width: u32,
}

impl Stroke {
    pub const fn vertical(x: u32, y: u32, length: u32, width: u32) -> Self {
        Stroke { orientation: Orientation::Vertical, x, y, length, width }
    }

    pub const fn horizontal(x: u32, y: u32, length: u32, width: u32) -> Self {
        Stroke { orientation: Orientation::Horizontal, x, y, length, width }
    }

    /// Extent along x.
    pub fn w(&self) -> u32 {
        match self.orientation {
            Orientation::Vertical => self.width,
            Orientation::Horizontal => self.length,
        }
    }

    /// Extent along y.
    pub fn h(&self) -> u32 {
        match self.orientation {
            Orientation::Vertical => self.length,
            Orientation::Horizontal => self.width,
        }
    }

    pub fn right(&self) -> u32 {
        self.x + self.w()
    }

    pub fn bottom(&self) -> u32 {
        self.y + self.h()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlyphDef {
    pub codepoint: char,
    pub advance: u32,
    pub has_ascender: bool,
    pub has_descender: bool,
    #[serde(default)]
    pub strokes: Vec<Stroke>,
}

impl GlyphDef {
    /// Ink bounding box as `(left, top, right, bottom)`, or `None` for a blank glyph.
    pub fn ink_bounds(&self) -> Option<(u32, u32, u32, u32)> {
        let first = self.strokes.first()?;
        let init = (first.x, first.y, first.right(), first.bottom());
        Some(self.strokes.iter().fold(init, |(l, t, r, b), s| {
            (l.min(s.x), t.min(s.y), r.max(s.right()), b.max(s.bottom()))
        }))
    }

    /// Checks the structural invariants that hold regardless of family:
    /// positive stroke extents and every stroke inside the cell.
    pub fn check_well_formed(&self, cell_height: u32) -> Result<(), GlyphError> {
        if self.advance == 0 {
            return Err(GlyphError::Malformed {
                codepoint: self.codepoint,
                stroke: None,
                reason: "advance must be positive".into(),
            });
        }
        if self.strokes.is_empty() && !self.codepoint.is_whitespace() {
            return Err(GlyphError::Malformed {
                codepoint: self.codepoint,
                stroke: None,
                reason: "visible glyph has no strokes".into(),
            });
        }
        for (i, s) in self.strokes.iter().enumerate() {
            if s.length == 0 || s.width == 0 {
                return Err(GlyphError::Malformed {
                    codepoint: self.codepoint,
                    stroke: Some(i),
                    reason: "stroke length and width must be positive".into(),
                });
            }
            if s.right() > self.advance || s.bottom() > cell_height {
                return Err(GlyphError::Malformed {
                    codepoint: self.codepoint,
                    stroke: Some(i),
                    reason: format!(
                        "stroke extends to ({}, {}) outside the {}x{} cell",
                        s.right(),
                        s.bottom(),
                        self.advance,
                        cell_height
                    ),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlyphError {
    #[error("malformed glyph {codepoint:?}{}: {reason}", stroke.map(|i| format!(" (stroke {i})")).unwrap_or_default())]
    Malformed {
        codepoint: char,
        stroke: Option<usize>,
        reason: String,
    },
}
