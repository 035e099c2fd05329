use std::fmt;

use serde::Serialize;

use super::{Family, GlyphDef, GlyphError, GlyphSet, GridParams, Orientation};

/// Proportion rules a safe-font glyph must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// Vertical stroke width is one of the family's stem widths.
    R1,
    /// Horizontal stroke width equals `k`.
    R2,
    /// Ink height is `h1` or `h2` and sits in the right band of the cell.
    R3,
    /// Advance is the standard width, or the wide width for "m"/"M".
    R4,
    /// Vertical strokes sharing rows are at least `v_clear` apart.
    R5,
    /// Asymmetrical: leftmost stem is `d1`, every other stem is `d2`.
    R6,
    /// Horizontal strokes sit on the top, middle or bottom line of their band.
    R7,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
    /// Index of the offending stroke, if the rule concerns one stroke.
    pub stroke: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut rules: Vec<Rule> = self.violations.iter().map(|v| v.rule).collect();
        rules.sort();
        rules.dedup();
        rules
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GlyphClass {
    Lower,
    /// Digits and capitals: full `h2` height, no descender shift.
    Tall,
    Other,
}

fn classify(c: char) -> GlyphClass {
    if c.is_ascii_lowercase() {
        GlyphClass::Lower
    } else if c.is_ascii_digit() || c.is_ascii_uppercase() {
        GlyphClass::Tall
    } else {
        GlyphClass::Other
    }
}

/// Checks `glyph` against the proportion rules of `params`' family.
///
/// A glyph that is structurally broken (zero-sized stroke, stroke leaving the
/// cell) is an error rather than a report. Comparison fonts (`family: None`)
/// only get the structural check.
pub fn validate_glyph(glyph: &GlyphDef, params: &GridParams) -> Result<ValidationReport, GlyphError> {
    glyph.check_well_formed(params.h2)?;
    let Some(family) = params.family else {
        return Ok(ValidationReport::from_violations(Vec::new()));
    };

    let mut out = Vec::new();
    let class = classify(glyph.codepoint);
    let c = glyph.codepoint;

    for (i, s) in glyph.strokes.iter().enumerate() {
        match s.orientation {
            Orientation::Vertical if !params.v_widths.contains(&s.width) => out.push(Violation {
                rule: Rule::R1,
                message: format!("vertical stroke width {} not in {:?}", s.width, params.v_widths),
                stroke: Some(i),
            }),
            Orientation::Horizontal if s.width != params.k => out.push(Violation {
                rule: Rule::R2,
                message: format!("horizontal stroke width {} != k = {}", s.width, params.k),
                stroke: Some(i),
            }),
            _ => {}
        }
    }

    if let Some((_, top, _, bottom)) = glyph.ink_bounds() {
        check_height(glyph, class, params, top, bottom, &mut out);
    }

    let expected_width = if c == 'm' || c == 'M' { params.w_wide } else { params.w_std };
    if glyph.advance != expected_width {
        out.push(Violation {
            rule: Rule::R4,
            message: format!("advance {} != {}", glyph.advance, expected_width),
            stroke: None,
        });
    }

    let verticals: Vec<(usize, &super::Stroke)> = glyph
        .strokes
        .iter()
        .enumerate()
        .filter(|(_, s)| s.orientation == Orientation::Vertical)
        .collect();

    for (ai, a) in &verticals {
        for (bi, b) in &verticals {
            if ai >= bi {
                continue;
            }
            let rows_overlap = a.y < b.bottom() && b.y < a.bottom();
            if !rows_overlap {
                continue;
            }
            let (left, right, right_idx) = if a.x <= b.x { (a, b, *bi) } else { (b, a, *ai) };
            let gap = right.x as i64 - left.right() as i64;
            if gap < params.v_clear as i64 {
                out.push(Violation {
                    rule: Rule::R5,
                    message: format!(
                        "vertical strokes {ai} and {bi} are {gap} apart, clearance is {}",
                        params.v_clear
                    ),
                    stroke: Some(right_idx),
                });
            }
        }
    }

    if family == Family::Asymmetrical {
        if let Some(min_x) = verticals.iter().map(|(_, s)| s.x).min() {
            let (wide, thin) = (params.stem_width(), params.thin_width());
            for (i, s) in &verticals {
                let want = if s.x == min_x { wide } else { thin };
                if s.width != want {
                    out.push(Violation {
                        rule: Rule::R6,
                        message: format!(
                            "{} stem has width {}, expected {}",
                            if s.x == min_x { "leftmost" } else { "right-hand" },
                            s.width,
                            want
                        ),
                        stroke: Some(*i),
                    });
                }
            }
        }
    }

    if let Some(rows) = allowed_bar_rows(glyph, class, params) {
        for (i, s) in glyph.strokes.iter().enumerate() {
            if s.orientation == Orientation::Horizontal && !rows.contains(&s.y) {
                out.push(Violation {
                    rule: Rule::R7,
                    message: format!("horizontal stroke at row {} not on {:?}", s.y, rows),
                    stroke: Some(i),
                });
            }
        }
    }

    Ok(ValidationReport::from_violations(out))
}

fn check_height(
    glyph: &GlyphDef,
    class: GlyphClass,
    params: &GridParams,
    top: u32,
    bottom: u32,
    out: &mut Vec<Violation>,
) {
    let mut fail = |message: String| {
        out.push(Violation { rule: Rule::R3, message, stroke: None });
    };
    let height = bottom - top;
    match class {
        GlyphClass::Tall => {
            if glyph.has_descender {
                fail("digits and capitals carry no descender".into());
            }
            if (top, bottom) != (0, params.h2) {
                fail(format!("ink rows [{top}, {bottom}) but expected [0, {})", params.h2));
            }
        }
        GlyphClass::Lower => {
            if glyph.has_ascender && glyph.has_descender {
                fail("a glyph cannot have both ascender and descender".into());
                return;
            }
            let expected = if glyph.has_ascender || glyph.has_descender {
                (0, params.h2)
            } else {
                (params.h2 - params.h1, params.h2)
            };
            if (top, bottom) != expected {
                fail(format!(
                    "ink rows [{top}, {bottom}) but expected [{}, {})",
                    expected.0, expected.1
                ));
            }
        }
        GlyphClass::Other => {
            if height != params.h1 && height != params.h2 {
                fail(format!("ink height {height} is neither h1 nor h2"));
            }
        }
    }
}

/// Rows on which a horizontal stroke may start. `None` means the rule does
/// not apply to this glyph.
fn allowed_bar_rows(glyph: &GlyphDef, class: GlyphClass, params: &GridParams) -> Option<Vec<u32>> {
    let k = params.k;
    match class {
        GlyphClass::Lower => {
            let band_top = if glyph.has_descender { 0 } else { params.h2 - params.h1 };
            let mut rows = vec![band_top, middle_row(band_top, params.h1, k), band_top + params.h1 - k];
            if glyph.has_ascender {
                rows.push(0);
            }
            if glyph.has_descender {
                rows.push(params.h2 - k);
            }
            rows.sort_unstable();
            rows.dedup();
            Some(rows)
        }
        GlyphClass::Tall if glyph.codepoint.is_ascii_digit() => {
            Some(vec![0, middle_row(0, params.h2, k), params.h2 - k])
        }
        _ => None,
    }
}

/// Canonical row of the middle bar in a band of `height` rows bounded by
/// `k`-wide top and bottom bars. For odd splits the upper counter is the
/// smaller one.
pub(crate) fn middle_row(band_top: u32, height: u32, k: u32) -> u32 {
    band_top + (height - k) / 2
}

/// Validates every glyph of a set, returning the reports that failed.
pub fn validate_set(set: &GlyphSet, params: &GridParams) -> Result<Vec<(char, ValidationReport)>, GlyphError> {
    let mut failed = Vec::new();
    for (c, g) in set {
        let report = validate_glyph(g, params)?;
        if !report.ok {
            failed.push((*c, report));
        }
    }
    Ok(failed)
}
