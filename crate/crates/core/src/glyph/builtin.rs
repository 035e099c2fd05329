//! Curated stroke layouts for lowercase a-z, digits and space.
//!
//! Both families share one skeleton per character; the family only decides
//! where the stems sit and how wide they are.

use super::{Family, GlyphDef, GlyphSet, GridParams, Stroke};

#[derive(Clone, Copy)]
enum Stem {
    /// Left stem, `d` or `d1` wide.
    Left,
    /// Right element, `d` or `d2` wide, flush with the right edge.
    Right,
    /// Lone centred stem (i, l, 1). Asymmetrical puts it on the left.
    Lone,
    /// Lone right-hand stem (j, 3, 7). Asymmetrical keeps it wide.
    LoneRight,
    /// Short stem below a middle bar (v). Thin in the asymmetrical family.
    Center,
}

#[derive(Clone, Copy)]
enum Part {
    Stem(Stem, u32, u32),
    /// Full-width bar at a row.
    Bar(u32),
}

struct Builder<'a> {
    params: &'a GridParams,
    family: Family,
}

impl Builder<'_> {
    fn stem_geometry(&self, stem: Stem, advance: u32) -> (u32, u32) {
        let p = self.params;
        let (wide, thin) = (p.stem_width(), p.thin_width());
        match (self.family, stem) {
            (_, Stem::Left) => (0, wide),
            (_, Stem::Right) => (advance - thin, thin),
            (Family::Symmetrical, Stem::Lone) => ((advance - wide) / 2, wide),
            (Family::Asymmetrical, Stem::Lone) => (0, wide),
            (_, Stem::LoneRight) => (advance - wide, wide),
            (Family::Symmetrical, Stem::Center) => ((advance - wide) / 2, wide),
            (Family::Asymmetrical, Stem::Center) => (wide - 1, thin),
        }
    }

    fn glyph(&self, c: char, asc: bool, desc: bool, parts: &[Part]) -> GlyphDef {
        let advance = if c == 'm' { self.params.w_wide } else { self.params.w_std };
        let strokes = parts
            .iter()
            .map(|part| match *part {
                Part::Bar(row) => Stroke::horizontal(0, row, advance, self.params.k),
                Part::Stem(stem, y0, y1) => {
                    let (x, width) = self.stem_geometry(stem, advance);
                    Stroke::vertical(x, y0, y1 - y0, width)
                }
            })
            .collect();
        GlyphDef { codepoint: c, advance, has_ascender: asc, has_descender: desc, strokes }
    }

    fn m(&self, top: u32, bottom: u32) -> GlyphDef {
        let p = self.params;
        let advance = p.w_wide;
        let stems: &[(u32, u32)] = match self.family {
            Family::Symmetrical => &[(0, 3), (6, 3), (12, 3)],
            Family::Asymmetrical => &[(0, 5), (9, 1), (14, 1)],
        };
        let mut strokes = vec![Stroke::horizontal(0, top, advance, p.k)];
        strokes.extend(stems.iter().map(|&(x, w)| Stroke::vertical(x, top, bottom - top, w)));
        GlyphDef { codepoint: 'm', advance, has_ascender: false, has_descender: false, strokes }
    }
}

/// The shipped repertoire for `family`: a-z, 0-9 and space.
pub fn builtin_glyphset(family: Family) -> GlyphSet {
    use Part::{Bar, Stem as S};
    use Stem::{Center, Left, Lone, LoneRight, Right};

    let params = family.params();
    let b = Builder { params: &params, family };

    let h2 = params.h2;
    let k = params.k;
    // plain lowercase band
    let top = h2 - params.h1;
    let bottom = h2;
    let mid = super::validate::middle_row(top, params.h1, k);
    let last = bottom - k;
    // descender cell: band starts at row 0
    let d_bottom = params.h1;
    let d_last = d_bottom - k;
    // digits
    let g_mid = super::validate::middle_row(0, h2, k);
    let g_last = h2 - k;

    let mut set = GlyphSet::new();
    let mut add = |g: GlyphDef| {
        set.insert(g.codepoint, g);
    };

    add(b.glyph('a', false, false, &[Bar(top), S(Right, top, bottom), Bar(mid), S(Left, mid, bottom), Bar(last)]));
    add(b.glyph('b', true, false, &[S(Left, 0, h2), Bar(top), S(Right, top, h2), Bar(g_last)]));
    add(b.glyph('c', false, false, &[S(Left, top, bottom), Bar(top), Bar(last)]));
    add(b.glyph('d', true, false, &[S(Right, 0, h2), Bar(top), S(Left, top, h2), Bar(g_last)]));
    add(b.glyph('e', false, false, &[S(Left, top, bottom), Bar(top), S(Right, top, mid + k), Bar(mid), Bar(last)]));
    add(b.glyph('f', true, false, &[S(Left, 0, h2), Bar(0), Bar(top)]));
    add(b.glyph('g', false, true, &[S(Left, 0, d_bottom), Bar(0), S(Right, 0, h2), Bar(d_last), Bar(g_last)]));
    add(b.glyph('h', true, false, &[S(Left, 0, h2), Bar(top), S(Right, top, h2)]));
    add(b.glyph('i', true, false, &[S(Lone, 0, 3), S(Lone, top, h2)]));
    add(b.glyph('j', false, true, &[S(LoneRight, 0, 3), S(LoneRight, top, h2), Bar(g_last)]));
    add(b.glyph('k', true, false, &[S(Left, 0, h2), Bar(mid), S(Right, top, mid), S(Right, mid + k, h2)]));
    add(b.glyph('l', true, false, &[S(Lone, 0, h2)]));
    add(b.m(top, bottom));
    add(b.glyph('n', false, false, &[Bar(top), S(Left, top, bottom), S(Right, top, bottom)]));
    add(b.glyph('o', false, false, &[S(Left, top, bottom), S(Right, top, bottom), Bar(top), Bar(last)]));
    add(b.glyph('p', false, true, &[S(Left, 0, h2), Bar(0), S(Right, 0, d_bottom), Bar(d_last)]));
    add(b.glyph('q', false, true, &[S(Right, 0, h2), Bar(0), S(Left, 0, d_bottom), Bar(d_last)]));
    add(b.glyph('r', false, false, &[S(Left, top, bottom), Bar(top), S(Right, top, top + 3)]));
    add(b.glyph('s', false, false, &[Bar(top), S(Left, top, mid + k), Bar(mid), S(Right, mid, bottom), Bar(last)]));
    add(b.glyph('t', true, false, &[S(Left, 0, h2), Bar(top), Bar(g_last)]));
    add(b.glyph('u', false, false, &[S(Left, top, bottom), S(Right, top, bottom), Bar(last)]));
    add(b.glyph('v', false, false, &[S(Left, top, mid), S(Right, top, mid), Bar(mid), S(Center, mid, bottom)]));
    add(b.glyph('w', false, false, &[S(Left, top, bottom), S(Right, top, bottom), Bar(mid), Bar(last)]));
    add(b.glyph(
        'x',
        false,
        false,
        &[S(Left, top, mid), S(Right, top, mid), Bar(mid), S(Left, mid + k, bottom), S(Right, mid + k, bottom)],
    ));
    add(b.glyph('y', false, true, &[S(Left, 0, d_bottom), S(Right, 0, h2), Bar(d_last), Bar(g_last)]));
    add(b.glyph('z', false, false, &[Bar(top), S(Right, top, mid + k), Bar(mid), S(Left, mid, bottom), Bar(last)]));

    add(b.glyph('0', false, false, &[S(Left, 0, h2), S(Right, 0, h2), Bar(0), Bar(g_last)]));
    add(b.glyph('1', false, false, &[S(Lone, 0, h2), Bar(g_last)]));
    add(b.glyph('2', false, false, &[Bar(0), S(Right, 0, g_mid + k), Bar(g_mid), S(Left, g_mid, h2), Bar(g_last)]));
    add(b.glyph('3', false, false, &[Bar(0), S(LoneRight, 0, h2), Bar(g_mid), Bar(g_last)]));
    add(b.glyph('4', false, false, &[S(Left, 0, g_mid + k), S(Right, 0, h2), Bar(g_mid)]));
    add(b.glyph('5', false, false, &[Bar(0), S(Left, 0, g_mid + k), Bar(g_mid), S(Right, g_mid, h2), Bar(g_last)]));
    add(b.glyph('6', false, false, &[S(Left, 0, h2), Bar(0), Bar(g_mid), S(Right, g_mid, h2), Bar(g_last)]));
    add(b.glyph('7', false, false, &[Bar(0), S(LoneRight, 0, h2)]));
    add(b.glyph('8', false, false, &[S(Left, 0, h2), S(Right, 0, h2), Bar(0), Bar(g_mid), Bar(g_last)]));
    add(b.glyph('9', false, false, &[S(Left, 0, g_mid + k), S(Right, 0, h2), Bar(0), Bar(g_mid), Bar(g_last)]));

    add(GlyphDef { codepoint: ' ', advance: params.w_std, has_ascender: false, has_descender: false, strokes: Vec::new() });
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glyph::{validate_set, Orientation};

    #[test]
    fn repertoire_is_complete() {
        for family in [Family::Symmetrical, Family::Asymmetrical] {
            let set = builtin_glyphset(family);
            assert_eq!(set.len(), 37);
            for c in ('a'..='z').chain('0'..='9').chain([' ']) {
                assert!(set.contains_key(&c), "{family} missing {c:?}");
            }
        }
    }

    #[test]
    fn every_shipped_glyph_validates() {
        for family in [Family::Symmetrical, Family::Asymmetrical] {
            let failed = validate_set(&builtin_glyphset(family), &family.params()).unwrap();
            assert!(failed.is_empty(), "{family}: {failed:#?}");
        }
    }

    #[test]
    fn m_is_wide() {
        assert_eq!(builtin_glyphset(Family::Symmetrical)[&'m'].advance, 15);
        assert_eq!(builtin_glyphset(Family::Asymmetrical)[&'m'].advance, 15);
    }

    #[test]
    fn asymmetrical_e_has_middle_bar() {
        let e = &builtin_glyphset(Family::Asymmetrical)[&'e'];
        assert!(e
            .strokes
            .iter()
            .any(|s| s.orientation == Orientation::Horizontal && s.y == 11 && s.width == 1));
    }

    #[test]
    fn symmetrical_l_is_one_centred_stem() {
        let l = &builtin_glyphset(Family::Symmetrical)[&'l'];
        assert_eq!(l.strokes, vec![Stroke::vertical(3, 0, 18, 3)]);
    }

    #[test]
    fn no_two_glyphs_share_strokes() {
        for family in [Family::Symmetrical, Family::Asymmetrical] {
            let set = builtin_glyphset(family);
            let glyphs: Vec<_> = set.values().collect();
            for (i, a) in glyphs.iter().enumerate() {
                for b in &glyphs[i + 1..] {
                    let mut sa = a.strokes.clone();
                    let mut sb = b.strokes.clone();
                    sa.sort_by_key(|s| (s.x, s.y, s.length));
                    sb.sort_by_key(|s| (s.x, s.y, s.length));
                    assert!(
                        sa != sb || a.has_descender != b.has_descender,
                        "{family}: {:?} and {:?} are identical",
                        a.codepoint,
                        b.codepoint
                    );
                }
            }
        }
    }
}
