//! Comparison fonts with the features the safe fonts avoid: bowls, diagonals,
//! contrast and serifs.
//!
//! Glyphs are outlined with a handful of primitives on the same p-grid metrics
//! as the safe fonts (ascender top at 0, x-height at 5, baseline at 18,
//! descender bottom at 23) and scan-converted with 4x4 supersampling into
//! binary raster atlases. Diagonals and curves therefore come out as pixel
//! staircases, as they would on screen.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::font::{LineMetrics, RasterAtlas, RasterGlyph};
use crate::raster::{Bitmap, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandIn {
    SerifLike,
    SansLike,
}

impl StandIn {
    pub const ALL: [StandIn; 2] = [StandIn::SerifLike, StandIn::SansLike];

    pub fn name(self) -> &'static str {
        match self {
            StandIn::SerifLike => "serif-like",
            StandIn::SansLike => "sans-like",
        }
    }
}

impl fmt::Display for StandIn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandIn {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "serif-like" => Ok(StandIn::SerifLike),
            "sans-like" => Ok(StandIn::SansLike),
            other => Err(format!("unknown comparison font {other:?}")),
        }
    }
}

const CELL_HEIGHT: u32 = 18;
const DESCENDER_SHIFT: f64 = 5.0;
const SUBSAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Role {
    Stem,
    Hair,
}

#[derive(Debug, Clone, Copy)]
enum Prim {
    Line { a: (f64, f64), b: (f64, f64), role: Role },
    /// Elliptical arc from `a0` to `a1` degrees, counter-clockwise with 90 at the top.
    Arc { c: (f64, f64), r: (f64, f64), a0: f64, a1: f64 },
    Dot { c: (f64, f64), r: f64 },
}

struct Style {
    stem: f64,
    hair: f64,
    serifs: bool,
}

impl Style {
    fn of(kind: StandIn) -> Self {
        match kind {
            StandIn::SansLike => Style { stem: 1.6, hair: 1.6, serifs: false },
            StandIn::SerifLike => Style { stem: 1.9, hair: 0.8, serifs: true },
        }
    }

    fn width(&self, role: Role) -> f64 {
        match role {
            Role::Stem => self.stem,
            Role::Hair => self.hair,
        }
    }
}

fn stem(x0: f64, y0: f64, x1: f64, y1: f64) -> Prim {
    Prim::Line { a: (x0, y0), b: (x1, y1), role: Role::Stem }
}

fn hair(x0: f64, y0: f64, x1: f64, y1: f64) -> Prim {
    Prim::Line { a: (x0, y0), b: (x1, y1), role: Role::Hair }
}

fn arc(cx: f64, cy: f64, rx: f64, ry: f64, a0: f64, a1: f64) -> Prim {
    Prim::Arc { c: (cx, cy), r: (rx, ry), a0, a1 }
}

fn ring(cx: f64, cy: f64, rx: f64, ry: f64) -> Prim {
    arc(cx, cy, rx, ry, 0.0, 360.0)
}

fn dot(cx: f64, cy: f64, r: f64) -> Prim {
    Prim::Dot { c: (cx, cy), r }
}

/// Outline of `c` in line coordinates: `(advance, has_descender, primitives)`.
fn skeleton(c: char) -> Option<(u32, bool, Vec<Prim>)> {
    let g = match c {
        'a' => (9, false, vec![stem(7.2, 8.5, 7.2, 18.0), arc(4.5, 8.3, 2.7, 2.5, 15.0, 165.0), ring(4.6, 14.8, 2.6, 2.4)]),
        'b' => (9, false, vec![stem(1.8, 0.5, 1.8, 18.0), ring(4.8, 11.5, 2.8, 5.7)]),
        'c' => (8, false, vec![arc(4.6, 11.5, 3.2, 5.7, 45.0, 315.0)]),
        'd' => (9, false, vec![stem(7.2, 0.5, 7.2, 18.0), ring(4.2, 11.5, 2.8, 5.7)]),
        'e' => (9, false, vec![arc(4.5, 11.5, 3.2, 5.7, 0.0, 320.0), hair(1.3, 11.5, 7.7, 11.5)]),
        'f' => (6, false, vec![stem(2.5, 2.5, 2.5, 18.0), arc(4.3, 2.6, 1.8, 1.8, 20.0, 180.0), hair(0.6, 5.8, 5.2, 5.8)]),
        'g' => (9, true, vec![ring(4.2, 11.3, 2.8, 5.5), stem(7.2, 5.5, 7.2, 20.0), arc(4.3, 20.0, 2.9, 2.2, 200.0, 360.0)]),
        'h' => (9, false, vec![stem(1.8, 0.5, 1.8, 18.0), arc(4.5, 9.3, 2.7, 3.3, 0.0, 180.0), stem(7.2, 9.3, 7.2, 18.0)]),
        'i' => (4, false, vec![stem(2.0, 6.0, 2.0, 18.0), dot(2.0, 2.6, 1.1)]),
        'j' => (5, true, vec![stem(3.0, 6.0, 3.0, 20.5), dot(3.0, 2.6, 1.1), arc(1.4, 20.5, 1.6, 1.8, 200.0, 360.0)]),
        'k' => (8, false, vec![stem(1.8, 0.5, 1.8, 18.0), hair(7.0, 5.5, 2.2, 13.0), hair(3.8, 10.8, 7.5, 18.0)]),
        'l' => (4, false, vec![stem(2.0, 0.5, 2.0, 18.0)]),
        'm' => (
            14,
            false,
            vec![
                stem(1.8, 5.5, 1.8, 18.0),
                arc(4.5, 9.3, 2.7, 3.3, 0.0, 180.0),
                stem(7.2, 9.3, 7.2, 18.0),
                arc(9.9, 9.3, 2.7, 3.3, 0.0, 180.0),
                stem(12.6, 9.3, 12.6, 18.0),
            ],
        ),
        'n' => (9, false, vec![stem(1.8, 5.5, 1.8, 18.0), arc(4.5, 9.3, 2.7, 3.3, 0.0, 180.0), stem(7.2, 9.3, 7.2, 18.0)]),
        'o' => (9, false, vec![ring(4.5, 11.5, 3.2, 5.7)]),
        'p' => (9, true, vec![stem(1.8, 5.5, 1.8, 23.0), ring(4.8, 11.5, 2.8, 5.7)]),
        'q' => (9, true, vec![stem(7.2, 5.5, 7.2, 23.0), ring(4.2, 11.5, 2.8, 5.7)]),
        'r' => (6, false, vec![stem(1.8, 5.5, 1.8, 18.0), arc(4.6, 9.8, 2.8, 3.8, 60.0, 180.0)]),
        's' => (8, false, vec![arc(4.0, 8.4, 2.8, 2.8, 30.0, 270.0), arc(4.0, 14.5, 2.9, 3.0, 210.0, 450.0)]),
        't' => (6, false, vec![stem(2.5, 2.0, 2.5, 16.0), arc(4.3, 16.0, 1.8, 1.6, 180.0, 300.0), hair(0.6, 5.8, 5.4, 5.8)]),
        'u' => (9, false, vec![stem(1.8, 5.5, 1.8, 14.7), arc(4.5, 14.7, 2.7, 3.3, 180.0, 360.0), stem(7.2, 5.5, 7.2, 18.0)]),
        'v' => (9, false, vec![hair(0.8, 5.5, 4.5, 17.8), stem(8.2, 5.5, 4.5, 17.8)]),
        'w' => (
            13,
            false,
            vec![hair(0.6, 5.5, 3.4, 17.8), stem(3.4, 17.8, 6.5, 7.5), hair(6.5, 7.5, 9.6, 17.8), stem(9.6, 17.8, 12.4, 5.5)],
        ),
        'x' => (9, false, vec![stem(1.0, 5.5, 8.0, 17.8), hair(8.0, 5.5, 1.0, 17.8)]),
        'y' => (9, true, vec![hair(0.8, 5.5, 4.6, 17.5), stem(8.2, 5.5, 3.0, 22.5)]),
        'z' => (8, false, vec![hair(1.0, 6.0, 7.0, 6.0), stem(7.0, 6.0, 1.0, 17.2), hair(1.0, 17.2, 7.3, 17.2)]),
        '0' => (9, false, vec![ring(4.5, 9.0, 3.3, 8.2)]),
        '1' => (9, false, vec![stem(5.2, 0.8, 5.2, 18.0), hair(5.2, 0.8, 2.0, 3.6)]),
        '2' => (9, false, vec![arc(4.5, 4.8, 3.0, 3.8, 320.0, 520.0), stem(6.9, 7.2, 1.2, 17.2), hair(1.2, 17.2, 8.0, 17.2)]),
        '3' => (9, false, vec![arc(4.4, 4.6, 3.0, 3.8, 270.0, 520.0), arc(4.4, 13.3, 3.4, 4.4, 200.0, 450.0)]),
        '4' => (9, false, vec![stem(6.5, 0.8, 6.5, 18.0), hair(6.5, 0.8, 0.8, 12.8), hair(0.8, 12.8, 8.5, 12.8)]),
        '5' => (9, false, vec![hair(2.0, 1.0, 7.8, 1.0), hair(2.0, 1.0, 1.7, 8.0), arc(4.5, 12.5, 3.3, 5.0, 210.0, 510.0)]),
        '6' => (9, false, vec![ring(4.6, 12.6, 3.2, 5.2), arc(7.4, 10.0, 5.8, 9.0, 92.0, 185.0)]),
        '7' => (9, false, vec![hair(1.0, 1.0, 8.0, 1.0), stem(8.0, 1.0, 3.4, 18.0)]),
        '8' => (9, false, vec![ring(4.5, 4.6, 2.8, 3.8), ring(4.5, 13.2, 3.3, 4.6)]),
        '9' => (9, false, vec![ring(4.4, 5.4, 3.2, 5.2), arc(1.6, 9.0, 5.8, 9.0, 275.0, 360.0)]),
        _ => return None,
    };
    Some(g)
}

/// Adds foot and head serifs to the ends of vertical stems.
fn with_serifs(prims: Vec<Prim>, style: &Style) -> Vec<Prim> {
    let mut out = prims.clone();
    for p in prims {
        if let Prim::Line { a, b, role: Role::Stem } = p {
            if (a.0 - b.0).abs() > 1e-9 {
                continue;
            }
            for (end, inward) in [(a, (b.1 - a.1).signum()), (b, (a.1 - b.1).signum())] {
                let on_line = [0.5, 5.5, 18.0, 23.0].iter().any(|&y| (end.1 - y).abs() < 0.01);
                if on_line {
                    let y = end.1 + inward * style.hair / 2.0;
                    out.push(hair(end.0 - 1.6, y, end.0 + 1.6, y));
                }
            }
        }
    }
    out
}

fn covers(p: &Prim, style: &Style, x: f64, y: f64) -> bool {
    match *p {
        Prim::Line { a, b, role } => {
            let half = style.width(role) / 2.0;
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let t = ((x - a.0) * dx + (y - a.1) * dy) / len2;
            if !(0.0..=1.0).contains(&t) {
                return false;
            }
            let (px, py) = (a.0 + t * dx, a.1 + t * dy);
            (x - px).hypot(y - py) <= half
        }
        Prim::Arc { c, r, a0, a1 } => {
            let u = (x - c.0) / r.0;
            let v = (c.1 - y) / r.1;
            let rr = u.hypot(v);
            if rr == 0.0 {
                return false;
            }
            let theta = v.atan2(u).to_degrees();
            if (theta - a0).rem_euclid(360.0) > a1 - a0 {
                return false;
            }
            let (ct, st) = (u / rr, v / rr);
            let radius = (r.0 * ct).hypot(r.1 * st);
            // contrast: full weight on the sides, hairline at top and bottom
            let w = style.hair + (style.stem - style.hair) * ct.abs();
            (rr - 1.0).abs() * radius <= w / 2.0
        }
        Prim::Dot { c, r } => (x - c.0).hypot(y - c.1) <= r,
    }
}

fn render(advance: u32, desc: bool, prims: &[Prim], style: &Style, scale: u32) -> Bitmap {
    let pol = Polarity::DarkOnLight;
    let s = scale as usize;
    let (w, h) = (advance as usize * s, CELL_HEIGHT as usize * s);
    let shift = if desc { DESCENDER_SHIFT } else { 0.0 };
    let mut bmp = Bitmap::blank(w, h, pol);
    let n = SUBSAMPLES;
    for py in 0..h {
        for px in 0..w {
            let mut hits = 0;
            for j in 0..n {
                for i in 0..n {
                    let x = (px as f64 + (i as f64 + 0.5) / n as f64) / scale as f64;
                    let y = (py as f64 + (j as f64 + 0.5) / n as f64) / scale as f64 + shift;
                    if prims.iter().any(|p| covers(p, style, x, y)) {
                        hits += 1;
                    }
                }
            }
            if hits * 2 >= n * n {
                bmp.set(px, py, pol.ink());
            }
        }
    }
    bmp
}

/// Builds the comparison raster atlas for `kind` at `scale` pixels per p-unit.
pub fn standin_atlas(kind: StandIn, scale: u32) -> RasterAtlas {
    assert!(scale > 0, "scale must be positive");
    let style = Style::of(kind);
    let mut glyphs = BTreeMap::new();
    for c in ('a'..='z').chain('0'..='9') {
        let (advance, desc, prims) = skeleton(c).expect("skeleton for every letter and digit");
        let prims = if style.serifs { with_serifs(prims, &style) } else { prims };
        let bitmap = render(advance, desc, &prims, &style, scale);
        glyphs.insert(c, RasterGlyph { advance, has_descender: desc, bitmap });
    }
    RasterAtlas {
        name: kind.name().to_string(),
        scale,
        metrics: LineMetrics {
            cell_height: CELL_HEIGHT,
            line_height: CELL_HEIGHT + DESCENDER_SHIFT as u32,
            descender_shift: DESCENDER_SHIFT as u32,
            space_advance: 9,
        },
        glyphs,
    }
}
