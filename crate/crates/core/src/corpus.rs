//! Built-in evaluation text.

/// Five 40-character lines covering every lowercase letter and digit.
pub const CORPUS_LINES: [&str; 5] = [
    "the quick brown fox jumps over 12 lazy d",
    "ogs while 7 zebras vex 340 jumpy quail h",
    "ere 5 wizards mock 96 fjords by night an",
    "d pack 8 boxes with five dozen jugs of l",
    "iquor as 3 kings and 0 pawns hold the sq",
];

/// The corpus joined with newlines.
pub fn corpus() -> String {
    CORPUS_LINES.join("\n")
}

/// Pixels per p-unit for a font rendered `px` pixels tall.
pub fn scale_for_pixel_height(px: u32) -> u32 {
    ((px as f64 / 18.0).round() as u32).max(1)
}
