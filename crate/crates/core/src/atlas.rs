//! Glyph atlas: the stroke-level font file.
//!
//! The file is TOML. A minimal example:
//!
//! ```toml
//! format_version = 1
//! family = "symmetrical"
//!
//! [params]
//! h1 = 13
//! h2 = 18
//! w_std = 9
//! w_wide = 15
//! v_widths = [3]
//! v_clear = 3
//! k = 1
//! w_asc = 5
//!
//! [[glyphs]]
//! codepoint = "l"
//! advance = 9
//! has_ascender = true
//! has_descender = false
//!
//! [[glyphs.strokes]]
//! orientation = "vertical"
//! x = 3
//! y = 0
//! length = 18
//! width = 3
//! ```
//!
//! `family = "none"` marks a comparison font whose glyphs are loaded without
//! proportion checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glyph::{validate_glyph, Family, GlyphDef, GlyphError, GlyphSet, GridParams, Rule};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("atlas parse error at `{key}`: {message}")]
    Parse { key: String, message: String },
    #[error("unsupported atlas format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("params.{key} = {found} disagrees with the {family} family value {expected}")]
    ParamsMismatch {
        family: Family,
        key: &'static str,
        found: String,
        expected: String,
    },
    #[error("duplicate glyph {0:?}")]
    Duplicate(char),
    #[error(transparent)]
    Malformed(#[from] GlyphError),
    #[error("glyphs fail validation: {}", format_failures(.0))]
    Validation(Vec<(char, Vec<Rule>)>),
}

fn format_failures(failures: &[(char, Vec<Rule>)]) -> String {
    failures
        .iter()
        .map(|(c, rules)| {
            let ids: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
            format!("{c:?} [{}]", ids.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FamilyTag {
    Symmetrical,
    Asymmetrical,
    None,
}

impl From<Option<Family>> for FamilyTag {
    fn from(f: Option<Family>) -> Self {
        match f {
            Some(Family::Symmetrical) => FamilyTag::Symmetrical,
            Some(Family::Asymmetrical) => FamilyTag::Asymmetrical,
            None => FamilyTag::None,
        }
    }
}

impl From<FamilyTag> for Option<Family> {
    fn from(t: FamilyTag) -> Self {
        match t {
            FamilyTag::Symmetrical => Some(Family::Symmetrical),
            FamilyTag::Asymmetrical => Some(Family::Asymmetrical),
            FamilyTag::None => None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsEcho {
    h1: u32,
    h2: u32,
    w_std: u32,
    w_wide: u32,
    v_widths: Vec<u32>,
    v_clear: u32,
    k: u32,
    w_asc: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtlasFile {
    format_version: u32,
    family: FamilyTag,
    params: ParamsEcho,
    #[serde(default)]
    glyphs: Vec<GlyphDef>,
}

/// Serializes a glyph set to the atlas text format.
pub fn to_atlas_string(set: &GlyphSet, params: &GridParams) -> Result<String, AtlasError> {
    check_set(set, params)?;
    let file = AtlasFile {
        format_version: FORMAT_VERSION,
        family: params.family.into(),
        params: ParamsEcho {
            h1: params.h1,
            h2: params.h2,
            w_std: params.w_std,
            w_wide: params.w_wide,
            v_widths: params.v_widths.clone(),
            v_clear: params.v_clear,
            k: params.k,
            w_asc: params.w_asc,
        },
        glyphs: set.values().cloned().collect(),
    };
    toml::to_string_pretty(&file).map_err(|e| AtlasError::Parse { key: "<root>".into(), message: e.to_string() })
}

/// Parses and validates atlas text.
pub fn from_atlas_str(text: &str) -> Result<(GlyphSet, GridParams), AtlasError> {
    let de = toml::Deserializer::parse(text).map_err(|e| AtlasError::Parse {
        key: "<document>".into(),
        message: e.message().to_string(),
    })?;
    let file: AtlasFile = serde_path_to_error::deserialize(de).map_err(|e| AtlasError::Parse {
        key: e.path().to_string(),
        message: e.inner().message().to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(AtlasError::Version(file.format_version));
    }
    let e = file.params;
    let params = GridParams {
        family: file.family.into(),
        h1: e.h1,
        h2: e.h2,
        w_std: e.w_std,
        w_wide: e.w_wide,
        v_widths: e.v_widths,
        v_clear: e.v_clear,
        k: e.k,
        w_asc: e.w_asc,
    };
    if let Some(family) = params.family {
        check_echo(family, &params)?;
    }
    let mut set = BTreeMap::new();
    for g in file.glyphs {
        let c = g.codepoint;
        if set.insert(c, g).is_some() {
            return Err(AtlasError::Duplicate(c));
        }
    }
    check_set(&set, &params)?;
    Ok((set, params))
}

pub fn export_atlas(set: &GlyphSet, params: &GridParams, path: impl AsRef<Path>) -> Result<(), AtlasError> {
    let path = path.as_ref();
    let text = to_atlas_string(set, params)?;
    fs::write(path, text).map_err(|source| AtlasError::Io { path: path.display().to_string(), source })
}

pub fn import_atlas(path: impl AsRef<Path>) -> Result<(GlyphSet, GridParams), AtlasError> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|source| AtlasError::Io { path: path.display().to_string(), source })?;
    from_atlas_str(&text)
}

fn check_echo(family: Family, params: &GridParams) -> Result<(), AtlasError> {
    let canon = family.params();
    let pairs: [(&'static str, String, String); 8] = [
        ("h1", params.h1.to_string(), canon.h1.to_string()),
        ("h2", params.h2.to_string(), canon.h2.to_string()),
        ("w_std", params.w_std.to_string(), canon.w_std.to_string()),
        ("w_wide", params.w_wide.to_string(), canon.w_wide.to_string()),
        ("v_widths", format!("{:?}", params.v_widths), format!("{:?}", canon.v_widths)),
        ("v_clear", params.v_clear.to_string(), canon.v_clear.to_string()),
        ("k", params.k.to_string(), canon.k.to_string()),
        ("w_asc", params.w_asc.to_string(), canon.w_asc.to_string()),
    ];
    for (key, found, expected) in pairs {
        if found != expected {
            return Err(AtlasError::ParamsMismatch { family, key, found, expected });
        }
    }
    Ok(())
}

fn check_set(set: &GlyphSet, params: &GridParams) -> Result<(), AtlasError> {
    let mut failures = Vec::new();
    for g in set.values() {
        let report = validate_glyph(g, params)?;
        if !report.ok {
            failures.push((g.codepoint, report.rules()));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(AtlasError::Validation(failures))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glyph::{builtin_glyphset, symmetrical_params, Stroke};

    #[test]
    fn builtin_round_trip() {
        for family in [Family::Symmetrical, Family::Asymmetrical] {
            let set = builtin_glyphset(family);
            let text = to_atlas_string(&set, &family.params()).unwrap();
            let (back, params) = from_atlas_str(&text).unwrap();
            assert_eq!(back, set);
            assert_eq!(params, family.params());
        }
    }

    #[test]
    fn diagonal_orientation_is_rejected_with_key() {
        let text = to_atlas_string(&builtin_glyphset(Family::Symmetrical), &symmetrical_params())
            .unwrap()
            .replacen("orientation = \"vertical\"", "orientation = \"diagonal\"", 1);
        match from_atlas_str(&text) {
            Err(AtlasError::Parse { key, .. }) => assert!(key.contains("orientation"), "{key}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_key_is_named() {
        let text = "format_version = 1\nfamily = \"none\"\n[params]\nh1 = 13\nh2 = 18\nw_std = 9\nw_wide = 15\nv_widths = [3]\nv_clear = 3\nk = 1\n";
        match from_atlas_str(text) {
            Err(AtlasError::Parse { message, .. }) => assert!(message.contains("w_asc"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_glyph_lists_rules() {
        let mut set = builtin_glyphset(Family::Symmetrical);
        set.get_mut(&'l').unwrap().strokes[0].width = 2;
        // bypass the export check by writing the file as a comparison font first
        let mut loose = symmetrical_params();
        loose.family = None;
        let text = to_atlas_string(&set, &loose).unwrap().replace("family = \"none\"", "family = \"symmetrical\"");
        match from_atlas_str(&text) {
            Err(AtlasError::Validation(f)) => assert_eq!(f, vec![('l', vec![Rule::R1])]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comparison_atlas_loads_without_proportions() {
        let mut params = symmetrical_params();
        params.family = None;
        let mut set = GlyphSet::new();
        // serif-ish "n": thick and thin stems plus foot serifs
        set.insert(
            'n',
            GlyphDef {
                codepoint: 'n',
                advance: 11,
                has_ascender: false,
                has_descender: false,
                strokes: vec![
                    Stroke::vertical(1, 5, 13, 2),
                    Stroke::vertical(8, 7, 11, 1),
                    Stroke::horizontal(0, 17, 4, 1),
                    Stroke::horizontal(6, 17, 4, 1),
                    Stroke::horizontal(3, 6, 5, 2),
                ],
            },
        );
        let text = to_atlas_string(&set, &params).unwrap();
        let (back, p) = from_atlas_str(&text).unwrap();
        assert_eq!(back, set);
        assert_eq!(p.family, None);
    }

    #[test]
    fn params_echo_must_match_family() {
        let text = to_atlas_string(&builtin_glyphset(Family::Symmetrical), &symmetrical_params())
            .unwrap()
            .replace("w_std = 9", "w_std = 10");
        assert!(matches!(from_atlas_str(&text), Err(AtlasError::ParamsMismatch { key: "w_std", .. })));
    }
}
