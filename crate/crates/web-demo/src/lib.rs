//! Browser bindings: render text through a channel, show template
//! similarity, and score an eavesdropper run.

use std::collections::BTreeSet;

use fontlab::channel::{emanate, ChannelConfig, Standard};
use fontlab::font::Font;
use fontlab::glyph::Family;
use fontlab::raster::{rasterize_text, Bitmap, LayoutSpec, MissingGlyph};
use fontlab::recognition::{build_templates, round4, similarity_matrix, simulate, MatchParams};
use fontlab::standin::{standin_atlas, StandIn};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn font(name: &str, scale: u32) -> Result<Font, JsError> {
    Ok(match name {
        "symmetrical" => Font::builtin(Family::Symmetrical),
        "asymmetrical" => Font::builtin(Family::Asymmetrical),
        "serif-like" => Font::Raster(standin_atlas(StandIn::SerifLike, scale)),
        "sans-like" => Font::Raster(standin_atlas(StandIn::SansLike, scale)),
        other => return Err(JsError::new(&format!("unknown font {other:?}"))),
    })
}

fn channel(standard: &str, snr_db: f64, bw_frac: f64, seed: u32) -> Result<ChannelConfig, JsError> {
    let standard: Standard = standard.parse().map_err(|e: String| JsError::new(&e))?;
    let cfg = ChannelConfig { snr_db, bw_frac, seed: seed as u64, ..ChannelConfig::new(standard) };
    cfg.validate().map_err(|e| JsError::new(&e.to_string()))?;
    Ok(cfg)
}

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// A grayscale image ready for `ImageData`.
#[wasm_bindgen]
pub struct Frame {
    width: usize,
    height: usize,
    rgba: Vec<u8>,
}

#[wasm_bindgen]
impl Frame {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }
}

impl From<&Bitmap> for Frame {
    fn from(b: &Bitmap) -> Self {
        let rgba = b.samples().iter().flat_map(|&v| [v, v, v, 255]).collect();
        Frame { width: b.width(), height: b.height(), rgba }
    }
}

/// The screen image and what the eavesdropper receives, stacked vertically.
#[wasm_bindgen]
pub fn render_emission(
    font_name: &str,
    text: &str,
    scale: u32,
    standard: &str,
    snr_db: f64,
    bw_frac: f64,
    seed: u32,
) -> Result<Frame, JsError> {
    let f = font(font_name, scale)?;
    let layout = LayoutSpec { scale, missing: MissingGlyph::Tofu, ..LayoutSpec::default() };
    let screen = rasterize_text(text, &f, &layout).map_err(err)?.bitmap;
    let emission = emanate(&screen, &channel(standard, snr_db, bw_frac, seed)?).map_err(err)?;
    let (w, h) = (screen.width(), screen.height());
    let mut both = Bitmap::blank(w, 2 * h + 4, emission.polarity());
    both.fill_rect(0, 0, w, h, 0);
    for y in 0..h {
        for x in 0..w {
            both.set(x, y, screen.get(x, y));
            both.set(x, y + h + 4, emission.get(x, y));
        }
    }
    Ok(Frame::from(&both))
}

/// Pairwise template similarity under a noiseless channel, as JSON
/// `{labels, values, fraction_above, mean}`.
#[wasm_bindgen]
pub fn template_similarity(font_name: &str, standard: &str, bw_frac: f64) -> Result<String, JsError> {
    let f = font(font_name, 1)?;
    let bank = build_templates(&f, 1, &channel(standard, f64::INFINITY, bw_frac, 0)?).map_err(err)?;
    let m = similarity_matrix(&bank);
    Ok(json!({
        "labels": m.labels.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "values": m.values,
        "fraction_above": m.fraction_above(0.8),
        "mean": m.mean_off_diagonal(),
    })
    .to_string())
}

/// Full render, channel, recognize and score run, as JSON with per-character
/// counters, the aggregate CER and every hit.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn evaluate_text(
    font_name: &str,
    text: &str,
    scale: u32,
    standard: &str,
    snr_db: f64,
    bw_frac: f64,
    seed: u32,
    threshold: f64,
    targets: &str,
) -> Result<String, JsError> {
    let f = font(font_name, scale)?;
    let cfg = channel(standard, snr_db, bw_frac, seed)?;
    let targets: BTreeSet<char> = targets.chars().filter(|c| !c.is_whitespace()).collect();
    let bank = build_templates(&f, scale, &cfg).map_err(err)?;
    let layout = LayoutSpec { scale, ..LayoutSpec::default() };
    let params = MatchParams { threshold, ..MatchParams::default() };
    let sim = simulate(&f, text, &layout, &cfg, &bank, &params, &targets).map_err(err)?;
    let cer = &sim.evaluation.cer;
    let per_char: Vec<_> = cer
        .per_char
        .iter()
        .map(|(c, i)| json!({"char": c.to_string(), "u": i.u, "m": i.m, "n": i.n, "k": i.k, "q": i.q, "cer": round4(i.cer())}))
        .collect();
    let hits: Vec<_> = sim
        .evaluation
        .outcome
        .hits
        .iter()
        .map(|h| json!({"char": h.codepoint.to_string(), "x": h.x, "y": h.y, "score": h.score}))
        .collect();
    Ok(json!({
        "aggregate_cer": round4(cer.aggregate()),
        "aggregate_cer_exact": cer.aggregate().to_string(),
        "per_char": per_char,
        "hits": hits,
        "width": sim.emission.width(),
        "height": sim.emission.height(),
    })
    .to_string())
}
