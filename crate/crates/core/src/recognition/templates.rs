use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ncc::{ncc, Sums};
use super::RecognitionError;
use crate::channel::{emanate, ChannelConfig};
use crate::font::Font;
use crate::raster::{Bitmap, Polarity};

/// Channel-transformed glyph images the attacker correlates against.
///
/// Each template covers the glyph cell plus `pad` pixels of background on
/// both sides, so edges at the cell border survive the row-wise channel.
/// A match at window column `x` therefore puts the glyph cell at `x + pad`.
#[derive(Debug, Clone)]
pub struct TemplateBank {
    pub label: String,
    pub config: ChannelConfig,
    pub scale: u32,
    pub pad: usize,
    pub templates: BTreeMap<char, Bitmap>,
    /// Glyphs whose template is constant (space, blank cells).
    pub excluded: Vec<char>,
}

impl TemplateBank {
    pub fn min_width(&self) -> usize {
        self.templates.values().map(Bitmap::width).min().unwrap_or(0)
    }

    /// Height of the glyph cell at this scale.
    pub fn cell_height(&self) -> usize {
        self.templates.values().map(Bitmap::height).max().unwrap_or(0)
    }
}

pub fn template_padding(cfg: &ChannelConfig) -> usize {
    cfg.blur_window() / 2 + 1
}

/// Longest run of leading background tried when looking for line-code phases.
const MAX_PHASE_LEAD: usize = 24;

/// Puts `glyph` on a background strip `pad` pixels wider on each side and
/// runs it through the channel without noise, starting the scanline at the
/// glyph strip.
pub fn render_template(glyph: &Bitmap, pad: usize, cfg: &ChannelConfig) -> Result<Bitmap, RecognitionError> {
    render_with_lead(glyph, pad, 0, cfg)
}

/// Same as [`render_template`] but with `lead` extra background columns in
/// front, cropped off again after the channel.
fn render_with_lead(glyph: &Bitmap, pad: usize, lead: usize, cfg: &ChannelConfig) -> Result<Bitmap, RecognitionError> {
    let w = glyph.width() + 2 * pad;
    let mut canvas = Bitmap::blank(lead + w, glyph.height(), Polarity::DarkOnLight);
    canvas.blit(glyph, lead + pad, 0);
    let out = emanate(&canvas, &cfg.noiseless())?;
    Ok(if lead == 0 { out } else { out.crop(lead, 0, w, glyph.height()) })
}

/// The glyph's emission averaged over every distinct line-code phase it can
/// be entered in.
///
/// A stateful code such as TMDS radiates differently depending on what came
/// earlier on the scanline, and each scanline through a glyph has its own
/// history. The attacker cannot know those states, so the template is the
/// expected emission. Stateless channels have a single phase and this is
/// just [`render_template`].
pub fn expected_template(glyph: &Bitmap, pad: usize, cfg: &ChannelConfig) -> Result<Bitmap, RecognitionError> {
    let mut phases: Vec<Bitmap> = Vec::new();
    for lead in 0..=MAX_PHASE_LEAD {
        let v = render_with_lead(glyph, pad, lead, cfg)?;
        if !phases.contains(&v) {
            phases.push(v);
        }
    }
    if phases.len() == 1 {
        return Ok(phases.pop().unwrap());
    }
    let n = phases.len() as u32;
    let first = &phases[0];
    let samples = (0..first.samples().len())
        .map(|i| {
            let sum: u32 = phases.iter().map(|p| p.samples()[i] as u32).sum();
            ((sum + n / 2) / n) as u8
        })
        .collect();
    Ok(Bitmap::new(first.width(), first.height(), samples, first.polarity()).expect("same size"))
}

pub fn build_templates(font: &Font, s: u32, cfg: &ChannelConfig) -> Result<TemplateBank, RecognitionError> {
    let chars = font.chars();
    if chars.is_empty() {
        return Err(RecognitionError::EmptyFont);
    }
    cfg.validate()?;
    let pad = template_padding(cfg);
    let mut templates = BTreeMap::new();
    let mut excluded = Vec::new();
    for c in chars {
        let bitmap = font.glyph(c, s)?.and_then(|g| g.bitmap);
        let Some(glyph) = bitmap else {
            excluded.push(c);
            continue;
        };
        let t = expected_template(&glyph, pad, cfg)?;
        let first = t.samples()[0];
        if t.samples().iter().all(|&v| v == first) {
            excluded.push(c);
        } else {
            templates.insert(c, t);
        }
    }
    if templates.is_empty() {
        return Err(RecognitionError::EmptyBank);
    }
    Ok(TemplateBank { label: font.label().to_string(), config: cfg.noiseless(), scale: s, pad, templates, excluded })
}

/// Pairwise NCC of all templates, each left-aligned on a zero canvas of the
/// largest template size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub labels: Vec<char>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.labels.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| self.values[i][j]))
    }

    pub fn pair_count(&self) -> usize {
        let n = self.labels.len();
        n * n.saturating_sub(1) / 2
    }

    pub fn mean_off_diagonal(&self) -> f64 {
        let n = self.pair_count();
        if n == 0 {
            return 0.0;
        }
        self.off_diagonal().sum::<f64>() / n as f64
    }

    /// Share of distinct pairs scoring strictly above `threshold`.
    pub fn fraction_above(&self, threshold: f64) -> f64 {
        let n = self.pair_count();
        if n == 0 {
            return 0.0;
        }
        self.off_diagonal().filter(|&v| v > threshold).count() as f64 / n as f64
    }

    /// Pairs scoring above `threshold`, highest first.
    pub fn confusable_pairs(&self, threshold: f64) -> Vec<(char, char, f64)> {
        let n = self.labels.len();
        let mut out: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.values[i][j] > threshold)
            .map(|(i, j)| (self.labels[i], self.labels[j], self.values[i][j]))
            .collect();
        out.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        out
    }
}

pub fn similarity_matrix(bank: &TemplateBank) -> SimilarityMatrix {
    let w = bank.templates.values().map(Bitmap::width).max().unwrap_or(0);
    let h = bank.cell_height();
    let padded: Vec<Bitmap> = bank
        .templates
        .values()
        .map(|t| {
            let mut c = Bitmap::blank(w, h, Polarity::LightOnDark);
            c.blit(t, 0, 0);
            c
        })
        .collect();
    let n = padded.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                let s = Sums::of(padded[i].samples(), padded[i].samples()).pearson();
                if s.degenerate { 0.0 } else { 1.0 }
            } else {
                ncc(&padded[i], &padded[j]).expect("same size").score
            };
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    SimilarityMatrix { labels: bank.templates.keys().copied().collect(), values }
}
