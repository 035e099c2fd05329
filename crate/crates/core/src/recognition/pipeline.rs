use std::collections::BTreeSet;

use super::cer::{score_cer, CerReport};
use super::matcher::{match_templates, MatchOutcome, MatchParams};
use super::templates::TemplateBank;
use super::RecognitionError;
use crate::channel::{emanate, ChannelConfig};
use crate::font::Font;
use crate::raster::{rasterize_text, Bitmap, GtCell, LayoutSpec, Rendered};

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub outcome: MatchOutcome,
    pub cer: CerReport,
}

/// Recognizes `image` with `bank` and scores the hits against `truth`.
pub fn evaluate(
    image: &Bitmap,
    truth: &[GtCell],
    bank: &TemplateBank,
    params: &MatchParams,
    targets: &BTreeSet<char>,
) -> Result<Evaluation, RecognitionError> {
    let cell_h = bank.cell_height();
    if let Some(c) = truth.iter().find(|c| c.h != cell_h) {
        return Err(RecognitionError::ScaleMismatch { truth_height: c.h, template_height: cell_h });
    }
    let outcome = match_templates(image, bank, params);
    let cer = score_cer(&outcome.hits, truth, targets)?;
    Ok(Evaluation { outcome, cer })
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub rendered: Rendered,
    pub emission: Bitmap,
    pub evaluation: Evaluation,
}

/// Render, emanate, recognize and score in one go.
pub fn simulate(
    font: &Font,
    text: &str,
    layout: &LayoutSpec,
    cfg: &ChannelConfig,
    bank: &TemplateBank,
    params: &MatchParams,
    targets: &BTreeSet<char>,
) -> Result<Simulation, RecognitionError> {
    let rendered = rasterize_text(text, font, layout)?;
    let emission = emanate(&rendered.bitmap, cfg)?;
    let evaluation = evaluate(&emission, &rendered.truth, bank, params, targets)?;
    Ok(Simulation { rendered, emission, evaluation })
}
