//! The eavesdropper: channel-matched templates, NCC matching and CER scoring.

mod cer;
mod matcher;
mod ncc;
mod pipeline;
pub mod report;
mod templates;

use thiserror::Error;

pub use cer::{round4, score_cer, CerError, CerInputs, CerReport};
pub use matcher::{
    default_nms_window, match_templates, non_max_suppression, rank, score_map, Engine, MatchHit, MatchOutcome,
    MatchParams,
};
pub use ncc::{ncc, Ncc};
pub use pipeline::{evaluate, simulate, Evaluation, Simulation};
pub use templates::{build_templates, expected_template, render_template, similarity_matrix, template_padding, SimilarityMatrix, TemplateBank};

use crate::channel::ChannelError;
use crate::raster::RasterError;

#[derive(Debug, Error)]
pub enum RecognitionError {
    #[error("font has no glyphs")]
    EmptyFont,
    #[error("every glyph template is blank after the channel")]
    EmptyBank,
    #[error("image sizes differ: {a:?} vs {b:?}")]
    Dimensions { a: (usize, usize), b: (usize, usize) },
    #[error("ground-truth cells are {truth_height} px tall but templates are {template_height} px; scale mismatch")]
    ScaleMismatch { truth_height: usize, template_height: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Cer(#[from] CerError),
}
