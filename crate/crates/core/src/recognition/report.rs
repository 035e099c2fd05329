//! JSON artifacts: evaluation reports and merged comparison tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cer::{round4, CerReport};
use super::pipeline::Evaluation;
use super::templates::SimilarityMatrix;
use crate::channel::ChannelConfig;
use crate::raster::LayoutSpec;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
pub const CONFUSION_THRESHOLD: f64 = 0.8;

/// Attacker settings as they appear on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognizerConfig {
    pub threshold: f64,
    pub nms_window: Option<usize>,
    /// Looked-for characters, in codepoint order.
    pub targets: String,
}

/// Everything needed to re-run the command that produced an artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recognizer: Option<RecognizerConfig>,
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            font: None,
            text: None,
            scale: None,
            layout: None,
            channel: None,
            recognizer: None,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub font: String,
    pub scale: u32,
    pub channel: ChannelConfig,
    pub threshold: f64,
    pub nms_window: usize,
    pub targets: String,
    /// How repeated false hits on one cell are counted toward `m`.
    pub m_counting: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharRow {
    pub char: char,
    pub u: u64,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub q: u64,
    pub cer: f64,
    pub cer_exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub config: ReportConfig,
    pub per_char: Vec<CharRow>,
    pub aggregate_cer: f64,
    pub aggregate_cer_exact: String,
    pub hit_count: usize,
    #[serde(default)]
    pub skipped_templates: Vec<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity_labels: Option<Vec<char>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity_matrix: Option<Vec<Vec<f64>>>,
}

fn per_char_rows(cer: &CerReport) -> Vec<CharRow> {
    cer.per_char
        .iter()
        .map(|(&c, i)| CharRow {
            char: c,
            u: i.u,
            m: i.m,
            n: i.n,
            k: i.k,
            q: i.q,
            cer: round4(i.cer()),
            cer_exact: i.cer().to_string(),
        })
        .collect()
}

impl EvaluationReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        manifest: RunManifest,
        font: &str,
        scale: u32,
        channel: ChannelConfig,
        threshold: f64,
        targets: &BTreeSet<char>,
        eval: &Evaluation,
        similarity: Option<&SimilarityMatrix>,
    ) -> Self {
        let agg = eval.cer.aggregate();
        EvaluationReport {
            schema_version: SCHEMA_VERSION,
            manifest,
            config: ReportConfig {
                font: font.to_string(),
                scale,
                channel,
                threshold,
                nms_window: eval.outcome.nms_window,
                targets: targets.iter().collect(),
                m_counting: "per-hit".into(),
            },
            per_char: per_char_rows(&eval.cer),
            aggregate_cer: round4(agg),
            aggregate_cer_exact: agg.to_string(),
            hit_count: eval.outcome.hits.len(),
            skipped_templates: eval.outcome.skipped.clone(),
            similarity_labels: similarity.map(|s| s.labels.clone()),
            similarity_matrix: similarity.map(|s| s.values.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("schema version {found}, expected {expected}")]
    Version { found: String, expected: u32 },
}

pub fn parse_report(text: &str) -> Result<EvaluationReport, ReportError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("schema_version") {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION as u64) => {}
        Some(v) => return Err(ReportError::Version { found: v.to_string(), expected: SCHEMA_VERSION }),
        None => {
            return Err(ReportError::Schema { path: ".".into(), message: "missing field `schema_version`".into() })
        }
    }
    serde_path_to_error::deserialize(value).map_err(|e| ReportError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    pub font: String,
    pub standard: String,
    pub source: String,
    pub aggregate_cer: f64,
    pub aggregate_cer_exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub char: char,
    /// One entry per column; `None` when that report did not look for the character.
    pub cer: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySummary {
    pub label: String,
    pub glyphs: usize,
    pub mean_off_diagonal: f64,
    pub threshold: f64,
    pub fraction_above_threshold: f64,
}

/// Several reports side by side: one column per report, one row per
/// looked-for character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub similarity: Vec<SimilaritySummary>,
}

impl ComparisonTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes") + "\n"
    }

    /// Plain-text rendering, characters down and reports across.
    pub fn to_text(&self) -> String {
        let mut out = String::from("char");
        for c in &self.columns {
            out.push('\t');
            out.push_str(&c.label);
        }
        out.push('\n');
        for r in &self.rows {
            out.push(r.char);
            for v in &r.cer {
                out.push('\t');
                match v {
                    Some(v) => out.push_str(&format!("{v:.4}")),
                    None => out.push('-'),
                }
            }
            out.push('\n');
        }
        out.push_str("all");
        for c in &self.columns {
            out.push_str(&format!("\t{:.4}", c.aggregate_cer));
        }
        out.push('\n');
        out
    }
}

/// `reports` pairs each parsed report with the path it came from.
pub fn merge_reports(manifest: RunManifest, reports: &[(String, EvaluationReport)]) -> ComparisonTable {
    let columns: Vec<Column> = reports
        .iter()
        .map(|(src, r)| Column {
            label: format!("{}/{}", r.config.font, r.config.channel.standard),
            font: r.config.font.clone(),
            standard: r.config.channel.standard.to_string(),
            source: src.clone(),
            aggregate_cer: r.aggregate_cer,
            aggregate_cer_exact: r.aggregate_cer_exact.clone(),
        })
        .collect();
    let chars: BTreeSet<char> = reports.iter().flat_map(|(_, r)| r.per_char.iter().map(|c| c.char)).collect();
    let rows = chars
        .into_iter()
        .map(|ch| Row {
            char: ch,
            cer: reports.iter().map(|(_, r)| r.per_char.iter().find(|c| c.char == ch).map(|c| c.cer)).collect(),
        })
        .collect();
    let similarity = reports
        .iter()
        .filter_map(|(_, r)| {
            let labels = r.similarity_labels.as_ref()?;
            let values = r.similarity_matrix.as_ref()?;
            let m = SimilarityMatrix { labels: labels.clone(), values: values.clone() };
            Some(SimilaritySummary {
                label: format!("{}/{}", r.config.font, r.config.channel.standard),
                glyphs: labels.len(),
                mean_off_diagonal: m.mean_off_diagonal(),
                threshold: CONFUSION_THRESHOLD,
                fraction_above_threshold: m.fraction_above(CONFUSION_THRESHOLD),
            })
        })
        .collect();
    ComparisonTable { schema_version: SCHEMA_VERSION, manifest, columns, rows, similarity }
}
