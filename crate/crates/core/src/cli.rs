//! The `tempest-fontlab` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::atlas::to_atlas_string;
use crate::channel::{emanate, parse_snr, ChannelConfig, Standard};
use crate::corpus::corpus;
use crate::font::Font;
use crate::glyph::{builtin_glyphset, validate_set, Family};
use crate::pgm;
use crate::raster::{parse_ground_truth, rasterize_text, write_ground_truth, LayoutSpec, MissingGlyph};
use crate::recognition::report::{merge_reports, parse_report, EvaluationReport, RecognizerConfig, RunManifest};
use crate::recognition::{build_templates, evaluate, similarity_matrix, MatchParams};
use crate::standin::{standin_atlas, StandIn};

pub const SEED_ENV: &str = "TEMPEST_FONTLAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "tempest-fontlab", version, about = "Safe fonts, emanation channels and eavesdropper CER")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a font atlas for a built-in family and check its glyph rules.
    Synth(SynthArgs),
    /// Lay text out as a screen image plus a ground-truth sidecar.
    Render(RenderArgs),
    /// Pass a screen image through an emanation channel model.
    Emanate(EmanateArgs),
    /// Recognize an emission image and score it against ground truth.
    Evaluate(EvaluateArgs),
    /// Merge evaluation reports into one comparison table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Symmetrical,
    Asymmetrical,
    SerifLike,
    SansLike,
}

impl FamilyArg {
    fn font(self, scale: u32) -> Font {
        match self {
            FamilyArg::Symmetrical => Font::builtin(Family::Symmetrical),
            FamilyArg::Asymmetrical => Font::builtin(Family::Asymmetrical),
            FamilyArg::SerifLike => Font::Raster(standin_atlas(StandIn::SerifLike, scale)),
            FamilyArg::SansLike => Font::Raster(standin_atlas(StandIn::SansLike, scale)),
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FontArgs {
    /// Built-in family.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Stroke or raster atlas file.
    #[arg(long)]
    atlas: Option<PathBuf>,
}

impl FontArgs {
    fn load(&self, scale: u32) -> Result<(Font, String)> {
        match (&self.family, &self.atlas) {
            (Some(f), _) => {
                let font = f.font(scale);
                let label = font.label().to_string();
                Ok((font, label))
            }
            (None, Some(p)) => {
                let font = Font::load(p).with_context(|| format!("loading atlas {}", p.display()))?;
                Ok((font, p.display().to_string()))
            }
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Debug, Args)]
struct ChannelArgs {
    #[arg(long, value_parser = Standard::from_str)]
    standard: Standard,
    /// Signal-to-noise ratio in dB, or "inf".
    #[arg(long, default_value = "inf", value_parser = parse_snr)]
    snr_db: f64,
    /// Receiver bandwidth as a fraction of the pixel rate, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    bw_frac: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    printer_diodes: u32,
}

impl ChannelArgs {
    fn config(&self) -> Result<ChannelConfig> {
        let cfg = ChannelConfig {
            standard: self.standard,
            snr_db: self.snr_db,
            bw_frac: self.bw_frac,
            seed: self.seed,
            printer_diodes: self.printer_diodes,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Pixels per grid unit; only used by the raster comparison fonts.
    #[arg(long, default_value_t = 1)]
    scale: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    font: FontArgs,
    /// Text to render; `\n` starts a new line.
    #[arg(long, conflicts_with = "corpus")]
    text: Option<String>,
    /// Text file to render. Without --text or --corpus the built-in corpus is used.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    scale: u32,
    #[arg(long, default_value_t = 3)]
    tracking: u32,
    #[arg(long, default_value_t = 3)]
    leading: u32,
    #[arg(long, default_value_t = 4)]
    margin: u32,
    #[arg(long, value_enum, default_value = "fail")]
    missing: MissingArg,
    /// Screen image (PGM).
    #[arg(long)]
    out: PathBuf,
    /// Ground-truth sidecar; defaults to the output path with extension `gt`.
    #[arg(long)]
    gt: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MissingArg {
    Fail,
    Tofu,
}

#[derive(Debug, Args)]
struct EmanateArgs {
    /// Screen image (PGM).
    input: PathBuf,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Emission image (PGM).
    input: PathBuf,
    /// Ground-truth sidecar from `render`.
    #[arg(long)]
    gt: PathBuf,
    #[command(flatten)]
    font: FontArgs,
    /// Pixels per grid unit; inferred from the ground-truth cell height if omitted.
    #[arg(long)]
    scale: Option<u32>,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 0.8)]
    threshold: f64,
    /// Suppression window in pixels; half the narrowest template by default.
    #[arg(long)]
    nms_window: Option<usize>,
    /// Characters looked for.
    #[arg(long, default_value = "achns")]
    targets: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Evaluation reports to merge.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Synth(a) => synth(a),
        Command::Render(a) => render(a),
        Command::Emanate(a) => emanate_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Report(a) => report(a),
    }
}

fn write(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn echo(manifest: &RunManifest) {
    println!("{}", serde_json::to_string_pretty(manifest).expect("manifest serializes"));
}

fn synth(a: SynthArgs) -> Result<()> {
    if a.scale == 0 {
        bail!("scale must be at least 1");
    }
    let family = match a.family {
        FamilyArg::Symmetrical => Family::Symmetrical,
        FamilyArg::Asymmetrical => Family::Asymmetrical,
        other => {
            let Font::Raster(atlas) = other.font(a.scale) else { unreachable!() };
            write(&a.out, atlas.encode())?;
            println!("{}: {} glyphs at scale {} (comparison font, no proportion rules)", atlas.name, atlas.glyphs.len(), a.scale);
            return Ok(());
        }
    };
    let params = family.params();
    let set = builtin_glyphset(family);
    let reports = validate_set(&set, &params)?;
    write(&a.out, to_atlas_string(&set, &params)?)?;
    let bad: Vec<_> = reports.iter().filter(|(_, r)| !r.ok).collect();
    println!("{}: {} glyphs, {} with rule violations", family, set.len(), bad.len());
    for (c, r) in &bad {
        for v in &r.violations {
            println!("  {c:?} {}: {}", v.rule, v.message);
        }
    }
    if !bad.is_empty() {
        bail!("{} glyphs violate the proportion rules", bad.len());
    }
    Ok(())
}

fn render(a: RenderArgs) -> Result<()> {
    let text = match (&a.text, &a.corpus) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => String::from_utf8(read(p)?).with_context(|| format!("{} is not UTF-8", p.display()))?,
        (None, None) => corpus(),
    };
    let text = text.trim_end_matches('\n').to_string();
    if text.trim().is_empty() {
        bail!("nothing to render: text is empty");
    }
    let (font, label) = a.font.load(a.scale)?;
    let missing = match a.missing {
        MissingArg::Fail => MissingGlyph::Fail,
        MissingArg::Tofu => MissingGlyph::Tofu,
    };
    let layout = LayoutSpec { scale: a.scale, tracking: a.tracking, leading: a.leading, margin: a.margin, missing };
    let rendered = rasterize_text(&text, &font, &layout)?;
    let gt = a.gt.clone().unwrap_or_else(|| a.out.with_extension("gt"));
    write(&a.out, pgm::encode(&rendered.bitmap))?;
    write(&gt, write_ground_truth(&rendered.truth))?;

    let mut m = RunManifest::new("render");
    m.font = Some(label);
    m.text = Some(text);
    m.scale = Some(a.scale);
    m.layout = Some(layout);
    m.outputs = BTreeMap::from([("image".into(), path_str(&a.out)), ("ground_truth".into(), path_str(&gt))]);
    echo(&m);
    Ok(())
}

fn emanate_cmd(a: EmanateArgs) -> Result<()> {
    let cfg = a.channel.config()?;
    let screen = pgm::decode(&read(&a.input)?).with_context(|| format!("parsing {}", a.input.display()))?;
    let out = emanate(&screen, &cfg)?;
    write(&a.out, pgm::encode(&out))?;

    let mut m = RunManifest::new("emanate");
    m.channel = Some(cfg);
    m.inputs = BTreeMap::from([("image".into(), path_str(&a.input))]);
    m.outputs = BTreeMap::from([("emission".into(), path_str(&a.out))]);
    echo(&m);
    Ok(())
}

fn infer_scale(font: &Font, cell_h: usize) -> Result<u32> {
    let unit = font.metrics().cell_height as usize;
    if cell_h == 0 || !cell_h.is_multiple_of(unit) {
        bail!("ground-truth cells are {cell_h} px tall, not a multiple of the font's {unit}-unit cell; scale mismatch");
    }
    Ok((cell_h / unit) as u32)
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let targets: BTreeSet<char> = a.targets.chars().filter(|c| !c.is_whitespace()).collect();
    if targets.is_empty() {
        bail!("--targets must name at least one character");
    }
    let cfg = a.channel.config()?;
    let image = pgm::decode(&read(&a.input)?).with_context(|| format!("parsing {}", a.input.display()))?;
    let gt_text = String::from_utf8(read(&a.gt)?).context("ground truth is not UTF-8")?;
    let truth = parse_ground_truth(&gt_text)?;
    if truth.is_empty() {
        bail!("ground truth {} lists no characters", a.gt.display());
    }

    // Raster fonts need the scale before loading; probe at 1 and reload.
    let scale = match a.scale {
        Some(s) => s,
        None => infer_scale(&a.font.load(1)?.0, truth[0].h)?,
    };
    if scale == 0 {
        bail!("scale must be at least 1");
    }
    let (font, label) = a.font.load(scale)?;
    let bank = build_templates(&font, scale, &cfg)?;
    let params = MatchParams { threshold: a.threshold, nms_window: a.nms_window, ..MatchParams::default() };
    let eval = evaluate(&image, &truth, &bank, &params, &targets)?;
    let sim = similarity_matrix(&bank);

    let mut m = RunManifest::new("evaluate");
    m.font = Some(label.clone());
    m.scale = Some(scale);
    m.channel = Some(cfg);
    m.recognizer =
        Some(RecognizerConfig { threshold: a.threshold, nms_window: a.nms_window, targets: targets.iter().collect() });
    m.inputs = BTreeMap::from([("emission".into(), path_str(&a.input)), ("ground_truth".into(), path_str(&a.gt))]);
    m.outputs = BTreeMap::from([("report".into(), path_str(&a.out))]);
    let report = EvaluationReport::new(m, font.label(), scale, cfg, a.threshold, &targets, &eval, Some(&sim));
    write(&a.out, report.to_json())?;
    println!("{label} {}: aggregate CER {:.4} ({})", cfg.standard, report.aggregate_cer, report.aggregate_cer_exact);
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let mut reports = Vec::new();
    for p in &a.inputs {
        let text = String::from_utf8(read(p)?).with_context(|| format!("{} is not UTF-8", p.display()))?;
        let r = parse_report(&text).with_context(|| format!("reading report {}", p.display()))?;
        reports.push((path_str(p), r));
    }
    let mut m = RunManifest::new("report");
    m.inputs = reports.iter().enumerate().map(|(i, (p, _))| (format!("report{i}"), p.clone())).collect();
    m.outputs = BTreeMap::from([("table".into(), path_str(&a.out))]);
    let table = merge_reports(m, &reports);
    write(&a.out, table.to_json())?;
    print!("{}", table.to_text());
    Ok(())
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}
