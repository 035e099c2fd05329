//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use fontlab::channel::tmds::{minimize_transitions, tmds_decode, tmds_encode};
use fontlab::channel::{emanate, ChannelConfig, Standard};
use fontlab::corpus::corpus;
use fontlab::font::Font;
use fontlab::glyph::{builtin_glyphset, symmetrical_params, validate_set, Family};
use fontlab::pgm;
use fontlab::raster::{rasterize_text, test_pattern, Bitmap, LayoutSpec, PatternKind, Polarity};
use fontlab::recognition::report::{EvaluationReport, RunManifest};
use fontlab::recognition::{
    build_templates, match_templates, similarity_matrix, simulate, CerInputs, Engine, MatchParams, TemplateBank,
};
use fontlab::standin::{standin_atlas, StandIn};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AUDIT_BUDGET: Duration = Duration::from_secs(1);
const TMDS_BUDGET: Duration = Duration::from_secs(5);
const TREND_BUDGET: Duration = Duration::from_secs(60);
const PIPELINE_BUDGET: Duration = Duration::from_secs(5);

/// Largest running disparity magnitude, frozen from a million random bytes.
const DISPARITY_BOUND: i32 = 8;
const HBAR_VBAR_MIN_RATIO: f64 = 50.0;
const ORACLE_IMAGES: u64 = 25;
const TREND_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const TREND_MIN_SEEDS: usize = 4;
const TREND_FACTOR: u64 = 2;
const TREND_TARGETS: &str = "achns";
const CONFUSION_THRESHOLD: f64 = 0.8;
/// Fraction of template pairs above the confusion threshold, noiseless VGA, s=1.
const CONFUSION_FIXTURES: [(&str, f64); 4] =
    [("symmetrical", 0.1556), ("asymmetrical", 0.1619), ("serif-like", 0.0095), ("sans-like", 0.0111)];
const FIXTURE_TOLERANCE: f64 = 5e-5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for family in [Family::Symmetrical, Family::Asymmetrical] {
        let set = builtin_glyphset(family);
        let reports = validate_set(&set, &family.params()).expect("well-formed glyphs");
        let bad: Vec<char> = reports.iter().filter(|(_, r)| !r.ok).map(|(c, _)| *c).collect();
        pass &= bad.is_empty();
        let _ = write!(detail, "{family}: {} glyphs, {} failing {:?}; ", set.len(), bad.len(), bad);
    }
    let took = t0.elapsed();
    pass &= took < AUDIT_BUDGET;
    outcome(pass, format!("{detail}{took:.2?}"))
}

fn criterion_2() -> Outcome {
    let r = |n: u64, d: u64| Ratio::new(n, d);
    // (u, m, n, q) and the expected (m + u - n) / q, worked by hand.
    let cases = [
        ((5, 4, 3, 10), r(3, 5)),
        ((5, 0, 5, 10), r(0, 1)),
        ((0, 0, 0, 7), r(0, 1)),
        ((4, 0, 0, 4), r(1, 1)),
        ((2, 9, 1, 4), r(5, 2)),
        ((1, 0, 0, 3), r(1, 3)),
        ((10, 3, 7, 200), r(3, 100)),
        ((6, 350, 6, 100), r(7, 2)),
        ((3, 1, 2, 9), r(2, 9)),
        ((40, 0, 39, 200), r(1, 200)),
        ((0, 5, 0, 5), r(1, 1)),
        ((12, 12, 0, 36), r(2, 3)),
    ];
    let mut wrong = Vec::new();
    for ((u, m, n, q), want) in cases {
        let got = CerInputs::new(u, m, n, q).map(|c| c.cer());
        if got.as_ref().ok() != Some(&want) {
            wrong.push(format!("({u},{m},{n},{q}) -> {got:?}"));
        }
    }
    let pass = wrong.is_empty() && cases.len() >= 10;
    outcome(pass, format!("{} hand-computed cases, {} wrong {:?}", cases.len(), wrong.len(), wrong))
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let mut round_trip_failures = 0;
    for d in -8..=8 {
        for v in 0..=255u8 {
            let sym = tmds_encode(v, d);
            let (bits, cnt) = reference_tmds(v, d);
            if tmds_decode(sym.bits) != v || sym.bits != bits_to_u16(&bits) || sym.disparity_after != cnt {
                round_trip_failures += 1;
            }
        }
    }
    let more_transitions: Vec<u8> = (0..=255u8)
        .filter(|&v| {
            let raw: Vec<u8> = (0..8).map(|i| (v >> i) & 1).collect();
            let q = minimize_transitions(v);
            let out: Vec<u8> = (0..8).map(|i| ((q >> i) & 1) as u8).collect();
            transitions(&out) > transitions(&raw)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d15);
    let (mut cnt, mut worst) = (0, 0);
    for _ in 0..1_000_000 {
        cnt = tmds_encode(rng.random(), cnt).disparity_after;
        worst = worst.max(cnt.abs());
    }
    let took = t0.elapsed();
    let pass = round_trip_failures == 0 && more_transitions.is_empty() && worst == DISPARITY_BOUND && took < TMDS_BUDGET;
    let shown: Vec<String> = more_transitions.iter().take(4).map(|v| format!("{v:#04x}")).collect();
    outcome(
        pass,
        format!(
            "round trip 256x17: {round_trip_failures} failures; stage-1 data bits with more transitions than the raw byte: {} bytes (e.g. {}); max |disparity| {worst} (frozen {DISPARITY_BOUND}); {took:.2?}",
            more_transitions.len(),
            shown.join(", ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for std in [Standard::Vga, Standard::Printer] {
        for bw in [1.0, 0.5, 0.2] {
            for _ in 0..10 {
                let (w, h) = (rng.random_range(1..40), rng.random_range(1..40));
                let flat = Bitmap::filled(w, h, rng.random(), Polarity::DarkOnLight);
                let cfg = ChannelConfig { bw_frac: bw, ..ChannelConfig::new(std) };
                if emanate(&flat, &cfg).unwrap().samples().iter().any(|&v| v != 0) {
                    problems.push(format!("{std} flat {w}x{h} bw {bw} not silent"));
                }
            }
        }
    }
    for seed in 0..20u64 {
        let (w, h) = (rng.random_range(2..48), rng.random_range(2..48));
        let base: Vec<u8> = (0..w * h).map(|_| rng.random_range(0..=200)).collect();
        let offset: u8 = rng.random_range(1..=55);
        let a = Bitmap::new(w, h, base.clone(), Polarity::DarkOnLight).unwrap();
        let b = Bitmap::new(w, h, base.iter().map(|v| v + offset).collect(), Polarity::DarkOnLight).unwrap();
        let cfg = ChannelConfig { snr_db: 5.0, bw_frac: 0.5, seed, ..ChannelConfig::new(Standard::Vga) };
        if emanate(&a, &cfg).unwrap() != emanate(&b, &cfg).unwrap() {
            problems.push(format!("VGA offset {offset} changed the output (seed {seed})"));
        }
    }
    let p = symmetrical_params();
    let hbar = test_pattern(PatternKind::HBar, 64, 64, 1, &p);
    let vbar = test_pattern(PatternKind::VBar, 64, 64, 1, &p);
    let mut ratios = Vec::new();
    for std in [Standard::Vga, Standard::Printer] {
        let cfg = ChannelConfig::new(std);
        let eh = emanate(&hbar, &cfg).unwrap().energy() as f64;
        let ev = emanate(&vbar, &cfg).unwrap().energy() as f64;
        let ratio = if eh == 0.0 { f64::INFINITY } else { ev / eh };
        if !(ev > 0.0 && ratio >= HBAR_VBAR_MIN_RATIO) {
            problems.push(format!("{std} VBar/HBar ratio {ratio:.1}"));
        }
        ratios.push(format!("{std} {ratio:.1}"));
    }
    outcome(
        problems.is_empty(),
        format!("constant images silent, offset invariance; VBar/HBar energy ratio {}; problems {:?}", ratios.join(", "), problems),
    )
}

fn criterion_5() -> Outcome {
    let mut mismatches = Vec::new();
    let mut hits = 0;
    for seed in 0..ORACLE_IMAGES {
        let scene = random_scene(1000 + seed);
        let bank = TemplateBank {
            label: "scene".into(),
            config: ChannelConfig::new(Standard::Vga),
            scale: 1,
            pad: 0,
            templates: scene.templates.iter().cloned().collect(),
            excluded: vec![],
        };
        let refs: Vec<(char, &Bitmap)> = scene.templates.iter().map(|(c, t)| (*c, t)).collect();
        let want = brute_force_match(&scene.image, &refs, 0, 0.8, bank.min_width() / 2);
        hits += want.len();
        let got = match_templates(&scene.image, &bank, &MatchParams { engine: Engine::Auto, ..MatchParams::default() });
        let key = |h: &fontlab::recognition::MatchHit| (h.codepoint, h.x, h.y);
        let same = got.hits.iter().map(key).eq(want.iter().map(key))
            && got.hits.iter().zip(&want).all(|(g, w)| (g.score - w.score).abs() < 1e-9);
        if !same {
            mismatches.push(seed);
        }
    }
    outcome(
        mismatches.is_empty() && hits > 0,
        format!("{ORACLE_IMAGES} random images, {hits} reference hits, mismatching images {mismatches:?}"),
    )
}

fn trend_fonts(s: u32) -> Vec<Font> {
    vec![
        Font::builtin(Family::Symmetrical),
        Font::builtin(Family::Asymmetrical),
        Font::Raster(standin_atlas(StandIn::SerifLike, s)),
        Font::Raster(standin_atlas(StandIn::SansLike, s)),
    ]
}

fn criterion_6() -> Outcome {
    let t0 = Instant::now();
    let s = 2;
    let text = corpus();
    let targets: BTreeSet<char> = TREND_TARGETS.chars().collect();
    let layout = LayoutSpec { scale: s, ..LayoutSpec::default() };
    let fonts = trend_fonts(s);
    let mut pass = true;
    let mut detail = String::new();
    for std in [Standard::Vga, Standard::Dvi] {
        let base = ChannelConfig { snr_db: 10.0, bw_frac: 0.5, ..ChannelConfig::new(std) };
        let banks: Vec<_> = fonts.iter().map(|f| build_templates(f, s, &base).unwrap()).collect();
        // cer[font][seed]
        let cer: Vec<Vec<Ratio<u64>>> = fonts
            .iter()
            .zip(&banks)
            .map(|(f, bank)| {
                TREND_SEEDS
                    .iter()
                    .map(|&seed| {
                        let cfg = ChannelConfig { seed, ..base };
                        let sim = simulate(f, &text, &layout, &cfg, bank, &MatchParams::default(), &targets).unwrap();
                        sim.evaluation.cer.aggregate()
                    })
                    .collect()
            })
            .collect();
        let good_seeds = (0..TREND_SEEDS.len())
            .filter(|&i| {
                (0..2).all(|safe| {
                    (2..4).all(|other| {
                        let (a, b) = (cer[safe][i], cer[other][i]);
                        a > b && a >= b * TREND_FACTOR
                    })
                })
            })
            .count();
        pass &= good_seeds >= TREND_MIN_SEEDS;
        let means: Vec<String> = fonts
            .iter()
            .zip(&cer)
            .map(|(f, c)| {
                let mean = c.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).sum::<f64>() / c.len() as f64;
                format!("{} {mean:.4}", f.label())
            })
            .collect();
        let _ = write!(detail, "{std}: {good_seeds}/5 seeds hold [{}]; ", means.join(", "));
    }
    let took = t0.elapsed();
    pass &= took < TREND_BUDGET;
    outcome(pass, format!("{detail}{took:.2?}"))
}

fn criterion_7() -> Outcome {
    let cfg = ChannelConfig::new(Standard::Vga);
    let fonts = trend_fonts(1);
    let fractions: Vec<(String, f64)> = fonts
        .iter()
        .map(|f| {
            let bank = build_templates(f, 1, &cfg).unwrap();
            (f.label().to_string(), similarity_matrix(&bank).fraction_above(CONFUSION_THRESHOLD))
        })
        .collect();
    let ordering = (0..2).all(|i| (2..4).all(|j| fractions[i].1 > fractions[j].1));
    let fixtures_hold = fractions
        .iter()
        .zip(CONFUSION_FIXTURES)
        .all(|((label, v), (name, want))| label == name && (v - want).abs() <= FIXTURE_TOLERANCE);
    let shown: Vec<String> = fractions.iter().map(|(l, v)| format!("{l} {v:.4}")).collect();
    outcome(ordering && fixtures_hold, format!("pairs with NCC > {CONFUSION_THRESHOLD}: {}; fixtures {}", shown.join(", "), if fixtures_hold { "match" } else { "DIFFER" }))
}

fn library_run() -> (Vec<u8>, Vec<u8>) {
    let font = Font::builtin(Family::Asymmetrical);
    let s = 2;
    let cfg = ChannelConfig { snr_db: 10.0, bw_frac: 0.5, seed: 99, ..ChannelConfig::new(Standard::Dvi) };
    let layout = LayoutSpec { scale: s, ..LayoutSpec::default() };
    let targets: BTreeSet<char> = "achns".chars().collect();
    let bank = build_templates(&font, s, &cfg).unwrap();
    let params = MatchParams::default();
    let sim = simulate(&font, &corpus(), &layout, &cfg, &bank, &params, &targets).unwrap();
    let sim_m = similarity_matrix(&bank);
    let report = EvaluationReport::new(
        RunManifest::new("acceptance"),
        font.label(),
        s,
        cfg,
        params.threshold,
        &targets,
        &sim.evaluation,
        Some(&sim_m),
    );
    (pgm::encode(&sim.emission), report.to_json().into_bytes())
}

fn cli_run(dir: &Path) -> Vec<Vec<u8>> {
    let p = |name: &str| dir.join(name).display().to_string();
    let run = |args: &[&str]| {
        let code = fontlab::cli::run(std::iter::once("tempest-fontlab").chain(args.iter().copied()));
        assert_eq!(code, 0, "{args:?}");
    };
    run(&["render", "--family", "symmetrical", "--scale", "2", "--out", &p("s.pgm")]);
    run(&["emanate", &p("s.pgm"), "--standard", "vga", "--snr-db", "10", "--bw-frac", "0.5", "--seed", "7", "--out", &p("e.pgm")]);
    run(&[
        "evaluate", &p("e.pgm"), "--gt", &p("s.gt"), "--family", "symmetrical", "--standard", "vga", "--bw-frac", "0.5", "--out",
        &p("r.json"),
    ]);
    ["s.pgm", "s.gt", "e.pgm", "r.json"].iter().map(|f| std::fs::read(dir.join(f)).unwrap()).collect()
}

fn criterion_8() -> Outcome {
    let pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let serial = pool(1).install(library_run);
    let parallel = pool(4).install(library_run);
    let again = pool(4).install(library_run);
    let lib_same = serial == parallel && parallel == again;

    let dir = tempfile::tempdir().unwrap();
    let first = cli_run(dir.path());
    let second = cli_run(dir.path());
    let cli_same = first == second;
    outcome(
        lib_same && cli_same,
        format!(
            "library PGM+JSON identical across 1/4/4 threads: {lib_same}; CLI render/emanate/evaluate repeated byte-identical: {cli_same}"
        ),
    )
}

fn criterion_9() -> Outcome {
    // Fill a 640x480 screen at s=1 with corpus text.
    let s = 1;
    let layout = LayoutSpec { scale: s, ..LayoutSpec::default() };
    let source: Vec<char> = corpus().chars().filter(|&c| c != '\n').collect();
    let mut detail = String::new();
    let mut pass = true;
    for std in [Standard::Vga, Standard::Dvi, Standard::Printer] {
        let t0 = Instant::now();
        let font = Font::builtin(Family::Symmetrical);
        let m = font.metrics();
        let per_line = (640 - 2 * layout.margin as usize) / (m.space_advance + layout.tracking) as usize;
        let lines = (480 - 2 * layout.margin as usize) / (m.line_height + layout.leading) as usize;
        let text: String = (0..lines)
            .map(|l| (0..per_line).map(|i| source[(l * per_line + i) % source.len()]).collect::<String>())
            .collect::<Vec<_>>()
            .join("\n");
        let rendered = rasterize_text(&text, &font, &layout).unwrap();
        let cfg = ChannelConfig { snr_db: 10.0, bw_frac: 0.5, seed: 9, ..ChannelConfig::new(std) };
        let emission = emanate(&rendered.bitmap, &cfg).unwrap();
        let bank = build_templates(&font, s, &cfg).unwrap();
        let targets: BTreeSet<char> = "achns".chars().collect();
        let params = MatchParams::default();
        let eval = fontlab::recognition::evaluate(&emission, &rendered.truth, &bank, &params, &targets).unwrap();
        let report = EvaluationReport::new(
            RunManifest::new("acceptance"),
            font.label(),
            s,
            cfg,
            params.threshold,
            &targets,
            &eval,
            Some(&similarity_matrix(&bank)),
        );
        let json = report.to_json();
        let took = t0.elapsed();
        pass &= took < PIPELINE_BUDGET && !json.is_empty();
        let _ = write!(
            detail,
            "{std} {}x{} {} glyphs {took:.2?}; ",
            rendered.bitmap.width(),
            rendered.bitmap.height(),
            rendered.truth.len()
        );
    }
    outcome(pass, detail.trim_end_matches("; ").to_string())
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 9] = [
        ("parameter audit", criterion_1),
        ("CER arithmetic", criterion_2),
        ("TMDS correctness", criterion_3),
        ("high-pass channel properties", criterion_4),
        ("recognizer oracle equivalence", criterion_5),
        ("CER trend, safe vs comparison fonts", criterion_6),
        ("confusability", criterion_7),
        ("determinism", criterion_8),
        ("performance envelope", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
