mod common;

use std::collections::BTreeSet;

use common::*;
use fontlab::channel::tmds::{minimize_transitions, tmds_decode, tmds_encode};
use fontlab::raster::{Bitmap, Polarity};
use fontlab::recognition::{match_templates, ncc, Engine, MatchParams, TemplateBank};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest running disparity magnitude the encoder can reach from a reset link.
const DISPARITY_BOUND: i32 = 8;

#[test]
fn tmds_encoder_matches_reference_for_every_byte_and_disparity() {
    for d in -8..=8 {
        for v in 0..=255u8 {
            let (bits, cnt) = reference_tmds(v, d);
            let got = tmds_encode(v, d);
            assert_eq!(got.bits, bits_to_u16(&bits), "value {v:#04x} disparity {d}");
            assert_eq!(got.disparity_after, cnt, "value {v:#04x} disparity {d}");
            assert_eq!(tmds_decode(got.bits), v);
        }
    }
}

#[test]
fn reachable_disparities_found_by_search() {
    let mut seen = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(c) = frontier.pop() {
        for v in 0..=255u8 {
            let n = tmds_encode(v, c).disparity_after;
            if seen.insert(n) {
                frontier.push(n);
            }
        }
    }
    let expected: BTreeSet<i32> = (-DISPARITY_BOUND..=DISPARITY_BOUND).step_by(2).collect();
    assert_eq!(seen, expected);
}

#[test]
fn random_stream_stays_within_frozen_disparity_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d15);
    let mut cnt = 0;
    let mut worst = 0;
    for _ in 0..1_000_000 {
        cnt = tmds_encode(rng.random(), cnt).disparity_after;
        worst = worst.max(cnt.abs());
    }
    assert_eq!(worst, DISPARITY_BOUND);
}

#[test]
fn stage_one_never_exceeds_three_transitions() {
    for v in 0..=255u8 {
        let q = minimize_transitions(v);
        let bits: Vec<u8> = (0..8).map(|i| ((q >> i) & 1) as u8).collect();
        assert!(transitions(&bits) <= 3, "{v:#04x}");
    }
}

#[test]
fn stage_one_can_add_transitions_to_quiet_bytes() {
    // 0x07 = 1110_0000 on the wire has one transition; its XOR chain has two.
    let count = (0..=255u8)
        .filter(|&v| {
            let raw: Vec<u8> = (0..8).map(|i| (v >> i) & 1).collect();
            let q = minimize_transitions(v);
            let out: Vec<u8> = (0..8).map(|i| ((q >> i) & 1) as u8).collect();
            transitions(&out) > transitions(&raw)
        })
        .count();
    assert_eq!(count, 22);
}

fn bank_of(scene: &Scene) -> TemplateBank {
    TemplateBank {
        label: "scene".into(),
        config: fontlab::channel::ChannelConfig::new(fontlab::channel::Standard::Vga),
        scale: 1,
        pad: 0,
        templates: scene.templates.iter().cloned().collect(),
        excluded: vec![],
    }
}

#[test]
fn matcher_agrees_with_brute_force() {
    let mut total = 0;
    for seed in 0..25 {
        let scene = random_scene(seed);
        let bank = bank_of(&scene);
        let refs: Vec<(char, &Bitmap)> = scene.templates.iter().map(|(c, t)| (*c, t)).collect();
        for threshold in [0.5, 0.8] {
            let window = bank.min_width() / 2;
            let want = brute_force_match(&scene.image, &refs, 0, threshold, window);
            total += want.len();
            for engine in [Engine::Direct, Engine::Fft] {
                let got = match_templates(&scene.image, &bank, &MatchParams { threshold, nms_window: None, engine });
                let key = |h: &fontlab::recognition::MatchHit| (h.codepoint, h.x, h.y);
                assert_eq!(
                    got.hits.iter().map(key).collect::<Vec<_>>(),
                    want.iter().map(key).collect::<Vec<_>>(),
                    "seed {seed} threshold {threshold} {engine:?}"
                );
                for (g, w) in got.hits.iter().zip(&want) {
                    assert!((g.score - w.score).abs() < 1e-9);
                }
            }
        }
    }
    assert!(total > 50, "scenes too easy: {total} hits");
}

proptest! {
    #[test]
    fn ncc_matches_two_pass_formula(
        t in prop::collection::vec(any::<u8>(), 12),
        w in prop::collection::vec(any::<u8>(), 12),
    ) {
        let a = Bitmap::new(4, 3, t.clone(), Polarity::LightOnDark).unwrap();
        let b = Bitmap::new(4, 3, w.clone(), Polarity::LightOnDark).unwrap();
        let got = ncc(&a, &b).unwrap();
        let tf: Vec<f64> = t.iter().map(|&v| v as f64).collect();
        let wf: Vec<f64> = w.iter().map(|&v| v as f64).collect();
        prop_assert!((got.score - reference_ncc(&tf, &wf)).abs() < 1e-12);
    }
}
