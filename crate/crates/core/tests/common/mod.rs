//! Slow, obviously-correct reference implementations used as test oracles.

#![allow(dead_code)]

use fontlab::raster::{Bitmap, Polarity};
use fontlab::recognition::MatchHit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// DVI 1.0 encoder written out bit by bit from the flow chart. Returns the
/// ten output bits (index 0 goes out first) and the new disparity.
pub fn reference_tmds(d: u8, cnt: i32) -> ([u8; 10], i32) {
    let d: Vec<u8> = (0..8).map(|i| (d >> i) & 1).collect();
    let n1d: u32 = d.iter().map(|&b| b as u32).sum();
    let mut q_m = [0u8; 9];
    q_m[0] = d[0];
    if n1d > 4 || (n1d == 4 && d[0] == 0) {
        for i in 1..8 {
            q_m[i] = 1 - (q_m[i - 1] ^ d[i]);
        }
        q_m[8] = 0;
    } else {
        for i in 1..8 {
            q_m[i] = q_m[i - 1] ^ d[i];
        }
        q_m[8] = 1;
    }
    let n1: i32 = q_m[..8].iter().map(|&b| b as i32).sum();
    let n0 = 8 - n1;
    let mut q_out = [0u8; 10];
    let new_cnt;
    if cnt == 0 || n1 == n0 {
        q_out[9] = 1 - q_m[8];
        q_out[8] = q_m[8];
        for i in 0..8 {
            q_out[i] = if q_m[8] == 1 { q_m[i] } else { 1 - q_m[i] };
        }
        new_cnt = if q_m[8] == 0 { cnt + (n0 - n1) } else { cnt + (n1 - n0) };
    } else if (cnt > 0 && n1 > n0) || (cnt < 0 && n0 > n1) {
        q_out[9] = 1;
        q_out[8] = q_m[8];
        for i in 0..8 {
            q_out[i] = 1 - q_m[i];
        }
        new_cnt = cnt + 2 * q_m[8] as i32 + (n0 - n1);
    } else {
        q_out[9] = 0;
        q_out[8] = q_m[8];
        q_out[..8].copy_from_slice(&q_m[..8]);
        new_cnt = cnt - 2 * (1 - q_m[8] as i32) + (n1 - n0);
    }
    (q_out, new_cnt)
}

pub fn bits_to_u16(bits: &[u8; 10]) -> u16 {
    bits.iter().enumerate().map(|(i, &b)| (b as u16) << i).sum()
}

/// Level changes between consecutive bits.
pub fn transitions(bits: &[u8]) -> u32 {
    bits.windows(2).filter(|w| w[0] != w[1]).count() as u32
}

/// Pearson correlation by the two-pass textbook formula.
pub fn reference_ncc(t: &[f64], w: &[f64]) -> f64 {
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let mw = w.iter().sum::<f64>() / n;
    let (mut stw, mut stt, mut sww) = (0.0, 0.0, 0.0);
    for (a, b) in t.iter().zip(w) {
        stw += (a - mt) * (b - mw);
        stt += (a - mt) * (a - mt);
        sww += (b - mw) * (b - mw);
    }
    if stt <= 0.0 || sww <= 0.0 {
        return 0.0;
    }
    stw / (stt * sww).sqrt()
}

/// Every valid placement of every template, then quadratic greedy
/// suppression. Hits are reported at `window x + pad`.
pub fn brute_force_match(
    image: &Bitmap,
    templates: &[(char, &Bitmap)],
    pad: usize,
    threshold: f64,
    window: usize,
) -> Vec<MatchHit> {
    let mut cands = Vec::new();
    for &(c, t) in templates {
        if t.width() > image.width() || t.height() > image.height() {
            continue;
        }
        let tv: Vec<f64> = t.samples().iter().map(|&v| v as f64).collect();
        for y in 0..=image.height() - t.height() {
            for x in 0..=image.width() - t.width() {
                let mut wv = Vec::with_capacity(tv.len());
                for ty in 0..t.height() {
                    for tx in 0..t.width() {
                        wv.push(image.get(x + tx, y + ty) as f64);
                    }
                }
                let score = reference_ncc(&tv, &wv);
                if score >= threshold {
                    cands.push(MatchHit { codepoint: c, x: x + pad, y, score });
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        b.score.total_cmp(&a.score).then(a.y.cmp(&b.y)).then(a.x.cmp(&b.x)).then(a.codepoint.cmp(&b.codepoint))
    });
    let mut kept: Vec<MatchHit> = Vec::new();
    for h in cands {
        if kept.iter().all(|k| k.x.abs_diff(h.x) > window || k.y.abs_diff(h.y) > window) {
            kept.push(h);
        }
    }
    kept.sort_by_key(|h| (h.y, h.x, h.codepoint));
    kept
}

/// A random test scene: a few small random templates, some of them stamped
/// into a noisy background so there is something to find.
pub struct Scene {
    pub image: Bitmap,
    pub templates: Vec<(char, Bitmap)>,
}

pub fn random_scene(seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.random_range(16..=64);
    let h = rng.random_range(16..=64);
    let levels = [0u8, 40, 90, 160, 255];
    let mut samples: Vec<u8> = (0..w * h).map(|_| rng.random_range(0..=30)).collect();
    let n_templates = rng.random_range(2..=5);
    let mut templates = Vec::new();
    for i in 0..n_templates {
        let tw = rng.random_range(3..=8);
        let th = rng.random_range(3..=8);
        let mut t: Vec<u8> = (0..tw * th).map(|_| levels[rng.random_range(0..levels.len())]).collect();
        t[0] = 0;
        t[1] = 255;
        templates.push((char::from(b'a' + i as u8), Bitmap::new(tw, th, t, Polarity::LightOnDark).unwrap()));
    }
    for _ in 0..rng.random_range(1..=6) {
        let (_, t) = &templates[rng.random_range(0..templates.len())];
        if t.width() > w || t.height() > h {
            continue;
        }
        let x0 = rng.random_range(0..=w - t.width());
        let y0 = rng.random_range(0..=h - t.height());
        for y in 0..t.height() {
            for x in 0..t.width() {
                let noise: i32 = rng.random_range(-12..=12);
                samples[(y0 + y) * w + x0 + x] = (t.get(x, y) as i32 + noise).clamp(0, 255) as u8;
            }
        }
    }
    Scene { image: Bitmap::new(w, h, samples, Polarity::LightOnDark).unwrap(), templates }
}
