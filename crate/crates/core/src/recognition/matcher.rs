use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::ncc::Sums;
use super::templates::TemplateBank;
use crate::raster::Bitmap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchHit {
    pub codepoint: char,
    /// Top-left of the matched glyph cell.
    pub x: usize,
    pub y: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Pick per call from the estimated cost.
    #[default]
    Auto,
    Direct,
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchParams {
    pub threshold: f64,
    /// Suppression radius in pixels; defaults to half the narrowest template.
    pub nms_window: Option<usize>,
    #[serde(default)]
    pub engine: Engine,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams { threshold: 0.8, nms_window: None, engine: Engine::Auto }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOutcome {
    /// Sorted by `(y, x, codepoint)`.
    pub hits: Vec<MatchHit>,
    /// Templates larger than the image, not tried.
    pub skipped: Vec<char>,
    pub nms_window: usize,
}

/// Prefix sums of samples and squared samples.
struct Integral {
    stride: usize,
    sum: Vec<u64>,
    sq: Vec<u64>,
}

impl Integral {
    fn new(img: &Bitmap) -> Self {
        let (w, h) = (img.width(), img.height());
        let stride = w + 1;
        let mut sum = vec![0u64; stride * (h + 1)];
        let mut sq = vec![0u64; stride * (h + 1)];
        for y in 0..h {
            let (mut rs, mut rq) = (0u64, 0u64);
            for (x, &v) in img.row(y).iter().enumerate() {
                rs += v as u64;
                rq += (v as u64) * (v as u64);
                sum[(y + 1) * stride + x + 1] = sum[y * stride + x + 1] + rs;
                sq[(y + 1) * stride + x + 1] = sq[y * stride + x + 1] + rq;
            }
        }
        Integral { stride, sum, sq }
    }

    fn rect(&self, table: &[u64], x: usize, y: usize, w: usize, h: usize) -> u64 {
        let s = self.stride;
        table[(y + h) * s + x + w] + table[y * s + x] - table[y * s + x + w] - table[(y + h) * s + x]
    }
}

/// Image spectrum shared by every template in one call.
struct Spectrum {
    w: usize,
    h: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    image: Vec<Complex<f64>>,
}

fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

fn transpose(src: &[Complex<f64>], w: usize, h: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); w * h];
    for y in 0..h {
        for x in 0..w {
            out[x * h + y] = src[y * w + x];
        }
    }
    out
}

impl Spectrum {
    fn new(img: &Bitmap) -> Self {
        let (w, h) = (smooth_size(img.width()), smooth_size(img.height()));
        let mut planner = FftPlanner::new();
        let mut s = Spectrum {
            w,
            h,
            row_fwd: planner.plan_fft_forward(w),
            col_fwd: planner.plan_fft_forward(h),
            row_inv: planner.plan_fft_inverse(w),
            col_inv: planner.plan_fft_inverse(h),
            image: Vec::new(),
        };
        s.image = s.forward(img, None);
        s
    }

    /// Spectrum of `a + i*b`, both zero-padded to the transform size.
    fn forward(&self, a: &Bitmap, b: Option<&Bitmap>) -> Vec<Complex<f64>> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.w * self.h];
        for y in 0..a.height() {
            for (x, &v) in a.row(y).iter().enumerate() {
                buf[y * self.w + x].re = v as f64;
            }
        }
        if let Some(b) = b {
            for y in 0..b.height() {
                for (x, &v) in b.row(y).iter().enumerate() {
                    buf[y * self.w + x].im = v as f64;
                }
            }
        }
        self.row_fwd.process(&mut buf);
        let mut t = transpose(&buf, self.w, self.h);
        self.col_fwd.process(&mut t);
        t
    }

    /// Exact `sum(t * w)` at every valid window for one or two templates.
    /// Two real templates share one transform: the correlation of the image
    /// with `a + i*b` is `corr(a) - i*corr(b)`.
    fn cross(&self, a: &Bitmap, b: Option<&Bitmap>, image: &Bitmap) -> (Vec<u64>, Option<Vec<u64>>) {
        let ft = self.forward(a, b);
        let mut prod: Vec<Complex<f64>> = self.image.iter().zip(&ft).map(|(x, y)| x * y.conj()).collect();
        self.col_inv.process(&mut prod);
        let mut rows = transpose(&prod, self.h, self.w);
        self.row_inv.process(&mut rows);
        let norm = (self.w * self.h) as f64;
        let extract = |t: &Bitmap, part: fn(&Complex<f64>) -> f64| {
            let (px, py) = (image.width() - t.width() + 1, image.height() - t.height() + 1);
            let mut out = Vec::with_capacity(px * py);
            for y in 0..py {
                for x in 0..px {
                    out.push((part(&rows[y * self.w + x]) / norm).round().max(0.0) as u64);
                }
            }
            out
        };
        (extract(a, |c| c.re), b.map(|b| extract(b, |c| -c.im)))
    }
}

fn direct_cross(img: &Bitmap, template: &Bitmap) -> Vec<u64> {
    let (px, py) = (img.width() - template.width() + 1, img.height() - template.height() + 1);
    let mut acc = vec![0u64; px * py];
    let iw = img.width();
    let samples = img.samples();
    for j in 0..template.height() {
        for (i, &tv) in template.row(j).iter().enumerate() {
            if tv == 0 {
                continue;
            }
            let tv = tv as u64;
            for y in 0..py {
                let src = &samples[(y + j) * iw + i..(y + j) * iw + i + px];
                for (a, &v) in acc[y * px..(y + 1) * px].iter_mut().zip(src) {
                    *a += tv * v as u64;
                }
            }
        }
    }
    acc
}

fn nonzero(t: &Bitmap) -> usize {
    t.samples().iter().filter(|&&v| v != 0).count()
}

/// NCC of `template` at every valid position of `image`, row-major with
/// `image.width() - template.width() + 1` columns.
pub fn score_map(image: &Bitmap, template: &Bitmap, engine: Engine) -> Option<Vec<f64>> {
    if template.width() > image.width() || template.height() > image.height() {
        return None;
    }
    let integral = Integral::new(image);
    let cross = match engine {
        Engine::Fft => Spectrum::new(image).cross(template, None, image).0,
        _ => direct_cross(image, template),
    };
    Some(scores(image, template, &integral, &cross))
}

fn scores(image: &Bitmap, template: &Bitmap, integral: &Integral, cross: &[u64]) -> Vec<f64> {
    let (tw, th) = (template.width(), template.height());
    let (px, py) = (image.width() - tw + 1, image.height() - th + 1);
    let base = Sums::of(template.samples(), template.samples());
    let mut out = Vec::with_capacity(px * py);
    for y in 0..py {
        for x in 0..px {
            let sums = Sums {
                n: (tw * th) as u64,
                t: base.t,
                tt: base.tt,
                w: integral.rect(&integral.sum, x, y, tw, th),
                ww: integral.rect(&integral.sq, x, y, tw, th),
                tw: cross[y * px + x],
            };
            out.push(sums.pearson().score);
        }
    }
    out
}

/// Highest score first; ties go to the lower y, then lower x, then codepoint.
pub fn rank(a: &MatchHit, b: &MatchHit) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.y.cmp(&b.y))
        .then(a.x.cmp(&b.x))
        .then(a.codepoint.cmp(&b.codepoint))
}

/// Greedy suppression: walk candidates in rank order and keep one unless an
/// already kept hit lies within `window` pixels on both axes.
pub fn non_max_suppression(mut candidates: Vec<MatchHit>, window: usize) -> Vec<MatchHit> {
    candidates.sort_by(rank);
    let cell = window + 1;
    let mut grid: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut kept = Vec::new();
    for h in candidates {
        let (gx, gy) = (h.x / cell, h.y / cell);
        let blocked = (gy.saturating_sub(1)..=gy + 1).any(|cy| {
            (gx.saturating_sub(1)..=gx + 1).any(|cx| {
                grid.get(&(cx, cy))
                    .is_some_and(|v| v.iter().any(|&(x, y)| x.abs_diff(h.x) <= window && y.abs_diff(h.y) <= window))
            })
        });
        if !blocked {
            grid.entry((gx, gy)).or_default().push((h.x, h.y));
            kept.push(h);
        }
    }
    kept.sort_by_key(|h| (h.y, h.x, h.codepoint));
    kept
}

pub fn default_nms_window(bank: &TemplateBank) -> usize {
    bank.min_width() / 2
}

fn candidates(image: &Bitmap, c: char, t: &Bitmap, integral: &Integral, cross: &[u64], pad: usize, threshold: f64) -> Vec<MatchHit> {
    let px = image.width() - t.width() + 1;
    scores(image, t, integral, cross)
        .into_iter()
        .enumerate()
        .filter(|&(_, s)| s >= threshold)
        .map(|(i, score)| MatchHit { codepoint: c, x: i % px + pad, y: i / px, score })
        .collect()
}

/// Slides every template over `image`, keeps scores at or above the
/// threshold and suppresses overlapping hits across all codepoints.
pub fn match_templates(image: &Bitmap, bank: &TemplateBank, params: &MatchParams) -> MatchOutcome {
    let integral = Integral::new(image);
    let fits = |t: &Bitmap| t.width() <= image.width() && t.height() <= image.height();
    let jobs: Vec<(char, &Bitmap)> = bank.templates.iter().map(|(&c, t)| (c, t)).filter(|(_, t)| fits(t)).collect();
    let skipped: Vec<char> = bank.templates.iter().filter(|(_, t)| !fits(t)).map(|(&c, _)| c).collect();

    let use_fft = match params.engine {
        Engine::Direct => false,
        Engine::Fft => true,
        Engine::Auto => {
            let (w, h) = (smooth_size(image.width()) as f64, smooth_size(image.height()) as f64);
            let fft_cost = (jobs.len() / 2 + 2) as f64 * 6.0 * w * h * (w * h).log2();
            let direct: f64 = jobs
                .iter()
                .map(|(_, t)| {
                    let pos = ((image.width() - t.width() + 1) * (image.height() - t.height() + 1)) as f64;
                    pos * nonzero(t) as f64
                })
                .sum();
            direct > fft_cost
        }
    };
    let spectrum = (use_fft && !jobs.is_empty()).then(|| Spectrum::new(image));
    let pad = bank.pad;
    let th = params.threshold;

    let run = |group: &[(char, &Bitmap)]| -> Vec<MatchHit> {
        match &spectrum {
            Some(sp) => {
                let (a, b) = (group[0], group.get(1));
                let (ca, cb) = sp.cross(a.1, b.map(|b| b.1), image);
                let mut out = candidates(image, a.0, a.1, &integral, &ca, pad, th);
                if let (Some(b), Some(cb)) = (b, cb) {
                    out.extend(candidates(image, b.0, b.1, &integral, &cb, pad, th));
                }
                out
            }
            None => group
                .iter()
                .flat_map(|&(c, t)| candidates(image, c, t, &integral, &direct_cross(image, t), pad, th))
                .collect(),
        }
    };
    let chunk = if spectrum.is_some() { 2 } else { 1 };
    #[cfg(feature = "parallel")]
    let found: Vec<MatchHit> = {
        use rayon::prelude::*;
        jobs.par_chunks(chunk).flat_map_iter(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<MatchHit> = jobs.chunks(chunk).flat_map(run).collect();

    let window = params.nms_window.unwrap_or_else(|| default_nms_window(bank));
    MatchOutcome { hits: non_max_suppression(found, window), skipped, nms_window: window }
}
