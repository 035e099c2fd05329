//! Compromising-emanation channel models.
//!
//! Each standard turns a screen or page bitmap into a raw emission image whose
//! samples are signal amplitudes in 0..=255. The shared receiver stage then
//! band-limits each row and adds seeded Gaussian noise. Output images are
//! light-on-dark: strong emission is bright.

mod emission;
pub mod tmds;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::raster::{Bitmap, Polarity};

pub use emission::{printer_emission, printer_stream_energies, tmds_emission, vga_emission};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Standard {
    Vga,
    Dvi,
    Printer,
}

impl Standard {
    pub const ALL: [Standard; 3] = [Standard::Vga, Standard::Dvi, Standard::Printer];

    pub fn name(self) -> &'static str {
        match self {
            Standard::Vga => "vga",
            Standard::Dvi => "dvi",
            Standard::Printer => "printer",
        }
    }
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Standard {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vga" => Ok(Standard::Vga),
            "dvi" => Ok(Standard::Dvi),
            "printer" => Ok(Standard::Printer),
            other => Err(format!("unknown standard {other:?} (expected vga, dvi or printer)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub standard: Standard,
    /// Signal-to-noise ratio in dB; infinity disables noise.
    #[serde(serialize_with = "ser_snr", deserialize_with = "de_snr")]
    pub snr_db: f64,
    /// Receiver bandwidth as a fraction of the pixel clock, in (0, 1].
    pub bw_frac: f64,
    pub seed: u64,
    #[serde(default = "default_diodes")]
    pub printer_diodes: u32,
}

fn default_diodes() -> u32 {
    2
}

fn ser_snr<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_snr<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Snr {
        Num(f64),
        Text(String),
    }
    match Snr::deserialize(d)? {
        Snr::Num(v) => Ok(v),
        Snr::Text(t) => parse_snr(&t).map_err(serde::de::Error::custom),
    }
}

/// Parses an SNR in dB, accepting `inf` for a noiseless channel.
pub fn parse_snr(text: &str) -> Result<f64, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("invalid SNR {text:?}")),
    }
}

impl ChannelConfig {
    pub fn new(standard: Standard) -> Self {
        ChannelConfig { standard, snr_db: f64::INFINITY, bw_frac: 1.0, seed: 0, printer_diodes: 2 }
    }

    /// The same configuration without noise.
    pub fn noiseless(&self) -> Self {
        ChannelConfig { snr_db: f64::INFINITY, ..*self }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.bw_frac > 0.0 && self.bw_frac <= 1.0) {
            return Err(ChannelError::Config(format!("bandwidth fraction {} outside (0, 1]", self.bw_frac)));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(ChannelError::Config(format!("invalid SNR {}", self.snr_db)));
        }
        if self.printer_diodes == 0 {
            return Err(ChannelError::Config("printer needs at least one diode".into()));
        }
        Ok(())
    }

    /// Width of the receiver's moving-average window in pixels.
    pub fn blur_window(&self) -> usize {
        (1.0 / self.bw_frac).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("invalid channel configuration: {0}")]
    Config(String),
    #[error("configuration is for {got}, this model is {expected}")]
    WrongStandard { expected: Standard, got: Standard },
}

fn expect(cfg: &ChannelConfig, standard: Standard) -> Result<(), ChannelError> {
    cfg.validate()?;
    if cfg.standard != standard {
        return Err(ChannelError::WrongStandard { expected: standard, got: cfg.standard });
    }
    Ok(())
}

/// Runs the model selected by `cfg.standard`.
pub fn emanate(input: &Bitmap, cfg: &ChannelConfig) -> Result<Bitmap, ChannelError> {
    match cfg.standard {
        Standard::Vga => vga_emission(input, cfg),
        Standard::Dvi => tmds_emission(input, cfg),
        Standard::Printer => printer_emission(input, cfg),
    }
}

/// Band-limits every row and adds noise. `raw` holds emission amplitudes.
pub fn apply_receiver(raw: &Bitmap, cfg: &ChannelConfig) -> Result<Bitmap, ChannelError> {
    cfg.validate()?;
    let win = cfg.blur_window();
    let w = raw.width();
    let mut out = Bitmap::blank(w, raw.height(), Polarity::LightOnDark);
    map_rows(raw, &mut out, |_, src, dst| blur_row(src, dst, win));

    if cfg.snr_db.is_finite() {
        let power = ac_power(out.samples());
        if power > 0.0 {
            let sigma = (power / 10f64.powf(cfg.snr_db / 10.0)).sqrt();
            let seed = cfg.seed;
            let blurred = out.clone();
            map_rows(&blurred, &mut out, |r, src, dst| {
                let mut rng = ChaCha8Rng::seed_from_u64(row_seed(seed, r));
                for (d, &v) in dst.iter_mut().zip(src) {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *d = (v as f64 + sigma * z).round().clamp(0.0, 255.0) as u8;
                }
            });
        }
    }
    Ok(out)
}

/// Variance of the samples. The mean level carries no glyph information, so
/// it is left out of the signal power the SNR is referenced to.
pub fn ac_power(samples: &[u8]) -> f64 {
    let n = samples.len() as f64;
    let (s, ss) = samples.iter().fold((0u64, 0u64), |(s, ss), &v| (s + v as u64, ss + (v as u64) * (v as u64)));
    let mean = s as f64 / n;
    (ss as f64 / n - mean * mean).max(0.0)
}

/// Centered moving average with zero padding and round-half-up.
fn blur_row(src: &[u8], dst: &mut [u8], win: usize) {
    if win <= 1 {
        dst.copy_from_slice(src);
        return;
    }
    let n = src.len() as isize;
    let before = (win / 2) as isize;
    let after = win as isize - 1 - before;
    let mut sum: u32 = (0..=after.min(n - 1)).map(|i| src[i as usize] as u32).sum();
    for x in 0..n {
        dst[x as usize] = ((sum + win as u32 / 2) / win as u32) as u8;
        let leaving = x - before;
        if leaving >= 0 {
            sum -= src[leaving as usize] as u32;
        }
        let entering = x + after + 1;
        if entering < n {
            sum += src[entering as usize] as u32;
        }
    }
}

fn row_seed(seed: u64, row: usize) -> u64 {
    let mut z = seed ^ (row as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Applies `f(row_index, src_row, dst_row)` to every row, in parallel when
/// the `parallel` feature is on. `dst` must have the same width as `src`.
pub(crate) fn map_rows<F>(src: &Bitmap, dst: &mut Bitmap, f: F)
where
    F: Fn(usize, &[u8], &mut [u8]) + Sync + Send,
{
    let w = src.width();
    debug_assert_eq!(w, dst.width());
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        dst.samples_mut().par_chunks_mut(w).enumerate().for_each(|(r, d)| f(r, src.row(r), d));
    }
    #[cfg(not(feature = "parallel"))]
    {
        dst.samples_mut().chunks_mut(w).enumerate().for_each(|(r, d)| f(r, src.row(r), d));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blur_window_from_bandwidth() {
        let mut c = ChannelConfig::new(Standard::Vga);
        assert_eq!(c.blur_window(), 1);
        c.bw_frac = 0.5;
        assert_eq!(c.blur_window(), 2);
        c.bw_frac = 0.3;
        assert_eq!(c.blur_window(), 4);
    }

    #[test]
    fn blur_matches_direct_sum() {
        let src: Vec<u8> = vec![0, 255, 10, 200, 7, 0, 0, 90, 33];
        for win in 1..7usize {
            let mut dst = vec![0; src.len()];
            blur_row(&src, &mut dst, win);
            for x in 0..src.len() as isize {
                let lo = x - (win / 2) as isize;
                let sum: u32 = (lo..lo + win as isize)
                    .filter(|&i| i >= 0 && (i as usize) < src.len())
                    .map(|i| src[i as usize] as u32)
                    .sum();
                let want = (2 * sum + win as u32) / (2 * win as u32);
                assert_eq!(dst[x as usize] as u32, want, "win {win} x {x}");
            }
        }
    }

    #[test]
    fn noise_is_reproducible_and_seed_dependent() {
        let raw = Bitmap::new(8, 4, (0..32).map(|v| (v * 7) as u8).collect(), Polarity::LightOnDark).unwrap();
        let mut c = ChannelConfig::new(Standard::Vga);
        c.snr_db = 5.0;
        c.seed = 11;
        let a = apply_receiver(&raw, &c).unwrap();
        assert_eq!(a, apply_receiver(&raw, &c).unwrap());
        c.seed = 12;
        assert_ne!(a, apply_receiver(&raw, &c).unwrap());
    }

    #[test]
    fn silent_input_stays_silent() {
        let raw = Bitmap::blank(5, 5, Polarity::LightOnDark);
        let mut c = ChannelConfig::new(Standard::Vga);
        c.snr_db = -10.0;
        c.bw_frac = 0.25;
        assert!(apply_receiver(&raw, &c).unwrap().samples().iter().all(|&v| v == 0));
    }

    #[test]
    fn config_json_encodes_infinite_snr_as_text() {
        let c = ChannelConfig::new(Standard::Dvi);
        let j = serde_json::to_string(&c).unwrap();
        assert!(j.contains("\"snr_db\":\"inf\""), "{j}");
        let back: ChannelConfig = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
        let c2: ChannelConfig =
            serde_json::from_str(r#"{"standard":"vga","snr_db":12.5,"bw_frac":0.5,"seed":3}"#).unwrap();
        assert_eq!(c2.printer_diodes, 2);
        assert_eq!(c2.snr_db, 12.5);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = ChannelConfig::new(Standard::Vga);
        c.bw_frac = 0.0;
        assert!(c.validate().is_err());
        c.bw_frac = 1.5;
        assert!(c.validate().is_err());
        c.bw_frac = 1.0;
        c.snr_db = f64::NAN;
        assert!(c.validate().is_err());
        let bmp = Bitmap::blank(2, 2, Polarity::DarkOnLight);
        let c = ChannelConfig::new(Standard::Dvi);
        assert_eq!(
            vga_emission(&bmp, &c).unwrap_err(),
            ChannelError::WrongStandard { expected: Standard::Vga, got: Standard::Dvi }
        );
    }
}
