use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::matcher::MatchHit;
use crate::raster::GtCell;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CerError {
    #[error("ground truth is empty")]
    EmptyTruth,
    #[error("no target characters given")]
    NoTargets,
    #[error("inconsistent counters: {0}")]
    Counters(String),
}

/// Counters for one looked-for character.
///
/// `u` occurrences looked for, `n` recognized correctly, `m` wrong or
/// spurious hits, `k = u - n` missed, `q` glyphs on the whole page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CerInputs {
    pub u: u64,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub q: u64,
}

impl CerInputs {
    pub fn new(u: u64, m: u64, n: u64, q: u64) -> Result<Self, CerError> {
        if q == 0 {
            return Err(CerError::EmptyTruth);
        }
        if n > u {
            return Err(CerError::Counters(format!("n = {n} exceeds u = {u}")));
        }
        Ok(CerInputs { u, m, n, k: u - n, q })
    }

    /// `(m + k) / q`, exact.
    pub fn cer(&self) -> Ratio<u64> {
        Ratio::new(self.m + self.k, self.q)
    }
}

/// Decimal rendering of an exact ratio, rounded half up to 4 places.
pub fn round4(r: Ratio<u64>) -> f64 {
    let (n, d) = (*r.numer() as u128, *r.denom() as u128);
    ((n * 10_000 * 2 + d) / (2 * d)) as f64 / 10_000.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CerReport {
    pub per_char: BTreeMap<char, CerInputs>,
    pub q: u64,
}

impl CerReport {
    /// `(sum m + sum k) / q` over all looked-for characters.
    pub fn aggregate(&self) -> Ratio<u64> {
        let mk: u64 = self.per_char.values().map(|c| c.m + c.k).sum();
        Ratio::new(mk, self.q)
    }
}

/// Scores hits against the rendered ground truth.
///
/// Only hits naming a looked-for character are scored. Each hit is paired
/// with the nearest ground-truth cell whose origin is within half a cell on
/// both axes. It counts toward `n` when the codepoints agree and that cell
/// has not been credited yet; every other scored hit counts toward `m`.
pub fn score_cer(hits: &[MatchHit], truth: &[GtCell], targets: &BTreeSet<char>) -> Result<CerReport, CerError> {
    if truth.is_empty() {
        return Err(CerError::EmptyTruth);
    }
    if targets.is_empty() {
        return Err(CerError::NoTargets);
    }
    let q = truth.len() as u64;
    let mut u: BTreeMap<char, u64> = targets.iter().map(|&c| (c, 0)).collect();
    for cell in truth {
        if let Some(v) = u.get_mut(&cell.ch) {
            *v += 1;
        }
    }
    let mut n: BTreeMap<char, u64> = targets.iter().map(|&c| (c, 0)).collect();
    let mut m = n.clone();
    let mut credited = vec![false; truth.len()];

    for hit in hits.iter().filter(|h| targets.contains(&h.codepoint)) {
        let nearest = truth
            .iter()
            .enumerate()
            .filter(|(_, c)| 2 * hit.x.abs_diff(c.x) <= c.w && 2 * hit.y.abs_diff(c.y) <= c.h)
            .min_by_key(|(i, c)| (hit.x.abs_diff(c.x) + hit.y.abs_diff(c.y), *i));
        match nearest {
            Some((i, c)) if c.ch == hit.codepoint && !credited[i] => {
                credited[i] = true;
                *n.get_mut(&hit.codepoint).unwrap() += 1;
            }
            _ => *m.get_mut(&hit.codepoint).unwrap() += 1,
        }
    }

    let per_char = targets
        .iter()
        .map(|&c| Ok((c, CerInputs::new(u[&c], m[&c], n[&c], q)?)))
        .collect::<Result<_, CerError>>()?;
    Ok(CerReport { per_char, q })
}
