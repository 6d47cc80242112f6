//! Periodicity of zone visits.
//!
//! A symbolic trajectory is sampled into a fixed-resolution symbol series,
//! then every candidate period `p` in `1..=n/2` is scored by comparing the
//! series with itself shifted by `p` under dynamic time warping:
//! `confidence(p) = 1 - DTW(prefix, suffix) / (n - p)`, where the prefix is
//! `x[0..n-p]` and the suffix `x[p..n]`.
//!
//! DTW is unconstrained, so a shift smaller than the length of the runs of
//! repeated symbols is almost free. Series sampled much finer than a visit
//! therefore score close to 1 at `p = 1`; pick a resolution on the order of
//! a visit length when looking for visit-level cycles.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{Symbol, SymbolicTrajectory};
use crate::error::{Error, Result};

/// Symbol used for slots not occupied by any zone in behavior series.
pub const TRANSITION_SYMBOL: u32 = 0;

/// A fixed-resolution series of discrete symbols.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolSeries {
    symbols: Vec<u32>,
    /// Seconds per slot.
    resolution: f64,
}

impl SymbolSeries {
    pub fn new(symbols: Vec<u32>, resolution: f64) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::invalid("a symbol series needs at least two slots"));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::invalid(format!("resolution must be positive, got {resolution}")));
        }
        Ok(SymbolSeries { symbols, resolution })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Binary series for one zone: 1 for every slot in which the object is
    /// inside the zone at any instant, 0 otherwise.
    Zone(usize),
    /// One symbol per slot: the zone occupying the slot (largest overlap,
    /// earliest on ties), or [`TRANSITION_SYMBOL`].
    Behavior,
}

/// Samples `st` at `resolution` seconds per slot. Zone series span from the
/// first to the last visit of the zone; behavior series span the whole
/// symbolic trajectory. Slots are aligned to the start of the span.
pub fn build_series(st: &SymbolicTrajectory, resolution: f64, mode: SeriesMode) -> Result<SymbolSeries> {
    let window = match mode {
        SeriesMode::Zone(z) => {
            let mut visits = st.entries.iter().filter(|e| e.symbol == Symbol::Zone(z));
            let first = visits
                .next()
                .ok_or_else(|| Error::invalid(format!("zone {z} is never visited")))?;
            let last = visits.next_back().unwrap_or(first);
            (first.start, last.end)
        }
        SeriesMode::Behavior => st
            .span()
            .ok_or_else(|| Error::invalid("symbolic trajectory is empty"))?,
    };
    build_series_over(st, resolution, mode, window)
}

/// Like [`build_series`] over an explicit `(start, end)` window.
pub fn build_series_over(
    st: &SymbolicTrajectory,
    resolution: f64,
    mode: SeriesMode,
    window: (f64, f64),
) -> Result<SymbolSeries> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::invalid(format!("resolution must be positive, got {resolution}")));
    }
    let (start, end) = window;
    let span = end - start;
    if !(span >= resolution) {
        return Err(Error::invalid(format!(
            "resolution {resolution} s exceeds the series span of {span} s"
        )));
    }
    let slots = (span / resolution).floor() as usize + 1;
    let mut symbols = vec![0u32; slots];
    for (k, slot) in symbols.iter_mut().enumerate() {
        let lo = start + k as f64 * resolution;
        let hi = lo + resolution;
        let hits = st.entries.iter().filter(|e| e.start < hi && e.end >= lo);
        *slot = match mode {
            SeriesMode::Zone(z) => hits.into_iter().any(|e| e.symbol == Symbol::Zone(z)) as u32,
            SeriesMode::Behavior => {
                let mut best: Option<(f64, usize)> = None;
                for e in hits {
                    if let Symbol::Zone(z) = e.symbol {
                        let overlap = e.end.min(hi) - e.start.max(lo);
                        if best.is_none_or(|(o, _)| overlap > o) {
                            best = Some((overlap, z));
                        }
                    }
                }
                best.map_or(TRANSITION_SYMBOL, |(_, z)| z as u32)
            }
        };
    }
    SymbolSeries::new(symbols, resolution)
}

/// DTW cost between two symbol sequences with 0/1 local cost.
pub fn dtw_symbols(a: &[u32], b: &[u32]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("dtw needs non-empty inputs"));
    }
    let m = b.len();
    let mut prev = vec![usize::MAX; m + 1];
    let mut cur = vec![usize::MAX; m + 1];
    prev[0] = 0;
    for &x in a {
        cur[0] = usize::MAX;
        for j in 1..=m {
            let best = prev[j].min(cur[j - 1]).min(prev[j - 1]);
            cur[j] = best + usize::from(x != b[j - 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m] as f64)
}

/// DTW cost between two series of the same resolution.
pub fn dtw(a: &SymbolSeries, b: &SymbolSeries) -> Result<f64> {
    if a.resolution != b.resolution {
        return Err(Error::invalid(format!(
            "series resolutions differ: {} vs {}",
            a.resolution, b.resolution
        )));
    }
    dtw_symbols(&a.symbols, &b.symbols)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodRow {
    /// Slots.
    pub period: usize,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodReport {
    pub rows: Vec<PeriodRow>,
}

/// Scores every candidate period `1..=n/2`.
pub fn warp(series: &SymbolSeries) -> Result<PeriodReport> {
    let x = series.symbols();
    let n = x.len();
    if n < 4 {
        return Err(Error::invalid(format!("periodicity needs at least 4 slots, got {n}")));
    }
    let rows = (1..=n / 2)
        .into_par_iter()
        .map(|p| {
            let cost = dtw_symbols(&x[..n - p], &x[p..]).expect("both halves are non-empty");
            let confidence = (1.0 - cost / (n - p) as f64).clamp(0.0, 1.0);
            PeriodRow { period: p, confidence }
        })
        .collect();
    Ok(PeriodReport { rows })
}

/// The smallest period among those with the highest confidence, provided
/// that confidence reaches `min_confidence`.
pub fn best_period(report: &PeriodReport, min_confidence: f64) -> Option<PeriodRow> {
    let top = report
        .rows
        .iter()
        .map(|r| r.confidence)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(top >= min_confidence) {
        return None;
    }
    report
        .rows
        .iter()
        .filter(|r| r.confidence == top)
        .min_by_key(|r| r.period)
        .copied()
}
