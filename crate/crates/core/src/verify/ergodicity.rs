use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::birkhoff::Character;
use crate::error::{Error, Result};
use crate::systems::{orbit_fold, SkewSpec, TorusPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageRow {
    pub char: Character,
    pub start: usize,
    pub n: u64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharSummary {
    pub char: Character,
    /// Largest pairwise `|avg_a − avg_b|` at the final checkpoint.
    pub spread: f64,
    /// Largest `|avg|` at the final checkpoint.
    pub max_abs: f64,
    /// Least-squares slope of `log mean|avg|` against `log N`; `None` with
    /// fewer than two usable checkpoints.
    pub decay_slope: Option<f64>,
}

/// Birkhoff averages per (character, start, checkpoint), with cross-start
/// spread. A finite-time proxy for unique ergodicity, not a proof of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityReport {
    pub system_id: String,
    pub checkpoints: Vec<u64>,
    pub starts: Vec<TorusPoint>,
    pub rows: Vec<AverageRow>,
    pub summaries: Vec<CharSummary>,
}

impl ErgodicityReport {
    pub fn max_spread(&self) -> f64 {
        self.summaries.iter().map(|s| s.spread).fold(0.0, f64::max)
    }

    pub fn max_abs(&self, nontrivial_only: bool) -> f64 {
        self.summaries
            .iter()
            .filter(|s| !nontrivial_only || !s.char.is_trivial())
            .map(|s| s.max_abs)
            .fold(0.0, f64::max)
    }

    pub const CSV_HEADER: &'static str = "system-id,char,start,N,re,im,abs";

    /// Rows with columns `system-id,char,start,N,re,im,abs`; `char` is the
    /// multi-index joined by `:`.
    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    self.system_id,
                    r.char.label(),
                    r.start,
                    r.n,
                    r.re,
                    r.im,
                    r.abs
                )
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for row in self.csv_rows() {
            s.push_str(&row);
            s.push('\n');
        }
        s
    }
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One orbit per start feeds every character; averages are read off at each
/// checkpoint `N` (the mean over `i < N`).
pub fn unique_ergodicity_probe(
    system_id: &str,
    spec: &SkewSpec,
    chars: &[Character],
    starts: &[TorusPoint],
    checkpoints: &[u64],
) -> Result<ErgodicityReport> {
    if starts.len() < 2 {
        return Err(Error::TooFewStarts);
    }
    if checkpoints.first() == Some(&0) {
        return Err(Error::BadIndex("checkpoints must be positive".into()));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonIncreasing);
    }
    for c in chars {
        if c.m.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: c.m.len(),
            });
        }
    }
    let last = checkpoints.last().copied().unwrap_or(0);

    // avgs[char][start][checkpoint]
    let mut avgs = vec![vec![Vec::with_capacity(checkpoints.len()); starts.len()]; chars.len()];
    for (si, x0) in starts.iter().enumerate() {
        if last == 0 {
            break;
        }
        let init = (vec![Complex64::new(0.0, 0.0); chars.len()], 0usize);
        let mut found = vec![Vec::new(); chars.len()];
        orbit_fold(spec, x0, last - 1, init, |(mut sums, mut next), i, x| {
            for (s, c) in sums.iter_mut().zip(chars) {
                *s += c.eval(x);
            }
            if i + 1 == checkpoints[next] {
                for (ci, s) in sums.iter().enumerate() {
                    found[ci].push(*s / checkpoints[next] as f64);
                }
                next += 1;
            }
            (sums, next)
        })?;
        for (ci, f) in found.into_iter().enumerate() {
            avgs[ci][si] = f;
        }
    }

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (ci, chi) in chars.iter().enumerate() {
        for (si, per_start) in avgs[ci].iter().enumerate() {
            for (k, a) in per_start.iter().enumerate() {
                rows.push(AverageRow {
                    char: chi.clone(),
                    start: si,
                    n: checkpoints[k],
                    re: a.re,
                    im: a.im,
                    abs: a.norm(),
                });
            }
        }
        let finals: Vec<Complex64> = avgs[ci].iter().filter_map(|v| v.last().copied()).collect();
        let mut spread: f64 = 0.0;
        for a in 0..finals.len() {
            for b in a + 1..finals.len() {
                spread = spread.max((finals[a] - finals[b]).norm());
            }
        }
        let max_abs = finals.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let pts: Vec<(f64, f64)> = checkpoints
            .iter()
            .enumerate()
            .filter_map(|(k, &n)| {
                let m = avgs[ci].iter().map(|v| v[k].norm()).sum::<f64>() / starts.len() as f64;
                (m > 0.0).then(|| ((n as f64).ln(), m.ln()))
            })
            .collect();
        summaries.push(CharSummary {
            char: chi.clone(),
            spread,
            max_abs,
            decay_slope: slope(&pts),
        });
    }

    Ok(ErgodicityReport {
        system_id: system_id.to_string(),
        checkpoints: checkpoints.to_vec(),
        starts: starts.to_vec(),
        rows,
        summaries,
    })
}
