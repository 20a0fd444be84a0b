//! Frequencies `n_r` whose small divisors `‖n_r α‖` sit in the band
//! `[r^{-2ε}, r^{-ε})`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::continued_fraction::continued_fraction;
use super::frac::{dist_to_int, frac_mul, Frac128};
use crate::error::{Error, Result};

/// Quotients inspected before a subsequence search to rule out rational input.
const IRRATIONALITY_DEPTH: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsequenceEntry {
    pub r: u64,
    pub n: u64,
    /// `‖n α‖`
    pub dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subsequence {
    pub eps: f64,
    pub r0: u64,
    pub entries: Vec<SubsequenceEntry>,
}

impl Subsequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first `m` entries.
    pub fn truncated(&self, m: usize) -> Result<Subsequence> {
        if m > self.entries.len() {
            return Err(Error::TruncationTooLong {
                requested: m,
                available: self.entries.len(),
            });
        }
        Ok(Subsequence {
            eps: self.eps,
            r0: self.r0,
            entries: self.entries[..m].to_vec(),
        })
    }
}

/// Band `[r^{-2ε}, r^{-ε})` for index `r`.
pub fn band(r: u64, eps: f64) -> (f64, f64) {
    let r = r as f64;
    (r.powf(-2.0 * eps), r.powf(-eps))
}

/// First index whose band reaches below 1/2, where `‖·‖` of an irrational
/// point lives.
pub fn first_index(eps: f64) -> u64 {
    let t = 2f64.powf(1.0 / (2.0 * eps));
    let mut r0 = t.floor() as u64 + 1;
    // guard against powf rounding either way
    while r0 > 1 && band(r0 - 1, eps).0 < 0.5 {
        r0 -= 1;
    }
    while band(r0, eps).0 >= 0.5 {
        r0 += 1;
    }
    r0
}

/// `ε = 1/(8·max(L−1, 1))` keeps every `G_i` of a length-`L` chain square
/// summable with room to spare.
pub fn recommended_eps(chain_length: usize) -> f64 {
    1.0 / (8.0 * chain_length.saturating_sub(1).max(1) as f64)
}

/// Selects `count` frequencies starting at [`first_index`]. For each `r` the
/// entry is the smallest `n > n_{r-1}` with `‖nα‖` in the band, so the
/// frequencies are strictly increasing and never reused.
pub fn select_subsequence(alpha: Frac128, eps: f64, count: usize, n_max: u64) -> Result<Subsequence> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::InvalidEps(eps));
    }
    continued_fraction(alpha, IRRATIONALITY_DEPTH).ensure_irrational()?;

    let r0 = first_index(eps);
    let mut entries = Vec::with_capacity(count);
    let mut next_n: u64 = 1;
    for r in r0..r0 + count as u64 {
        let (lo, hi) = band(r, eps);
        loop {
            if next_n > n_max {
                return Err(Error::BandUnreachable { r, n_max });
            }
            let n = next_n;
            next_n += 1;
            let dist = dist_to_int(frac_mul(n as i64, alpha));
            if dist >= lo && dist < hi {
                entries.push(SubsequenceEntry { r, n, dist });
                break;
            }
        }
    }

    Ok(Subsequence { eps, r0, entries })
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    r: String,
    n_r: String,
    dist: String,
}

#[derive(Serialize, Deserialize)]
struct SubsequenceRepr {
    eps: f64,
    r0: u64,
    entries: Vec<EntryRepr>,
}

impl Serialize for Subsequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubsequenceRepr {
            eps: self.eps,
            r0: self.r0,
            entries: self
                .entries
                .iter()
                .map(|e| EntryRepr {
                    r: e.r.to_string(),
                    n_r: e.n.to_string(),
                    dist: e.dist.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subsequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SubsequenceRepr::deserialize(deserializer)?;
        let entries = repr
            .entries
            .into_iter()
            .map(|e| {
                Ok(SubsequenceEntry {
                    r: e.r.parse().map_err(D::Error::custom)?,
                    n: e.n_r.parse().map_err(D::Error::custom)?,
                    dist: e.dist.parse().map_err(D::Error::custom)?,
                })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(Subsequence {
            eps: repr.eps,
            r0: repr.r0,
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Linear scan from n = 1 for each r, keeping candidates above the
    /// previous pick, with distances from integer-by-integer addition.
    fn scan_oracle(alpha: Frac128, eps: f64, r0: u64, count: usize) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for r in r0..r0 + count as u64 {
            let (lo, hi) = band(r, eps);
            let floor = out.last().map_or(0, |&(_, n)| n);
            let mut point = Frac128::ZERO;
            let mut n = 0u64;
            loop {
                n += 1;
                point += alpha;
                let d = dist_to_int(point);
                if n > floor && d >= lo && d < hi {
                    break;
                }
            }
            out.push((r, n));
        }
        out
    }

    #[test]
    fn first_index_is_minimal() {
        for &eps in &[1.0 / 8.0, 1.0 / 16.0, 0.1, 0.2, 0.24, 1.0 / 32.0] {
            let r0 = first_index(eps);
            assert!(band(r0, eps).0 < 0.5);
            assert!(r0 == 1 || band(r0 - 1, eps).0 >= 0.5);
        }
        assert_eq!(first_index(1.0 / 8.0), 17);
        assert_eq!(first_index(1.0 / 16.0), 257);
        assert_eq!(first_index(0.24), 5);
    }

    #[test]
    fn golden_eighth_single_entry() {
        let g = Frac128::golden();
        let s = select_subsequence(g, 1.0 / 8.0, 1, 1_000_000).unwrap();
        assert_eq!(s.r0, 17);
        let e = s.entries[0];
        let (lo, hi) = band(17, 1.0 / 8.0);
        assert!(lo <= e.dist && e.dist < hi);
        assert_eq!(vec![(e.r, e.n)], scan_oracle(g, 1.0 / 8.0, 17, 1));
    }

    #[test]
    fn golden_sixteenth_fifty_entries() {
        let g = Frac128::golden();
        let s = select_subsequence(g, 1.0 / 16.0, 50, 1_000_000).unwrap();
        assert_eq!(s.len(), 50);
        for w in s.entries.windows(2) {
            assert!(w[1].n > w[0].n);
        }
        let mut ns: Vec<u64> = s.entries.iter().map(|e| e.n).collect();
        ns.sort_unstable();
        ns.dedup();
        assert_eq!(ns.len(), 50);
        for e in &s.entries {
            let d = dist_to_int(frac_mul(e.n as i64, g));
            let (lo, hi) = band(e.r, s.eps);
            assert!(lo <= d && d < hi && d < 0.5);
            assert!((d - e.dist).abs() <= 1e-20 * d);
        }
        let oracle = scan_oracle(g, 1.0 / 16.0, s.r0, 50);
        let got: Vec<(u64, u64)> = s.entries.iter().map(|e| (e.r, e.n)).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn large_eps_matches_oracle() {
        let g = Frac128::sqrt2_minus_one();
        let s = select_subsequence(g, 0.24, 400, 10_000_000).unwrap();
        let oracle = scan_oracle(g, 0.24, s.r0, 400);
        let got: Vec<(u64, u64)> = s.entries.iter().map(|e| (e.r, e.n)).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn errors() {
        let g = Frac128::golden();
        assert!(matches!(select_subsequence(g, 0.3, 1, 10), Err(Error::InvalidEps(_))));
        assert!(matches!(select_subsequence(g, 0.0, 1, 10), Err(Error::InvalidEps(_))));
        assert!(matches!(
            select_subsequence(Frac128::HALF, 0.1, 1, 10),
            Err(Error::RationalInput { .. })
        ));
        assert!(matches!(
            select_subsequence(g, 0.02, 5, 3),
            Err(Error::BandUnreachable { .. })
        ));
    }

    #[test]
    fn recommended_eps_values() {
        assert_eq!(recommended_eps(1), 0.125);
        assert_eq!(recommended_eps(2), 0.125);
        assert_eq!(recommended_eps(3), 0.0625);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let s = select_subsequence(Frac128::golden(), 1.0 / 16.0, 3, 1_000_000).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"r\":\"257\""));
        let back: Subsequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
