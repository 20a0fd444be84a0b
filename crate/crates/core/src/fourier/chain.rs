use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::series::{unit_minus_one, SparseSeries};
use crate::arithmetic::{frac_mul, recommended_eps, Frac128, Subsequence};
use crate::error::{Error, Result};

const DIVISOR_FLOOR: f64 = 1e-30;

/// `f = G₁∘T_α − G₁` and `G_{i−1} = G_i∘T_α − G_i`, held termwise as truncated
/// Fourier series on the frequencies `±n_r` of a [`Subsequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoboundaryChain {
    pub alpha: Frac128,
    pub subseq: Subsequence,
    pub f: SparseSeries,
    /// `g[i]` is `G_{i+1}`.
    pub g: Vec<SparseSeries>,
}

/// Advisory text when `eps` exceeds [`recommended_eps`] for a chain of length `len`.
pub fn eps_advisory(eps: f64, len: usize) -> Option<String> {
    let rec = recommended_eps(len);
    (eps > rec).then(|| {
        format!(
            "eps = {eps} exceeds the recommended {rec} for chain length {len}; G_{len} may fail to be square summable"
        )
    })
}

/// `Ĝ₁(±n_r) = 1/r`, `Ĝ_i = Ĝ_{i−1}/(e(nα)−1)` and `f̂ = (e(nα)−1)·Ĝ₁`.
pub fn build_chain(subseq: &Subsequence, alpha: Frac128, len: usize) -> Result<CoboundaryChain> {
    if len == 0 {
        return Err(Error::EmptyChain);
    }
    if let Some(msg) = eps_advisory(subseq.eps, len) {
        log::warn!("{msg}");
    }

    let mut f_pos = Vec::with_capacity(subseq.len());
    let mut g_pos: Vec<Vec<(u64, Complex64)>> = vec![Vec::with_capacity(subseq.len()); len];
    for e in &subseq.entries {
        let n = e.n as i64;
        let d = unit_minus_one(frac_mul(n, alpha));
        if d.norm() < DIVISOR_FLOOR {
            return Err(Error::DivisorUnderflow { n, value: d.norm() });
        }
        let mut c = Complex64::new(1.0 / e.r as f64, 0.0);
        f_pos.push((e.n, d * c));
        for level in g_pos.iter_mut() {
            level.push((e.n, c));
            c /= d;
        }
    }

    let f = SparseSeries::from_positive("f", f_pos)?;
    let g = g_pos
        .into_iter()
        .enumerate()
        .map(|(i, pos)| SparseSeries::from_positive(format!("G{}", i + 1), pos))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoboundaryChain {
        alpha,
        subseq: subseq.clone(),
        f,
        g,
    })
}

impl CoboundaryChain {
    /// Chain length `L`.
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn g1(&self) -> &SparseSeries {
        &self.g[0]
    }

    /// The same chain on the first `m` subsequence entries.
    pub fn truncated(&self, m: usize) -> Result<CoboundaryChain> {
        build_chain(&self.subseq.truncated(m)?, self.alpha, self.len())
    }

    /// Largest `|ĥ(n) − (e(nα)−1)·k̂(n)|` over every link `(h, k)` in
    /// `(f, G₁), (G₁, G₂), …`, taken over the union of supports.
    pub fn coefficient_residual(&self) -> f64 {
        let mut links: Vec<(&SparseSeries, &SparseSeries)> = vec![(&self.f, &self.g[0])];
        links.extend(self.g.windows(2).map(|w| (&w[0], &w[1])));
        let mut worst: f64 = 0.0;
        for (h, k) in links {
            let freqs = h.terms().iter().chain(k.terms()).map(|t| t.0);
            for n in freqs {
                let d = unit_minus_one(frac_mul(n, self.alpha));
                worst = worst.max((h.coeff(n) - d * k.coeff(n)).norm());
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    alpha: Frac128,
    subseq: Subsequence,
    f: SparseSeries,
    g: Vec<SparseSeries>,
}

impl Serialize for CoboundaryChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ChainRepr {
            alpha: self.alpha,
            subseq: self.subseq.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoboundaryChain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ChainRepr::deserialize(deserializer)?;
        if repr.g.is_empty() {
            return Err(serde::de::Error::custom(Error::EmptyChain));
        }
        Ok(CoboundaryChain {
            alpha: repr.alpha,
            subseq: repr.subseq,
            f: repr.f.with_label("f"),
            g: repr
                .g
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.with_label(format!("G{}", i + 1)))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{dist_to_int, select_subsequence};
    use std::f64::consts::PI;

    fn golden_chain(eps: f64, count: usize, len: usize) -> CoboundaryChain {
        let g = Frac128::golden();
        let s = select_subsequence(g, eps, count, 10_000_000).unwrap();
        build_chain(&s, g, len).unwrap()
    }

    #[test]
    fn single_entry_f_has_two_frequencies() {
        let chain = golden_chain(1.0 / 8.0, 1, 1);
        let e = chain.subseq.entries[0];
        assert_eq!(chain.f.len(), 2);
        let n = e.n as i64;
        // |e(θ) − 1| = 2 sin(π‖θ‖)
        let oracle = 2.0 * (PI * e.dist).sin() / e.r as f64;
        for m in [n, -n] {
            assert!((chain.f.coeff(m).norm() - oracle).abs() < 1e-15);
        }
        assert_eq!(chain.g1().coeff(n), Complex64::new(1.0 / e.r as f64, 0.0));
    }

    #[test]
    fn links_hold_termwise() {
        let chain = golden_chain(1.0 / 16.0, 50, 3);
        assert!(chain.coefficient_residual() < 1e-15);
        assert_eq!(chain.len(), 3);
        assert_eq!(chain.g[2].label(), "G3");
    }

    #[test]
    fn g2_square_sum_below_band_bound() {
        let chain = golden_chain(1.0 / 16.0, 50, 2);
        let eps = chain.subseq.eps;
        let sum: f64 = chain.g[1].terms().iter().map(|t| t.1.norm_sqr()).sum();
        // two frequencies ±n_r per index r, each bounded by r^{2(2ε−1)}/16
        let bound: f64 = chain
            .subseq
            .entries
            .iter()
            .map(|e| 2.0 * (e.r as f64).powf(2.0 * (2.0 * eps - 1.0)) / 16.0)
            .sum();
        assert!(sum.is_finite() && sum <= bound, "{sum} vs {bound}");
    }

    #[test]
    fn g_coefficients_bounded_by_band() {
        let chain = golden_chain(1.0 / 16.0, 50, 4);
        let eps = chain.subseq.eps;
        for e in &chain.subseq.entries {
            let d = dist_to_int(frac_mul(e.n as i64, chain.alpha));
            assert!(d >= (e.r as f64).powf(-2.0 * eps));
            for (i, g) in chain.g.iter().enumerate() {
                let bound = (e.r as f64).powf(2.0 * eps * i as f64 - 1.0) / 4f64.powi(i as i32);
                assert!(g.coeff(e.n as i64).norm() <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn truncation_is_a_prefix() {
        let chain = golden_chain(1.0 / 16.0, 20, 2);
        let t = chain.truncated(7).unwrap();
        assert_eq!(t.f.len(), 14);
        for &(n, c) in t.g[1].terms() {
            assert_eq!(chain.g[1].coeff(n), c);
        }
        assert!(matches!(chain.truncated(21), Err(Error::TruncationTooLong { .. })));
    }

    #[test]
    fn empty_chain_rejected() {
        let s = select_subsequence(Frac128::golden(), 0.1, 1, 1000).unwrap();
        assert_eq!(build_chain(&s, Frac128::golden(), 0), Err(Error::EmptyChain));
    }

    #[test]
    fn advisory() {
        assert!(eps_advisory(1.0 / 16.0, 3).is_none());
        assert!(eps_advisory(1.0 / 8.0, 3).is_some());
    }

    #[test]
    fn json_round_trip() {
        let chain = golden_chain(1.0 / 16.0, 5, 2);
        let json = serde_json::to_string(&chain).unwrap();
        assert!(json.starts_with(r#"{"alpha":"0.61803398874989484820458683436563811772"#));
        let back: CoboundaryChain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, chain);
    }
}
