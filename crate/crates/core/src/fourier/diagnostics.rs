use super::chain::CoboundaryChain;
use crate::arithmetic::Frac128;
use crate::error::{Error, Result};

/// Truncated `G₁` evaluated at 0 for each entry count `M`: `Σ_{first M} 2/r`.
/// Unbounded growth in `M` is the finite-size face of `G₁` being unbounded.
pub fn sup_growth_probe(chain: &CoboundaryChain, truncations: &[usize]) -> Result<Vec<(usize, f64)>> {
    if truncations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonIncreasing);
    }
    let available = chain.subseq.len();
    if let Some(&m) = truncations.iter().find(|&&m| m > available) {
        return Err(Error::TruncationTooLong {
            requested: m,
            available,
        });
    }
    let g1 = chain.g1();
    Ok(truncations
        .iter()
        .map(|&m| {
            let keep: Vec<u64> = chain.subseq.entries[..m].iter().map(|e| e.n).collect();
            let part = g1.restrict("G1", |n| keep.binary_search(&n).is_ok());
            (m, part.eval(Frac128::ZERO))
        })
        .collect())
}

/// Fejér mean of `G₁` at 0: `(1/N) Σ_{m=1..N} s_m` with `s_m = Σ_{|n|≤m} Ĝ₁(n)`,
/// summed as `Σ_{|n|≤N} Re Ĝ₁(n)·(N − |n| + 1)/N`.
pub fn cesaro_at_zero(chain: &CoboundaryChain, big_n: u64) -> f64 {
    let nf = big_n as f64;
    chain
        .g1()
        .terms()
        .iter()
        .filter(|t| t.0.unsigned_abs() <= big_n)
        .map(|&(n, c)| c.re * ((big_n - n.unsigned_abs() + 1) as f64) / nf)
        .fold(0.0, |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::select_subsequence;
    use crate::fourier::build_chain;

    fn chain(eps: f64, count: usize) -> CoboundaryChain {
        let g = Frac128::golden();
        build_chain(&select_subsequence(g, eps, count, 10_000_000).unwrap(), g, 1).unwrap()
    }

    fn harmonic(n: u64) -> f64 {
        (1..=n).map(|k| 1.0 / k as f64).sum()
    }

    #[test]
    fn sup_growth_matches_harmonic_sums() {
        let c = chain(1.0 / 16.0, 400);
        let r0 = c.subseq.r0;
        let out = sup_growth_probe(&c, &[0, 1, 50, 400]).unwrap();
        assert_eq!(out[0], (0, 0.0));
        for &(m, v) in &out {
            let oracle = 2.0 * (harmonic(r0 + m as u64 - 1) - harmonic(r0 - 1));
            assert!((v - oracle).abs() < 1e-12, "M = {m}");
        }
    }

    #[test]
    fn sup_growth_doubling() {
        let c = chain(0.24, 4000);
        let out = sup_growth_probe(&c, &[1000, 2000, 4000]).unwrap();
        for w in out.windows(2) {
            assert!(w[1].1 - w[0].1 >= 2.0 * 2f64.ln() - 0.01);
        }
    }

    #[test]
    fn sup_growth_rejects_bad_truncations() {
        let c = chain(1.0 / 8.0, 5);
        assert_eq!(sup_growth_probe(&c, &[3, 3]), Err(Error::NonIncreasing));
        assert!(matches!(
            sup_growth_probe(&c, &[6]),
            Err(Error::TruncationTooLong { .. })
        ));
    }

    #[test]
    fn cesaro_matches_partial_sum_average() {
        let c = chain(1.0 / 8.0, 30);
        let first = c.subseq.entries[0].n;
        assert_eq!(cesaro_at_zero(&c, first - 1), 0.0);
        let ns: Vec<(u64, f64)> = c.subseq.entries.iter().map(|e| (e.n, 1.0 / e.r as f64)).collect();
        let mut prev = 0.0;
        for big_n in (first..first + 2000).step_by(97) {
            // s_m directly, then averaged
            let total: f64 = (1..=big_n)
                .map(|m| ns.iter().filter(|e| e.0 <= m).map(|e| 2.0 * e.1).sum::<f64>())
                .sum();
            let oracle = total / big_n as f64;
            let v = cesaro_at_zero(&c, big_n);
            assert!((v - oracle).abs() < 1e-12);
            assert!(v > prev);
            prev = v;
        }
    }
}
