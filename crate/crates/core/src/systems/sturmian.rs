use std::collections::HashSet;

use crate::arithmetic::Frac128;

/// Bit `i` is 1 iff `x₀ + iα mod 1 ∈ [0, α)`.
pub fn sturmian_code(alpha: Frac128, x0: Frac128, n: usize) -> Vec<u8> {
    let mut x = x0;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(u8::from(x < alpha));
        x += alpha;
    }
    out
}

/// Number of distinct length-`len` factors of `word`.
pub fn factor_complexity(word: &[u8], len: usize) -> usize {
    if len == 0 {
        return 1;
    }
    word.windows(len).collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_prefix() {
        let g = Frac128::golden();
        // points 0, .618, .236, .854, .472
        assert_eq!(sturmian_code(g, Frac128::ZERO, 5), vec![1, 0, 1, 0, 1]);
        assert!(sturmian_code(g, Frac128::ZERO, 0).is_empty());
    }

    #[test]
    fn frequency_and_complexity() {
        let g = Frac128::golden();
        let w = sturmian_code(g, Frac128::ZERO, 10_000);
        let ones = w.iter().filter(|&&b| b == 1).count() as f64;
        // discrepancy of the golden rotation is O(log N / N)
        assert!((ones / 1e4 - g.to_f64()).abs() < 1e-3);
        for n in 1..=8 {
            assert_eq!(factor_complexity(&w, n), n + 1);
        }
    }
}
