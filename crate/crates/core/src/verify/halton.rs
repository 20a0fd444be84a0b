use crate::arithmetic::Frac128;
use crate::systems::TorusPoint;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Base-2 van der Corput point with index `i`, exact: the bit reversal of `i`.
pub fn van_der_corput(i: u64) -> Frac128 {
    Frac128::from_bits((i as u128).reverse_bits())
}

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % b) as f64 * scale;
        i /= b;
        scale *= inv;
    }
    out
}

/// Halton points on 𝕋 with indices `1..=count`.
pub fn halton_circle(count: usize) -> Vec<Frac128> {
    (1..=count as u64).map(van_der_corput).collect()
}

/// Halton points on 𝕋^d with indices `1..=count`; coordinate `i` uses the
/// `i`-th prime, base 2 exactly.
pub fn halton_points(dim: usize, count: usize) -> Vec<TorusPoint> {
    assert!(dim <= PRIMES.len(), "Halton sampling supports dim <= {}", PRIMES.len());
    (1..=count as u64)
        .map(|i| {
            let coords = PRIMES[..dim]
                .iter()
                .map(|&b| {
                    if b == 2 {
                        van_der_corput(i)
                    } else {
                        Frac128::from_f64(radical_inverse(i, b))
                    }
                })
                .collect();
            TorusPoint::new(coords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points() {
        let xs: Vec<f64> = halton_circle(4).iter().map(|x| x.to_f64()).collect();
        assert_eq!(xs, vec![0.5, 0.25, 0.75, 0.125]);
        let p = &halton_points(2, 2)[1];
        assert_eq!(p.coords[0].to_f64(), 0.25);
        assert!((p.coords[1].to_f64() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(radical_inverse(5, 2), 0.625);
    }

    #[test]
    fn base_two_matches_radical_inverse() {
        for i in 1..2000 {
            assert_eq!(van_der_corput(i).to_f64(), radical_inverse(i, 2));
        }
    }
}
