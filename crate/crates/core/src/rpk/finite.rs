use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;
pub const MAX_ORDER: usize = 3;
pub const MAX_N_BOUND: i64 = 32;

const METRIC_SLACK: f64 = 1e-12;

/// A permutation of `{0, …, N−1}` with a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiniteRepr", into = "FiniteRepr")]
pub struct FiniteSystem {
    map: Vec<usize>,
    metric: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct FiniteRepr {
    size: usize,
    map: Vec<usize>,
    metric: Vec<Vec<f64>>,
}

impl TryFrom<FiniteRepr> for FiniteSystem {
    type Error = Error;

    fn try_from(r: FiniteRepr) -> Result<Self> {
        if r.size != r.map.len() {
            return Err(Error::InvalidFiniteSystem(format!(
                "size {} but {} map entries",
                r.size,
                r.map.len()
            )));
        }
        FiniteSystem::new(r.map, r.metric)
    }
}

impl From<FiniteSystem> for FiniteRepr {
    fn from(s: FiniteSystem) -> Self {
        FiniteRepr {
            size: s.map.len(),
            map: s.map,
            metric: s.metric,
        }
    }
}

impl FiniteSystem {
    /// Checks that `map` is a bijection and `metric` a metric (symmetric,
    /// zero diagonal, nonnegative, triangle inequality).
    pub fn new(map: Vec<usize>, metric: Vec<Vec<f64>>) -> Result<Self> {
        let n = map.len();
        let invalid = |m: String| Err(Error::InvalidFiniteSystem(m));
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return invalid(format!("map entry {v} breaks bijectivity"));
            }
        }
        if metric.len() != n || metric.iter().any(|row| row.len() != n) {
            return invalid(format!("metric must be {n} x {n}"));
        }
        for i in 0..n {
            if metric[i][i] != 0.0 {
                return invalid(format!("d({i},{i}) != 0"));
            }
            for j in 0..n {
                let d = metric[i][j];
                if !(d >= 0.0 && d.is_finite()) || d != metric[j][i] {
                    return invalid(format!("d({i},{j}) is negative or asymmetric"));
                }
                for (l, row) in metric.iter().enumerate() {
                    if d > metric[i][l] + row[j] + METRIC_SLACK {
                        return invalid(format!("triangle inequality fails at ({i},{l},{j})"));
                    }
                }
            }
        }
        Ok(FiniteSystem { map, metric })
    }

    /// `x ↦ x + shift mod N` with the arc metric `min(|i−j|, N−|i−j|)/N`.
    pub fn cyclic_rotation(n: usize, shift: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFiniteSystem("empty system".into()));
        }
        let map = (0..n).map(|i| (i + shift) % n).collect();
        FiniteSystem::new(map, arc_metric(n))
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn d(&self, a: usize, b: usize) -> f64 {
        self.metric[a][b]
    }

    pub fn max_distance(&self) -> f64 {
        self.metric.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// `T^e x` for every `x`, for `e` in `−m..=m`; row `e + m`.
    fn powers(&self, m: i64) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut inv = vec![0; n];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        let mut rows = vec![(0..n).collect::<Vec<_>>(); (2 * m + 1) as usize];
        for e in 1..=m as usize {
            let mid = m as usize;
            rows[mid + e] = rows[mid + e - 1].iter().map(|&x| self.map[x]).collect();
            rows[mid - e] = rows[mid - e + 1].iter().map(|&x| inv[x]).collect();
        }
        rows
    }
}

pub fn arc_metric(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = i.abs_diff(j);
                    d.min(n - d) as f64 / n as f64
                })
                .collect()
        })
        .collect()
}

/// The sums `n·ε` over `ε ∈ {0,1}^k \ {0}`.
pub fn cube_exponents(n: &[i64]) -> Vec<i64> {
    let k = n.len();
    (1u32..1 << k)
        .map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| n[i]).sum())
        .collect()
}

/// Every `n ∈ [−B, B]^k` in lexicographic order.
pub fn n_box(k: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * bound + 1) as u64;
    (0..side.pow(k as u32)).map(move |mut idx| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = (idx % side) as i64 - bound;
            idx /= side;
        }
        v
    })
}

/// All ordered pairs `(x, y)` admitting witnesses `x′, y′` and some
/// `n ∈ [−B, B]^k` at this `delta`, by exhaustive search.
pub fn rp_bruteforce_finite(sys: &FiniteSystem, k: usize, delta: f64, n_bound: i64) -> Result<Vec<(usize, usize)>> {
    let n = sys.size();
    if n > MAX_POINTS || k == 0 || k > MAX_ORDER || !(0..=MAX_N_BOUND).contains(&n_bound) {
        return Err(Error::ComplexityGuard(format!(
            "need N <= {MAX_POINTS}, 1 <= k <= {MAX_ORDER}, 0 <= n_bound <= {MAX_N_BOUND}; got N = {n}, k = {k}, n_bound = {n_bound}"
        )));
    }
    let m = k as i64 * n_bound;
    let pow = sys.powers(m);
    // close[e][x'] has bit y' iff d(T^e x', T^e y') < delta
    let close: Vec<Vec<u64>> = pow
        .iter()
        .map(|row| {
            (0..n)
                .map(|a| {
                    (0..n)
                        .filter(|&b| sys.d(row[a], row[b]) < delta)
                        .fold(0u64, |bits, b| bits | 1 << b)
                })
                .collect()
        })
        .collect();

    let mut good = vec![0u64; n];
    for v in n_box(k, n_bound) {
        let exps = cube_exponents(&v);
        for (a, slot) in good.iter_mut().enumerate() {
            let bits = exps.iter().fold(u64::MAX, |acc, &e| acc & close[(e + m) as usize][a]);
            *slot |= bits;
        }
    }

    let near: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&a| sys.d(x, a) < delta)
                .fold(0u64, |bits, a| bits | 1 << a)
        })
        .collect();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let hit = (0..n).any(|a| near[x] >> a & 1 == 1 && good[a] & near[y] != 0);
            if hit {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct transcription of the definition, no bitsets.
    fn naive(sys: &FiniteSystem, k: usize, delta: f64, b: i64) -> Vec<(usize, usize)> {
        let n = sys.size();
        let pow = sys.powers(k as i64 * b);
        let m = k as i64 * b;
        let t = |e: i64, x: usize| pow[(e + m) as usize][x];
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let ok = (0..n).any(|xp| {
                    (0..n).any(|yp| {
                        sys.d(x, xp) < delta
                            && sys.d(y, yp) < delta
                            && n_box(k, b)
                                .any(|v| cube_exponents(&v).iter().all(|&e| sys.d(t(e, xp), t(e, yp)) < delta))
                    })
                });
                if ok {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn identity_with_large_delta_gives_everything() {
        let sys = FiniteSystem::new((0..6).collect(), arc_metric(6)).unwrap();
        let all = rp_bruteforce_finite(&sys, 2, sys.max_distance() + 0.01, 3).unwrap();
        assert_eq!(all.len(), 36);
    }

    #[test]
    fn rotation_is_equicontinuous() {
        let sys = FiniteSystem::cyclic_rotation(8, 3).unwrap();
        let rp = rp_bruteforce_finite(&sys, 1, 0.4 / 8.0, 16).unwrap();
        assert_eq!(rp, (0..8).map(|i| (i, i)).collect::<Vec<_>>());
        assert!(rp_bruteforce_finite(&sys, 1, 0.0, 4).unwrap().is_empty());
    }

    #[test]
    fn matches_naive_on_a_mixing_permutation() {
        let map = vec![3, 0, 5, 1, 2, 6, 4];
        let sys = FiniteSystem::new(map, arc_metric(7)).unwrap();
        for (k, delta) in [(1, 0.2), (2, 0.2), (2, 0.3), (3, 0.15)] {
            assert_eq!(
                rp_bruteforce_finite(&sys, k, delta, 3).unwrap(),
                naive(&sys, k, delta, 3)
            );
        }
    }

    #[test]
    fn monotone_in_delta() {
        let sys = FiniteSystem::new(vec![2, 4, 1, 0, 3], arc_metric(5)).unwrap();
        let small = rp_bruteforce_finite(&sys, 2, 0.21, 4).unwrap();
        let large = rp_bruteforce_finite(&sys, 2, 0.41, 4).unwrap();
        assert!(small.iter().all(|p| large.contains(p)));
    }

    #[test]
    fn guards_and_validation() {
        let big = FiniteSystem::cyclic_rotation(65, 1).unwrap();
        assert!(matches!(
            rp_bruteforce_finite(&big, 1, 0.1, 1),
            Err(Error::ComplexityGuard(_))
        ));
        let s = FiniteSystem::cyclic_rotation(4, 1).unwrap();
        assert!(matches!(
            rp_bruteforce_finite(&s, 4, 0.1, 1),
            Err(Error::ComplexityGuard(_))
        ));
        assert!(matches!(
            rp_bruteforce_finite(&s, 1, 0.1, 33),
            Err(Error::ComplexityGuard(_))
        ));
        assert!(FiniteSystem::new(vec![0, 0], arc_metric(2)).is_err());
        let mut bad = arc_metric(3);
        bad[0][2] = 5.0;
        bad[2][0] = 5.0;
        assert!(FiniteSystem::new(vec![0, 1, 2], bad).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = FiniteSystem::cyclic_rotation(3, 1).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"size":3,"map":[1,2,0],"metric":"#));
        assert_eq!(serde_json::from_str::<FiniteSystem>(&json).unwrap(), s);
        assert!(serde_json::from_str::<FiniteSystem>(r#"{"size":2,"map":[0],"metric":[[0]]}"#).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(cube_exponents(&[2, 5]), vec![2, 5, 7]);
        assert_eq!(n_box(2, 1).count(), 9);
        assert_eq!(
            n_box(1, 2).collect::<Vec<_>>(),
            vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]
        );
    }
}
