use super::point::TorusPoint;
use crate::arithmetic::Frac128;
use crate::error::{Error, Result};
use crate::fourier::SparseSeries;

/// `x_coord ↦ x_coord − G(x_arg)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub coord: usize,
    pub arg: usize,
    pub series: SparseSeries,
}

/// The conjugacy `π`: subtracts truncated series values from selected
/// coordinates. Arguments are base coordinates, which no correction touches,
/// so the order of corrections is irrelevant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiMap {
    pub corrections: Vec<Correction>,
}

impl PiMap {
    /// Subtracts `G_m(x₁)` from coordinate `j+m` (1-based) for `m = 1, 2, …`.
    pub fn new(j: usize, g_list: &[SparseSeries]) -> Self {
        PiMap {
            corrections: g_list
                .iter()
                .enumerate()
                .map(|(m, g)| Correction {
                    coord: j + m,
                    arg: 0,
                    series: g.clone(),
                })
                .collect(),
        }
    }

    pub fn identity() -> Self {
        PiMap::default()
    }

    /// For the two-coboundary system on 𝕋^{k+1}: `G_m` at coordinate `l+m` for
    /// `m ≤ k−l`, and `G₁` at coordinate `k+1`.
    pub fn two_coboundary(k_plus_1: usize, l: usize, g_list: &[SparseSeries]) -> Result<Self> {
        let k = k_plus_1.saturating_sub(1);
        if l == 0 || l > k {
            return Err(Error::BadIndex(format!("need 1 <= l <= k, got l = {l}, k = {k}")));
        }
        if g_list.len() < (k - l).max(1) {
            return Err(Error::BadIndex(format!(
                "need {} chain functions, got {}",
                (k - l).max(1),
                g_list.len()
            )));
        }
        let mut pi = PiMap::new(l, &g_list[..k - l]);
        pi.corrections.push(Correction {
            coord: k,
            arg: 0,
            series: g_list[0].clone(),
        });
        Ok(pi)
    }

    /// Lifts one map per factor to the interleaved product with `w` factors.
    pub fn interleaved(factor_maps: &[PiMap]) -> Self {
        let w = factor_maps.len();
        PiMap {
            corrections: factor_maps
                .iter()
                .enumerate()
                .flat_map(|(r, pi)| {
                    pi.corrections.iter().map(move |c| Correction {
                        coord: c.coord * w + r,
                        arg: c.arg * w + r,
                        series: c.series.clone(),
                    })
                })
                .collect(),
        }
    }

    fn shift(&self, p: &TorusPoint, sign: i64) -> Result<TorusPoint> {
        let mut q = p.clone();
        for c in &self.corrections {
            if c.coord >= p.dim() || c.arg >= p.dim() {
                return Err(Error::DimensionMismatch {
                    expected: c.coord.max(c.arg) + 1,
                    got: p.dim(),
                });
            }
            let v = Frac128::from_f64(c.series.eval(p.coords[c.arg])).mul_int(sign);
            q.coords[c.coord] += v;
        }
        Ok(q)
    }

    pub fn apply(&self, p: &TorusPoint) -> Result<TorusPoint> {
        self.shift(p, -1)
    }

    pub fn inverse(&self, p: &TorusPoint) -> Result<TorusPoint> {
        self.shift(p, 1)
    }
}

pub fn apply_pi(pi: &PiMap, p: &TorusPoint) -> Result<TorusPoint> {
    pi.apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_and_inverse() {
        let p = TorusPoint::from_f64s(&[0.1, 0.2, 0.3]);
        assert_eq!(PiMap::identity().apply(&p).unwrap(), p);
        let g = SparseSeries::from_positive("g", [(2, Complex64::new(0.3, 0.1))]).unwrap();
        let pi = PiMap::new(1, &[g.clone(), g]);
        let q = pi.apply(&p).unwrap();
        assert_ne!(q, p);
        assert!(pi.inverse(&q).unwrap().distance(&p) < 1e-12);
        assert_eq!(pi.inverse(&q).unwrap(), p);
        assert!(pi.apply(&TorusPoint::zero(2)).is_err());
    }

    #[test]
    fn interleaved_coordinates() {
        let g = SparseSeries::from_positive("g", [(1, Complex64::new(0.1, 0.0))]).unwrap();
        let pi = PiMap::interleaved(&[PiMap::new(2, std::slice::from_ref(&g)), PiMap::new(1, &[g])]);
        let c: Vec<(usize, usize)> = pi.corrections.iter().map(|c| (c.coord, c.arg)).collect();
        assert_eq!(c, vec![(4, 0), (3, 1)]);
    }
}
