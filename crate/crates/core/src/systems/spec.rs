use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::TorusPoint;
use crate::arithmetic::Frac128;
use crate::error::{Error, Result};
use crate::fourier::SparseSeries;

/// One coordinate update `x_i ↦ x_i + constant [+ x_{i−w}] [+ series(x_base)]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Update {
    pub constant: Frac128,
    pub prev: bool,
    pub series: Option<SparseSeries>,
}

impl Update {
    pub fn rotation(constant: Frac128) -> Self {
        Update {
            constant,
            ..Update::default()
        }
    }

    pub fn prev() -> Self {
        Update {
            prev: true,
            ..Update::default()
        }
    }

    /// Zero series are dropped so that a degenerate coboundary gives the
    /// series-free update.
    pub fn with_series(mut self, series: Option<SparseSeries>) -> Self {
        self.series = series.filter(|s| !s.is_zero());
        self
    }
}

/// A triangular skew product on 𝕋^d.
///
/// With `interleave = w` the coordinates split into `w` factors by residue
/// mod `w` (0-based index `i`): `prev` reads coordinate `i − w`, and the
/// series reads the factor's base coordinate `i mod w`. The default `w = 1`
/// is the single-factor case where `prev` is `x_{i−1}` and the series reads `x_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewSpec {
    dim: usize,
    interleave: usize,
    updates: Vec<Update>,
}

impl SkewSpec {
    pub fn new(updates: Vec<Update>) -> Result<Self> {
        SkewSpec::interleaved(1, updates)
    }

    pub fn interleaved(interleave: usize, updates: Vec<Update>) -> Result<Self> {
        let dim = updates.len();
        if dim == 0 {
            return Err(Error::MalformedSpec("dimension 0".into()));
        }
        if interleave == 0 || !dim.is_multiple_of(interleave) {
            return Err(Error::MalformedSpec(format!(
                "{interleave} factors do not divide dimension {dim}"
            )));
        }
        let mut updates = updates;
        for (i, u) in updates.iter_mut().enumerate() {
            if i < interleave && (u.prev || u.series.is_some()) {
                return Err(Error::MalformedSpec(format!(
                    "base coordinate {} may only rotate",
                    i + 1
                )));
            }
            if u.series.as_ref().is_some_and(|s| s.is_zero()) {
                u.series = None;
            }
        }
        Ok(SkewSpec {
            dim,
            interleave,
            updates,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interleave(&self) -> usize {
        self.interleave
    }

    pub fn updates(&self) -> &[Update] {
        &self.updates
    }

    /// 0-based coordinates carrying a series.
    pub fn series_coords(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.updates[i].series.is_some()).collect()
    }

    /// Coordinates read by the update of coordinate `i` (0-based), besides itself.
    pub fn reads(&self, i: usize) -> Vec<usize> {
        let u = &self.updates[i];
        let mut out = Vec::new();
        if u.prev {
            out.push(i - self.interleave);
        }
        if u.series.is_some() {
            out.push(i % self.interleave);
        }
        out
    }

    /// Every update reads only strictly earlier coordinates.
    pub fn is_triangular(&self) -> bool {
        (0..self.dim).all(|i| self.reads(i).iter().all(|&j| j < i))
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Applies all updates simultaneously. Coordinates are rewritten from the
    /// top down, so every read sees a pre-step value.
    pub fn step_in_place(&self, x: &mut [Frac128]) {
        debug_assert_eq!(x.len(), self.dim);
        let w = self.interleave;
        for i in (0..self.dim).rev() {
            let u = &self.updates[i];
            let mut v = x[i] + u.constant;
            if u.prev {
                v += x[i - w];
            }
            if let Some(s) = &u.series {
                v += Frac128::from_f64(s.eval(x[i % w]));
            }
            x[i] = v;
        }
    }

    /// Exact inverse of [`SkewSpec::step_in_place`], bottom up.
    pub fn step_inverse_in_place(&self, x: &mut [Frac128]) {
        debug_assert_eq!(x.len(), self.dim);
        let w = self.interleave;
        for i in 0..self.dim {
            let u = &self.updates[i];
            let mut v = x[i] - u.constant;
            if u.prev {
                v -= x[i - w];
            }
            if let Some(s) = &u.series {
                v -= Frac128::from_f64(s.eval(x[i % w]));
            }
            x[i] = v;
        }
    }

    pub fn step(&self, p: &TorusPoint) -> Result<TorusPoint> {
        self.check_dim(p.dim())?;
        let mut q = p.clone();
        self.step_in_place(&mut q.coords);
        Ok(q)
    }

    pub fn step_inverse(&self, p: &TorusPoint) -> Result<TorusPoint> {
        self.check_dim(p.dim())?;
        let mut q = p.clone();
        self.step_inverse_in_place(&mut q.coords);
        Ok(q)
    }

    /// `T^m p` for any integer `m`.
    pub fn iterate(&self, p: &TorusPoint, m: i64) -> Result<TorusPoint> {
        self.check_dim(p.dim())?;
        let mut q = p.clone();
        for _ in 0..m.unsigned_abs() {
            if m >= 0 {
                self.step_in_place(&mut q.coords);
            } else {
                self.step_inverse_in_place(&mut q.coords);
            }
        }
        Ok(q)
    }

    /// Interleaves two single-factor specs of equal dimension into
    /// `(x₁, y₁, x₂, y₂, …)`.
    pub fn product(a: &SkewSpec, b: &SkewSpec) -> Result<SkewSpec> {
        if a.interleave != 1 || b.interleave != 1 {
            return Err(Error::MalformedSpec(
                "product factors must be single-factor specs".into(),
            ));
        }
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch {
                expected: a.dim,
                got: b.dim,
            });
        }
        let updates = a
            .updates
            .iter()
            .zip(&b.updates)
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        SkewSpec::interleaved(2, updates)
    }

    /// The factor specs, one per residue class of coordinates.
    pub fn factors(&self) -> Vec<SkewSpec> {
        let w = self.interleave;
        if w == 1 {
            return vec![self.clone()];
        }
        (0..w)
            .map(|r| SkewSpec {
                dim: self.dim / w,
                interleave: 1,
                updates: self.updates.iter().skip(r).step_by(w).cloned().collect(),
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    dim: usize,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    interleave: usize,
    updates: Vec<Update>,
}

fn one() -> usize {
    1
}

fn is_one(w: &usize) -> bool {
    *w == 1
}

impl Serialize for SkewSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            dim: self.dim,
            interleave: self.interleave,
            updates: self.updates.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SkewSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        if repr.dim != repr.updates.len() {
            return Err(serde::de::Error::custom(Error::DimensionMismatch {
                expected: repr.dim,
                got: repr.updates.len(),
            }));
        }
        SkewSpec::interleaved(repr.interleave, repr.updates).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cos_series() -> SparseSeries {
        SparseSeries::from_positive("c", [(1, Complex64::new(0.1, 0.05))]).unwrap()
    }

    #[test]
    fn base_coordinate_must_be_a_rotation() {
        assert!(SkewSpec::new(vec![Update::prev()]).is_err());
        assert!(SkewSpec::new(vec![Update::default().with_series(Some(cos_series()))]).is_err());
        assert!(SkewSpec::interleaved(2, vec![Update::default(); 3]).is_err());
    }

    #[test]
    fn inverse_undoes_step() {
        let spec = SkewSpec::new(vec![
            Update::rotation(Frac128::golden()),
            Update::prev().with_series(Some(cos_series())),
            Update::prev(),
        ])
        .unwrap();
        assert!(spec.is_triangular());
        let p = TorusPoint::from_f64s(&[0.3, 0.7, 0.1]);
        let q = spec.iterate(&p, 17).unwrap();
        assert_eq!(spec.iterate(&q, -17).unwrap(), p);
        assert!(spec.step(&TorusPoint::zero(2)).is_err());
    }

    #[test]
    fn json_schema_and_round_trip() {
        let spec = SkewSpec::new(vec![Update::rotation(Frac128::HALF), Update::prev()]).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"dim":2,"updates":[{"constant":"0.5","prev":false,"series":null},{"constant":"0","prev":true,"series":null}]}"#
        );
        assert_eq!(serde_json::from_str::<SkewSpec>(&json).unwrap(), spec);
        let bad = r#"{"dim":3,"updates":[{"constant":"0.5","prev":false,"series":null}]}"#;
        assert!(serde_json::from_str::<SkewSpec>(bad).is_err());
    }

    #[test]
    fn zero_series_is_dropped() {
        let u = Update::prev().with_series(Some(SparseSeries::zero("z")));
        assert_eq!(u, Update::prev());
    }
}
