use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arithmetic::Frac128;
use crate::error::{Error, Result};

/// `e(θ) = exp(2πiθ)`.
pub fn unit(theta: Frac128) -> Complex64 {
    let (s, c) = (TAU * theta.to_signed_f64()).sin_cos();
    Complex64::new(c, s)
}

/// `e(θ) − 1`, accurate for small `θ` (the real part is `−2 sin²(πθ)`).
pub fn unit_minus_one(theta: Frac128) -> Complex64 {
    let t = theta.to_signed_f64();
    let s = (PI * t).sin();
    Complex64::new(-2.0 * s * s, (TAU * t).sin())
}

/// A real-valued trigonometric polynomial `Σ c_n e(nx)` with
/// `c_{−n} = conj(c_n)`.
///
/// Terms are kept sorted by `(|n|, n)`; that is also the summation order of
/// [`SparseSeries::eval`]. Equality ignores the label.
#[derive(Debug, Clone, Default)]
pub struct SparseSeries {
    label: String,
    terms: Vec<(i64, Complex64)>,
}

impl PartialEq for SparseSeries {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

fn order_key(n: i64) -> (u64, i64) {
    (n.unsigned_abs(), n)
}

impl SparseSeries {
    pub fn zero(label: impl Into<String>) -> Self {
        SparseSeries {
            label: label.into(),
            terms: Vec::new(),
        }
    }

    /// Checks conjugate symmetry exactly and rejects repeated frequencies.
    pub fn new(label: impl Into<String>, terms: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut terms: Vec<(i64, Complex64)> = terms.into_iter().collect();
        terms.sort_by_key(|&(n, _)| order_key(n));
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateFrequency(w[0].0));
            }
        }
        let series = SparseSeries {
            label: label.into(),
            terms,
        };
        for &(n, c) in &series.terms {
            if series.coeff(-n) != c.conj() {
                return Err(Error::NotConjugateSymmetric(n));
            }
        }
        Ok(series)
    }

    /// Builds the symmetric series from its positive half; `c_{−n}` is set to
    /// `conj(c_n)`.
    pub fn from_positive(
        label: impl Into<String>,
        positive: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Result<Self> {
        let mut terms = Vec::new();
        for (n, c) in positive {
            if n == 0 {
                return Err(Error::BadIndex("from_positive takes n > 0".into()));
            }
            let n = n as i64;
            terms.push((n, c));
            terms.push((-n, c.conj()));
        }
        SparseSeries::new(label, terms)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == Complex64::new(0.0, 0.0))
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.terms
            .binary_search_by_key(&order_key(n), |&(m, _)| order_key(m))
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    /// Sets `c_n` and `c_{−n} = conj(c_n)`. For `n = 0` only the real part is kept.
    pub fn set_coeff(&mut self, n: i64, c: Complex64) {
        let mut put =
            |n: i64, c: Complex64| match self.terms.binary_search_by_key(&order_key(n), |&(m, _)| order_key(m)) {
                Ok(i) => self.terms[i].1 = c,
                Err(i) => self.terms.insert(i, (n, c)),
            };
        if n == 0 {
            put(0, Complex64::new(c.re, 0.0));
        } else {
            put(n, c);
            put(-n, c.conj());
        }
    }

    /// `Σ Re(c_n e(nx))`, with each phase `n·x` formed exactly in [`Frac128`].
    pub fn eval(&self, x: Frac128) -> f64 {
        let mut sum = 0.0;
        for &(n, c) in &self.terms {
            let (s, co) = (TAU * x.mul_int(n).to_signed_f64()).sin_cos();
            sum += c.re * co - c.im * s;
        }
        sum
    }

    /// `Σ |c_n|`; finite for continuous sums.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    /// `sqrt(Σ |c_n|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficientwise map; `f(n, c_n)` must preserve conjugate symmetry.
    pub fn map(&self, label: impl Into<String>, f: impl Fn(i64, Complex64) -> Complex64) -> Result<Self> {
        SparseSeries::new(label, self.terms.iter().map(|&(n, c)| (n, f(n, c))))
    }

    /// The terms with `|n|` in `keep`.
    pub fn restrict(&self, label: impl Into<String>, keep: impl Fn(u64) -> bool) -> Self {
        SparseSeries {
            label: label.into(),
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&(n, _)| keep(n.unsigned_abs()))
                .collect(),
        }
    }
}

/// Free-function forms of the series diagnostics.
pub fn eval(series: &SparseSeries, x: Frac128) -> f64 {
    series.eval(x)
}

pub fn abs_coeff_sum(series: &SparseSeries) -> f64 {
    series.abs_coeff_sum()
}

pub fn l2_norm(series: &SparseSeries) -> f64 {
    series.l2_norm()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    n: i64,
    re: f64,
    im: f64,
}

impl Serialize for SparseSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for &(n, c) in &self.terms {
            seq.serialize_element(&TermRepr { n, re: c.re, im: c.im })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SparseSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        SparseSeries::new("", terms.into_iter().map(|t| (t.n, Complex64::new(t.re, t.im))))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_series_is_zero_everywhere() {
        let s = SparseSeries::zero("empty");
        assert_eq!(s.eval(Frac128::golden()), 0.0);
        assert_eq!(s.abs_coeff_sum(), 0.0);
        assert_eq!(s.l2_norm(), 0.0);
        assert!(s.is_zero());
    }

    #[test]
    fn cosine_at_zero() {
        let s = SparseSeries::from_positive("cos", [(3, c(0.5, 0.0))]).unwrap();
        assert_eq!(s.eval(Frac128::ZERO), 1.0);
        assert!((s.eval(Frac128::from_ratio(1, 6).unwrap()) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sine_term() {
        // c_1 = -i/2 gives sin(2πx)
        let s = SparseSeries::from_positive("sin", [(1, c(0.0, -0.5))]).unwrap();
        assert!((s.eval(Frac128::from_ratio(1, 4).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_and_duplicates() {
        assert_eq!(
            SparseSeries::new("x", [(2, c(1.0, 1.0)), (-2, c(1.0, 1.0))]),
            Err(Error::NotConjugateSymmetric(-2))
        );
        assert_eq!(
            SparseSeries::new("x", [(2, c(1.0, 0.0))]),
            Err(Error::NotConjugateSymmetric(2))
        );
        assert_eq!(
            SparseSeries::new("x", [(2, c(1.0, 0.0)), (2, c(1.0, 0.0))]),
            Err(Error::DuplicateFrequency(2))
        );
    }

    #[test]
    fn summation_order_is_by_magnitude() {
        let s = SparseSeries::from_positive("s", [(5, c(1.0, 0.0)), (1, c(2.0, 0.0)), (3, c(0.0, 1.0))]).unwrap();
        let ns: Vec<i64> = s.terms().iter().map(|t| t.0).collect();
        assert_eq!(ns, vec![-1, 1, -3, 3, -5, 5]);
    }

    #[test]
    fn set_coeff_keeps_symmetry() {
        let mut s = SparseSeries::from_positive("s", [(4, c(1.0, 2.0))]).unwrap();
        s.set_coeff(4, c(3.0, -1.0));
        s.set_coeff(-7, c(0.5, 0.5));
        assert_eq!(s.coeff(-4), c(3.0, 1.0));
        assert_eq!(s.coeff(7), c(0.5, -0.5));
        assert!(SparseSeries::new("", s.terms().iter().copied()).is_ok());
    }

    #[test]
    fn json_schema() {
        let s = SparseSeries::from_positive("s", [(2, c(0.25, -0.5))]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[{"n":-2,"re":0.25,"im":0.5},{"n":2,"re":0.25,"im":-0.5}]"#);
        let back: SparseSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back.terms(), s.terms());
    }

    #[test]
    fn unit_minus_one_matches_direct_form() {
        for k in 0..100 {
            let t = Frac128::from_ratio(k, 100).unwrap();
            let direct = unit(t) - Complex64::new(1.0, 0.0);
            assert!((unit_minus_one(t) - direct).norm() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn real_valued_series_match_cosine_form(
            coeffs in proptest::collection::btree_map(1u64..500, (-1.0f64..1.0, -1.0f64..1.0), 0..20),
            xbits in any::<u128>(),
        ) {
            let x = Frac128::from_bits(xbits);
            let s = SparseSeries::from_positive("p", coeffs.iter().map(|(&n, &(re, im))| (n, c(re, im)))).unwrap();
            // 2 Re(c e(nx)) = 2|c| cos(2π n x + arg c)
            let oracle: f64 = coeffs.iter().map(|(&n, &(re, im))| {
                let z = c(re, im);
                2.0 * z.norm() * (TAU * (n as f64) * x.to_f64() + z.arg()).cos()
            }).sum();
            prop_assert!((s.eval(x) - oracle).abs() < 1e-9);
            let json = serde_json::to_string(&s).unwrap();
            let back: SparseSeries = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.terms(), s.terms());
        }
    }
}
