use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arithmetic::Frac128;
use crate::error::{Error, Result};
use crate::fourier::unit;
use crate::systems::{orbit_fold, SkewSpec, TorusPoint};

/// The character `x ↦ e(m·x)` of 𝕋^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    pub m: Vec<i64>,
}

impl Character {
    pub fn new(m: Vec<i64>) -> Self {
        Character { m }
    }

    pub fn is_trivial(&self) -> bool {
        self.m.iter().all(|&v| v == 0)
    }

    /// `m·x mod 1`, exact.
    pub fn phase(&self, x: &[Frac128]) -> Frac128 {
        self.m
            .iter()
            .zip(x)
            .fold(Frac128::ZERO, |acc, (&mi, &xi)| acc + xi.mul_int(mi))
    }

    pub fn eval(&self, x: &[Frac128]) -> Complex64 {
        unit(self.phase(x))
    }

    /// Compact text form, e.g. `1:0`.
    pub fn label(&self) -> String {
        self.m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(":")
    }
}

fn check_char(spec: &SkewSpec, chi: &Character) -> Result<()> {
    if chi.m.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: chi.m.len(),
        });
    }
    Ok(())
}

/// `(1/N) Σ_{i<N} χ(T^i x₀)` in one pass.
pub fn birkhoff_average(spec: &SkewSpec, chi: &Character, x0: &TorusPoint, n: u64) -> Result<Complex64> {
    check_char(spec, chi)?;
    if n == 0 {
        return Err(Error::BadIndex("Birkhoff average needs N >= 1".into()));
    }
    let sum = orbit_fold(spec, x0, n - 1, Complex64::new(0.0, 0.0), |acc, _, x| acc + chi.eval(x))?;
    Ok(sum / n as f64)
}
