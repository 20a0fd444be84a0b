use serde::{Deserialize, Serialize};

use crate::arithmetic::{dist_to_int, Frac128};

/// A point of 𝕋^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint {
    pub coords: Vec<Frac128>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Frac128>) -> Self {
        TorusPoint { coords }
    }

    pub fn zero(dim: usize) -> Self {
        TorusPoint {
            coords: vec![Frac128::ZERO; dim],
        }
    }

    pub fn from_f64s(xs: &[f64]) -> Self {
        TorusPoint {
            coords: xs.iter().map(|&x| Frac128::from_f64(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64()).collect()
    }

    /// `max_i ‖x_i − y_i‖`.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| dist_to_int(a - b))
            .fold(0.0, f64::max)
    }
}

impl From<Vec<Frac128>> for TorusPoint {
    fn from(coords: Vec<Frac128>) -> Self {
        TorusPoint { coords }
    }
}
