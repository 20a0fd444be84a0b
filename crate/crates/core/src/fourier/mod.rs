//! Sparse trigonometric series, the coboundary chain `f, G₁, …, G_L`, and the
//! summability and divergence diagnostics attached to it.

mod chain;
mod diagnostics;
mod series;

pub use chain::{build_chain, eps_advisory, CoboundaryChain};
pub use diagnostics::{cesaro_at_zero, sup_growth_probe};
pub use series::{abs_coeff_sum, eval, l2_norm, unit, unit_minus_one, SparseSeries};
