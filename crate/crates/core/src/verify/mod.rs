//! Numerical checks: Birkhoff averages as a unique-ergodicity proxy, and
//! residuals of the coboundary, conjugacy, eigenfunction and commutation
//! identities on deterministic Halton samples.

mod birkhoff;
mod ergodicity;
mod halton;
mod residuals;

pub use birkhoff::{birkhoff_average, Character};
pub use ergodicity::{unique_ergodicity_probe, AverageRow, CharSummary, ErgodicityReport};
pub use halton::{halton_circle, halton_points, radical_inverse, van_der_corput};
pub use residuals::{
    coboundary_residual, commutation_residual, conjugacy_residual, eigenfunction_residual, eigenfunction_residual_at,
    link_residual, product_consistency_residual,
};
