//! Circle arithmetic, continued fractions, and small-divisor frequency selection.

mod continued_fraction;
mod frac;
mod subsequence;

pub use continued_fraction::{continued_fraction, ContinuedFraction};
pub use frac::{dist_to_int, frac_mul, Frac128};
pub use subsequence::{band, first_index, recommended_eps, select_subsequence, Subsequence, SubsequenceEntry};
