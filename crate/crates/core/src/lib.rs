//! Measurable-but-not-continuous coboundaries over irrational rotations,
//! the skew products on tori built from them, and numerical checks of the
//! identities those constructions satisfy.

pub mod arithmetic;
pub mod error;
pub mod fourier;
pub mod rpk;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
