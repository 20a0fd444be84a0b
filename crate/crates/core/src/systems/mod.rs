//! Triangular skew products on tori, the conjugacy `π`, the orbit-equivalence
//! transfer of coboundaries, and Sturmian coding of rotations.

mod builders;
mod orbit;
mod pi;
mod point;
mod spec;
mod sturmian;
mod transfer;

pub use builders::{
    build_combined, build_lemma31_t, build_r, build_s, build_sprime, build_two_coboundary, build_zd_family,
    combined_factors,
};
pub use orbit::{orbit_fold, write_orbit_csv};
pub use pi::{apply_pi, Correction, PiMap};
pub use point::TorusPoint;
pub use spec::{SkewSpec, Update};
pub use sturmian::{factor_complexity, sturmian_code};
pub use transfer::transfer_coboundary;
