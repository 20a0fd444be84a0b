//! Regional proximality of order `k`: exhaustive search on finite systems,
//! witness search with re-validation on torus systems, and projection of
//! product certificates onto the factors.

mod finite;
mod torus;

pub use finite::{
    arc_metric, cube_exponents, n_box, rp_bruteforce_finite, FiniteSystem, MAX_N_BOUND, MAX_ORDER, MAX_POINTS,
};
pub use torus::{
    rp_certify_torus, rp_product_project, NoWitness, Obstruction, RPCertificate, TorusOutcome, MAX_TORUS_ORDER,
};
