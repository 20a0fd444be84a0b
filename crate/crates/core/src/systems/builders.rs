//! The skew products of the constructions, with coordinates numbered from 1
//! in the arguments and from 0 in the returned specs.

use super::spec::{SkewSpec, Update};
use crate::arithmetic::Frac128;
use crate::error::{Error, Result};
use crate::fourier::SparseSeries;

fn bad(msg: String) -> Error {
    Error::BadIndex(msg)
}

fn nil_updates(k: usize, alpha: Frac128) -> Vec<Update> {
    let mut u = vec![Update::rotation(alpha)];
    u.extend((1..k).map(|_| Update::prev()));
    u
}

/// `S(x) = (x₁+α, x₂+x₁, …, x_k+x_{k−1})`.
pub fn build_s(k: usize, alpha: Frac128) -> Result<SkewSpec> {
    if k == 0 {
        return Err(bad("k must be at least 1".into()));
    }
    SkewSpec::new(nil_updates(k, alpha))
}

/// `S` with `f(x₁)` added at coordinate `j+1`; needs `1 ≤ j < k`.
pub fn build_lemma31_t(k: usize, j: usize, f: &SparseSeries, alpha: Frac128) -> Result<SkewSpec> {
    if j == 0 || j >= k {
        return Err(bad(format!("need 1 <= j < k, got j = {j}, k = {k}")));
    }
    let mut u = nil_updates(k, alpha);
    u[j] = Update::prev().with_series(Some(f.clone()));
    SkewSpec::new(u)
}

/// `R(x) = (x₁+α, x₂+g(x₁)+β, x₃+x₂, …, x_{k+1}+x_k)`.
pub fn build_r(k_plus_1: usize, g: &SparseSeries, alpha: Frac128, beta: Frac128) -> Result<SkewSpec> {
    let mut u = build_sprime(k_plus_1, alpha, beta)?.updates().to_vec();
    u[1] = u[1].clone().with_series(Some(g.clone()));
    SkewSpec::new(u)
}

/// `S′(x) = (x₁+α, x₂+β, x₃+x₂, …, x_{k+1}+x_k)`.
pub fn build_sprime(k_plus_1: usize, alpha: Frac128, beta: Frac128) -> Result<SkewSpec> {
    if k_plus_1 < 2 {
        return Err(bad(format!("need k+1 >= 2, got {k_plus_1}")));
    }
    let mut u = nil_updates(k_plus_1, alpha);
    u[1] = Update::rotation(beta);
    SkewSpec::new(u)
}

/// `S` on the first `k` coordinates with `f(x₁)` added at coordinate `l+1`,
/// and `x_{k+1} ↦ x_{k+1} + f(x₁) + β`. For `l = k` the two series
/// coordinates coincide and only the last one remains.
pub fn build_two_coboundary(
    k_plus_1: usize,
    l: usize,
    f: &SparseSeries,
    alpha: Frac128,
    beta: Frac128,
) -> Result<SkewSpec> {
    let k = k_plus_1.saturating_sub(1);
    if l == 0 || l > k {
        return Err(bad(format!("need 1 <= l <= k, got l = {l}, k = {k}")));
    }
    let mut u = nil_updates(k, alpha);
    if l < k {
        u[l] = Update::prev().with_series(Some(f.clone()));
    }
    u.push(Update::rotation(beta).with_series(Some(f.clone())));
    SkewSpec::new(u)
}

/// The two factors of the combined system on 𝕋^{2k}: `T₁′` carries
/// `f2_series` at coordinate `l+1` over `α₁`, `T₂′` carries `f1_series` at
/// coordinate `j+1` over `α₂`. For `l = k` the first factor is plain `S`.
pub fn combined_factors(
    k: usize,
    j: usize,
    l: usize,
    f1_series: &SparseSeries,
    f2_series: &SparseSeries,
    alpha1: Frac128,
    alpha2: Frac128,
) -> Result<(SkewSpec, SkewSpec)> {
    if !(0 < j && j < l && l <= k) {
        return Err(bad(format!("need 0 < j < l <= k, got j = {j}, l = {l}, k = {k}")));
    }
    let t1 = if l < k {
        build_lemma31_t(k, l, f2_series, alpha1)?
    } else {
        build_s(k, alpha1)?
    };
    let t2 = build_lemma31_t(k, j, f1_series, alpha2)?;
    Ok((t1, t2))
}

/// `T₁′ × T₂′` interleaved as `(x₁, x₂, x₃, …)` with odd coordinates in
/// `T₁′` and even ones in `T₂′`.
pub fn build_combined(
    k: usize,
    j: usize,
    l: usize,
    f1_series: &SparseSeries,
    f2_series: &SparseSeries,
    alpha1: Frac128,
    alpha2: Frac128,
) -> Result<SkewSpec> {
    let (t1, t2) = combined_factors(k, j, l, f1_series, f2_series, alpha1, alpha2)?;
    SkewSpec::product(&t1, &t2)
}

/// `T_c` for each `c`: the base spec with `c` added at its first series coordinate.
pub fn build_zd_family(base: &SkewSpec, constants: &[Frac128]) -> Result<Vec<SkewSpec>> {
    let &coord = base.series_coords().first().ok_or(Error::NoSeriesCoordinate)?;
    constants
        .iter()
        .map(|&c| {
            let mut u = base.updates().to_vec();
            u[coord].constant += c;
            SkewSpec::interleaved(base.interleave(), u)
        })
        .collect()
}
