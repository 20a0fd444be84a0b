use num_complex::Complex64;

use super::halton::{halton_circle, halton_points};
use crate::arithmetic::Frac128;
use crate::error::{Error, Result};
use crate::fourier::{unit, CoboundaryChain, SparseSeries};
use crate::systems::{PiMap, SkewSpec, TorusPoint};

/// `max_x |h(x) − (k(x+α) − k(x))|` over the sample points.
pub fn link_residual(h: &SparseSeries, k: &SparseSeries, alpha: Frac128, xs: &[Frac128]) -> f64 {
    xs.iter()
        .map(|&x| (h.eval(x) - (k.eval(x + alpha) - k.eval(x))).abs())
        .fold(0.0, f64::max)
}

/// Worst link of `f = G₁∘T_α − G₁, G₁ = G₂∘T_α − G₂, …` on Halton points.
pub fn coboundary_residual(chain: &CoboundaryChain, samples: usize) -> f64 {
    let xs = halton_circle(samples);
    let mut worst = link_residual(&chain.f, chain.g1(), chain.alpha, &xs);
    for w in chain.g.windows(2) {
        worst = worst.max(link_residual(&w[0], &w[1], chain.alpha, &xs));
    }
    worst
}

fn same_dim(a: &SkewSpec, b: &SkewSpec) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `max_p d(π(T p), S(π p))`.
pub fn conjugacy_residual(spec_t: &SkewSpec, spec_s: &SkewSpec, pi: &PiMap, samples: usize) -> Result<f64> {
    same_dim(spec_t, spec_s)?;
    let mut worst: f64 = 0.0;
    for p in halton_points(spec_t.dim(), samples) {
        let lhs = pi.apply(&spec_t.step(&p)?)?;
        let rhs = spec_s.step(&pi.apply(&p)?)?;
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// [`eigenfunction_residual`] for `φ = e(n x_a + m x_b − m F(x_a))` on
/// arbitrary coordinates `a` (base) and `b` (fiber), 0-based.
#[allow(clippy::too_many_arguments)]
pub fn eigenfunction_residual_at(
    spec: &SkewSpec,
    base: usize,
    fiber: usize,
    n: i64,
    m: i64,
    f_series: &SparseSeries,
    beta: Frac128,
    samples: usize,
) -> Result<f64> {
    if base >= spec.dim() || fiber >= spec.dim() {
        return Err(Error::BadIndex(format!(
            "coordinates {base}, {fiber} in dimension {}",
            spec.dim()
        )));
    }
    let alpha = spec.updates()[base].constant;
    let lambda = unit(alpha.mul_int(n) + beta.mul_int(m));
    let phi = |p: &TorusPoint| -> Complex64 {
        let mut phase = p.coords[base].mul_int(n) + p.coords[fiber].mul_int(m);
        if m != 0 {
            phase -= Frac128::from_f64(f_series.eval(p.coords[base])).mul_int(m);
        }
        unit(phase)
    };
    let mut worst: f64 = 0.0;
    for p in halton_points(spec.dim(), samples) {
        let r = (phi(&spec.step(&p)?) - lambda * phi(&p)).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `max_p |φ(R p) − λ φ(p)|` for `φ(p) = e(n p₁ + m p₂ − m F(p₁))` and
/// `λ = e(nα + mβ)`, with `α` read from the spec's first coordinate.
pub fn eigenfunction_residual(
    spec_r: &SkewSpec,
    n: i64,
    m: i64,
    f_series: &SparseSeries,
    beta: Frac128,
    samples: usize,
) -> Result<f64> {
    eigenfunction_residual_at(spec_r, 0, 1, n, m, f_series, beta, samples)
}

/// `max_p d(A(B p), B(A p))`.
pub fn commutation_residual(spec_a: &SkewSpec, spec_b: &SkewSpec, samples: usize) -> Result<f64> {
    same_dim(spec_a, spec_b)?;
    let mut worst: f64 = 0.0;
    for p in halton_points(spec_a.dim(), samples) {
        let ab = spec_a.step(&spec_b.step(&p)?)?;
        let ba = spec_b.step(&spec_a.step(&p)?)?;
        worst = worst.max(ab.distance(&ba));
    }
    Ok(worst)
}

/// `max_p d(T p, interleave(T_r p_r))` against the spec's own factors.
pub fn product_consistency_residual(spec: &SkewSpec, samples: usize) -> Result<f64> {
    let w = spec.interleave();
    let factors = spec.factors();
    let mut worst: f64 = 0.0;
    for p in halton_points(spec.dim(), samples) {
        let whole = spec.step(&p)?;
        let mut merged = vec![Frac128::ZERO; spec.dim()];
        for (r, fac) in factors.iter().enumerate() {
            let part = TorusPoint::new(p.coords.iter().skip(r).step_by(w).copied().collect());
            for (i, c) in fac.step(&part)?.coords.into_iter().enumerate() {
                merged[i * w + r] = c;
            }
        }
        worst = worst.max(whole.distance(&TorusPoint::new(merged)));
    }
    Ok(worst)
}
