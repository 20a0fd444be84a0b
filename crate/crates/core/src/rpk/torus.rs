use serde::{Deserialize, Serialize};

use super::finite::cube_exponents;
use crate::arithmetic::{dist_to_int, Frac128};
use crate::error::{Error, Result};
use crate::systems::{SkewSpec, TorusPoint};

pub const MAX_TORUS_ORDER: usize = 2;
const MAX_WITNESSES: usize = 4096;

/// Witnesses `x′, y′` and `n ∈ ℤ^k` for the pair `(x, y)` at scale `delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RPCertificate {
    pub x: TorusPoint,
    pub y: TorusPoint,
    pub delta: f64,
    pub x_prime: TorusPoint,
    pub y_prime: TorusPoint,
    pub n: Vec<i64>,
}

impl RPCertificate {
    pub fn k(&self) -> usize {
        self.n.len()
    }

    /// Re-checks the definition by direct iteration of `spec` at `delta`.
    pub fn validate_at(&self, spec: &SkewSpec, delta: f64) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidCertificate(m));
        if self.x.distance(&self.x_prime) >= delta {
            return fail("d(x, x') >= delta".into());
        }
        if self.y.distance(&self.y_prime) >= delta {
            return fail("d(y, y') >= delta".into());
        }
        for e in cube_exponents(&self.n) {
            let d = spec
                .iterate(&self.x_prime, e)?
                .distance(&spec.iterate(&self.y_prime, e)?);
            if d >= delta {
                return fail(format!("d(T^{e} x', T^{e} y') = {d} >= delta"));
            }
        }
        Ok(())
    }

    pub fn validate(&self, spec: &SkewSpec) -> Result<()> {
        self.validate_at(spec, self.delta)
    }
}

/// Invariance of the base-coordinate differences: every certificate needs
/// `‖Δx_base‖ < 3·delta`, so none exists once `delta ≤ gap/3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    /// 1-based base coordinate with the largest gap.
    pub coordinate: usize,
    pub gap: f64,
    pub excludes_delta_up_to: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoWitness {
    pub x: TorusPoint,
    pub y: TorusPoint,
    pub k: usize,
    pub delta: f64,
    pub n_bound: i64,
    pub grid: u64,
    /// Present when invariance rules out every certificate at this `delta`.
    pub obstruction: Option<Obstruction>,
}

/// Result of a torus search. Absence of a witness is not a proof of absence
/// unless `obstruction` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TorusOutcome {
    Certified(RPCertificate),
    NoWitnessFound(NoWitness),
}

impl TorusOutcome {
    pub fn certificate(&self) -> Option<&RPCertificate> {
        match self {
            TorusOutcome::Certified(c) => Some(c),
            TorusOutcome::NoWitnessFound(_) => None,
        }
    }
}

/// `0, 1, −1, 2, −2, …, m, −m`.
fn centered(m: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=m).flat_map(|i| [i, -i]))
}

/// Grid offsets `o/grid` with `|o|/grid < delta` in every coordinate, nearest first.
fn offsets(dim: usize, delta: f64, grid: u64) -> Result<Vec<Vec<i64>>> {
    let mut m = (delta * grid as f64).ceil() as i64;
    while m > 0 && m as f64 / grid as f64 >= delta {
        m -= 1;
    }
    let per: Vec<i64> = centered(m).collect();
    let count = per.len().checked_pow(dim as u32).unwrap_or(usize::MAX);
    if count > MAX_WITNESSES {
        return Err(Error::ComplexityGuard(format!(
            "{count} witness offsets per point exceed {MAX_WITNESSES}; lower grid or delta"
        )));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                per.iter().map(move |&o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|v| v.iter().map(|o| o.unsigned_abs()).max().unwrap_or(0));
    Ok(out)
}

/// `n` vectors in `[−B, B]^k`, by increasing `max |n_i|`, entries in
/// `0, 1, −1, …` order.
fn n_vectors(k: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                centered(bound).map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|v| v.iter().map(|o| o.unsigned_abs()).max().unwrap_or(0));
    out
}

fn shifted(p: &TorusPoint, offset: &[i64], grid: u64) -> TorusPoint {
    let q = p
        .coords
        .iter()
        .zip(offset)
        .map(|(&c, &o)| c + Frac128::from_ratio(o as i128, grid as u128).expect("grid > 0"))
        .collect();
    TorusPoint::new(q)
}

fn obstruction(spec: &SkewSpec, x: &TorusPoint, y: &TorusPoint, delta: f64) -> Option<Obstruction> {
    let (coord, gap) = (0..spec.interleave())
        .map(|i| (i, dist_to_int(x.coords[i] - y.coords[i])))
        .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
    (delta <= gap / 3.0).then(|| Obstruction {
        coordinate: coord + 1,
        gap,
        excludes_delta_up_to: gap / 3.0,
        note: format!(
            "coordinate {} is a rotation, so its difference {gap} is invariant along orbits; any witnesses within \
             delta would need a difference below 3 delta, impossible for delta <= {}",
            coord + 1,
            gap / 3.0
        ),
    })
}

/// Searches witnesses on the `1/grid` lattice around `x` and `y` and `n` in
/// `[−n_bound, n_bound]^k`; returns the first certificate in scan order,
/// re-validated by direct iteration.
pub fn rp_certify_torus(
    spec: &SkewSpec,
    pair: (&TorusPoint, &TorusPoint),
    k: usize,
    delta: f64,
    n_bound: i64,
    grid: u64,
) -> Result<TorusOutcome> {
    let (x, y) = pair;
    if k == 0 || k > MAX_TORUS_ORDER {
        return Err(Error::ComplexityGuard(format!(
            "torus search supports 1 <= k <= {MAX_TORUS_ORDER}, got {k}"
        )));
    }
    if grid == 0 || n_bound < 0 || delta.is_nan() || delta <= 0.0 {
        return Err(Error::BadIndex("need grid >= 1, n_bound >= 0, delta > 0".into()));
    }
    for p in [x, y] {
        if p.dim() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: p.dim(),
            });
        }
    }

    let offs = offsets(spec.dim(), delta, grid)?;
    let reach = k as i64 * n_bound;
    // orbit[c][e + reach] = T^e of candidate c
    let orbit = |p: &TorusPoint| -> Result<Vec<Vec<TorusPoint>>> {
        offs.iter()
            .map(|o| {
                let start = shifted(p, o, grid);
                let mut back = spec.iterate(&start, -reach)?;
                let mut row = Vec::with_capacity(2 * reach as usize + 1);
                row.push(back.clone());
                for _ in 0..2 * reach {
                    back = spec.step(&back)?;
                    row.push(back.clone());
                }
                Ok(row)
            })
            .collect()
    };
    let xs = orbit(x)?;
    let ys = orbit(y)?;
    let m = reach as usize;

    for n in n_vectors(k, n_bound) {
        let exps = cube_exponents(&n);
        for (ci, xo) in xs.iter().enumerate() {
            for (di, yo) in ys.iter().enumerate() {
                let ok = exps
                    .iter()
                    .all(|&e| xo[(e + reach) as usize].distance(&yo[(e + reach) as usize]) < delta);
                if ok {
                    let cert = RPCertificate {
                        x: x.clone(),
                        y: y.clone(),
                        delta,
                        x_prime: xs[ci][m].clone(),
                        y_prime: ys[di][m].clone(),
                        n: n.clone(),
                    };
                    cert.validate(spec)?;
                    return Ok(TorusOutcome::Certified(cert));
                }
            }
        }
    }

    Ok(TorusOutcome::NoWitnessFound(NoWitness {
        x: x.clone(),
        y: y.clone(),
        k,
        delta,
        n_bound,
        grid,
        obstruction: obstruction(spec, x, y, delta),
    }))
}

/// Splits a certificate for an interleaved product into one per factor,
/// keeping `n`; both halves are re-validated against the factor specs.
pub fn rp_product_project(spec: &SkewSpec, cert: &RPCertificate) -> Result<(RPCertificate, RPCertificate)> {
    let w = spec.interleave();
    let dims = [&cert.x, &cert.y, &cert.x_prime, &cert.y_prime];
    if w != 2 || dims.iter().any(|p| p.dim() != spec.dim()) {
        return Err(Error::NotAProduct);
    }
    let factors = spec.factors();
    let part = |p: &TorusPoint, r: usize| TorusPoint::new(p.coords.iter().skip(r).step_by(w).copied().collect());
    let mut halves = Vec::with_capacity(2);
    for (r, fac) in factors.iter().enumerate() {
        let c = RPCertificate {
            x: part(&cert.x, r),
            y: part(&cert.y, r),
            delta: cert.delta,
            x_prime: part(&cert.x_prime, r),
            y_prime: part(&cert.y_prime, r),
            n: cert.n.clone(),
        };
        c.validate(fac)?;
        halves.push(c);
    }
    let b = halves.pop().expect("two factors");
    let a = halves.pop().expect("two factors");
    Ok((a, b))
}
