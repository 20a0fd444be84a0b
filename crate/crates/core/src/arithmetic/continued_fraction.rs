use serde::{Deserialize, Serialize};

use super::frac::{dist_to_int, frac_mul, Frac128};
use crate::error::{Error, Result};

/// Convergent denominators beyond this are not certified by 128 fractional bits.
const PRECISION_HORIZON: u128 = 1 << 62;
const RATIONAL_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// Regular continued fraction `[a₀; a₁, a₂, …]` with its convergents `p_i/q_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<u128>,
    pub convergents: Vec<(u128, u128)>,
    /// The expansion ended exactly: the input is rational.
    pub terminated: bool,
}

impl ContinuedFraction {
    /// Fails with [`Error::RationalInput`] if the expansion terminated.
    pub fn ensure_irrational(&self) -> Result<&Self> {
        if self.terminated {
            Err(Error::RationalInput {
                depth: self.partial_quotients.len(),
            })
        } else {
            Ok(self)
        }
    }

    pub fn denominators(&self) -> impl Iterator<Item = u128> + '_ {
        self.convergents.iter().map(|&(_, q)| q)
    }
}

/// Expands `alpha` by the floor/reciprocal iteration, carried out exactly on
/// the rational `bits / 2^128`.
///
/// Stops after `depth` quotients, when the remainder vanishes (`terminated`),
/// or once convergent denominators pass 2⁶², where the 128-bit representation
/// no longer pins the quotients of the underlying irrational.
pub fn continued_fraction(alpha: Frac128, depth: usize) -> ContinuedFraction {
    let depth = depth.min(64);
    let mut acc = Convergents::new();
    if depth <= 1 || alpha.bits() == 0 {
        return acc.finish(alpha.bits() == 0);
    }

    // x = num / den with 0 < num < den; the first den is 2^128.
    let num0 = alpha.bits();
    let (a1, r1) = {
        let mut a = u128::MAX / num0;
        let mut r = u128::MAX % num0 + 1;
        if r == num0 {
            a += 1;
            r = 0;
        }
        (a, r)
    };

    let mut terminated = false;
    let mut hit_horizon = !acc.push(a1);
    if !hit_horizon {
        let (mut num, mut den) = (r1, num0);
        terminated = num == 0;
        while !terminated && acc.quotients.len() < depth {
            if !acc.push(den / num) {
                hit_horizon = true;
                break;
            }
            (den, num) = (num, den % num);
            terminated = num == 0;
        }
    }
    if hit_horizon {
        // A quotient too large to represent means alpha sits within far less
        // than 1/q² of the last convergent: a rational, up to 128-bit rounding.
        let q = acc.q;
        let err = dist_to_int(frac_mul(q as i64, alpha));
        terminated = err * (q as f64) * (q as f64) < RATIONAL_TOLERANCE;
    }
    acc.finish(terminated)
}

struct Convergents {
    quotients: Vec<u128>,
    convergents: Vec<(u128, u128)>,
    p_prev: u128,
    q_prev: u128,
    p: u128,
    q: u128,
}

impl Convergents {
    fn new() -> Self {
        Convergents {
            quotients: vec![0],
            convergents: vec![(0, 1)],
            p_prev: 1,
            q_prev: 0,
            p: 0,
            q: 1,
        }
    }

    /// Appends quotient `a`; refuses once the denominator passes the horizon.
    fn push(&mut self, a: u128) -> bool {
        let next_p = a.checked_mul(self.p).and_then(|v| v.checked_add(self.p_prev));
        let next_q = a.checked_mul(self.q).and_then(|v| v.checked_add(self.q_prev));
        match (next_p, next_q) {
            (Some(np), Some(nq)) if nq <= PRECISION_HORIZON => {
                (self.p_prev, self.q_prev) = (self.p, self.q);
                (self.p, self.q) = (np, nq);
                self.quotients.push(a);
                self.convergents.push((np, nq));
                true
            }
            _ => false,
        }
    }

    fn finish(self, terminated: bool) -> ContinuedFraction {
        ContinuedFraction {
            partial_quotients: self.quotients,
            convergents: self.convergents,
            terminated,
        }
    }
}
