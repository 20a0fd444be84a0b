//! Points of the circle ℝ/ℤ stored as 128-bit binary fractions.
//!
//! Addition and integer multiplication wrap modulo one with no rounding, so
//! `n·α mod 1` is computed exactly for the stored α no matter how large `n` is.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of 𝕋, the value `bits / 2^128` in `[0, 1)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac128(u128);

impl Frac128 {
    pub const ZERO: Frac128 = Frac128(0);
    pub const HALF: Frac128 = Frac128(1 << 127);

    pub const fn from_bits(bits: u128) -> Self {
        Frac128(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Reduces `x` modulo one. The reduction is exact; only the final
    /// scaling can drop bits below 2⁻¹²⁸.
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x.is_finite());
        // both subtractions are exact (Sterbenz)
        let mut f = x - x.trunc();
        if f >= 0.5 {
            f -= 1.0;
        } else if f < -0.5 {
            f += 1.0;
        }
        Frac128((f * TWO_POW_128) as i128 as u128)
    }

    /// Value in `[0, 1)`, correctly rounded.
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO_POW_128
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// `p/q mod 1`, rounded to the nearest representable point.
    pub fn from_ratio(p: i128, q: u128) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse {
                input: format!("{p}/{q}"),
                reason: "zero denominator".into(),
            });
        }
        let r = p.rem_euclid(q as i128) as u128;
        Ok(Frac128(round_scaled(&BigUint::from(r), &BigUint::from(q))))
    }

    /// The golden mean (√5 − 1)/2.
    pub fn golden() -> Self {
        // floor(√5 · 2^128) = isqrt(5 · 2^256)
        let root = (BigUint::from(5u32) << 256u32).sqrt();
        let frac = (root - (BigUint::from(1u32) << 128u32)) >> 1u32;
        Frac128(to_u128(&frac))
    }

    /// √2 − 1.
    pub fn sqrt2_minus_one() -> Self {
        let root = (BigUint::from(2u32) << 256u32).sqrt();
        let frac = root - (BigUint::from(1u32) << 128u32);
        Frac128(to_u128(&frac))
    }

    /// `n · self mod 1`, exact modulo 2⁻¹²⁸.
    pub fn mul_int(self, n: i64) -> Self {
        Frac128((n as i128 as u128).wrapping_mul(self.0))
    }

    /// Exact decimal expansion of `bits / 2^128` (at most 128 digits).
    pub fn to_decimal_string(self) -> String {
        if self.0 == 0 {
            return "0".to_string();
        }
        // bits / 2^128 = bits · 5^128 / 10^128
        let scaled = BigUint::from(self.0) * BigUint::from(5u32).pow(128);
        let digits = scaled.to_str_radix(10);
        let mut s = String::with_capacity(130);
        s.push_str("0.");
        for _ in digits.len()..128 {
            s.push('0');
        }
        s.push_str(digits.trim_end_matches('0'));
        s
    }

    /// Accepts `golden`, `sqrt2`, a ratio `p/q`, or a decimal `[-]I.F`.
    /// Everything is reduced modulo one.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        match s {
            "golden" => return Ok(Frac128::golden()),
            "sqrt2" => return Ok(Frac128::sqrt2_minus_one()),
            _ => {}
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| err("bad numerator"))?;
            let q: u128 = q.trim().parse().map_err(|_| err("bad denominator"))?;
            return Frac128::from_ratio(p, q);
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("empty"));
        }
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return Err(err("expected decimal digits"));
        }
        let bits = if frac_part.is_empty() {
            0
        } else {
            let num = BigUint::parse_bytes(frac_part.as_bytes(), 10).ok_or_else(|| err("digits"))?;
            let den = BigUint::from(10u32).pow(frac_part.len() as u32);
            round_scaled(&num, &den)
        };
        let value = Frac128(bits);
        Ok(if negative { -value } else { value })
    }
}

/// round(num · 2^128 / den) mod 2^128, for num < den.
fn round_scaled(num: &BigUint, den: &BigUint) -> u128 {
    let twice = (num << 129u32) + den;
    let q = twice / (den << 1u32);
    if q.bits() > 128 {
        0
    } else {
        to_u128(&q)
    }
}

fn to_u128(x: &BigUint) -> u128 {
    let digits = x.to_u64_digits();
    debug_assert!(digits.len() <= 2);
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    (hi << 64) | lo
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn dist_to_int(x: Frac128) -> f64 {
    let b = x.0.min(x.0.wrapping_neg());
    b as f64 / TWO_POW_128
}

/// `n·alpha mod 1` with exact wrap-around.
pub fn frac_mul(n: i64, alpha: Frac128) -> Frac128 {
    alpha.mul_int(n)
}

impl Add for Frac128 {
    type Output = Frac128;
    fn add(self, rhs: Frac128) -> Frac128 {
        Frac128(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Frac128 {
    fn add_assign(&mut self, rhs: Frac128) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Frac128 {
    type Output = Frac128;
    fn sub(self, rhs: Frac128) -> Frac128 {
        Frac128(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for Frac128 {
    fn sub_assign(&mut self, rhs: Frac128) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for Frac128 {
    type Output = Frac128;
    fn neg(self) -> Frac128 {
        Frac128(self.0.wrapping_neg())
    }
}

impl fmt::Debug for Frac128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frac128({:#034x} ≈ {})", self.0, self.to_f64())
    }
}

impl fmt::Display for Frac128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl FromStr for Frac128 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Frac128::parse(s)
    }
}

impl Serialize for Frac128 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for Frac128 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Frac128::parse(&s).map_err(serde::de::Error::custom)
    }
}
