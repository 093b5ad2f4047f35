//! Exact dyadic angles `t = 2πm / 2^{6^k}`.
//!
//! Angles are never stored as floats. Phases `e^{int}` are computed by
//! reducing `n·m` modulo `2^{6^k}` in big-integer arithmetic and only then
//! converting the (centered) residue to a double.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest supported level; `2^{6^4}` already has 1297 bits.
pub const MAX_LEVEL: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawAngle", into = "RawAngle")]
pub struct RationalAngle {
    level: u32,
    numerator: BigUint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAngle {
    /// Decimal string, so that 2^216-sized numerators survive JSON.
    m: String,
    level: u32,
}

impl TryFrom<RawAngle> for RationalAngle {
    type Error = crate::Error;
    fn try_from(raw: RawAngle) -> Result<Self> {
        let m: BigUint = raw
            .m
            .parse()
            .map_err(|_| invalid(format!("`{}` is not a decimal integer", raw.m)))?;
        RationalAngle::new(m, raw.level)
    }
}

impl From<RationalAngle> for RawAngle {
    fn from(a: RationalAngle) -> Self {
        RawAngle {
            m: a.numerator.to_str_radix(10),
            level: a.level,
        }
    }
}

/// Exponent `6^k` of the level-`k` denominator.
pub fn level_bits(level: u32) -> usize {
    6usize.pow(level)
}

/// `2^{6^k}`.
pub fn level_modulus(level: u32) -> BigUint {
    BigUint::one() << level_bits(level)
}

/// Converts `num / 2^bits` to a double without overflowing either part.
fn ratio_to_f64(num: &BigInt, bits: usize) -> f64 {
    // Keep the top 64 significant bits; the rest is below double precision.
    let len = num.bits() as usize;
    let shift = len.saturating_sub(64);
    let top = (num >> shift).to_f64().unwrap_or(0.0);
    ldexp(top, shift as i64 - bits as i64)
}

/// `x · 2^e` applied in steps so intermediate powers neither overflow nor
/// flush to zero early.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e != 0 && x != 0.0 {
        let step = e.clamp(-1000, 1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    x
}

impl RationalAngle {
    pub fn new(numerator: BigUint, level: u32) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(invalid(format!("level must lie in 1..={MAX_LEVEL}")));
        }
        if numerator >= level_modulus(level) {
            return Err(invalid("numerator must be below 2^(6^level)"));
        }
        Ok(RationalAngle { level, numerator })
    }

    pub fn zero(level: u32) -> Result<Self> {
        Self::new(BigUint::zero(), level)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// Re-expresses the angle at a finer level.
    pub fn lift(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(invalid("cannot lift an angle to a coarser level"));
        }
        let shift = level_bits(level) - level_bits(self.level);
        Self::new(&self.numerator << shift, level)
    }

    /// Value in radians, in `[0, 2π)`.
    pub fn to_f64(&self) -> f64 {
        TAU * ratio_to_f64(&BigInt::from(self.numerator.clone()), level_bits(self.level))
    }

    /// Exact `self - other` reduced to `(-π, π]`, then converted to a double.
    pub fn diff(&self, other: &RationalAngle) -> f64 {
        let level = self.level.max(other.level);
        let bits = level_bits(level);
        let a = BigInt::from(&self.numerator << (bits - level_bits(self.level)));
        let b = BigInt::from(&other.numerator << (bits - level_bits(other.level)));
        let modulus = BigInt::from(level_modulus(level));
        let half = &modulus >> 1usize;
        let mut d = a - b;
        if d > half {
            d -= &modulus;
        } else if d <= -half.clone() {
            d += &modulus;
        }
        TAU * ratio_to_f64(&d, bits)
    }

    /// Residue `n·m mod 2^{6^k}`.
    pub fn residue(&self, n: &BigUint) -> BigUint {
        (n * &self.numerator) % level_modulus(self.level)
    }

    /// `e^{i n t}`; `None` when the phase is exactly 1.
    pub fn phase(&self, n: &BigUint) -> Option<Complex64> {
        let r = self.residue(n);
        if r.is_zero() {
            return None;
        }
        let bits = level_bits(self.level);
        let modulus = level_modulus(self.level);
        let centered = if r > (&modulus >> 1usize) {
            BigInt::from_biguint(Sign::Minus, modulus - r)
        } else {
            BigInt::from(r)
        };
        let theta = TAU * ratio_to_f64(&centered, bits);
        Some(Complex64::from_polar(1.0, theta))
    }

    /// Is `δ_t` a `p`-periodic point, i.e. `p·m ≡ 0 (mod 2^{6^k})`?
    pub fn is_period(&self, p: &BigUint) -> bool {
        self.residue(p).is_zero()
    }

    /// Exact period `2^{6^k} / gcd(m, 2^{6^k})`.
    pub fn period(&self) -> BigUint {
        if self.numerator.is_zero() {
            return BigUint::one();
        }
        let twos = self.numerator.trailing_zeros().unwrap_or(0) as usize;
        BigUint::one() << (level_bits(self.level) - twos.min(level_bits(self.level)))
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π·{}/2^{}", self.numerator, level_bits(self.level))
    }
}

/// A point of `[-π, π]` given either as a double or exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Exact(RationalAngle),
    Real(f64),
}

impl Angle {
    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Real(x) => *x,
            Angle::Exact(a) => {
                let v = a.to_f64();
                if v > PI {
                    v - TAU
                } else {
                    v
                }
            }
        }
    }

    /// `self - other`, exact before rounding when both angles are exact.
    pub fn diff(&self, other: &Angle) -> f64 {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a.diff(b),
            _ => self.to_f64() - other.to_f64(),
        }
    }
}

impl From<RationalAngle> for Angle {
    fn from(a: RationalAngle) -> Self {
        Angle::Exact(a)
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::Real(x)
    }
}
