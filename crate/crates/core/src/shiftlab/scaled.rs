//! Extended-range reals `mantissa · 2^exponent`.

use std::cmp::Ordering;

/// Splits a finite non-zero double into `m · 2^e` with `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let (x, bias) = if x.abs() < f64::MIN_POSITIVE {
        (x * 2f64.powi(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1022;
    let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (mant, exp + bias)
}

/// A real number with a 64-bit exponent. Multiplication by powers of two
/// is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    exponent: i64,
}

impl Scaled {
    pub const ONE: Scaled = Scaled {
        mantissa: 0.5,
        exponent: 1,
    };

    pub fn from_f64(x: f64) -> Self {
        let (mantissa, exponent) = frexp(x);
        Scaled { mantissa, exponent }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (m, e) = frexp(self.mantissa * x);
        Scaled {
            mantissa: m,
            exponent: self.exponent + e,
        }
    }

    pub fn mul(self, other: Scaled) -> Self {
        let (m, e) = frexp(self.mantissa * other.mantissa);
        Scaled {
            mantissa: m,
            exponent: self.exponent + other.exponent + e,
        }
    }

    pub fn recip(self) -> Self {
        let (m, e) = frexp(1.0 / self.mantissa);
        Scaled {
            mantissa: m,
            exponent: e - self.exponent,
        }
    }

    pub fn abs(self) -> Self {
        Scaled {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn signum(self) -> f64 {
        self.mantissa.signum()
    }

    /// Saturates to 0 or ±∞ outside the double range.
    pub fn to_f64(self) -> f64 {
        if self.exponent > 1100 {
            return self.mantissa.signum() * f64::INFINITY;
        }
        if self.exponent < -1100 {
            return 0.0 * self.mantissa.signum();
        }
        let half = self.exponent / 2;
        self.mantissa * 2f64.powi(half as i32) * 2f64.powi((self.exponent - half) as i32)
    }

    pub fn ln(self) -> f64 {
        self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// Compares magnitudes.
    pub fn cmp_abs(self, other: Scaled) -> Ordering {
        let (a, b) = (self.abs(), other.abs());
        match (a.mantissa == 0.0, b.mantissa == 0.0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        a.exponent
            .cmp(&b.exponent)
            .then(a.mantissa.partial_cmp(&b.mantissa).unwrap_or(Ordering::Equal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_two_stay_exact() {
        let mut p = Scaled::ONE;
        for _ in 0..5000 {
            p = p.mul_f64(2.0);
        }
        for _ in 0..5000 {
            p = p.mul_f64(0.5);
        }
        assert_eq!(p.to_f64(), 1.0);
        assert_eq!(p.cmp_abs(Scaled::ONE), Ordering::Equal);
    }

    #[test]
    fn round_trip_and_ln() {
        for &x in &[3.0, -0.1, 1e-310, 7.5e300] {
            assert_eq!(Scaled::from_f64(x).to_f64(), x);
            assert!((Scaled::from_f64(x.abs()).ln() - x.abs().ln()).abs() < 1e-12);
        }
        let big = Scaled::from_f64(2.0).mul_f64(2f64.powi(1000)).mul_f64(2f64.powi(1000));
        assert_eq!(big.to_f64(), f64::INFINITY);
        assert!((big.ln() - 2001.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(big.recip().recip().cmp_abs(big), Ordering::Equal);
    }
}
