//! The diagonal operator `Q_K δ_t = e^{it} δ_t` on finite spans of point
//! evaluations, over the dyadic angles of `K`.

mod separation;

pub use separation::{
    separation_experiment, DualBall, SeparationCase, SeparationConfig, SeparationReport, Status,
    DEFAULT_K_EXTRA,
};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::angle::{level_bits, Angle, RationalAngle};
use crate::error::{invalid, Error, Result};
use crate::sobolev::GramGeometry;
use crate::verdict::{FamilyVerdict, Witness};

/// Deepest level accepted by [`enumerate_k_level`].
pub const MAX_ENUM_LEVEL: u32 = 3;

/// The `2^k` points `Σ_{n<=k} 2πε_n / 2^{6^n}`, in increasing order.
pub fn enumerate_k_level(k: u32) -> Result<Vec<RationalAngle>> {
    if k == 0 || k > MAX_ENUM_LEVEL {
        return Err(invalid(format!("level must lie in 1..={MAX_ENUM_LEVEL}")));
    }
    let top = level_bits(k);
    let digits: Vec<BigUint> = (1..=k).map(|n| BigUint::one() << (top - level_bits(n))).collect();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let mut m = BigUint::zero();
        for (n, d) in digits.iter().enumerate() {
            if mask >> (k as usize - 1 - n) & 1 == 1 {
                m += d;
            }
        }
        out.push(RationalAngle::new(m, k)?);
    }
    out.sort();
    Ok(out)
}

/// `Σ c_t δ_t` over distinct angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDual", into = "RawDual")]
pub struct DualVector {
    support: Vec<RationalAngle>,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDual {
    support: Vec<RationalAngle>,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawDual> for DualVector {
    type Error = Error;
    fn try_from(r: RawDual) -> Result<Self> {
        DualVector::new(r.support, r.coeffs)
    }
}

impl From<DualVector> for RawDual {
    fn from(v: DualVector) -> Self {
        RawDual {
            support: v.support,
            coeffs: v.coeffs,
        }
    }
}

impl DualVector {
    pub fn new(support: Vec<RationalAngle>, coeffs: Vec<Complex64>) -> Result<Self> {
        if support.len() != coeffs.len() {
            return Err(Error::Mismatch(format!(
                "{} support points, {} coefficients",
                support.len(),
                coeffs.len()
            )));
        }
        for (i, s) in support.iter().enumerate() {
            if support[..i].iter().any(|t| t.diff(s) == 0.0 && equal_angles(s, t)) {
                return Err(invalid(format!("support point {s} repeated")));
            }
        }
        Ok(DualVector { support, coeffs })
    }

    /// `δ_t`.
    pub fn delta(t: RationalAngle) -> Self {
        DualVector {
            support: vec![t],
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn support(&self) -> &[RationalAngle] {
        &self.support
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale(&self, a: Complex64) -> Self {
        DualVector {
            support: self.support.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Support points as Gram points.
    pub fn points(&self) -> Vec<Angle> {
        self.support.iter().cloned().map(Angle::Exact).collect()
    }
}

/// Angles compared after lifting to a common level.
fn equal_angles(a: &RationalAngle, b: &RationalAngle) -> bool {
    let level = a.level().max(b.level());
    match (a.lift(level), b.lift(level)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigUint::from(v)),
            Repr::Str(s) => s
                .parse()
                .map_err(|_| D::Error::custom(format!("`{s}` is not a non-negative integer"))),
        }
    }
}

/// `z ↦ zⁿ` or `z ↦ 2z^k - z^{2k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiagonalSymbol {
    Power {
        #[serde(with = "decimal")]
        n: BigUint,
    },
    MixingDifference {
        #[serde(with = "decimal")]
        k: BigUint,
    },
}

impl DiagonalSymbol {
    pub fn power(n: u64) -> Self {
        DiagonalSymbol::Power { n: n.into() }
    }

    pub fn mixing_difference(k: u64) -> Self {
        DiagonalSymbol::MixingDifference { k: k.into() }
    }

    /// Value at `e^{it}`; `None` when it is exactly 1.
    pub fn multiplier(&self, t: &RationalAngle) -> Option<Complex64> {
        match self {
            DiagonalSymbol::Power { n } => t.phase(n),
            DiagonalSymbol::MixingDifference { k } => {
                let z = t.phase(k)?;
                let z2 = t.phase(&(k << 1usize)).unwrap_or(Complex64::new(1.0, 0.0));
                Some(z * 2.0 - z2)
            }
        }
    }
}

/// `c_t ↦ s(e^{it}) c_t`. Coefficients with an exactly unit multiplier are
/// copied untouched.
pub fn apply_symbol(s: &DiagonalSymbol, v: &DualVector) -> DualVector {
    let coeffs = v
        .support
        .iter()
        .zip(&v.coeffs)
        .map(|(t, &c)| match s.multiplier(t) {
            Some(m) => m * c,
            None => c,
        })
        .collect();
    DualVector {
        support: v.support.clone(),
        coeffs,
    }
}

/// Is `δ_t` fixed by `Q_K^p`?
pub fn periodicity_check(t: &RationalAngle, p: &BigUint) -> Result<bool> {
    if p.is_zero() {
        return Err(invalid("period must be at least 1"));
    }
    Ok(t.is_period(p))
}

fn check_support(v: &DualVector, g: &GramGeometry) -> Result<()> {
    if g.points() != v.points().as_slice() {
        return Err(Error::Mismatch(
            "Gram geometry was built over a different support".into(),
        ));
    }
    Ok(())
}

/// `‖Σ c_t δ_t‖` in the dual of `W^{2,2}`.
pub fn xk_norm(v: &DualVector, g: &GramGeometry) -> Result<f64> {
    check_support(v, g)?;
    g.norm(&v.coeffs)
}

/// Draws pairs `u, v` from `B(x; r/3)` and checks `‖2u - v - x‖ < r`.
///
/// Samples are uniform in whitened coordinates, where the dual norm is
/// Euclidean; the check itself goes through [`GramGeometry::norm`]. A
/// relative slack of `1e-9` absorbs the rounding of that evaluation.
pub fn ball_shrink_check(
    x: &DualVector,
    r: f64,
    samples: usize,
    g: &GramGeometry,
    seed: u64,
) -> Result<FamilyVerdict> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("radius must be positive"));
    }
    check_support(x, g)?;
    let white = separation::Whitening::new(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x.coeffs.len();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let du = white.to_coeffs(&sample_ball(&mut rng, n, r / 3.0));
        let dv = white.to_coeffs(&sample_ball(&mut rng, n, r / 3.0));
        // 2u - v - x = 2du - dv
        let d: Vec<Complex64> = du.iter().zip(&dv).map(|(a, b)| a * 2.0 - b).collect();
        let dist = g.norm(&d)?;
        worst = worst.max(dist);
        if dist >= r * (1.0 + 1e-9) {
            return Ok(FamilyVerdict::fails(Witness::Element { value: i as u64 })
                .with_note(format!("‖2u - v - x‖ = {dist:e} >= r = {r:e}")));
        }
    }
    Ok(FamilyVerdict::holds(None).with_note(format!(
        "{samples} pairs, largest ‖2u - v - x‖ / r = {:.6}",
        worst / r
    )))
}

/// Uniform point of the open complex `n`-ball of the given radius.
fn sample_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    let dim = 2 * n;
    let mut z: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: f64 = rng.gen();
    let scale = radius * u.powf(1.0 / dim as f64) / norm;
    z.iter_mut().for_each(|v| *v *= scale);
    z.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sobolev::gram_matrix;

    #[test]
    fn level_two_points() {
        let pts = enumerate_k_level(2).unwrap();
        assert_eq!(pts.len(), 4);
        let top = (BigUint::one() << 30usize) + 1u32;
        assert_eq!(pts[3].numerator(), &top);
        assert!(enumerate_k_level(4).is_err());
    }

    #[test]
    fn power_sixty_four_is_identity_at_level_one() {
        let t = RationalAngle::new(1u32.into(), 1).unwrap();
        assert_eq!(DiagonalSymbol::power(64).multiplier(&t), None);
        assert!(periodicity_check(&t, &64u32.into()).unwrap());
        let fine = RationalAngle::new(1u32.into(), 2).unwrap();
        assert!(!periodicity_check(&fine, &64u32.into()).unwrap());
    }

    #[test]
    fn mixing_difference_at_zero_is_one() {
        let t = RationalAngle::zero(2).unwrap();
        assert_eq!(DiagonalSymbol::mixing_difference(17).multiplier(&t), None);
        let h = RationalAngle::new(1u32.into(), 1).unwrap();
        let m = DiagonalSymbol::mixing_difference(32).multiplier(&h).unwrap();
        assert!((m - Complex64::new(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn repeated_support_rejected() {
        let a = RationalAngle::new(1u32.into(), 1).unwrap();
        let b = a.lift(2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(DualVector::new(vec![a, b], vec![one, one]).is_err());
    }

    #[test]
    fn norm_needs_matching_support() {
        let pts = enumerate_k_level(1).unwrap();
        let v = DualVector::delta(pts[0].clone());
        let g = gram_matrix(&v.points(), 16).unwrap();
        assert!(xk_norm(&v, &g).unwrap() > 0.0);
        let other = gram_matrix(&[Angle::Exact(pts[1].clone())], 16).unwrap();
        assert!(matches!(xk_norm(&v, &other), Err(Error::Mismatch(_))));
    }
}
