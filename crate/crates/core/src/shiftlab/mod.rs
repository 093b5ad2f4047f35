//! Weighted backward shifts `B_w e_k = w_k e_{k-1}` on truncated sequence
//! spaces, their weight-product criteria, and direct simulation of return
//! sets.

mod criterion;
mod orbit;
pub mod scaled;

pub use criterion::{
    compare_routes, criterion_sets, d_f_verdict, direct_d_f_verdict, probe_balls,
    weight_product, CaseOutcome, CriterionRow, CriterionSets, DfConfig, DfReport, Direction,
    WeightProduct, LOG_SLACK,
};
pub use orbit::{direct_return_set, shift_orbit};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Indices range over ℤ.
    Bilateral,
    /// Indices range over ℤ₊; `B_w e_0 = 0`.
    Unilateral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightRule {
    Constant { c: f64 },
    /// `neg` for indices `<= 0`, `pos` for indices `> 0`.
    Step { neg: f64, pos: f64 },
    /// `pattern[i mod len]`.
    Periodic { pattern: Vec<f64> },
    /// `values[i - start]` inside the listed range, `default` elsewhere.
    Explicit {
        start: i64,
        values: Vec<f64>,
        default: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightSpec", into = "RawWeightSpec")]
pub struct WeightSpec {
    side: Side,
    rule: WeightRule,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightSpec {
    side: Side,
    rule: WeightRule,
}

impl TryFrom<RawWeightSpec> for WeightSpec {
    type Error = Error;
    fn try_from(r: RawWeightSpec) -> Result<Self> {
        WeightSpec::new(r.side, r.rule)
    }
}

impl From<WeightSpec> for RawWeightSpec {
    fn from(w: WeightSpec) -> Self {
        RawWeightSpec {
            side: w.side,
            rule: w.rule,
        }
    }
}

/// Names of the shipped weight families, sorted.
pub const WEIGHT_FAMILIES: [&str; 4] = ["constant", "explicit", "periodic", "step"];

/// Bilateral sample weights: constant 2, step `{neg: 0.5, pos: 2}` and the
/// periodic pattern `(2, 1, 1)`.
pub fn weight_catalog() -> Vec<(&'static str, WeightSpec)> {
    vec![
        ("constant", WeightSpec::constant(Side::Bilateral, 2.0).expect("valid")),
        ("periodic", WeightSpec::periodic(Side::Bilateral, vec![2.0, 1.0, 1.0]).expect("valid")),
        ("step", WeightSpec::step(Side::Bilateral, 0.5, 2.0).expect("valid")),
    ]
}

impl WeightSpec {
    pub fn new(side: Side, rule: WeightRule) -> Result<Self> {
        let values: Vec<f64> = match &rule {
            WeightRule::Constant { c } => vec![*c],
            WeightRule::Step { neg, pos } => vec![*neg, *pos],
            WeightRule::Periodic { pattern } => {
                if pattern.is_empty() {
                    return Err(invalid("periodic weight pattern is empty"));
                }
                pattern.clone()
            }
            WeightRule::Explicit {
                values, default, ..
            } => values.iter().chain(std::iter::once(default)).copied().collect(),
        };
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v == 0.0) {
            return Err(invalid(format!("weights must be finite and non-zero, got {bad}")));
        }
        Ok(WeightSpec { side, rule })
    }

    pub fn constant(side: Side, c: f64) -> Result<Self> {
        Self::new(side, WeightRule::Constant { c })
    }

    pub fn step(side: Side, neg: f64, pos: f64) -> Result<Self> {
        Self::new(side, WeightRule::Step { neg, pos })
    }

    pub fn periodic(side: Side, pattern: Vec<f64>) -> Result<Self> {
        Self::new(side, WeightRule::Periodic { pattern })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    /// `w_i`. For unilateral shifts only `i >= 1` is meaningful.
    pub fn weight(&self, i: i64) -> f64 {
        match &self.rule {
            WeightRule::Constant { c } => *c,
            WeightRule::Step { neg, pos } => {
                if i <= 0 {
                    *neg
                } else {
                    *pos
                }
            }
            WeightRule::Periodic { pattern } => pattern[i.rem_euclid(pattern.len() as i64) as usize],
            WeightRule::Explicit {
                start,
                values,
                default,
            } => {
                let off = i - start;
                if off >= 0 && (off as usize) < values.len() {
                    values[off as usize]
                } else {
                    *default
                }
            }
        }
    }

    /// `(inf |w_i|, sup |w_i|)` over the whole index set.
    pub fn bounds(&self) -> (f64, f64) {
        let vals: Vec<f64> = match &self.rule {
            WeightRule::Constant { c } => vec![*c],
            WeightRule::Step { neg, pos } => match self.side {
                Side::Bilateral => vec![*neg, *pos],
                Side::Unilateral => vec![*pos],
            },
            WeightRule::Periodic { pattern } => pattern.clone(),
            WeightRule::Explicit {
                values, default, ..
            } => values.iter().chain(std::iter::once(default)).copied().collect(),
        };
        vals.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v.abs()), hi.max(v.abs()))
        })
    }
}

/// Finitely supported sequence on the index range `[lo, lo + len)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedVector {
    pub side: Side,
    pub lo: i64,
    pub coeffs: Vec<Complex64>,
}

impl TruncatedVector {
    pub fn zeros(side: Side, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(invalid("empty index range"));
        }
        if side == Side::Unilateral && lo < 0 {
            return Err(invalid("unilateral vectors live on indices >= 0"));
        }
        Ok(TruncatedVector {
            side,
            lo,
            coeffs: vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize],
        })
    }

    /// `e_k` on `[lo, hi]`.
    pub fn basis(side: Side, k: i64, lo: i64, hi: i64) -> Result<Self> {
        let mut v = Self::zeros(side, lo, hi)?;
        v.set(k, Complex64::new(1.0, 0.0))?;
        Ok(v)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Coefficient at index `i`, zero outside the range.
    pub fn get(&self, i: i64) -> Complex64 {
        if i < self.lo || i > self.hi() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(i - self.lo) as usize]
        }
    }

    pub fn set(&mut self, i: i64, value: Complex64) -> Result<()> {
        if i < self.lo || i > self.hi() {
            return Err(Error::IndexOutOfDomain(format!(
                "index {i} outside [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        self.coeffs[(i - self.lo) as usize] = value;
        Ok(())
    }

    /// Indices carrying non-zero coefficients.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(k, _)| self.lo + k as i64)
            .collect()
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let abs = self.coeffs.iter().map(|c| c.norm());
        match kind {
            NormKind::Sup => abs.fold(0.0, f64::max),
            NormKind::P(p) => abs.map(|a| a.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }

    /// `‖self - other‖`, aligning index ranges.
    pub fn distance(&self, other: &TruncatedVector, kind: NormKind) -> f64 {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let diffs = (lo..=hi).map(|i| (self.get(i) - other.get(i)).norm());
        match kind {
            NormKind::Sup => diffs.fold(0.0, f64::max),
            NormKind::P(p) => diffs.map(|a| a.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Sup,
    P(f64),
}

impl NormKind {
    fn validate(self) -> Result<Self> {
        match self {
            NormKind::P(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(invalid("p-norm exponent must be a finite p >= 1"))
            }
            other => Ok(other),
        }
    }
}

/// Open ball `{x : ‖x - center‖ < radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: TruncatedVector,
    pub radius: f64,
    pub norm: NormKind,
}

impl BallSpec {
    pub fn new(center: TruncatedVector, radius: f64, norm: NormKind) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(invalid("ball radius must be positive"));
        }
        Ok(BallSpec {
            center,
            radius,
            norm: norm.validate()?,
        })
    }

    pub fn contains(&self, x: &TruncatedVector) -> bool {
        x.distance(&self.center, self.norm) < self.radius
    }
}
