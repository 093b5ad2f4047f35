//! Closed-form `W^{2,2}[-π, π]` numerics on piecewise analytic functions.

mod fknr;
mod gram;
mod hermite;
mod integrate;

pub use fknr::{build_f_knr, lemma_a1_margin, BoundCheck, FknrReport, LemmaA1Margin};
pub use gram::{basis_weight, delta_distance, gram_matrix, GramGeometry, MinEigenvalue};
pub use hermite::{hermite_min_curvature, HermiteData, HermiteFit};
pub use integrate::{l2_norm_sq, w22_inner, w22_norm_sq};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Highest polynomial degree a piece may carry.
pub const MAX_POLY_DEGREE: usize = 5;

const JUNCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    /// `Σ c_m e^{imx}`.
    Trig { terms: Vec<(i64, Complex64)> },
    /// `Σ c_j (x - origin)^j`, degree at most 5.
    Poly { origin: f64, coeffs: Vec<Complex64> },
}

impl Payload {
    /// Value and first two derivatives at `x`.
    pub fn eval(&self, x: f64) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        match self {
            Payload::Trig { terms } => {
                for &(m, c) in terms {
                    let mf = m as f64;
                    let e = c * Complex64::from_polar(1.0, mf * x);
                    out[0] += e;
                    out[1] += e * Complex64::new(0.0, mf);
                    out[2] += e * (-mf * mf);
                }
            }
            Payload::Poly { .. } => {
                let d1 = self.derivative(1);
                out[0] = self.eval_value(x);
                out[1] = d1.eval_value(x);
                out[2] = d1.derivative(1).eval_value(x);
            }
        }
        out
    }

    fn eval_value(&self, x: f64) -> Complex64 {
        match self {
            Payload::Trig { terms } => terms
                .iter()
                .map(|&(m, c)| c * Complex64::from_polar(1.0, m as f64 * x))
                .sum(),
            Payload::Poly { origin, coeffs } => {
                let u = x - origin;
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
            }
        }
    }

    /// The `order`-th derivative as a payload of the same kind.
    pub fn derivative(&self, order: usize) -> Payload {
        match self {
            Payload::Trig { terms } => Payload::Trig {
                terms: terms
                    .iter()
                    .map(|&(m, c)| (m, c * Complex64::new(0.0, m as f64).powi(order as i32)))
                    .collect(),
            },
            Payload::Poly { origin, coeffs } => {
                let mut c = coeffs.clone();
                for _ in 0..order {
                    c = c.iter().enumerate().skip(1).map(|(j, &v)| v * j as f64).collect();
                }
                Payload::Poly {
                    origin: *origin,
                    coeffs: c,
                }
            }
        }
    }

    /// Bound on `|f'|` over `[a, b]` from coefficient sums.
    fn lipschitz(&self, a: f64, b: f64) -> f64 {
        match self {
            Payload::Trig { terms } => terms.iter().map(|&(m, c)| m.unsigned_abs() as f64 * c.norm()).sum(),
            Payload::Poly { origin, coeffs } => {
                let r = (a - origin).abs().max((b - origin).abs());
                coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, c)| j as f64 * c.norm() * r.powi(j as i32 - 1))
                    .sum()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub payload: Payload,
}

/// Piecewise analytic function on `[pieces[0].a, pieces.last().b]`.
///
/// With `repeats = Some(P)` the domain has length `2π/P` and the function is
/// its periodic extension; integrals then run over `[-π, π]`, i.e. `P`
/// periods. Without it, integrals run over the domain itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise", into = "RawPiecewise")]
pub struct PiecewiseAnalytic {
    pieces: Vec<Piece>,
    repeats: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiecewise {
    pieces: Vec<Piece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    repeats: Option<u64>,
}

impl TryFrom<RawPiecewise> for PiecewiseAnalytic {
    type Error = Error;
    fn try_from(r: RawPiecewise) -> Result<Self> {
        PiecewiseAnalytic::new(r.pieces, r.repeats)
    }
}

impl From<PiecewiseAnalytic> for RawPiecewise {
    fn from(f: PiecewiseAnalytic) -> Self {
        RawPiecewise {
            pieces: f.pieces,
            repeats: f.repeats,
        }
    }
}

impl PiecewiseAnalytic {
    /// Validates the partition and the `C¹` junctions (including the wrap
    /// junction of periodic functions).
    pub fn new(pieces: Vec<Piece>, repeats: Option<u64>) -> Result<Self> {
        let f = Self::unchecked(pieces, repeats)?;
        f.check_c1()?;
        Ok(f)
    }

    /// Partition checks only; junctions may jump.
    pub fn unchecked(pieces: Vec<Piece>, repeats: Option<u64>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(invalid("at least one piece is required"));
        }
        for p in &pieces {
            if !(p.a < p.b) || !p.a.is_finite() || !p.b.is_finite() {
                return Err(invalid(format!("piece [{}, {}] is empty", p.a, p.b)));
            }
            if let Payload::Poly { coeffs, .. } = &p.payload {
                if coeffs.len() > MAX_POLY_DEGREE + 1 {
                    return Err(invalid("polynomial pieces have degree at most 5"));
                }
            }
        }
        for w in pieces.windows(2) {
            if w[0].b != w[1].a {
                return Err(invalid(format!(
                    "pieces must be contiguous, found gap at {} / {}",
                    w[0].b, w[1].a
                )));
            }
        }
        if let Some(p) = repeats {
            if p == 0 {
                return Err(invalid("repeat count must be positive"));
            }
            let len = pieces.last().unwrap().b - pieces[0].a;
            let expect = TAU / p as f64;
            if (len - expect).abs() > 1e-12 * expect {
                return Err(invalid(format!(
                    "domain length {len} does not match period 2π/{p}"
                )));
            }
        }
        Ok(PiecewiseAnalytic { pieces, repeats })
    }

    /// `Σ c_m e^{imx}` on `[-π, π]`, periodic.
    pub fn trig(terms: Vec<(i64, Complex64)>) -> Result<Self> {
        Self::new(
            vec![Piece {
                a: -std::f64::consts::PI,
                b: std::f64::consts::PI,
                payload: Payload::Trig { terms },
            }],
            Some(1),
        )
    }

    /// `h_k(x) = 2e^{ikx} - e^{2ikx}` on `[-π, π]`.
    pub fn h_k(k: i64) -> Result<Self> {
        Self::trig(vec![(k, Complex64::new(2.0, 0.0)), (2 * k, Complex64::new(-1.0, 0.0))])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn repeats(&self) -> Option<u64> {
        self.repeats
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.pieces[0].a, self.pieces.last().unwrap().b)
    }

    /// Number of domain copies integrated over.
    pub(crate) fn multiplicity(&self) -> f64 {
        self.repeats.unwrap_or(1) as f64
    }

    fn locate(&self, x: f64) -> Result<(&Piece, f64)> {
        let (lo, hi) = self.domain();
        let x = match self.repeats {
            Some(_) => lo + (x - lo).rem_euclid(hi - lo),
            None => {
                if x < lo || x > hi {
                    return Err(Error::IndexOutOfDomain(format!("{x} outside [{lo}, {hi}]")));
                }
                x
            }
        };
        let idx = self.pieces.partition_point(|p| p.b < x).min(self.pieces.len() - 1);
        Ok((&self.pieces[idx], x))
    }

    /// `[f(x), f'(x), f''(x)]`; periodic functions accept any real `x`.
    pub fn eval(&self, x: f64) -> Result<[Complex64; 3]> {
        let (piece, x) = self.locate(x)?;
        Ok(piece.payload.eval(x))
    }

    fn junctions(&self) -> Vec<(f64, [Complex64; 3], [Complex64; 3])> {
        let mut out: Vec<_> = self
            .pieces
            .windows(2)
            .map(|w| (w[0].b, w[0].payload.eval(w[0].b), w[1].payload.eval(w[1].a)))
            .collect();
        if self.repeats.is_some() {
            let first = &self.pieces[0];
            let last = self.pieces.last().unwrap();
            out.push((last.b, last.payload.eval(last.b), first.payload.eval(first.a)));
        }
        out
    }

    /// Fails with [`Error::NotC1`] when a junction jumps by more than
    /// `1e-10·max(1, |value|)` in value or first derivative.
    pub fn check_c1(&self) -> Result<()> {
        for (at, left, right) in self.junctions() {
            let vj = (left[0] - right[0]).norm();
            let dj = (left[1] - right[1]).norm();
            let vtol = JUNCTION_TOL * left[0].norm().max(1.0);
            let dtol = JUNCTION_TOL * left[1].norm().max(1.0);
            if vj > vtol || dj > dtol {
                return Err(Error::NotC1 {
                    at,
                    value_jump: vj,
                    derivative_jump: dj,
                });
            }
        }
        Ok(())
    }
}

/// Certified bracket `lower <= sup |f| <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Dense sampling for the lower end. Every point lies within `h/2` of a
/// sample `x_i`, so `|f(x)| <= |f(x_i)| + |f'(x_i)| h/2 + M₂ h²/8` with `M₂`
/// a coefficient-sum bound on `|f''|`; the upper end is the largest such
/// value.
pub fn sup_norm_bound(f: &PiecewiseAnalytic) -> SupBracket {
    const CURVATURE_SLACK: f64 = 1e-7;
    let mut lower: f64 = 0.0;
    let mut upper: f64 = 0.0;
    for p in &f.pieces {
        let width = p.b - p.a;
        let d1 = p.payload.derivative(1);
        let m2 = d1.lipschitz(p.a, p.b);
        let n = ((width * (m2 / (8.0 * CURVATURE_SLACK)).sqrt()).ceil() as usize).clamp(1025, 1 << 20);
        let step = width / (n - 1) as f64;
        let tail = 0.125 * m2 * step * step;
        for i in 0..n {
            let x = if i == n - 1 { p.b } else { p.a + i as f64 * step };
            let v = p.payload.eval_value(x).norm();
            lower = lower.max(v);
            upper = upper.max(v + 0.5 * step * d1.eval_value(x).norm() + tail);
        }
    }
    SupBracket { lower, upper }
}
