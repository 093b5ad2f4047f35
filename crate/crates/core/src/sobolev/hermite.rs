use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{l2_norm_sq, Payload, Piece, PiecewiseAnalytic};
use crate::error::{invalid, Result};

/// End values and slopes on `[alpha, beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermiteData {
    pub alpha: f64,
    pub beta: f64,
    pub a0: Complex64,
    pub a1: Complex64,
    pub b0: Complex64,
    pub b1: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteFit {
    /// The cubic, as a single piece with origin `alpha`.
    pub function: PiecewiseAnalytic,
    /// `∫ |f''|²` of the cubic.
    pub energy: f64,
    /// `24|a0 - b0|²/h³ + 12(|a1|² + |b1|²)/h`.
    pub energy_bound: f64,
    /// `|a0 + b0|/2 + |a0 - b0|/2 + h(|a1| + |b1|)/5`.
    pub sup_bound: f64,
}

impl HermiteData {
    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Coefficients of the cubic in `u = x - alpha`.
    pub fn cubic(&self) -> Result<[Complex64; 4]> {
        let h = self.width();
        if !(h > 0.0) || !h.is_finite() {
            return Err(invalid("Hermite interval needs alpha < beta"));
        }
        let d = self.b0 - self.a0;
        let c2 = (d * 3.0 / h - self.a1 * 2.0 - self.b1) / h;
        let c3 = (-d * 2.0 / h + self.a1 + self.b1) / (h * h);
        Ok([self.a0, self.a1, c2, c3])
    }

    pub fn energy_bound(&self) -> f64 {
        let h = self.width();
        24.0 * (self.a0 - self.b0).norm_sqr() / h.powi(3)
            + 12.0 * (self.a1.norm_sqr() + self.b1.norm_sqr()) / h
    }

    pub fn sup_bound(&self) -> f64 {
        let h = self.width();
        (self.a0 + self.b0).norm() / 2.0
            + (self.a0 - self.b0).norm() / 2.0
            + h * (self.a1.norm() + self.b1.norm()) / 5.0
    }
}

/// The cubic matching the four boundary conditions. It minimizes `∫|f''|²`
/// among all `C²` interpolants of the same data.
pub fn hermite_min_curvature(d: &HermiteData) -> Result<HermiteFit> {
    let coeffs = d.cubic()?;
    let function = PiecewiseAnalytic::new(
        vec![Piece {
            a: d.alpha,
            b: d.beta,
            payload: Payload::Poly {
                origin: d.alpha,
                coeffs: coeffs.to_vec(),
            },
        }],
        None,
    )?;
    let energy = l2_norm_sq(&function, 2)?;
    Ok(HermiteFit {
        function,
        energy,
        energy_bound: d.energy_bound(),
        sup_bound: d.sup_bound(),
    })
}
