use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{
    hermite_min_curvature, l2_norm_sq, sup_norm_bound, w22_norm_sq, HermiteData, Payload, Piece,
    PiecewiseAnalytic, SupBracket,
};
use crate::error::{invalid, Error, Result};

/// One inequality of the bound chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn le(name: &str, value: f64, bound: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    fn lt(name: &str, value: f64, bound: f64) -> Self {
        BoundCheck {
            pass: value < bound,
            ..Self::le(name, value, bound)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FknrReport {
    pub n: u32,
    pub r: u32,
    pub k: i64,
    /// `P = 2^{6^n}`: the function has period `2π/P`.
    pub periods: u64,
    /// Half-width `2/P⁵` of the zone where the function equals `h_k`.
    pub zone_half_width: f64,
    pub function: PiecewiseAnalytic,
    pub sup: SupBracket,
    /// Lemma A.2 bound on the sup of the cubic piece.
    pub hermite_sup_bound: f64,
    /// `∫|f''|²` over the cubic piece of one period.
    pub hermite_energy: f64,
    pub hermite_energy_bound: f64,
    /// `∫|h_k''|²` over the zone of one period.
    pub zone_energy: f64,
    pub period_energy: f64,
    /// `‖f''‖²_{L²[-π, π]}`.
    pub second_derivative_sq: f64,
    pub w22_norm_sq: f64,
    pub w22_norm: f64,
    pub lemma_a1_rhs: f64,
    /// `max_m |f(2πm/P) - h_k(2πm/P)|`; zero only when `k` is a multiple
    /// of `P`.
    pub zone_match_defect: f64,
    pub checks: Vec<BoundCheck>,
}

impl FknrReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn h_terms(k: i64) -> Vec<(i64, Complex64)> {
    vec![(k, Complex64::new(2.0, 0.0)), (2 * k, Complex64::new(-1.0, 0.0))]
}

/// The `2π/P`-periodic `C¹` function equal to `h_k = 2e^{ikx} - e^{2ikx}`
/// on `[-2/P⁵, 2/P⁵]` and to the Hermite cubic on the rest of the period,
/// `k = 2^{6^n} - r`.
///
/// Only `n = 1` is supported: at `n = 2` the zone width `4/2^{180}` is far
/// below the spacing of doubles near `2π/2^{36}`.
pub fn build_f_knr(n: u32, r: u32) -> Result<FknrReport> {
    if n != 1 {
        return Err(Error::Unsupported(format!(
            "n = {n}: only n = 1 is representable (period 2π/64, zone half-width 2/2^30); \
             for n >= 2 the zone is narrower than double resolution at the period scale"
        )));
    }
    if r > n {
        return Err(invalid(format!("r = {r} must satisfy 0 <= r <= n = {n}")));
    }
    let p: u64 = 1 << 6u32.pow(n);
    let pf = p as f64;
    let k = p as i64 - r as i64;
    let z = 2.0 / pf.powi(5);
    let period = TAU / pf;

    let zone = Payload::Trig { terms: h_terms(k) };
    let [hz, dhz, _] = zone.eval(z);
    let [hmz, dhmz, _] = zone.eval(-z);
    let data = HermiteData {
        alpha: z,
        beta: period - z,
        a0: hz,
        a1: dhz,
        b0: hmz,
        b1: dhmz,
    };
    let fit = hermite_min_curvature(&data)?;
    let cubic = fit.function.pieces()[0].payload.clone();

    let function = PiecewiseAnalytic::new(
        vec![
            Piece {
                a: -z,
                b: z,
                payload: zone.clone(),
            },
            Piece {
                a: z,
                b: period - z,
                payload: cubic,
            },
        ],
        Some(p),
    )?;

    let zone_only = PiecewiseAnalytic::new(
        vec![Piece {
            a: -z,
            b: z,
            payload: zone.clone(),
        }],
        None,
    )?;
    let zone_energy = l2_norm_sq(&zone_only, 2)?;
    let period_energy = fit.energy + zone_energy;
    let second_derivative_sq = l2_norm_sq(&function, 2)?;
    let w22_sq = w22_norm_sq(&function)?;
    let w22_norm = w22_sq.sqrt();
    let sup = sup_norm_bound(&function);
    let lemma_a1_rhs = (3.0 * second_derivative_sq + sup.upper * sup.upper).sqrt();

    let h = PiecewiseAnalytic::h_k(k)?;
    let mut zone_match_defect: f64 = 0.0;
    for m in 0..p {
        let x = TAU * m as f64 / pf;
        let x = if x > std::f64::consts::PI { x - TAU } else { x };
        let d = (function.eval(x)?[0] - h.eval(x)?[0]).norm();
        zone_match_defect = zone_match_defect.max(d);
    }

    let kf = k as f64;
    let checks = vec![
        BoundCheck::le("zone_edge_slope", dhz.norm().max(dhmz.norm()), 2.0 * kf * kf * z),
        BoundCheck::le("hermite_sup_bound", fit.sup_bound, 9.0),
        BoundCheck::le("sup_norm", sup.upper, 9.0),
        BoundCheck::le("hermite_energy_vs_lemma", fit.energy, fit.energy_bound),
        BoundCheck::le("hermite_energy_bound", fit.energy_bound, 960.0 / pf.powi(5)),
        BoundCheck::le("zone_energy", zone_energy, 144.0 / pf),
        BoundCheck::le("period_energy", period_energy, 1104.0 / pf),
        BoundCheck::le("second_derivative_sq", second_derivative_sq, 1104.0),
        BoundCheck::le("lemma_a1", w22_norm, lemma_a1_rhs),
        BoundCheck::lt("lemma_a1_rhs", lemma_a1_rhs, 64.0),
        BoundCheck::lt("w22_norm", w22_norm, 64.0),
    ];

    Ok(FknrReport {
        n,
        r,
        k,
        periods: p,
        zone_half_width: z,
        function,
        sup,
        hermite_sup_bound: fit.sup_bound,
        hermite_energy: fit.energy,
        hermite_energy_bound: fit.energy_bound,
        zone_energy,
        period_energy,
        second_derivative_sq,
        w22_norm_sq: w22_sq,
        w22_norm,
        lemma_a1_rhs,
        zone_match_defect,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaA1Margin {
    /// `‖f‖_{W^{2,2}}`.
    pub lhs: f64,
    /// `√(3c₁² + c₀²)` with `c₀` the upper sup bracket.
    pub rhs: f64,
    pub c0: f64,
    pub c1_sq: f64,
}

impl LemmaA1Margin {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Both sides of `‖f‖_{W²} <= √(3‖f''‖² + ‖f‖²_∞)` for a periodic `f`.
/// The inequality is reported, not enforced.
pub fn lemma_a1_margin(f: &PiecewiseAnalytic) -> Result<LemmaA1Margin> {
    if f.repeats().is_none() {
        return Err(invalid(
            "lemma A.1 needs a 2π-periodic function (f(-π) = f(π), f'(-π) = f'(π))",
        ));
    }
    let lhs = w22_norm_sq(f)?.sqrt();
    let c1_sq = l2_norm_sq(f, 2)?;
    let c0 = sup_norm_bound(f).upper;
    Ok(LemmaA1Margin {
        lhs,
        rhs: (3.0 * c1_sq + c0 * c0).sqrt(),
        c0,
        c1_sq,
    })
}
