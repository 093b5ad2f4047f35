//! Distance from `(2Q^k - Q^{2k})(U)` to the centre of `V` for dual balls
//! `U`, `V` over a finite support.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_k_level, DiagonalSymbol, DualVector};
use crate::error::{invalid, Error, Result};
use crate::natset::WindowSet;
use crate::sobolev::{gram_matrix, GramGeometry};

const MAX_ITER: usize = 10_000;
const GRAD_TOL: f64 = 1e-9;

/// Appended to `1..=200` in the default grid.
pub const DEFAULT_K_EXTRA: [u64; 7] = [62, 63, 64, 65, 126, 127, 128];

/// Open ball in the dual norm, centred at `Σ center[i] δ_{t_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualBall {
    pub center: Vec<Complex64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationConfig {
    #[serde(default = "default_level")]
    pub level: u32,
    #[serde(default = "default_basis")]
    pub basis_size: usize,
    #[serde(default = "default_u")]
    pub u: DualBall,
    #[serde(default = "default_v")]
    pub v: DualBall,
    #[serde(default = "default_k_list")]
    pub k_list: Vec<u64>,
}

fn default_level() -> u32 {
    2
}

fn default_basis() -> usize {
    256
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `δ_0 + δ_{2π/64}` on the level-2 support.
fn default_u() -> DualBall {
    DualBall {
        center: vec![re(1.0), re(0.0), re(1.0), re(0.0)],
        radius: 0.1,
    }
}

/// `δ_0 - 3δ_{2π/64}` on the level-2 support.
fn default_v() -> DualBall {
    DualBall {
        center: vec![re(1.0), re(0.0), re(-3.0), re(0.0)],
        radius: 0.1,
    }
}

pub fn default_k_list() -> Vec<u64> {
    let mut k: Vec<u64> = (1..=200).chain(DEFAULT_K_EXTRA).collect();
    k.sort_unstable();
    k.dedup();
    k
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            level: default_level(),
            basis_size: default_basis(),
            u: default_u(),
            v: default_v(),
            k_list: default_k_list(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Hit,
    Miss,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCase {
    pub k: u64,
    /// Distance achieved by the final iterate (an upper bound).
    pub distance: f64,
    /// Certified lower bound from the linearization at the final iterate.
    pub distance_lower: f64,
    pub status: Status,
    pub iterations: usize,
    pub converged: bool,
    /// `max - min` of `|h_k(t)|` over the support.
    pub symbol_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub level: u32,
    pub basis_size: usize,
    pub cases: Vec<SeparationCase>,
    /// Hits over `[min k, max k + 1)`.
    pub hits: WindowSet,
    pub undecided: Vec<u64>,
}

/// Coordinates `z = Σ Uᵀ c` in which the dual norm is Euclidean, from the
/// thin SVD `Φ = U Σ W*` of the feature matrix.
pub(crate) struct Whitening {
    /// `Σ Uᵀ`.
    forward: DMatrix<Complex64>,
    /// `Ū Σ⁻¹`.
    inverse: DMatrix<Complex64>,
}

impl Whitening {
    pub(crate) fn new(g: &GramGeometry) -> Result<Self> {
        let n = g.len();
        let svd = g.features().svd(true, false);
        let u = svd.u.ok_or_else(|| invalid("SVD failed"))?;
        let sigma = svd.singular_values;
        if sigma.len() < n || sigma.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::Unsupported(
                "Gram matrix is singular at this basis size".into(),
            ));
        }
        let mut forward = u.transpose();
        let mut inverse = u.map(|c| c.conj());
        for i in 0..n {
            forward.row_mut(i).scale_mut(sigma[i]);
            inverse.column_mut(i).unscale_mut(sigma[i]);
        }
        Ok(Whitening { forward, inverse })
    }

    pub(crate) fn to_coeffs(&self, z: &[Complex64]) -> Vec<Complex64> {
        (&self.inverse * DVector::from_column_slice(z)).iter().copied().collect()
    }
}

/// `min ‖A z + b‖` over `‖z‖ <= rho`, by accelerated projected gradient from
/// `z = 0`.
struct Problem {
    a: DMatrix<Complex64>,
    b: DVector<Complex64>,
    rho: f64,
    lipschitz: f64,
}

struct Solution {
    value: f64,
    lower: f64,
    iterations: usize,
    converged: bool,
}

fn project(z: DVector<Complex64>, rho: f64) -> DVector<Complex64> {
    let n = z.norm();
    if n > rho {
        z * Complex64::new(rho / n, 0.0)
    } else {
        z
    }
}

impl Problem {
    fn residual(&self, z: &DVector<Complex64>) -> DVector<Complex64> {
        &self.a * z + &self.b
    }

    fn gradient(&self, z: &DVector<Complex64>) -> DVector<Complex64> {
        self.a.adjoint() * self.residual(z) * Complex64::new(2.0, 0.0)
    }

    fn solve(&self) -> Solution {
        let n = self.b.len();
        let mut z = DVector::zeros(n);
        let mut y = z.clone();
        let mut t = 1.0f64;
        let step = Complex64::new(1.0 / self.lipschitz, 0.0);
        let mut iterations = 0;
        let mut converged = self.lipschitz == 0.0;
        while !converged && iterations < MAX_ITER {
            iterations += 1;
            let gy = self.gradient(&y);
            let next = project(&y - &gy * step, self.rho);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let momentum = Complex64::new((t - 1.0) / t_next, 0.0);
            y = &next + (&next - &z) * momentum;
            z = next;
            t = t_next;
            let gz = self.gradient(&z);
            let mapped = project(&z - &gz * step, self.rho);
            converged = (&z - mapped).norm() * self.lipschitz <= GRAD_TOL;
        }
        let f = self.residual(&z).norm_squared();
        let g = self.gradient(&z);
        // f(z*) >= f(z) + Re⟨g, z* - z⟩ >= f(z) - Re⟨g, z⟩ - ρ‖g‖
        let lower = f - g.dotc(&z).re - self.rho * g.norm();
        Solution {
            value: f.sqrt(),
            lower: lower.max(0.0).sqrt(),
            iterations,
            converged,
        }
    }
}

/// For each `k`, the distance from `(2Q^k - Q^{2k})(U)` to the centre of
/// `V`, and a hit when it is below the radius of `V`. Cases that neither
/// reach the radius nor certify a lower bound above it are `undecided`.
pub fn separation_experiment(cfg: &SeparationConfig) -> Result<SeparationReport> {
    let support = enumerate_k_level(cfg.level)?;
    let n = support.len();
    for (name, ball) in [("u", &cfg.u), ("v", &cfg.v)] {
        if ball.center.len() != n {
            return Err(Error::Mismatch(format!(
                "{name}: {} coefficients for {n} support points",
                ball.center.len()
            )));
        }
        if !(ball.radius > 0.0) {
            return Err(invalid(format!("{name}: radius must be positive")));
        }
    }
    if cfg.k_list.is_empty() {
        return Err(invalid("k_list must not be empty"));
    }
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();

    let u = DualVector::new(support.clone(), cfg.u.center.clone())?;
    let v = DualVector::new(support, cfg.v.center.clone())?;
    let g = gram_matrix(&u.points(), cfg.basis_size)?;
    let white = Whitening::new(&g)?;

    let cases: Vec<SeparationCase> = ks
        .par_iter()
        .map(|&k| one_case(k, &u, &v, cfg, &white))
        .collect();

    let horizon = ks.last().copied().unwrap_or(0) + 1;
    let hits = WindowSet::with_start(
        ks[0],
        horizon,
        cases.iter().filter(|c| c.status == Status::Hit).map(|c| c.k),
    )?;
    let undecided = cases
        .iter()
        .filter(|c| c.status == Status::Undecided)
        .map(|c| c.k)
        .collect();
    Ok(SeparationReport {
        level: cfg.level,
        basis_size: cfg.basis_size,
        cases,
        hits,
        undecided,
    })
}

fn one_case(
    k: u64,
    u: &DualVector,
    v: &DualVector,
    cfg: &SeparationConfig,
    white: &Whitening,
) -> SeparationCase {
    let symbol = DiagonalSymbol::mixing_difference(k);
    let mult: Vec<Complex64> = u
        .support()
        .iter()
        .map(|t| symbol.multiplier(t).unwrap_or(Complex64::new(1.0, 0.0)))
        .collect();
    let s = DMatrix::from_diagonal(&DVector::from_vec(mult.clone()));
    let a = &white.forward * &s * &white.inverse;
    let image = super::apply_symbol(&symbol, u);
    let diff: Vec<Complex64> = image
        .coeffs()
        .iter()
        .zip(v.coeffs())
        .map(|(p, q)| p - q)
        .collect();
    let b = &white.forward * DVector::from_vec(diff);
    let lipschitz = 2.0 * a.norm().powi(2);
    let sol = Problem {
        a,
        b,
        rho: cfg.u.radius,
        lipschitz,
    }
    .solve();
    let rv = cfg.v.radius;
    let status = if sol.value < rv {
        Status::Hit
    } else if sol.lower >= rv {
        Status::Miss
    } else {
        Status::Undecided
    };
    let mags = mult.iter().map(|m| m.norm());
    let spread = mags.clone().fold(f64::NEG_INFINITY, f64::max) - mags.fold(f64::INFINITY, f64::min);
    SeparationCase {
        k,
        distance: sol.value,
        distance_lower: sol.lower,
        status,
        iterations: sol.iterations,
        converged: sol.converged,
        symbol_spread: spread,
    }
}
