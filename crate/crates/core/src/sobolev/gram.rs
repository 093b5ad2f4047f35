//! Geometry of point evaluations `δ_t` on `W^{2,2}`, through the Riesz
//! representers in the span of `e^{imx}`, `|m| <= B`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::angle::Angle;
use crate::error::{invalid, Error, Result};

/// `A_m = ⟨e^{imx}, e^{imx}⟩_{W^{2,2}} = 2π(1 + m² + m⁴)`.
pub fn basis_weight(m: i64) -> f64 {
    let m2 = (m * m) as f64;
    TAU * (1.0 + m2 + m2 * m2)
}

/// `e^{iθ} - 1` without cancellation for small `θ`.
pub(crate) fn em1(theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    Complex64::new(-2.0 * s * s, theta.sin())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramGeometry {
    points: Vec<Angle>,
    basis_size: usize,
    /// `G_st = Σ_{|m|<=B} cos(m(s - t)) / A_m`.
    gram: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEigenvalue {
    pub value: f64,
    /// Eigenvalues below this are not resolved in double precision.
    pub resolution: f64,
}

impl MinEigenvalue {
    pub fn resolved(&self) -> bool {
        self.value > self.resolution
    }
}

/// Gram matrix of `δ_t` over `points`, truncated at `|m| <= basis_size`.
pub fn gram_matrix(points: &[Angle], basis_size: usize) -> Result<GramGeometry> {
    if basis_size < 3 {
        return Err(invalid("basis_size must be at least 3"));
    }
    if points.is_empty() {
        return Err(invalid("at least one point is required"));
    }
    if let Some(p) = points.iter().find(|p| !(-PI..=PI).contains(&p.to_f64())) {
        return Err(invalid(format!("point {p:?} outside [-π, π]")));
    }
    let n = points.len();
    let b = basis_size as i64;
    let mut gram = DMatrix::zeros(n, n);
    for s in 0..n {
        for t in s..n {
            let d = points[s].diff(&points[t]);
            let v: f64 = (-b..=b).map(|m| (m as f64 * d).cos() / basis_weight(m)).sum();
            gram[(s, t)] = v;
            gram[(t, s)] = v;
        }
    }
    Ok(GramGeometry {
        points: points.to_vec(),
        basis_size,
        gram,
    })
}

/// `‖δ_s - δ_t‖ = (Σ_m |e^{imΔ} - 1|² / A_m)^{1/2}` with `Δ = s - t` exact.
pub fn delta_distance(s: &Angle, t: &Angle, basis_size: usize) -> f64 {
    let d = s.diff(t);
    let b = basis_size as i64;
    (-b..=b)
        .map(|m| {
            let h = (0.5 * m as f64 * d).sin();
            4.0 * h * h / basis_weight(m)
        })
        .sum::<f64>()
        .sqrt()
}

impl GramGeometry {
    pub fn points(&self) -> &[Angle] {
        &self.points
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Feature rows `φ_t[m] = e^{im(t - t_0)} / √A_m`, so that `G = Φ Φ*`.
    pub fn features(&self) -> DMatrix<Complex64> {
        let b = self.basis_size as i64;
        let cols = (2 * b + 1) as usize;
        let n = self.points.len();
        let mut phi = DMatrix::zeros(n, cols);
        for (t, p) in self.points.iter().enumerate() {
            let d = p.diff(&self.points[0]);
            for (c, m) in (-b..=b).enumerate() {
                phi[(t, c)] = Complex64::from_polar(1.0 / basis_weight(m).sqrt(), m as f64 * d);
            }
        }
        phi
    }

    /// `λ_min(G) = σ_min(Φ)²`, from the singular values of the feature
    /// matrix rather than from `G` itself.
    pub fn min_eigenvalue(&self) -> MinEigenvalue {
        let phi = self.features();
        let sv = phi.svd(false, false).singular_values;
        let smax = sv.max();
        let smin = if self.points.len() <= sv.len() { sv.min() } else { 0.0 };
        let noise = f64::EPSILON * smax * (self.points.len().max(sv.len()) as f64).sqrt();
        MinEigenvalue {
            value: smin * smin,
            resolution: 2.0 * smin * noise + noise * noise,
        }
    }

    /// Eigenvalues of `G` in ascending order (double-precision entries).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.gram.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `‖Σ c_t δ_t‖ = (Σ_m |Σ_t c_t e^{imt}|² / A_m)^{1/2}`.
    ///
    /// The inner sums are formed hierarchically over clusters of nearby
    /// points with exact angle differences, so cancellations such as
    /// `δ_s - δ_t` with `|s - t|` far below double resolution survive.
    pub fn norm(&self, coeffs: &[Complex64]) -> Result<f64> {
        if coeffs.len() != self.points.len() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for {} points",
                coeffs.len(),
                self.points.len()
            )));
        }
        let members: Vec<usize> = (0..self.points.len()).collect();
        let tree = ClusterTree::build(&self.points, &members, 0);
        let b = self.basis_size as i64;
        let total: f64 = (-b..=b)
            .map(|m| {
                let (c, r) = tree.sum(m as f64, coeffs);
                (c + r).norm_sqr() / basis_weight(m)
            })
            .sum();
        Ok(total.sqrt())
    }
}

/// Points grouped around a reference, recursively by scale.
struct ClusterTree {
    /// Leaf members sitting exactly at the reference.
    at_reference: Vec<usize>,
    /// `(offset from reference, subtree)`.
    children: Vec<(f64, ClusterTree)>,
}

impl ClusterTree {
    fn build(points: &[Angle], members: &[usize], reference: usize) -> ClusterTree {
        let offsets: Vec<(usize, f64)> = members
            .iter()
            .map(|&i| (i, points[i].diff(&points[reference])))
            .collect();
        let spread = offsets.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max);
        let mut at_reference = Vec::new();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let tau = spread * 1e-3;
        for &(i, d) in &offsets {
            if d == 0.0 {
                at_reference.push(i);
                continue;
            }
            match groups
                .iter_mut()
                .find(|(r, _)| points[i].diff(&points[*r]).abs() <= tau)
            {
                Some((_, g)) => g.push(i),
                None => groups.push((i, vec![i])),
            }
        }
        let children = groups
            .into_iter()
            .map(|(r, g)| (points[r].diff(&points[reference]), ClusterTree::build(points, &g, r)))
            .collect();
        ClusterTree {
            at_reference,
            children,
        }
    }

    /// `Σ c_t e^{im(t - ref)}` split as `(Σ c_t, remainder)`.
    fn sum(&self, m: f64, coeffs: &[Complex64]) -> (Complex64, Complex64) {
        let mut c: Complex64 = self.at_reference.iter().map(|&i| coeffs[i]).sum();
        let mut r = Complex64::new(0.0, 0.0);
        for (offset, child) in &self.children {
            let (cj, rj) = child.sum(m, coeffs);
            c += cj;
            r += rj + em1(m * offset) * (cj + rj);
        }
        (c, r)
    }
}
