use num_complex::Complex64;

use super::scaled::Scaled;
use super::{BallSpec, NormKind, Side, TruncatedVector, WeightSpec};
use crate::error::{invalid, Error, Result};
use crate::natset::WindowSet;

/// `B_w^n x` for `n = 0..=steps`, all on the index range of `x`.
///
/// Bilateral shifts, and unilateral ones whose range starts above 0, report
/// leakage as soon as mass would move below the range.
pub fn shift_orbit(w: &WeightSpec, x: &TruncatedVector, steps: usize) -> Result<Vec<TruncatedVector>> {
    if x.side != w.side() {
        return Err(Error::Mismatch("vector and weight sides differ".into()));
    }
    let absorbing = w.side() == Side::Unilateral && x.lo == 0;
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(x.clone());
    let mut cur = x.clone();
    for step in 1..=steps {
        if !absorbing && cur.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(Error::TruncationLeakage { step });
        }
        let len = cur.coeffs.len();
        let mut next = vec![Complex64::new(0.0, 0.0); len];
        for k in 1..len {
            let idx = cur.lo + k as i64;
            next[k - 1] = cur.coeffs[k] * w.weight(idx);
        }
        cur = TruncatedVector {
            side: cur.side,
            lo: cur.lo,
            coeffs: next,
        };
        orbit.push(cur.clone());
    }
    Ok(orbit)
}

/// Prefix products of `|w_i|` (signed weights keep their sign) over an index
/// range, so that `∏_{i=a+1}^{b} w_i` costs one division.
pub(crate) struct ProductTable {
    first: i64,
    prefix: Vec<Scaled>,
}

impl ProductTable {
    /// Covers products `∏_{i=lo}^{hi} w_i` for `lo, hi` in `[first, last]`.
    fn new(w: &WeightSpec, first: i64, last: i64) -> Self {
        let mut prefix = Vec::with_capacity((last - first + 2).max(1) as usize);
        let mut acc = Scaled::ONE;
        prefix.push(acc);
        for i in first..=last {
            acc = acc.mul_f64(w.weight(i));
            prefix.push(acc);
        }
        ProductTable { first, prefix }
    }

    /// Table for basis-centered probes at `probes` and up to `n_max` steps.
    pub(crate) fn covering(w: &WeightSpec, probes: &[i64], n_max: u64) -> Result<Self> {
        let n = i64::try_from(n_max).map_err(|_| invalid("n_max too large"))?;
        let lo = probes.iter().min().copied().unwrap_or(0) - n;
        let hi = probes.iter().max().copied().unwrap_or(0) + n;
        let lo = if w.side() == Side::Unilateral { lo.max(1) } else { lo };
        Ok(Self::new(w, lo, hi.max(lo)))
    }

    /// `∏_{i=k+1}^{k+n} w_i`; the empty product for `n = 0`.
    fn product(&self, k: i64, n: i64) -> Scaled {
        if n == 0 {
            return Scaled::ONE;
        }
        let a = (k + 1 - self.first) as usize;
        let b = (k + n - self.first + 1) as usize;
        self.prefix[b].mul(self.prefix[a].recip())
    }
}

fn check_balls(w: &WeightSpec, u: &BallSpec, v: &BallSpec) -> Result<()> {
    if u.norm != v.norm {
        return Err(Error::Mismatch("both balls must use the same norm".into()));
    }
    if u.center.side != w.side() || v.center.side != w.side() {
        return Err(Error::Mismatch("ball centers and weights live on different sides".into()));
    }
    Ok(())
}

fn nonzero_support(x: &TruncatedVector) -> Vec<i64> {
    x.support()
}

/// `N(U, V) ∩ [0, n_max]` for balls `U`, `V`.
///
/// `B_w^n` maps coordinate `k + n` to coordinate `k` scaled by
/// `P_k = ∏_{i=k+1}^{k+n} w_i`, so `B_w^n(U) ∩ V ≠ ∅` reduces to a
/// feasibility problem over the coordinates where either center is non-zero.
/// The check is exact per coordinate; nothing is truncated.
pub fn direct_return_set(w: &WeightSpec, u: &BallSpec, v: &BallSpec, n_max: u64) -> Result<WindowSet> {
    check_balls(w, u, v)?;
    let n = i64::try_from(n_max).map_err(|_| invalid("n_max too large"))?;
    let su = nonzero_support(&u.center);
    let sv = nonzero_support(&v.center);
    let lo = su.iter().chain(&sv).min().copied().unwrap_or(0) - n;
    let hi = su.iter().chain(&sv).max().copied().unwrap_or(0) + n;
    let lo = if w.side() == Side::Unilateral { lo.max(1) } else { lo };
    let table = ProductTable::new(w, lo, hi.max(lo));
    return_set_with(&table, w.side(), u, v, n_max)
}

pub(crate) fn return_set_with(
    table: &ProductTable,
    side: Side,
    u: &BallSpec,
    v: &BallSpec,
    n_max: u64,
) -> Result<WindowSet> {
    if u.norm != v.norm {
        return Err(Error::Mismatch("both balls must use the same norm".into()));
    }
    let su = nonzero_support(&u.center);
    let sv = nonzero_support(&v.center);
    let mut hits = Vec::new();
    let mut coords: Vec<i64> = Vec::with_capacity(su.len() + sv.len());
    for n in 0..=n_max {
        let ni = n as i64;
        coords.clear();
        coords.extend(sv.iter().copied());
        coords.extend(su.iter().map(|&i| i - ni));
        coords.sort_unstable();
        coords.dedup();
        // Unilateral: coordinates of x below n are annihilated and may sit
        // at the center of U.
        if side == Side::Unilateral {
            coords.retain(|&k| k >= 0);
        }
        let pairs: Vec<(Complex64, Complex64, Scaled)> = coords
            .iter()
            .map(|&k| (u.center.get(k + ni), v.center.get(k), table.product(k, ni)))
            .collect();
        if feasible(&pairs, u.radius, v.radius, u.norm) {
            hits.push(n);
        }
    }
    WindowSet::new(n_max + 1, hits)
}

/// Is there `y` with `‖y - a‖ < ρ_U` and `‖P y - b‖ < ρ_V` coordinatewise
/// in the given norm?
fn feasible(pairs: &[(Complex64, Complex64, Scaled)], ru: f64, rv: f64, norm: NormKind) -> bool {
    match norm {
        NormKind::Sup => pairs.iter().all(|&(a, b, p)| disk_pair(a, b, p, ru, rv)),
        NormKind::P(q) => {
            // Moving y along the segment from a to b/P trades U-residual
            // t·E against V-residual |P|(1-t)·E.
            let items: Vec<(f64, f64)> = pairs
                .iter()
                .filter_map(|&(a, b, p)| {
                    let pf = p.abs().to_f64().clamp(1e-300, 1e300);
                    let e = gap_length(a, b, p);
                    (e > 0.0).then_some((e, pf))
                })
                .collect();
            if q == 1.0 {
                l1_feasible(items, ru, rv)
            } else {
                lp_feasible(&items, q, ru, rv)
            }
        }
    }
}

/// `|a - b/P|` computed without overflowing for extreme `P`.
fn gap_length(a: Complex64, b: Complex64, p: Scaled) -> f64 {
    if p.cmp_abs(Scaled::ONE).is_ge() {
        (a - b * p.recip().to_f64()).norm()
    } else {
        // |a - b/P| = |P a - b| / |P|
        let pf = p.to_f64();
        if pf == 0.0 {
            f64::INFINITY
        } else {
            (a * pf - b).norm() / pf.abs()
        }
    }
}

fn disk_pair(a: Complex64, b: Complex64, p: Scaled, ru: f64, rv: f64) -> bool {
    if p.cmp_abs(Scaled::ONE).is_ge() {
        let inv = p.recip().to_f64();
        (a - b * inv).norm() < ru + rv * inv.abs()
    } else {
        let pf = p.to_f64();
        (a * pf - b).norm() < pf.abs() * ru + rv
    }
}

fn l1_feasible(mut items: Vec<(f64, f64)>, ru: f64, rv: f64) -> bool {
    items.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut budget = ru;
    let mut residual: f64 = items.iter().map(|(e, p)| e * p).sum();
    for (e, p) in items {
        let spend = e.min(budget);
        residual -= spend * p;
        budget -= spend;
        if budget <= 0.0 {
            break;
        }
    }
    // With the full budget spent the U-residual equals ρ_U exactly; any
    // slack below it shifts V by a continuous amount, so strictness is
    // decided by the V side.
    residual < rv
}

fn lp_feasible(items: &[(f64, f64)], q: f64, ru: f64, rv: f64) -> bool {
    let total_u: f64 = items.iter().map(|(e, _)| e.powf(q)).sum();
    if total_u < ru.powf(q) {
        return true;
    }
    let split = |ln_lambda: f64| -> (f64, f64) {
        let mut fu = 0.0;
        let mut fv = 0.0;
        for &(e, p) in items {
            let ln_c = (ln_lambda + q * p.ln()) / (q - 1.0);
            // t = c / (1 + c), evaluated stably.
            let t = 1.0 / (1.0 + (-ln_c).exp());
            fu += (t * e).powf(q);
            fv += ((1.0 - t) * p * e).powf(q);
        }
        (fu, fv)
    };
    let target = ru.powf(q);
    let (mut lo, mut hi) = (-5000.0, 5000.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if split(mid).0 < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    split(lo).1 < rv.powf(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn unilateral_unit_weights_fall_off_the_edge() {
        let w = WeightSpec::constant(Side::Unilateral, 1.0).unwrap();
        let x = TruncatedVector::basis(Side::Unilateral, 3, 0, 5).unwrap();
        let orbit = shift_orbit(&w, &x, 4).unwrap();
        for (n, v) in orbit.iter().enumerate().skip(1) {
            let expected: Vec<i64> = if n <= 3 { vec![3 - n as i64] } else { vec![] };
            assert_eq!(v.support(), expected);
        }
    }

    #[test]
    fn bilateral_constant_two() {
        let w = WeightSpec::constant(Side::Bilateral, 2.0).unwrap();
        let x = TruncatedVector::basis(Side::Bilateral, 0, -3, 3).unwrap();
        let orbit = shift_orbit(&w, &x, 3).unwrap();
        for n in 1..=3i64 {
            assert_eq!(orbit[n as usize].get(-n), c(2f64.powi(n as i32)));
            assert_eq!(orbit[n as usize].support(), vec![-n]);
        }
        assert_eq!(
            shift_orbit(&w, &x, 4).unwrap_err(),
            Error::TruncationLeakage { step: 4 }
        );
    }

    #[test]
    fn zero_balls_return_always() {
        let w = WeightSpec::step(Side::Bilateral, 0.5, 2.0).unwrap();
        let z = TruncatedVector::zeros(Side::Bilateral, 0, 0).unwrap();
        let ball = BallSpec::new(z, 1.0, NormKind::Sup).unwrap();
        let set = direct_return_set(&w, &ball, &ball, 50).unwrap();
        assert_eq!(set.len(), 51);
    }

    #[test]
    fn unit_shift_hits_once() {
        let w = WeightSpec::constant(Side::Unilateral, 1.0).unwrap();
        let u = BallSpec::new(TruncatedVector::basis(Side::Unilateral, 1, 0, 1).unwrap(), 0.1, NormKind::Sup).unwrap();
        let v = BallSpec::new(TruncatedVector::basis(Side::Unilateral, 0, 0, 1).unwrap(), 0.1, NormKind::Sup).unwrap();
        let set = direct_return_set(&w, &u, &v, 10).unwrap();
        assert_eq!(set.elements(), &[1]);
    }

    #[test]
    fn p_norm_respects_budget() {
        // Two coordinates each needing distance 1 in U to be fixed exactly.
        let items = [(1.0, 1.0), (1.0, 1.0)];
        // ℓ²: splitting evenly gives U = V = sqrt(2)/2 residuals.
        assert!(lp_feasible(&items, 2.0, 0.75, 0.75));
        assert!(!lp_feasible(&items, 2.0, 0.7, 0.7));
        assert!(l1_feasible(items.to_vec(), 1.0, 1.01));
        assert!(!l1_feasible(items.to_vec(), 1.0, 0.99));
    }
}
