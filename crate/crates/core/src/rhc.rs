//! Return-time sets along orbits and the windowed sets
//! `A_U = {k : N ∩ (N - k) ∩ ... ∩ (N - rk) has positive density}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::natset::{gap_profile, positive_density, GapProfile, WindowSet};
use crate::shiftlab::{shift_orbit, BallSpec, TruncatedVector, WeightSpec};
use crate::verdict::{FamilyVerdict, Witness};

/// `⋂_{i=0..=r} (N - ik)`, on `[0, horizon - rk)`.
pub fn progression_intersection(n: &WindowSet, r: u64, k: u64) -> WindowSet {
    (1..=r).fold(n.shift_down(0), |acc, i| {
        acc.intersection(&n.shift_down(i.saturating_mul(k)))
    })
}

/// `{k <= k_max : the densest length-s window of ⋂_{i<=r}(N - ik) holds
/// at least δs points}` on `[0, k_max + 1)`.
///
/// A `k` whose intersection window is shorter than `s` cannot be
/// measured and is left out.
pub fn a_u_window(n: &WindowSet, r: u64, k_max: u64, s: u64, delta: f64) -> Result<WindowSet> {
    if r == 0 {
        return Err(invalid("r must be at least 1"));
    }
    if s == 0 {
        return Err(invalid("density window s must be at least 1"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid("density threshold must lie in (0, 1]"));
    }
    let mut members = Vec::new();
    for k in 0..=k_max {
        let inter = progression_intersection(n, r, k);
        if inter.window_len() < s || n.horizon() <= r.saturating_mul(k) {
            continue;
        }
        if positive_density(&inter, s, delta)?.is_holds() {
            members.push(k);
        }
    }
    WindowSet::new(k_max + 1, members)
}

/// `A_U` together with its syndetic verdict at gap bound `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuReport {
    pub a_u: WindowSet,
    pub gap: GapProfile,
}

pub fn a_u_report(
    n: &WindowSet,
    r: u64,
    k_max: u64,
    s: u64,
    delta: f64,
    m: u64,
) -> Result<AuReport> {
    let a_u = a_u_window(n, r, k_max, s, delta)?;
    let gap = gap_profile(&a_u, m);
    Ok(AuReport { a_u, gap })
}

/// Checks that a non-empty `⋂_{i<=r}(N - ik)` comes with a time `n` whose
/// progression `n, n + k, ..., n + rk` lies in `N`, found by direct scan.
/// Holds with the first such `n` as witness, or vacuously.
pub fn containment_check(n: &WindowSet, r: u64, k: u64) -> Result<FamilyVerdict> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let inter = progression_intersection(n, r, k);
    let scan = n.iter().find(|&a| {
        (1..=r).all(|i| {
            a.checked_add(i.saturating_mul(k))
                .is_some_and(|b| n.contains(b))
        })
    });
    Ok(match (inter.elements().first(), scan) {
        (None, None) => FamilyVerdict::holds(None).with_note("intersection empty"),
        (Some(&a), Some(b)) if a == b => FamilyVerdict::holds(Some(Witness::Element { value: a })),
        (Some(&a), _) => FamilyVerdict::fails(Witness::Element { value: a })
            .with_note("intersection element without a matching progression"),
        (None, Some(b)) => FamilyVerdict::fails(Witness::Element { value: b })
            .with_note("progression missed by the intersection"),
    })
}

/// If `A` is syndetic at gap bound `m`, so is `A + n` on the translated
/// window. Fails only if the gap conventions break shift invariance.
pub fn shifted_syndetic_pipeline(a: &WindowSet, n: u64, m: u64) -> FamilyVerdict {
    let before = gap_profile(a, m);
    if before.syndetic.is_fails() {
        return FamilyVerdict::holds(None).with_note("A itself is not syndetic at this bound");
    }
    let after = gap_profile(&a.shift(n), m);
    if after.syndetic.is_holds() {
        FamilyVerdict::holds(None)
    } else {
        let w = after.syndetic.witness.unwrap_or(Witness::Element { value: n });
        FamilyVerdict::fails(w).with_note(format!(
            "max gap {} before shift, {} after",
            before.max_gap, after.max_gap
        ))
    }
}

/// Observed `N(x, U) = {n < n_max : Tⁿx ∈ U}` per ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitHitData {
    /// Keyed by ball label (`ball0`, `ball1`, ...).
    pub hit_sets: BTreeMap<String, WindowSet>,
    pub n_max: u64,
}

pub fn orbit_hit_set(
    w: &WeightSpec,
    x: &TruncatedVector,
    balls: &[BallSpec],
    n_max: u64,
) -> Result<OrbitHitData> {
    if n_max == 0 {
        return Err(invalid("n_max must be positive"));
    }
    let orbit = shift_orbit(w, x, n_max as usize - 1)?;
    let mut hit_sets = BTreeMap::new();
    for (i, ball) in balls.iter().enumerate() {
        let hits = orbit
            .iter()
            .enumerate()
            .filter(|(_, y)| ball.contains(y))
            .map(|(n, _)| n as u64);
        hit_sets.insert(format!("ball{i}"), WindowSet::new(n_max, hits)?);
    }
    Ok(OrbitHitData { hit_sets, n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftlab::{NormKind, Side};

    #[test]
    fn multiples_of_three() {
        let n = WindowSet::arithmetic(0, 3, 600).unwrap();
        let a = a_u_window(&n, 2, 60, 30, 0.1).unwrap();
        assert_eq!(a, WindowSet::arithmetic(0, 3, 61).unwrap());
    }

    #[test]
    fn full_window_gives_every_k() {
        let n = WindowSet::full(200).unwrap();
        assert_eq!(a_u_window(&n, 3, 20, 10, 1.0).unwrap().len(), 21);
    }

    #[test]
    fn containment_witness() {
        let n = WindowSet::new(50, [4, 9, 14, 30]).unwrap();
        let v = containment_check(&n, 2, 5).unwrap();
        assert_eq!(v.witness, Some(Witness::Element { value: 4 }));
        assert!(containment_check(&n, 3, 5).unwrap().is_holds());
    }

    #[test]
    fn evens_shifted() {
        let evens = WindowSet::arithmetic(0, 2, 100).unwrap();
        assert!(shifted_syndetic_pipeline(&evens, 7, 2).is_holds());
    }

    #[test]
    fn unit_shift_reaches_e2_once() {
        let w = WeightSpec::constant(Side::Unilateral, 1.0).unwrap();
        let x = TruncatedVector::basis(Side::Unilateral, 5, 0, 10).unwrap();
        let c = TruncatedVector::basis(Side::Unilateral, 2, 0, 10).unwrap();
        let ball = BallSpec::new(c, 0.1, NormKind::Sup).unwrap();
        let data = orbit_hit_set(&w, &x, &[ball], 10).unwrap();
        assert_eq!(data.hit_sets["ball0"].elements(), &[3]);
    }
}
