use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::WindowSet;
use crate::error::{invalid, Error, Result};
use crate::verdict::{FamilyVerdict, Witness};

/// Largest gap of a window set together with the syndetic verdict at a
/// caller-supplied bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub max_gap: u64,
    /// Integers missing from the set inside the largest gap (absent when
    /// the largest gap has no missing integers, e.g. a full window).
    pub largest_gap: Option<(u64, u64)>,
    pub syndetic: FamilyVerdict,
}

/// Largest gap, counting the gap from the window start to the first
/// element and from the last element to `horizon - 1`.
///
/// Internal gaps are consecutive differences. An empty set reports the
/// window length.
pub fn gap_profile(a: &WindowSet, bound: u64) -> GapProfile {
    let (start, last) = (a.start(), a.horizon() - 1);
    let elems = a.elements();

    let (max_gap, missing) = match (elems.first(), elems.last()) {
        (None, _) | (_, None) => (a.window_len(), Some((start, last))),
        (Some(&lo), Some(&hi)) => {
            let mut best = (lo - start, (lo > start).then(|| (start, lo - 1)));
            for w in elems.windows(2) {
                let g = w[1] - w[0];
                if g > best.0 {
                    best = (g, (g > 1).then(|| (w[0] + 1, w[1] - 1)));
                }
            }
            let tail = last - hi;
            if tail > best.0 {
                best = (tail, Some((hi + 1, last)));
            }
            best
        }
    };

    let syndetic = if max_gap <= bound {
        FamilyVerdict::holds(None)
    } else {
        let witness = match missing {
            Some((s, e)) => Witness::Interval { start: s, end: e },
            None => Witness::Element { value: start },
        };
        FamilyVerdict::fails(witness)
    };

    GapProfile {
        max_gap,
        largest_gap: missing,
        syndetic,
    }
}

/// Maximal runs of consecutive integers as `(first, last)` pairs.
fn runs(a: &WindowSet) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &e in a.elements() {
        match out.last_mut() {
            Some((_, last)) if *last + 1 == e => *last = e,
            _ => out.push((e, e)),
        }
    }
    out
}

/// Does the set contain `length` consecutive integers?
pub fn thick_witness(a: &WindowSet, length: u64) -> Result<FamilyVerdict> {
    if length == 0 {
        return Err(invalid("run length must be at least 1"));
    }
    if length >= a.horizon() {
        return Err(Error::WindowTooSmall {
            needed: length,
            available: a.horizon(),
        });
    }
    let runs = runs(a);
    if let Some(&(first, _)) = runs.iter().find(|(s, e)| e - s + 1 >= length) {
        return Ok(FamilyVerdict::holds(Some(Witness::Element { value: first })));
    }
    let verdict = match runs.iter().max_by_key(|(s, e)| (e - s, std::cmp::Reverse(*s))) {
        Some(&(s, e)) => FamilyVerdict::fails(Witness::Interval { start: s, end: e })
            .with_note(format!("longest run has {} elements", e - s + 1)),
        None => FamilyVerdict::fails(Witness::Element { value: a.start() })
            .with_note("set is empty"),
    };
    Ok(verdict)
}

/// Is there an interval of `length` integers on which the set has all gaps
/// (boundary gaps included) at most `gap`?
pub fn pw_syndetic(a: &WindowSet, gap: u64, length: u64) -> Result<FamilyVerdict> {
    if gap == 0 || length == 0 {
        return Err(invalid("gap bound and interval length must be positive"));
    }
    if length > a.window_len() {
        return Err(Error::WindowTooSmall {
            needed: length,
            available: a.window_len(),
        });
    }
    let (start, last) = (a.start(), a.horizon() - 1);
    if length <= gap {
        return Ok(FamilyVerdict::holds(Some(Witness::Interval {
            start,
            end: start + length - 1,
        })));
    }

    // Maximal chains whose consecutive differences are at most `gap`; a
    // chain supports every interval inside [first - gap, last + gap].
    let elems = a.elements();
    let mut best_span = 0u64;
    let mut i = 0;
    while i < elems.len() {
        let mut j = i;
        while j + 1 < elems.len() && elems[j + 1] - elems[j] <= gap {
            j += 1;
        }
        let lo = elems[i].saturating_sub(gap).max(start);
        let hi = (elems[j] + gap).min(last);
        let span = hi - lo + 1;
        if span >= length {
            return Ok(FamilyVerdict::holds(Some(Witness::Interval {
                start: lo,
                end: lo + length - 1,
            })));
        }
        best_span = best_span.max(span);
        i = j + 1;
    }
    Ok(FamilyVerdict::fails(Witness::Element { value: best_span })
        .with_note("witness is the longest interval length supported by a chain"))
}

/// `max_k |A ∩ [k+1, k+s]|` over windows inside the observation window.
pub fn max_window_count(a: &WindowSet, s: u64) -> (usize, u64) {
    let elems = a.elements();
    let mut best = (0usize, a.start());
    let mut j = 0;
    for i in 0..elems.len() {
        let hi = elems[i].saturating_add(s - 1);
        if j < i {
            j = i;
        }
        while j < elems.len() && elems[j] <= hi {
            j += 1;
        }
        if j - i > best.0 {
            // Windows reaching past the horizon slide back without losing
            // elements.
            let first = elems[i].min(a.horizon().saturating_sub(s)).max(a.start());
            best = (j - i, first);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanachPoint {
    pub s: u64,
    pub alpha: usize,
    pub ratio: f64,
}

/// Windowed surrogate of the upper Banach density profile, `s = 1..=s_max`.
pub fn banach_profile(a: &WindowSet, s_max: u64) -> Result<Vec<BanachPoint>> {
    if s_max == 0 || s_max >= a.window_len() {
        return Err(invalid(format!(
            "s_max must satisfy 1 <= s_max < {}",
            a.window_len()
        )));
    }
    Ok((1..=s_max)
        .map(|s| {
            let (alpha, _) = max_window_count(a, s);
            BanachPoint {
                s,
                alpha,
                ratio: alpha as f64 / s as f64,
            }
        })
        .collect())
}

/// Positive density at window length `s`: `alpha_s / s >= delta`.
pub fn positive_density(a: &WindowSet, s: u64, delta: f64) -> Result<FamilyVerdict> {
    if s == 0 || s > a.window_len() {
        return Err(invalid(format!(
            "density window {s} must lie in 1..={}",
            a.window_len()
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid("density threshold must lie in (0, 1]"));
    }
    let (alpha, first) = max_window_count(a, s);
    let densest = Witness::Interval {
        start: first,
        end: first + s - 1,
    };
    let ratio = alpha as f64 / s as f64;
    let v = if ratio >= delta {
        FamilyVerdict::holds(Some(densest))
    } else {
        FamilyVerdict::fails(densest)
    };
    Ok(v.with_note(format!("alpha_{s} = {alpha}, ratio {ratio}")))
}

/// Every integer from `cutoff` to the end of the window belongs to the set.
/// The default cutoff is the midpoint of the window.
pub fn cofinite_in_window(a: &WindowSet, cutoff: Option<u64>) -> FamilyVerdict {
    let cutoff = cutoff.unwrap_or(a.start() + a.window_len() / 2);
    let last = a.horizon() - 1;
    if cutoff > last {
        return FamilyVerdict::holds(Some(Witness::Element { value: cutoff }));
    }
    let missing = (cutoff..=last).rev().find(|&x| !a.contains(x));
    match missing {
        None => FamilyVerdict::holds(Some(Witness::Element { value: cutoff })),
        Some(x) => FamilyVerdict::fails(Witness::Element { value: x }),
    }
}

/// `{b - b' : b, b' in B, b > b'}` on the horizon of `B`.
pub fn difference_set(b: &WindowSet) -> WindowSet {
    let elems = b.elements();
    let mut diffs = BTreeSet::new();
    for (i, &hi) in elems.iter().enumerate() {
        for &lo in &elems[..i] {
            diffs.insert(hi - lo);
        }
    }
    WindowSet::from_sorted(0, b.horizon(), diffs.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSums {
    pub set: WindowSet,
    /// Some subset sum reached or exceeded the horizon and was dropped.
    pub clipped: bool,
}

/// Sums over non-empty subsets of the first `depth` generators.
pub fn finite_sums(generators: &[u64], depth: usize, horizon: u64) -> Result<FiniteSums> {
    if depth > generators.len() {
        return Err(invalid(format!(
            "depth {depth} exceeds the {} generators",
            generators.len()
        )));
    }
    if generators[..depth].contains(&0) {
        return Err(invalid("generators must be positive"));
    }
    if horizon == 0 {
        return Err(invalid("horizon must be positive"));
    }
    // Sums only grow, so anything at or past the horizon can be dropped
    // as soon as it appears.
    let mut sums: BTreeSet<u64> = BTreeSet::new();
    let mut clipped = false;
    for &g in &generators[..depth] {
        let mut fresh = Vec::with_capacity(sums.len() + 1);
        for s in std::iter::once(0).chain(sums.iter().copied()) {
            match s.checked_add(g) {
                Some(t) if t < horizon => fresh.push(t),
                _ => clipped = true,
            }
        }
        sums.extend(fresh);
    }
    Ok(FiniteSums {
        set: WindowSet::from_sorted(0, horizon, sums.into_iter().collect()),
        clipped,
    })
}

/// `{m : i*m in B for every 1 <= i <= r}` on `[0, ceil(horizon / r))`.
pub fn stretch_intersection(b: &WindowSet, r: u64) -> Result<WindowSet> {
    if r == 0 {
        return Err(invalid("stretch factor must be at least 1"));
    }
    let horizon = (b.horizon() - 1) / r + 1;
    let elems = b
        .iter()
        .take_while(|&m| m < horizon)
        .filter(|&m| (2..=r).all(|i| b.contains(i * m)))
        .collect();
    Ok(WindowSet::from_sorted(0, horizon, elems))
}

/// Does `a` meet every listed member? The first disjoint member is the
/// failure witness.
pub fn dual_meets(a: &WindowSet, members: &[WindowSet]) -> Result<FamilyVerdict> {
    if members.is_empty() {
        return Err(invalid("dual test needs at least one member"));
    }
    for (index, f) in members.iter().enumerate() {
        if a.intersection(f).is_empty() {
            return Ok(FamilyVerdict::fails(Witness::Member { index }));
        }
    }
    Ok(FamilyVerdict::holds(None))
}

/// Seed `B = {0 = b_0 < ... < b_{size-1}}` with `B - B ⊆ A` (positive
/// differences). Greedy first, then exhaustive depth-first search for seed
/// sizes up to 6.
pub fn delta_seed_search(a: &WindowSet, size: usize) -> Option<Vec<u64>> {
    if size <= 1 {
        return Some(vec![0; size]);
    }
    let positive: Vec<u64> = a.iter().filter(|&x| x > 0).collect();

    // Greedy: always take the smallest admissible next element.
    let mut seed = vec![0u64];
    for &c in &positive {
        if seed.len() == size {
            break;
        }
        if seed.iter().all(|&b| c > b && a.contains(c - b)) {
            seed.push(c);
        }
    }
    if seed.len() == size {
        return Some(seed);
    }
    if size > 6 {
        return None;
    }

    fn dfs(a: &WindowSet, seed: &mut Vec<u64>, candidates: &[u64], size: usize) -> bool {
        if seed.len() == size {
            return true;
        }
        for (i, &c) in candidates.iter().enumerate() {
            if candidates.len() - i < size - seed.len() {
                break;
            }
            // Remaining candidates must also differ from `c` by an element of A.
            let next: Vec<u64> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&d| a.contains(d - c))
                .collect();
            seed.push(c);
            if dfs(a, seed, &next, size) {
                return true;
            }
            seed.pop();
        }
        false
    }

    let mut seed = vec![0u64];
    dfs(a, &mut seed, &positive, size).then_some(seed)
}
