//! Exact run-length sets with big-integer endpoints.
//!
//! Needed for the thick family `k_{n,r} = 2^{6^n} - r`, whose elements
//! outgrow machine integers from `n = 3` on.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::WindowSet;
use crate::error::{invalid, Error, Result};
use crate::verdict::{FamilyVerdict, Witness};

/// Union of disjoint, non-adjacent closed runs inside `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSet {
    horizon: BigUint,
    runs: Vec<(BigUint, BigUint)>,
}

impl RunSet {
    /// Runs may be given in any order; overlapping or touching runs merge.
    pub fn from_runs(horizon: BigUint, mut runs: Vec<(BigUint, BigUint)>) -> Result<Self> {
        if horizon.is_zero() {
            return Err(invalid("horizon must be positive"));
        }
        if let Some((a, b)) = runs.iter().find(|(a, b)| a > b || b >= &horizon) {
            return Err(invalid(format!("run [{a}, {b}] is empty or leaves the window")));
        }
        runs.sort();
        let mut merged: Vec<(BigUint, BigUint)> = Vec::with_capacity(runs.len());
        for (a, b) in runs {
            match merged.last_mut() {
                Some((_, last)) if a <= &*last + 1u32 => {
                    if b > *last {
                        *last = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        Ok(RunSet {
            horizon,
            runs: merged,
        })
    }

    pub fn horizon(&self) -> &BigUint {
        &self.horizon
    }

    pub fn runs(&self) -> &[(BigUint, BigUint)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        let idx = self.runs.partition_point(|(_, b)| b < x);
        self.runs.get(idx).is_some_and(|(a, _)| a <= x)
    }

    /// Number of elements.
    pub fn cardinality(&self) -> BigUint {
        self.runs.iter().map(|(a, b)| b - a + 1u32).sum()
    }

    pub fn complement(&self) -> RunSet {
        let mut out = Vec::with_capacity(self.runs.len() + 1);
        let mut cursor = BigUint::zero();
        for (a, b) in &self.runs {
            if a > &cursor {
                out.push((cursor.clone(), a - 1u32));
            }
            cursor = b + 1u32;
        }
        if cursor < self.horizon {
            out.push((cursor, &self.horizon - 1u32));
        }
        RunSet {
            horizon: self.horizon.clone(),
            runs: out,
        }
    }

    /// Removes a single point, splitting its run if needed.
    pub fn remove(&mut self, x: &BigUint) {
        let idx = self.runs.partition_point(|(_, b)| b < x);
        let Some((a, b)) = self.runs.get(idx).cloned() else {
            return;
        };
        if &a > x {
            return;
        }
        let mut replacement = Vec::with_capacity(2);
        if &a < x {
            replacement.push((a, x - 1u32));
        }
        if &b > x {
            replacement.push((x + 1u32, b));
        }
        self.runs.splice(idx..=idx, replacement);
    }

    pub fn is_disjoint(&self, other: &RunSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let (a1, b1) = &self.runs[i];
            let (a2, b2) = &other.runs[j];
            if b1 < a2 {
                i += 1;
            } else if b2 < a1 {
                j += 1;
            } else {
                return false;
            }
        }
        true
    }

    /// Same conventions as [`super::gap_profile`] on a window starting at 0.
    pub fn gap_profile(&self, bound: &BigUint) -> (BigUint, FamilyVerdict) {
        let last = &self.horizon - 1u32;
        let (Some(first), Some(final_run)) = (self.runs.first(), self.runs.last()) else {
            let v = FamilyVerdict::fails(Witness::big_interval(&BigUint::zero(), &last));
            return (self.horizon.clone(), v);
        };

        let mut best = first.0.clone();
        let mut missing = (!first.0.is_zero()).then(|| (BigUint::zero(), &first.0 - 1u32));
        for w in self.runs.windows(2) {
            let g = &w[1].0 - &w[0].1;
            if g > best {
                missing = Some((&w[0].1 + 1u32, &w[1].0 - 1u32));
                best = g;
            }
        }
        let tail = &last - &final_run.1;
        if tail > best {
            missing = Some((&final_run.1 + 1u32, last));
            best = tail;
        }

        let verdict = if &best <= bound {
            FamilyVerdict::holds(None)
        } else {
            match missing {
                Some((s, e)) => FamilyVerdict::fails(Witness::big_interval(&s, &e)),
                None => FamilyVerdict::fails(Witness::big_element(&BigUint::zero())),
            }
        };
        (best, verdict)
    }

    pub fn thick_witness(&self, length: u64) -> Result<FamilyVerdict> {
        if length == 0 {
            return Err(invalid("run length must be at least 1"));
        }
        let length_big = BigUint::from(length);
        if length_big >= self.horizon {
            return Err(Error::WindowTooSmall {
                needed: length,
                available: self.horizon.to_u64().unwrap_or(u64::MAX),
            });
        }
        if let Some((a, _)) = self
            .runs
            .iter()
            .find(|(a, b)| b - a + BigUint::one() >= length_big)
        {
            return Ok(FamilyVerdict::holds(Some(Witness::big_element(a))));
        }
        let longest = self.runs.iter().max_by(|(a1, b1), (a2, b2)| {
            (b1 - a1).cmp(&(b2 - a2)).then_with(|| a2.cmp(a1))
        });
        Ok(match longest {
            Some((a, b)) => FamilyVerdict::fails(Witness::big_interval(a, b)),
            None => FamilyVerdict::fails(Witness::big_element(&BigUint::zero()))
                .with_note("set is empty"),
        })
    }

    /// Converts to a machine-integer window set when the horizon fits.
    pub fn to_window(&self) -> Result<WindowSet> {
        let horizon = self
            .horizon
            .to_u64()
            .ok_or_else(|| Error::Unsupported("horizon exceeds u64".into()))?;
        let total: u64 = self
            .runs
            .iter()
            .map(|(a, b)| (b - a).to_u64().unwrap_or(u64::MAX).saturating_add(1))
            .fold(0u64, u64::saturating_add);
        if total > 50_000_000 {
            return Err(Error::Unsupported(format!(
                "{total} elements are too many to materialize"
            )));
        }
        let mut elems = Vec::with_capacity(total as usize);
        for (a, b) in &self.runs {
            let (a, b) = (a.to_u64().unwrap(), b.to_u64().unwrap());
            elems.extend(a..=b);
        }
        Ok(WindowSet::from_sorted(0, horizon, elems))
    }
}

impl From<&WindowSet> for RunSet {
    /// Runs of a window set; the window start is dropped (runs live on
    /// `[0, horizon)`).
    fn from(w: &WindowSet) -> Self {
        let mut runs: Vec<(BigUint, BigUint)> = Vec::new();
        let mut cur: Option<(u64, u64)> = None;
        for e in w.iter() {
            cur = match cur {
                Some((s, l)) if l + 1 == e => Some((s, e)),
                Some((s, l)) => {
                    runs.push((s.into(), l.into()));
                    Some((e, e))
                }
                None => Some((e, e)),
            };
        }
        if let Some((s, l)) = cur {
            runs.push((s.into(), l.into()));
        }
        RunSet {
            horizon: w.horizon().into(),
            runs,
        }
    }
}

/// `2^{6^n}` as a big integer.
pub(crate) fn tower(n: u32) -> BigUint {
    BigUint::one() << 6usize.pow(n)
}

/// The thick family `{2^{6^n} - r : 1 <= n <= nmax, 0 <= r <= n}` on the
/// window `[0, 2^{6^nmax} + 1)`.
pub fn knr_runs(nmax: u32) -> Result<RunSet> {
    if nmax == 0 || nmax > 4 {
        return Err(invalid("knr family supports 1 <= nmax <= 4"));
    }
    let runs = (1..=nmax)
        .map(|n| {
            let top = tower(n);
            (&top - n, top)
        })
        .collect();
    RunSet::from_runs(tower(nmax) + 1u32, runs)
}
