//! Finite observations of subsets of the natural numbers.
//!
//! A [`WindowSet`] records which integers of the observation window
//! `[start, horizon)` belong to a set. All family tests (syndetic, thick,
//! piecewise syndetic, positive upper Banach density, ...) are evaluated on
//! the window only.

mod bigset;
mod family;
mod ops;
mod spec;

pub use bigset::{knr_runs, RunSet};
pub use family::FamilyTest;
pub use ops::{
    banach_profile, cofinite_in_window, delta_seed_search, difference_set, dual_meets,
    finite_sums, gap_profile, max_window_count, positive_density, pw_syndetic,
    stretch_intersection, thick_witness, BanachPoint, FiniteSums, GapProfile,
};
pub use spec::{random_window, Generator, SetSpec, GENERATOR_NAMES};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sorted, duplicate-free set of integers observed on `[start, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWindowSet", into = "RawWindowSet")]
pub struct WindowSet {
    start: u64,
    horizon: u64,
    elements: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindowSet {
    horizon: u64,
    elements: Vec<u64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    start: u64,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

impl TryFrom<RawWindowSet> for WindowSet {
    type Error = crate::Error;

    fn try_from(raw: RawWindowSet) -> Result<Self> {
        WindowSet::with_start(raw.start, raw.horizon, raw.elements)
    }
}

impl From<WindowSet> for RawWindowSet {
    fn from(w: WindowSet) -> Self {
        RawWindowSet {
            horizon: w.horizon,
            elements: w.elements,
            start: w.start,
        }
    }
}

impl WindowSet {
    /// Builds a set on `[0, horizon)`. Elements may arrive unsorted or
    /// duplicated; anything outside the window is rejected.
    pub fn new(horizon: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::with_start(0, horizon, elements)
    }

    pub fn with_start(
        start: u64,
        horizon: u64,
        elements: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(invalid("horizon must be positive"));
        }
        if start >= horizon {
            return Err(invalid(format!(
                "window start {start} must lie below horizon {horizon}"
            )));
        }
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&e| e < start || e >= horizon) {
            return Err(invalid(format!(
                "element {bad} outside window [{start}, {horizon})"
            )));
        }
        Ok(WindowSet {
            start,
            horizon,
            elements,
        })
    }

    /// Internal constructor for already sorted, in-range data.
    pub(crate) fn from_sorted(start: u64, horizon: u64, elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.iter().all(|&e| e >= start && e < horizon));
        WindowSet {
            start,
            horizon,
            elements,
        }
    }

    pub fn empty(horizon: u64) -> Result<Self> {
        Self::new(horizon, std::iter::empty())
    }

    pub fn full(horizon: u64) -> Result<Self> {
        Self::new(horizon, 0..horizon)
    }

    /// Arithmetic progression `start, start + step, ...` below `horizon`.
    pub fn arithmetic(first: u64, step: u64, horizon: u64) -> Result<Self> {
        if step == 0 {
            return Err(invalid("progression step must be positive"));
        }
        let elems = (0..)
            .map(|i: u64| first.saturating_add(i.saturating_mul(step)))
            .take_while(|&e| e < horizon);
        Self::new(horizon, elems)
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Number of integers in the observation window.
    pub fn window_len(&self) -> u64 {
        self.horizon - self.start
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    /// Complement within the observation window.
    pub fn complement(&self) -> WindowSet {
        let mut out = Vec::with_capacity((self.window_len() as usize).saturating_sub(self.len()));
        let mut it = self.elements.iter().peekable();
        for x in self.start..self.horizon {
            if it.peek() == Some(&&x) {
                it.next();
            } else {
                out.push(x);
            }
        }
        WindowSet::from_sorted(self.start, self.horizon, out)
    }

    /// Intersection; the result lives on the overlap of the two windows.
    pub fn intersection(&self, other: &WindowSet) -> WindowSet {
        let start = self.start.max(other.start);
        let horizon = self.horizon.min(other.horizon).max(start + 1);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.elements.len() && j < other.elements.len() {
            let (a, b) = (self.elements[i], other.elements[j]);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a >= start && a < horizon {
                        out.push(a);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        WindowSet::from_sorted(start, horizon, out)
    }

    /// Union; the result lives on the hull of the two windows.
    pub fn union(&self, other: &WindowSet) -> WindowSet {
        let start = self.start.min(other.start);
        let horizon = self.horizon.max(other.horizon);
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.elements.len() || j < other.elements.len() {
            let next = match (self.elements.get(i), other.elements.get(j)) {
                (Some(&a), Some(&b)) if a < b => {
                    i += 1;
                    a
                }
                (Some(&a), Some(&b)) if a > b => {
                    j += 1;
                    b
                }
                (Some(&a), Some(_)) => {
                    i += 1;
                    j += 1;
                    a
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            out.push(next);
        }
        WindowSet::from_sorted(start, horizon, out)
    }

    /// `A + n`, observed on the translated window `[start + n, horizon + n)`.
    pub fn shift(&self, n: u64) -> WindowSet {
        WindowSet::from_sorted(
            self.start + n,
            self.horizon + n,
            self.elements.iter().map(|&e| e + n).collect(),
        )
    }

    /// `A - n = {a - n : a in A, a >= n}` on `[0, horizon - n)`.
    pub fn shift_down(&self, n: u64) -> WindowSet {
        let horizon = self.horizon.saturating_sub(n).max(1);
        let start = self.start.saturating_sub(n).min(horizon - 1);
        let elems = self
            .elements
            .iter()
            .filter(|&&e| e >= n && e - n < horizon)
            .map(|&e| e - n)
            .collect();
        WindowSet::from_sorted(start, horizon, elems)
    }

    pub fn is_subset(&self, other: &WindowSet) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }
}
