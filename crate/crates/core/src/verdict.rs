//! Windowed verdicts.
//!
//! Every set-family test in this crate observes a finite window, so a
//! verdict never claims more than "holds on the window" or "fails on the
//! window". A failing verdict always carries a witness.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    HoldsOnWindow,
    FailsOnWindow,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A single integer, e.g. the start of a run or a witnessing time.
    Element { value: u64 },
    /// A closed interval `[start, end]` of integers.
    Interval { start: u64, end: u64 },
    /// An element too large for machine integers (decimal string).
    BigElement { value: String },
    /// A closed big-integer interval (decimal strings).
    BigInterval { start: String, end: String },
    /// Index into a caller-supplied list.
    Member { index: usize },
}

impl Witness {
    pub fn big_element(v: &BigUint) -> Self {
        Witness::BigElement {
            value: v.to_str_radix(10),
        }
    }

    pub fn big_interval(start: &BigUint, end: &BigUint) -> Self {
        Witness::BigInterval {
            start: start.to_str_radix(10),
            end: end.to_str_radix(10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FamilyVerdict {
    pub fn holds(witness: Option<Witness>) -> Self {
        FamilyVerdict {
            verdict: Outcome::HoldsOnWindow,
            witness,
            note: None,
        }
    }

    pub fn fails(witness: Witness) -> Self {
        FamilyVerdict {
            verdict: Outcome::FailsOnWindow,
            witness: Some(witness),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Outcome::HoldsOnWindow
    }

    pub fn is_fails(&self) -> bool {
        !self.is_holds()
    }
}

impl fmt::Display for FamilyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.is_holds() {
            "holds-on-window"
        } else {
            "fails-on-window"
        };
        write!(f, "{tag}")?;
        if let Some(w) = &self.witness {
            write!(f, " ({w:?})")?;
        }
        Ok(())
    }
}
