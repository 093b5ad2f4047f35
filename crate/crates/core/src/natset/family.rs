use serde::{Deserialize, Serialize};

use super::{
    cofinite_in_window, delta_seed_search, gap_profile, positive_density, pw_syndetic,
    thick_witness, WindowSet,
};
use crate::error::{Error, Result};
use crate::verdict::{FamilyVerdict, Witness};

/// A named finite-window membership test for a family of subsets of ℕ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyTest {
    /// All gaps (boundary gaps included) at most `max_gap`.
    Syndetic { max_gap: u64 },
    /// Contains the whole tail of the window from `cutoff` on.
    Cofinite {
        #[serde(default)]
        cutoff: Option<u64>,
    },
    Thick { length: u64 },
    PiecewiseSyndetic { gap: u64, length: u64 },
    PositiveDensity {
        s: u64,
        #[serde(default = "default_delta")]
        delta: f64,
    },
    /// Contains `B - B` for some seed `B` of the given size.
    DeltaSeed { seed_size: usize },
    Nonempty,
}

fn default_delta() -> f64 {
    0.05
}

impl FamilyTest {
    pub const NAMES: [&'static str; 7] = [
        "cofinite",
        "delta_seed",
        "nonempty",
        "piecewise_syndetic",
        "positive_density",
        "syndetic",
        "thick",
    ];

    /// Parses `{"name": ..., params}`; an unrecognized name is reported as
    /// [`Error::UnknownFamily`].
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let name = value
            .get("name")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::InvalidArgument("family test needs a `name`".into()))?;
        if !Self::NAMES.contains(&name) {
            return Err(Error::UnknownFamily(name.to_string()));
        }
        serde_json::from_value(value.clone()).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTest::Syndetic { .. } => "syndetic",
            FamilyTest::Cofinite { .. } => "cofinite",
            FamilyTest::Thick { .. } => "thick",
            FamilyTest::PiecewiseSyndetic { .. } => "piecewise_syndetic",
            FamilyTest::PositiveDensity { .. } => "positive_density",
            FamilyTest::DeltaSeed { .. } => "delta_seed",
            FamilyTest::Nonempty => "nonempty",
        }
    }

    pub fn apply(&self, a: &WindowSet) -> Result<FamilyVerdict> {
        match *self {
            FamilyTest::Syndetic { max_gap } => Ok(gap_profile(a, max_gap).syndetic),
            FamilyTest::Cofinite { cutoff } => Ok(cofinite_in_window(a, cutoff)),
            FamilyTest::Thick { length } => thick_witness(a, length),
            FamilyTest::PiecewiseSyndetic { gap, length } => pw_syndetic(a, gap, length),
            FamilyTest::PositiveDensity { s, delta } => positive_density(a, s, delta),
            FamilyTest::DeltaSeed { seed_size } => Ok(match delta_seed_search(a, seed_size) {
                Some(seed) => FamilyVerdict::holds(seed.last().map(|&v| Witness::Element { value: v }))
                    .with_note(format!("seed {seed:?}")),
                None => FamilyVerdict::fails(Witness::Element {
                    value: seed_size as u64,
                })
                .with_note("no seed of this size found"),
            }),
            FamilyTest::Nonempty => Ok(match a.elements().first() {
                Some(&v) => FamilyVerdict::holds(Some(Witness::Element { value: v })),
                None => FamilyVerdict::fails(Witness::Element { value: a.start() }),
            }),
        }
    }
}
