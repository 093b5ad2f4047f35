use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::{knr_runs, RunSet, WindowSet};
use crate::error::{invalid, Result};

/// JSON description of a window set: either the plain form
/// `{"horizon": n, "elements": [...]}` or a generator tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SetSpec {
    Plain(WindowSet),
    Generated(Generator),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    Explicit {
        horizon: u64,
        elements: Vec<u64>,
    },
    /// `start, start + step, ...` below the horizon.
    Ap { start: u64, step: u64, horizon: u64 },
    /// Each integer of the window independently with probability `density`.
    Random { density: f64, seed: u64, horizon: u64 },
    /// `{1, base, base^2, ...}` below the horizon.
    Geometric { base: u64, horizon: u64 },
    /// The thick family `2^{6^n} - r`, `1 <= n <= nmax`, `0 <= r <= n`.
    Knr { nmax: u32 },
}

impl<'de> Deserialize<'de> for SetSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        let tagged = value.as_object().is_some_and(|m| m.contains_key("kind"));
        if tagged {
            Generator::deserialize(value)
                .map(SetSpec::Generated)
                .map_err(D::Error::custom)
        } else {
            WindowSet::deserialize(value)
                .map(SetSpec::Plain)
                .map_err(D::Error::custom)
        }
    }
}

/// Names of the set generators, sorted.
pub const GENERATOR_NAMES: [&str; 5] = ["ap", "explicit", "geometric", "knr", "random"];

impl SetSpec {
    /// Machine-integer materialization.
    pub fn to_window(&self) -> Result<WindowSet> {
        match self {
            SetSpec::Plain(w) => Ok(w.clone()),
            SetSpec::Generated(g) => g.to_window(),
        }
    }

    /// Exact run-length materialization; works for every generator.
    pub fn to_runs(&self) -> Result<RunSet> {
        match self {
            SetSpec::Generated(Generator::Knr { nmax }) => knr_runs(*nmax),
            other => Ok(RunSet::from(&other.to_window()?)),
        }
    }

    /// True when the set is only representable exactly as runs.
    pub fn needs_big_integers(&self) -> bool {
        matches!(self, SetSpec::Generated(Generator::Knr { nmax }) if *nmax >= 3)
    }
}

impl Generator {
    pub fn to_window(&self) -> Result<WindowSet> {
        match self {
            Generator::Explicit { horizon, elements } => {
                WindowSet::new(*horizon, elements.iter().copied())
            }
            Generator::Ap {
                start,
                step,
                horizon,
            } => WindowSet::arithmetic(*start, *step, *horizon),
            Generator::Random {
                density,
                seed,
                horizon,
            } => random_window(*horizon, *density, *seed),
            Generator::Geometric { base, horizon } => {
                if *base < 2 {
                    return Err(invalid("geometric base must be at least 2"));
                }
                let elems = std::iter::successors(Some(1u64), |&x| x.checked_mul(*base))
                    .take_while(|&x| x < *horizon);
                WindowSet::new(*horizon, elems)
            }
            Generator::Knr { nmax } => knr_runs(*nmax)?.to_window(),
        }
    }
}

/// Bernoulli(`density`) subset of `[0, horizon)` from a seeded ChaCha stream.
pub fn random_window(horizon: u64, density: f64, seed: u64) -> Result<WindowSet> {
    if !(0.0..=1.0).contains(&density) {
        return Err(invalid("density must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = (0..horizon).filter(|_| rng.gen::<f64>() < density).collect();
    Ok(WindowSet::from_sorted(0, horizon.max(1), elems))
}
