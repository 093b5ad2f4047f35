//! Experiment configuration and its validation.

use std::fmt;

use dtrans_core::natset::{FamilyTest, SetSpec};
use dtrans_core::qk::SeparationConfig;
use dtrans_core::shiftlab::{BallSpec, DfConfig, TruncatedVector, WeightSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Families,
    Shift,
    Sobolev,
    Qk,
    Rhc,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Families => "families",
            Kind::Shift => "shift",
            Kind::Sobolev => "sobolev",
            Kind::Qk => "qk",
            Kind::Rhc => "rhc",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Directory for `report.<ext>`; reports go to stdout when absent.
    #[serde(default)]
    pub dir: Option<String>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json]
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            formats: default_formats(),
            dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub parameters: serde_json::Value,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesParams {
    pub set: SetSpec,
    pub tests: Vec<FamilyTest>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftParams {
    pub weights: WeightSpec,
    pub df: DfConfig,
    /// Also run the direct return-set route and compare.
    #[serde(default)]
    pub compare: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SobolevParams {
    pub n: u32,
    pub r: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QkParams {
    #[serde(default)]
    pub separation: SeparationConfig,
    /// Gap bound for the syndetic verdict on the hit set.
    #[serde(default = "two")]
    pub syndetic_bound: u64,
    /// Length for the thick verdict on the complement of the hit set.
    #[serde(default = "two")]
    pub thick_length: u64,
    /// Pairs drawn for the `2V₀ - V₀ ⊆ V` check around the centre of `U`.
    #[serde(default)]
    pub ball_samples: usize,
    #[serde(default = "tenth")]
    pub ball_radius: f64,
}

fn two() -> u64 {
    2
}

fn tenth() -> f64 {
    0.1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSource {
    pub weights: WeightSpec,
    pub x: TruncatedVector,
    pub ball: BallSpec,
    pub n_max: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhcParams {
    /// Return-time set given directly ...
    #[serde(default)]
    pub set: Option<SetSpec>,
    /// ... or observed along a weighted-shift orbit.
    #[serde(default)]
    pub orbit: Option<OrbitSource>,
    pub r: u64,
    pub k_max: u64,
    pub s: u64,
    pub delta: f64,
    #[serde(default = "two")]
    pub syndetic_bound: u64,
}

/// A rejected configuration: the JSON paths at fault and why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationError {
    pub fields: Vec<String>,
    pub message: String,
}

impl ValidationError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationError {
            fields: vec![field.into()],
            message: message.into(),
        }
    }
}

/// Dotted path of the offending field; `$` is the document root.
fn join(prefix: &str, path: &str) -> String {
    let root = path == "." || path == "?";
    match (prefix.is_empty(), root) {
        (true, true) => "$".to_string(),
        (false, true) => prefix.to_string(),
        (true, false) => path.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ValidationError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
        let path = e.path().to_string();
        ValidationError::new(join("", &path), e.into_inner().to_string())
    })?;
    de.end().map_err(|e| ValidationError::new("$", e.to_string()))?;
    Ok(cfg)
}

pub fn parse_params<T: DeserializeOwned>(value: &serde_json::Value) -> Result<T, ValidationError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        ValidationError::new(join("parameters", &path), e.into_inner().to_string())
    })
}
