use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signaling::db_to_linear;

pub const DEFAULT_TARGET_BER: f64 = 0.0128;
pub const DEFAULT_BITS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceType {
    /// One bright coherent beam carrying both strings.
    Coherent,
    /// Two amplitude-squeezed beams mixed into an EPR pair.
    EprSqueezed,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case", deny_unknown_fields)]
pub enum EveStrategy {
    #[default]
    None,
    /// Measure one randomly chosen quadrature and re-send.
    Guess,
    /// Split 50:50, measure both quadratures and re-send.
    Simultaneous,
    /// Tap off `fraction` of the light and measure both quadratures on it.
    Tap { fraction: f64 },
}

impl EveStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            EveStrategy::None => "none",
            EveStrategy::Guess => "guess",
            EveStrategy::Simultaneous => "simultaneous",
            EveStrategy::Tap { .. } => "tap",
        }
    }
}

impl fmt::Display for EveStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EveStrategy::Tap { fraction } => write!(f, "tap({fraction})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Where Eve sits. Only the position right after Alice is modeled: she
/// intercepts before any channel loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvePosition {
    #[default]
    NearAlice,
}

/// One experiment. Serialized as a TOML document with these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub source: SourceType,
    /// Noise suppression of the squeezed sources, `V+ = 10^(-dB/10)`.
    #[serde(default)]
    pub squeezing_db: f64,
    #[serde(default)]
    pub loss: f64,
    #[serde(default)]
    pub eve: EveStrategy,
    #[serde(default)]
    pub eve_position: EvePosition,
    #[serde(default = "default_target")]
    pub target_bob_ber: f64,
    #[serde(default = "default_bits")]
    pub n_bits: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_target() -> f64 {
    DEFAULT_TARGET_BER
}

fn default_bits() -> u64 {
    DEFAULT_BITS
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    /// The offending field, when the error is a range violation.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            ScenarioError::Field { field, .. } => Some(field),
            _ => None,
        }
    }
}

fn field_err(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        field,
        reason: reason.into(),
    }
}

impl Scenario {
    pub fn coherent() -> Self {
        Scenario {
            source: SourceType::Coherent,
            squeezing_db: 0.0,
            loss: 0.0,
            eve: EveStrategy::None,
            eve_position: EvePosition::NearAlice,
            target_bob_ber: DEFAULT_TARGET_BER,
            n_bits: DEFAULT_BITS,
            seed: 0,
        }
    }

    pub fn epr(squeezing_db: f64) -> Self {
        Scenario {
            source: SourceType::EprSqueezed,
            squeezing_db,
            ..Self::coherent()
        }
    }

    pub fn with_loss(mut self, loss: f64) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_eve(mut self, eve: EveStrategy) -> Self {
        self.eve = eve;
        self
    }

    pub fn with_target(mut self, target_bob_ber: f64) -> Self {
        self.target_bob_ber = target_bob_ber;
        self
    }

    pub fn with_bits(mut self, n_bits: u64) -> Self {
        self.n_bits = n_bits;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Noise floor of Alice's data quadratures (QNL = 1).
    pub fn source_noise(&self) -> f64 {
        match self.source {
            SourceType::Coherent => 1.0,
            SourceType::EprSqueezed => db_to_linear(-self.squeezing_db),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.squeezing_db.is_finite() && self.squeezing_db >= 0.0) {
            return Err(field_err(
                "squeezing_db",
                format!("must be >= 0, got {}", self.squeezing_db),
            ));
        }
        if self.source == SourceType::Coherent && self.squeezing_db != 0.0 {
            return Err(field_err("squeezing_db", "must be 0 for a coherent source"));
        }
        if !(self.loss >= 0.0 && self.loss < 1.0) {
            return Err(field_err(
                "loss",
                format!("must lie in [0, 1), got {}", self.loss),
            ));
        }
        if let EveStrategy::Tap { fraction } = self.eve {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(field_err(
                    "eve.fraction",
                    format!("must lie in (0, 1), got {fraction}"),
                ));
            }
        }
        if !(self.target_bob_ber > 0.0 && self.target_bob_ber < 0.5) {
            return Err(field_err(
                "target_bob_ber",
                format!("must lie in (0, 0.5), got {}", self.target_bob_ber),
            ));
        }
        if self.n_bits == 0 {
            return Err(field_err("n_bits", "must be at least 1"));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }
}
