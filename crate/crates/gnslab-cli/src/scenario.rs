//! Scenario ingestion: a single JSON format with an explicit schema version,
//! a kind tag, a seed, and a kind-specific parameter record. Parameter
//! records are validated by the runner for the given kind; everything that
//! fails before computation starts is an input error (exit 2).

use std::fmt;
use std::path::Path;

use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Metrics,
    Gns,
    Kadison,
    Chern,
    Gnsbundle,
    Chain,
    Ktheory,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Metrics => "metrics",
            Kind::Gns => "gns",
            Kind::Kadison => "kadison",
            Kind::Chern => "chern",
            Kind::Gnsbundle => "gnsbundle",
            Kind::Chain => "chain",
            Kind::Ktheory => "ktheory",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    /// Kind-specific record; parsed against the kind's schema by the runner.
    #[serde(default)]
    pub params: serde_json::Value,
}

pub fn load(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read scenario {}: {e}", path.display()))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| format!("scenario {} does not match the schema: {e}", path.display()))?;
    if scenario.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "scenario {} has schema_version {}, this build reads {}",
            path.display(),
            scenario.schema_version,
            SCHEMA_VERSION
        ));
    }
    Ok(scenario)
}
