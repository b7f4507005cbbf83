//! Technology parameter files.
//!
//! A parameter file is a single JSON document with two technology entries,
//! `electrical` and `hybrid`, whose fields mirror
//! [`TechnologyParams`]. Unknown keys are rejected and all values are SI.
//! Two optional bookkeeping keys are accepted at the top level: `version`
//! and `provenance` (a string-to-string map documenting each parameter).

use std::collections::BTreeMap;
use std::path::Path;

use clearfom_core::{LinkKind, TechnologyParams};
use serde::{Deserialize, Serialize};

use crate::FormatError;

/// The calibrated defaults shipped with the crate.
pub const DEFAULTS_JSON: &str = include_str!("../data/defaults.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
    pub electrical: TechnologyParams,
    pub hybrid: TechnologyParams,
}

impl ParamFile {
    pub fn validate(&self) -> Result<(), FormatError> {
        if self.electrical.kind != LinkKind::Electrical {
            return Err(FormatError::InvalidArgument("`electrical` entry must have kind \"electrical\"".into()));
        }
        if self.hybrid.kind != LinkKind::HybridPhotonicPlasmonic {
            return Err(FormatError::InvalidArgument(
                "`hybrid` entry must have kind \"hybrid_photonic_plasmonic\"".into(),
            ));
        }
        self.electrical.validate()?;
        self.hybrid.validate()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("parameter file serializes")
    }
}

pub fn parse_params(text: &str) -> Result<ParamFile, FormatError> {
    let file: ParamFile = serde_json::from_str(text)?;
    file.validate()?;
    Ok(file)
}

pub fn load_params(path: &Path) -> Result<ParamFile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let file: ParamFile =
        serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })?;
    file.validate()?;
    Ok(file)
}

pub fn defaults() -> ParamFile {
    parse_params(DEFAULTS_JSON).expect("shipped defaults are valid")
}
