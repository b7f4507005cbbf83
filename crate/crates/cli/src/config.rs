//! JSON key-value documents for factors, weights, contexts, policies and
//! option lists.
//!
//! Field names: `capability_bps`, `latency_s`, `energy_j_per_bit`,
//! `amount_value`, `amount_dim` (`length_m` | `area_m2` | `volume_m3`),
//! `resistance_usd`; weights `wC`, `wL`, `wE`, `wA`, `wR` (missing ones
//! default to 1); Makimoto `mips`, `size_m3`, `cost_usd`, `power_w`;
//! context `battery_fraction`, `load_fraction`, `footprint_pressure`,
//! `latency_sensitivity`; policy `base`, `energy_gain`, `amount_gain`,
//! `latency_gain`.

use std::path::Path;

use clearfom_core::{ClearFactors, WeightVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::FormatError;

/// One labelled technology option in an option list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionEntry {
    pub label: String,
    pub factors: ClearFactors,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("config types serialize")
}

/// Parses `wC,wL,wE,wA,wR`.
pub fn parse_weights(s: &str) -> Result<WeightVector, FormatError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(FormatError::InvalidArgument(format!("expected 5 comma-separated weights, got {:?}", s)));
    }
    let mut w = [0.0; 5];
    for (slot, part) in w.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| FormatError::InvalidArgument(format!("weight {part:?} is not a number")))?;
    }
    Ok(WeightVector::new(w[0], w[1], w[2], w[3], w[4])?)
}
