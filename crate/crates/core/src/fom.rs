//! CLEAR and Makimoto figures of merit.
//!
//! All factors are SI: bits/second, seconds, joules/bit, metres to the
//! power of the amount dimension, and US dollars. A [`FomValue`] remembers
//! the hierarchy level and a unit signature derived from the weights, and
//! refuses to be ordered against a value from another level or weighting.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{positive, Error, Result};

/// Hardware hierarchy at which a figure of merit is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HierarchyLevel {
    Device,
    Link,
    Network,
    System,
}

impl HierarchyLevel {
    pub const ALL: [HierarchyLevel; 4] =
        [HierarchyLevel::Device, HierarchyLevel::Link, HierarchyLevel::Network, HierarchyLevel::System];

    /// Amount dimension used at this level: devices reduce to a scaling
    /// length, links and networks occupy a 2D footprint, systems a volume.
    pub fn amount_dim(self) -> AmountDim {
        match self {
            HierarchyLevel::Device => AmountDim::LengthM,
            HierarchyLevel::Link | HierarchyLevel::Network => AmountDim::AreaM2,
            HierarchyLevel::System => AmountDim::VolumeM3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HierarchyLevel::Device => "device",
            HierarchyLevel::Link => "link",
            HierarchyLevel::Network => "network",
            HierarchyLevel::System => "system",
        }
    }
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HierarchyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HierarchyLevel::ALL.into_iter().find(|l| l.as_str() == s).ok_or(Error::InvalidParams("unknown hierarchy level"))
    }
}

/// Physical dimension of the amount factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AmountDim {
    #[cfg_attr(feature = "serde", serde(rename = "length_m"))]
    LengthM,
    #[cfg_attr(feature = "serde", serde(rename = "area_m2"))]
    AreaM2,
    #[cfg_attr(feature = "serde", serde(rename = "volume_m3"))]
    VolumeM3,
}

impl AmountDim {
    pub fn as_str(self) -> &'static str {
        match self {
            AmountDim::LengthM => "length_m",
            AmountDim::AreaM2 => "area_m2",
            AmountDim::VolumeM3 => "volume_m3",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            AmountDim::LengthM => "m",
            AmountDim::AreaM2 => "m2",
            AmountDim::VolumeM3 => "m3",
        }
    }
}

impl fmt::Display for AmountDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AmountDim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "length_m" => Ok(AmountDim::LengthM),
            "area_m2" => Ok(AmountDim::AreaM2),
            "volume_m3" => Ok(AmountDim::VolumeM3),
            _ => Err(Error::InvalidParams("unknown amount dimension")),
        }
    }
}

/// The five CLEAR quantities for one technology option.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct ClearFactors {
    /// bits/second
    pub capability_bps: f64,
    /// seconds
    pub latency_s: f64,
    /// joules/bit
    pub energy_j_per_bit: f64,
    pub amount_value: f64,
    pub amount_dim: AmountDim,
    /// USD
    pub resistance_usd: f64,
}

impl ClearFactors {
    pub fn validate(&self) -> Result<()> {
        positive("capability_bps", self.capability_bps)?;
        positive("latency_s", self.latency_s)?;
        positive("energy_j_per_bit", self.energy_j_per_bit)?;
        positive("amount_value", self.amount_value)?;
        positive("resistance_usd", self.resistance_usd)?;
        Ok(())
    }
}

/// Weighting exponents, one per CLEAR factor. The default is all ones.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct WeightVector {
    #[cfg_attr(feature = "serde", serde(rename = "wC"))]
    pub capability: f64,
    #[cfg_attr(feature = "serde", serde(rename = "wL"))]
    pub latency: f64,
    #[cfg_attr(feature = "serde", serde(rename = "wE"))]
    pub energy: f64,
    #[cfg_attr(feature = "serde", serde(rename = "wA"))]
    pub amount: f64,
    #[cfg_attr(feature = "serde", serde(rename = "wR"))]
    pub resistance: f64,
}

impl Default for WeightVector {
    fn default() -> Self {
        WeightVector::ONES
    }
}

impl WeightVector {
    pub const ONES: WeightVector =
        WeightVector { capability: 1.0, latency: 1.0, energy: 1.0, amount: 1.0, resistance: 1.0 };

    pub fn new(capability: f64, latency: f64, energy: f64, amount: f64, resistance: f64) -> Result<Self> {
        let w = WeightVector { capability, latency, energy, amount, resistance };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidWeight { name, value });
            }
        }
        Ok(())
    }

    /// `(wC, wL, wE, wA, wR)` with their conventional names.
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("wC", self.capability),
            ("wL", self.latency),
            ("wE", self.energy),
            ("wA", self.amount),
            ("wR", self.resistance),
        ]
    }
}

/// A figure-of-merit value tagged with its level and units.
#[derive(Debug, Clone, PartialEq)]
pub struct FomValue {
    value: f64,
    level: HierarchyLevel,
    unit_signature: String,
}

impl FomValue {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn level(&self) -> HierarchyLevel {
        self.level
    }

    pub fn unit_signature(&self) -> &str {
        &self.unit_signature
    }

    /// Orders two values that share level and unit signature.
    pub fn try_cmp(&self, other: &FomValue) -> Result<Ordering> {
        if self.level != other.level || self.unit_signature != other.unit_signature {
            return Err(Error::IncomparableFom);
        }
        Ok(self.value.total_cmp(&other.value))
    }

    pub fn comparable_with(&self, other: &FomValue) -> bool {
        self.level == other.level && self.unit_signature == other.unit_signature
    }
}

impl fmt::Display for FomValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} [{}] ({})", self.value, self.unit_signature, self.level)
    }
}

fn clear_signature(dim: AmountDim, w: &WeightVector) -> String {
    format!(
        "bps^{}/(s^{}*J_per_bit^{}*{}^{}*USD^{})",
        w.capability,
        w.latency,
        w.energy,
        dim.unit(),
        w.amount,
        w.resistance
    )
}

fn finite_positive(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonFiniteResult(what))
    }
}

/// CLEAR = C^wC / (L^wL · E^wE · A^wA · R^wR) at the given level.
pub fn compute_clear(factors: &ClearFactors, weights: &WeightVector, level: HierarchyLevel) -> Result<FomValue> {
    factors.validate()?;
    weights.validate()?;
    let expected = level.amount_dim();
    if factors.amount_dim != expected {
        return Err(Error::DimensionMismatch { level, expected, found: factors.amount_dim });
    }
    let numerator = libm::pow(factors.capability_bps, weights.capability);
    let denominator = libm::pow(factors.latency_s, weights.latency)
        * libm::pow(factors.energy_j_per_bit, weights.energy)
        * libm::pow(factors.amount_value, weights.amount)
        * libm::pow(factors.resistance_usd, weights.resistance);
    let value = finite_positive(numerator / denominator, "CLEAR value")?;
    Ok(FomValue { value, level, unit_signature: clear_signature(factors.amount_dim, weights) })
}

/// Inputs to Makimoto's figure of merit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct MakimotoFactors {
    /// million instructions per second
    pub mips: f64,
    pub size_m3: f64,
    pub cost_usd: f64,
    pub power_w: f64,
}

/// MIPS / (Size · Cost · Power), always at system level.
pub fn compute_makimoto(factors: &MakimotoFactors) -> Result<FomValue> {
    let mips = positive("mips", factors.mips)?;
    let size = positive("size_m3", factors.size_m3)?;
    let cost = positive("cost_usd", factors.cost_usd)?;
    let power = positive("power_w", factors.power_w)?;
    let value = finite_positive(mips / (size * cost * power), "Makimoto value")?;
    Ok(FomValue { value, level: HierarchyLevel::System, unit_signature: "MIPS/(m3*USD*W)".to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct SystemSpec {
    pub mips: f64,
    pub instruction_length_bits: f64,
}

/// System data capacity in bits/second: MIPS × 1e6 × instruction length.
pub fn system_capability(spec: &SystemSpec) -> Result<f64> {
    let mips = positive("mips", spec.mips)?;
    let bits = positive("instruction_length_bits", spec.instruction_length_bits)?;
    finite_positive(mips * 1e6 * bits, "system capability")
}

/// Device-level CLEAR. The signal distance is the device length, so the
/// area collapses to the device scaling length.
pub fn device_clear(
    speed_bps: f64,
    response_time_s: f64,
    energy_j_per_bit: f64,
    scaling_length_m: f64,
    resistance_usd: f64,
    weights: &WeightVector,
) -> Result<FomValue> {
    let factors = ClearFactors {
        capability_bps: speed_bps,
        latency_s: response_time_s,
        energy_j_per_bit,
        amount_value: scaling_length_m,
        amount_dim: AmountDim::LengthM,
        resistance_usd,
    };
    compute_clear(&factors, weights, HierarchyLevel::Device)
}

/// Evaluates every option and sorts by descending CLEAR, ties broken by
/// ascending label.
pub fn rank_options<S: AsRef<str>>(
    options: &[(S, ClearFactors)],
    weights: &WeightVector,
    level: HierarchyLevel,
) -> Result<Vec<(String, FomValue)>> {
    if options.is_empty() {
        return Err(Error::EmptyOptionSet);
    }
    let mut ranked = options
        .iter()
        .map(|(label, f)| Ok((label.as_ref().to_string(), compute_clear(f, weights, level)?)))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|(la, a), (lb, b)| b.value.total_cmp(&a.value).then_with(|| la.cmp(lb)));
    Ok(ranked)
}
