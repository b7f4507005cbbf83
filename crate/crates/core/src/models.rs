//! Year- and length-dependent link technology models.
//!
//! Four model families feed the link-level CLEAR factors:
//!
//! * capability: Shannon capacity of the link, with an electrical bandwidth
//!   roll-off `1 / (1 + (L / L_c)^2)` or a photonic SNR that decays with
//!   propagation loss in dB/m;
//! * energy: Koomey-style halving of joules/bit, clamped at the Landauer
//!   bound `k_B T ln 2`;
//! * resistance: an experience curve `c_ref · (g^Δt)^(−b)` with an optional
//!   polynomial overhead term that makes cost rise again after an onset year;
//! * parallelism: a multi-core speed-up that saturates under a utilization
//!   (dark silicon) ceiling, applied to electrical links only.
//!
//! None of the model parameters are fixed here; the shipped calibration
//! lives in the `clearfom` crate's `defaults.json`.

use alloc::string::String;
use core::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fom::{compute_clear, AmountDim, ClearFactors, FomValue, HierarchyLevel, WeightVector};

/// Boltzmann constant in J/K (exact since the 2019 SI redefinition).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Minimum energy to erase one bit at `temperature` kelvin.
pub fn landauer_limit(temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    Ok(BOLTZMANN * temperature * LN_2)
}

/// Energy-per-bit halving law.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct KoomeyParams {
    /// J/bit at `year_ref`
    pub e_ref: f64,
    pub year_ref: f64,
    /// years per halving
    pub halving_period: f64,
    /// kelvin
    pub temperature: f64,
}

impl KoomeyParams {
    pub fn validate(&self) -> Result<()> {
        let floor = landauer_limit(self.temperature)?;
        if !(self.e_ref.is_finite() && self.e_ref > floor) {
            return Err(Error::InvalidParams("e_ref must exceed the Landauer limit"));
        }
        if !self.year_ref.is_finite() {
            return Err(Error::InvalidParams("energy year_ref must be finite"));
        }
        if !(self.halving_period.is_finite() && self.halving_period > 0.0) {
            return Err(Error::InvalidParams("halving_period must be > 0"));
        }
        Ok(())
    }
}

/// Joules per bit in `year`, never below `k_B T ln 2`.
pub fn energy_per_bit(year: f64, params: &KoomeyParams) -> Result<f64> {
    params.validate()?;
    if !year.is_finite() {
        return Err(Error::InvalidParams("year must be finite"));
    }
    let floor = landauer_limit(params.temperature)?;
    let scaled = params.e_ref * libm::exp2(-(year - params.year_ref) / params.halving_period);
    Ok(scaled.max(floor))
}

/// `bandwidth · log2(1 + snr)` in bits/second.
pub fn shannon_capacity(bandwidth_hz: f64, snr: f64) -> Result<f64> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz >= 0.0) {
        return Err(Error::NegativeInput { name: "bandwidth", value: bandwidth_hz });
    }
    if !(snr.is_finite() && snr >= 0.0) {
        return Err(Error::NegativeInput { name: "snr", value: snr });
    }
    Ok(bandwidth_hz * (libm::log1p(snr) / LN_2))
}

/// Unit cost along an experience curve, optionally with a late overhead term.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct ExperienceCurveParams {
    /// USD per unit at `year_ref`
    pub c_ref: f64,
    pub year_ref: f64,
    /// yearly growth factor of cumulative volume
    pub volume_growth_per_year: f64,
    pub learning_exponent: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub overhead_onset_year: Option<f64>,
    /// USD / year^overhead_power
    #[cfg_attr(feature = "serde", serde(default))]
    pub overhead_coeff: f64,
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub overhead_power: f64,
}

impl ExperienceCurveParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_ref.is_finite() && self.c_ref > 0.0) {
            return Err(Error::InvalidParams("c_ref must be > 0"));
        }
        if !self.year_ref.is_finite() {
            return Err(Error::InvalidParams("cost year_ref must be finite"));
        }
        if !(self.volume_growth_per_year.is_finite() && self.volume_growth_per_year > 1.0) {
            return Err(Error::InvalidParams("volume_growth_per_year must be > 1"));
        }
        if !(self.learning_exponent.is_finite() && self.learning_exponent >= 0.0) {
            return Err(Error::InvalidParams("learning_exponent must be >= 0"));
        }
        if let Some(onset) = self.overhead_onset_year {
            if !onset.is_finite() {
                return Err(Error::InvalidParams("overhead_onset_year must be finite"));
            }
            if !(self.overhead_coeff.is_finite() && self.overhead_coeff >= 0.0) {
                return Err(Error::InvalidParams("overhead_coeff must be >= 0"));
            }
            if !(self.overhead_power.is_finite() && self.overhead_power > 0.0) {
                return Err(Error::InvalidParams("overhead_power must be > 0"));
            }
        }
        Ok(())
    }
}

/// Multi-core scaling after `onset_year`, capped by the utilizable fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct ParallelismParams {
    pub onset_year: f64,
    pub core_doubling_period: f64,
    /// fraction of the work that scales with core count, in (0, 1]
    pub utilization_cap: f64,
}

impl ParallelismParams {
    pub fn validate(&self) -> Result<()> {
        if !self.onset_year.is_finite() {
            return Err(Error::InvalidParams("onset_year must be finite"));
        }
        if !(self.core_doubling_period.is_finite() && self.core_doubling_period > 0.0) {
            return Err(Error::InvalidParams("core_doubling_period must be > 0"));
        }
        if !(self.utilization_cap > 0.0 && self.utilization_cap <= 1.0) {
            return Err(Error::InvalidParams("utilization_cap must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Effective throughput multiplier from parallelism.
///
/// With `n = 2^((year − onset) / period)` cores and utilizable fraction `u`,
/// the factor is `1 / ((1 − u) + u / n)`: equal to 1 at onset, never above
/// `n`, non-decreasing, and saturating at `1 / (1 − u)` for `u < 1`.
pub fn parallelism_factor(year: f64, params: &ParallelismParams) -> Result<f64> {
    params.validate()?;
    if !year.is_finite() {
        return Err(Error::InvalidParams("year must be finite"));
    }
    if year <= params.onset_year {
        return Ok(1.0);
    }
    let inv_cores = libm::exp2(-(year - params.onset_year) / params.core_doubling_period);
    let u = params.utilization_cap;
    Ok(1.0 / ((1.0 - u) + u * inv_cores))
}

/// Bandwidth and SNR description of a link channel.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct ChannelSpec {
    /// Hz at `year_ref`
    pub b0: f64,
    pub year_ref: f64,
    pub bandwidth_growth_per_year: f64,
    /// linear SNR at zero length
    pub snr0: f64,
    /// metres; electrical bandwidth halves at this length
    pub rolloff_length: f64,
    /// photonic propagation loss
    pub attenuation_db_per_m: f64,
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.b0.is_finite() && self.b0 > 0.0) {
            return Err(Error::InvalidParams("b0 must be > 0"));
        }
        if !self.year_ref.is_finite() {
            return Err(Error::InvalidParams("channel year_ref must be finite"));
        }
        if !(self.bandwidth_growth_per_year.is_finite() && self.bandwidth_growth_per_year > 0.0) {
            return Err(Error::InvalidParams("bandwidth_growth_per_year must be > 0"));
        }
        if !(self.snr0.is_finite() && self.snr0 > 0.0) {
            return Err(Error::InvalidParams("snr0 must be > 0"));
        }
        if !(self.rolloff_length.is_finite() && self.rolloff_length > 0.0) {
            return Err(Error::InvalidParams("rolloff_length must be > 0"));
        }
        if !(self.attenuation_db_per_m.is_finite() && self.attenuation_db_per_m >= 0.0) {
            return Err(Error::InvalidParams("attenuation_db_per_m must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LinkKind {
    Electrical,
    HybridPhotonicPlasmonic,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::Electrical => "electrical",
            LinkKind::HybridPhotonicPlasmonic => "hybrid_photonic_plasmonic",
        }
    }
}

/// Complete parameter set for one link technology.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
pub struct TechnologyParams {
    pub label: String,
    pub kind: LinkKind,
    pub channel: ChannelSpec,
    pub energy: KoomeyParams,
    pub cost: ExperienceCurveParams,
    /// electrical links only
    #[cfg_attr(feature = "serde", serde(default))]
    pub parallelism: Option<ParallelismParams>,
    /// metres; the link footprint is `device_pitch × length`
    pub device_pitch: f64,
    /// s/m
    pub latency_per_length: f64,
    /// s
    pub latency_fixed: f64,
}

impl TechnologyParams {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.energy.validate()?;
        self.cost.validate()?;
        match (self.kind, &self.parallelism) {
            (LinkKind::HybridPhotonicPlasmonic, Some(_)) => {
                return Err(Error::InvalidParams("parallelism applies to electrical links only"))
            }
            (_, Some(p)) => p.validate()?,
            _ => {}
        }
        if !(self.device_pitch.is_finite() && self.device_pitch > 0.0) {
            return Err(Error::InvalidParams("device_pitch must be > 0"));
        }
        if !(self.latency_per_length.is_finite() && self.latency_per_length >= 0.0) {
            return Err(Error::InvalidParams("latency_per_length must be >= 0"));
        }
        if !(self.latency_fixed.is_finite() && self.latency_fixed >= 0.0) {
            return Err(Error::InvalidParams("latency_fixed must be >= 0"));
        }
        if self.latency_fixed == 0.0 && self.latency_per_length == 0.0 {
            return Err(Error::InvalidParams("latency must be positive"));
        }
        Ok(())
    }
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

fn check_length(length: f64) -> Result<f64> {
    if length.is_finite() && length > 0.0 {
        Ok(length)
    } else {
        Err(Error::NonPositiveLength(length))
    }
}

/// Delivered data rate of a link of `length` metres in `year`.
pub fn link_capability(tech: &TechnologyParams, length: f64, year: f64) -> Result<f64> {
    tech.validate()?;
    let length = check_length(length)?;
    if !year.is_finite() {
        return Err(Error::InvalidParams("year must be finite"));
    }
    let ch = &tech.channel;
    let bandwidth = ch.b0 * libm::pow(ch.bandwidth_growth_per_year, year - ch.year_ref);
    let capacity = match tech.kind {
        LinkKind::Electrical => {
            let knee = length / ch.rolloff_length;
            shannon_capacity(bandwidth / (1.0 + knee * knee), ch.snr0)?
        }
        LinkKind::HybridPhotonicPlasmonic => {
            let snr = ch.snr0 * libm::pow(10.0, -ch.attenuation_db_per_m * length / 10.0);
            shannon_capacity(bandwidth, snr)?
        }
    };
    match &tech.parallelism {
        Some(p) if tech.kind == LinkKind::Electrical => Ok(capacity * parallelism_factor(year, p)?),
        _ => Ok(capacity),
    }
}

/// Economic resistance (USD) of one link in `year`.
pub fn cost_resistance(tech: &TechnologyParams, year: f64) -> Result<f64> {
    let c = &tech.cost;
    c.validate()?;
    if !(year.is_finite() && year >= c.year_ref - 100.0) {
        return Err(Error::InvalidParams("cost year must be within 100 years after year_ref - 100"));
    }
    let learned = c.c_ref * libm::pow(c.volume_growth_per_year, -c.learning_exponent * (year - c.year_ref));
    let overhead = match c.overhead_onset_year {
        Some(onset) if year > onset => c.overhead_coeff * libm::pow(year - onset, c.overhead_power),
        _ => 0.0,
    };
    let total = learned + overhead;
    if total.is_finite() && total > 0.0 {
        Ok(total)
    } else {
        Err(Error::InvalidParams("cost model left the positive finite range"))
    }
}

/// The five link-level CLEAR factors for `tech` at (`length`, `year`).
pub fn link_factors(tech: &TechnologyParams, length: f64, year: f64) -> Result<ClearFactors> {
    Ok(ClearFactors {
        capability_bps: link_capability(tech, length, year)?,
        latency_s: tech.latency_fixed + tech.latency_per_length * length,
        energy_j_per_bit: energy_per_bit(year, &tech.energy)?,
        amount_value: tech.device_pitch * length,
        amount_dim: AmountDim::AreaM2,
        resistance_usd: cost_resistance(tech, year)?,
    })
}

/// Link-level CLEAR for `tech` at (`length`, `year`).
pub fn link_clear(tech: &TechnologyParams, length: f64, year: f64, weights: &WeightVector) -> Result<FomValue> {
    compute_clear(&link_factors(tech, length, year)?, weights, HierarchyLevel::Link)
}
