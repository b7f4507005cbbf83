//! Context-driven weighting: maps a runtime operating context onto CLEAR
//! exponents and picks the best technology option under them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fom::{rank_options, ClearFactors, FomValue, HierarchyLevel, WeightVector};

/// Runtime state of the chip or subsystem, each entry in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct OperatingContext {
    pub battery_fraction: f64,
    /// accepted but not used by the affine policy
    pub load_fraction: f64,
    pub footprint_pressure: f64,
    pub latency_sensitivity: f64,
}

impl Default for OperatingContext {
    /// Full battery, no stimuli.
    fn default() -> Self {
        OperatingContext {
            battery_fraction: 1.0,
            load_fraction: 0.0,
            footprint_pressure: 0.0,
            latency_sensitivity: 0.0,
        }
    }
}

impl OperatingContext {
    pub fn validate(&self) -> Result<()> {
        let fields = [self.battery_fraction, self.load_fraction, self.footprint_pressure, self.latency_sensitivity];
        if fields.iter().all(|v| (0.0..=1.0).contains(v)) {
            Ok(())
        } else {
            Err(Error::InvalidContext("all context fields must lie in [0, 1]"))
        }
    }
}

/// Affine map from context to exponents on top of `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(deny_unknown_fields))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct WeightPolicy {
    pub base: WeightVector,
    pub energy_gain: f64,
    pub amount_gain: f64,
    pub latency_gain: f64,
}

impl Default for WeightPolicy {
    fn default() -> Self {
        WeightPolicy { base: WeightVector::ONES, energy_gain: 1.0, amount_gain: 1.0, latency_gain: 1.0 }
    }
}

impl WeightPolicy {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for g in [self.energy_gain, self.amount_gain, self.latency_gain] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidContext("policy gains must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

/// An empty battery raises the energy exponent, footprint pressure the
/// amount exponent and latency sensitivity the latency exponent.
pub fn weights_from_context(ctx: &OperatingContext, policy: &WeightPolicy) -> Result<WeightVector> {
    ctx.validate()?;
    policy.validate()?;
    let base = policy.base;
    Ok(WeightVector {
        energy: base.energy + policy.energy_gain * (1.0 - ctx.battery_fraction),
        amount: base.amount + policy.amount_gain * ctx.footprint_pressure,
        latency: base.latency + policy.latency_gain * ctx.latency_sensitivity,
        ..base
    })
}

/// Outcome of a selection: the winner, the weights used and every option's
/// weighted value in rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub label: String,
    pub value: FomValue,
    pub weights: WeightVector,
    pub trace: Vec<(String, FomValue)>,
}

pub fn select_technology<S: AsRef<str>>(
    options: &[(S, ClearFactors)],
    ctx: &OperatingContext,
    policy: &WeightPolicy,
    level: HierarchyLevel,
) -> Result<Selection> {
    if options.is_empty() {
        return Err(Error::EmptyOptionSet);
    }
    let weights = weights_from_context(ctx, policy)?;
    let trace = rank_options(options, &weights, level)?;
    let (label, value) = trace[0].clone();
    Ok(Selection { label, value, weights, trace })
}
