//! Historical technology records, log-linear trend fits and deviation years.
//!
//! Fits are ordinary least squares on `(year, log2 value)` so the slope is
//! directly "doublings per year" and the doubling time is `12 / slope`
//! months.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::fom::{
    compute_clear, compute_makimoto, system_capability, AmountDim, ClearFactors, HierarchyLevel, MakimotoFactors,
    SystemSpec, WeightVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TechClass {
    VacuumTube,
    Transistor,
    Mos,
    Multicore,
    Photonic,
}

impl TechClass {
    pub const ALL: [TechClass; 5] =
        [TechClass::VacuumTube, TechClass::Transistor, TechClass::Mos, TechClass::Multicore, TechClass::Photonic];

    pub fn as_str(self) -> &'static str {
        match self {
            TechClass::VacuumTube => "vacuum_tube",
            TechClass::Transistor => "transistor",
            TechClass::Mos => "mos",
            TechClass::Multicore => "multicore",
            TechClass::Photonic => "photonic",
        }
    }
}

impl fmt::Display for TechClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TechClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TechClass::ALL.into_iter().find(|c| c.as_str() == s).ok_or(Error::InvalidParams("unknown tech_class"))
    }
}

/// One machine or component observation.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoricalRecord {
    /// fractional calendar year in [1900, 2100]
    pub year: f64,
    pub label: String,
    pub tech_class: TechClass,
    pub component_count: Option<u64>,
    pub mips: Option<f64>,
    pub size_m3: Option<f64>,
    pub power_w: Option<f64>,
    pub cost_usd: Option<f64>,
    pub instruction_length_bits: Option<f64>,
    /// explicit latency; when absent the per-instruction time is used
    pub latency_s: Option<f64>,
}

impl HistoricalRecord {
    pub fn new(year: f64, label: impl Into<String>, tech_class: TechClass) -> Self {
        HistoricalRecord {
            year,
            label: label.into(),
            tech_class,
            component_count: None,
            mips: None,
            size_m3: None,
            power_w: None,
            cost_usd: None,
            instruction_length_bits: None,
            latency_s: None,
        }
    }

    /// Checks the year window and positivity of every present field. On
    /// failure returns the offending field name.
    pub fn check(&self) -> core::result::Result<(), &'static str> {
        if !(self.year.is_finite() && (1900.0..=2100.0).contains(&self.year)) {
            return Err("year");
        }
        if self.component_count == Some(0) {
            return Err("component_count");
        }
        let optional = [
            ("mips", self.mips),
            ("size_m3", self.size_m3),
            ("power_w", self.power_w),
            ("cost_usd", self.cost_usd),
            ("instruction_length_bits", self.instruction_length_bits),
            ("latency_s", self.latency_s),
        ];
        for (name, value) in optional {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(name);
                }
            }
        }
        Ok(())
    }
}

/// Records sorted ascending by year (stable for equal years).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<HistoricalRecord>,
}

impl Dataset {
    pub fn new(mut records: Vec<HistoricalRecord>) -> Result<Self> {
        for (index, r) in records.iter().enumerate() {
            if r.check().is_err() {
                return Err(Error::InvalidRecord { index, reason: "field out of range" });
            }
        }
        records.sort_by(|a, b| a.year.total_cmp(&b.year));
        Ok(Dataset { records })
    }

    pub fn records(&self) -> &[HistoricalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn into_records(self) -> Vec<HistoricalRecord> {
        self.records
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FomKind {
    ComponentCount,
    Makimoto,
    Clear,
}

impl FromStr for FomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "component_count" => Ok(FomKind::ComponentCount),
            "makimoto" => Ok(FomKind::Makimoto),
            "clear" => Ok(FomKind::Clear),
            _ => Err(Error::InvalidParams("unknown figure of merit")),
        }
    }
}

/// `(year, value)` points plus how many records lacked the needed fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FomSeries {
    pub points: Vec<(f64, f64)>,
    pub skipped: usize,
}

/// System-level CLEAR factors for a historical machine.
///
/// Capability is MIPS × instruction length, latency the explicit column or
/// one instruction time `1 / (mips · 1e6)`, energy `power / capability`.
pub fn record_clear_factors(r: &HistoricalRecord) -> Option<ClearFactors> {
    let mips = r.mips?;
    let capability =
        system_capability(&SystemSpec { mips, instruction_length_bits: r.instruction_length_bits? }).ok()?;
    Some(ClearFactors {
        capability_bps: capability,
        latency_s: r.latency_s.unwrap_or(1.0 / (mips * 1e6)),
        energy_j_per_bit: r.power_w? / capability,
        amount_value: r.size_m3?,
        amount_dim: AmountDim::VolumeM3,
        resistance_usd: r.cost_usd?,
    })
}

fn record_value(r: &HistoricalRecord, kind: FomKind, weights: &WeightVector) -> Result<Option<f64>> {
    match kind {
        FomKind::ComponentCount => Ok(r.component_count.map(|c| c as f64)),
        FomKind::Makimoto => {
            let (Some(mips), Some(size_m3), Some(cost_usd), Some(power_w)) = (r.mips, r.size_m3, r.cost_usd, r.power_w)
            else {
                return Ok(None);
            };
            Ok(Some(compute_makimoto(&MakimotoFactors { mips, size_m3, cost_usd, power_w })?.value()))
        }
        FomKind::Clear => match record_clear_factors(r) {
            Some(f) => Ok(Some(compute_clear(&f, weights, HierarchyLevel::System)?.value())),
            None => Ok(None),
        },
    }
}

/// Per-record figure of merit; records missing required fields are skipped and counted.
pub fn fom_series(data: &Dataset, kind: FomKind, weights: &WeightVector) -> Result<FomSeries> {
    let mut points = Vec::with_capacity(data.len());
    let mut skipped = 0;
    for r in data.records() {
        match record_value(r, kind, weights)? {
            Some(v) => points.push((r.year, v)),
            None => skipped += 1,
        }
    }
    if points.is_empty() {
        return Err(Error::NoUsableRecords);
    }
    Ok(FomSeries { points, skipped })
}

/// Result of a log2-linear least squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendFit {
    pub slope_log2_per_year: f64,
    /// log2 value at year 0
    pub intercept_log2: f64,
    /// `12 / slope`; absent when the trend does not grow
    pub doubling_time_months: Option<f64>,
    pub r_squared: f64,
    pub n_points: usize,
    pub year_range: (f64, f64),
    mean_year: f64,
    mean_log2: f64,
}

impl TrendFit {
    /// Fitted value `2^(slope · year + intercept)`.
    pub fn extrapolate(&self, year: f64) -> f64 {
        libm::exp2(self.slope_log2_per_year * (year - self.mean_year) + self.mean_log2)
    }

    /// Builds a fit from a slope and an anchor point, e.g. a reference line.
    pub fn through(slope_log2_per_year: f64, year: f64, value: f64) -> Self {
        let log_v = libm::log2(value);
        TrendFit {
            slope_log2_per_year,
            intercept_log2: log_v - slope_log2_per_year * year,
            doubling_time_months: (slope_log2_per_year > 0.0).then(|| 12.0 / slope_log2_per_year),
            r_squared: 1.0,
            n_points: 1,
            year_range: (year, year),
            mean_year: year,
            mean_log2: log_v,
        }
    }
}

pub fn fit_trend(series: &[(f64, f64)]) -> Result<TrendFit> {
    if series.len() < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: series.len() });
    }
    for &(year, value) in series {
        if !year.is_finite() {
            return Err(Error::InvalidParams("series year must be finite"));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveFactor { name: "series value", value });
        }
    }
    let n = series.len() as f64;
    let logs: Vec<(f64, f64)> = series.iter().map(|&(x, v)| (x, libm::log2(v))).collect();
    let mean_year = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_log2 = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &logs {
        let (dx, dy) = (x - mean_year, y - mean_log2);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateYears);
    }
    let slope = sxy / sxx;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (mean_log2 + slope * (x - mean_year));
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    let (lo, hi) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    Ok(TrendFit {
        slope_log2_per_year: slope,
        intercept_log2: mean_log2 - slope * mean_year,
        doubling_time_months: (slope > 0.0).then(|| 12.0 / slope),
        r_squared,
        n_points: series.len(),
        year_range: (lo, hi),
        mean_year,
        mean_log2,
    })
}

/// Configuration and outcome of a deviation search against a reference
/// growth line anchored at the first point of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    /// doublings per year of the reference line; 1.0 is 2×/year
    pub reference_slope_log2_per_year: f64,
    pub deviation_year: Option<f64>,
    pub consecutive_threshold: usize,
    pub factor_threshold: f64,
}

impl Default for DeviationReport {
    fn default() -> Self {
        DeviationReport {
            reference_slope_log2_per_year: 1.0,
            deviation_year: None,
            consecutive_threshold: 3,
            factor_threshold: 2.0,
        }
    }
}

/// Finds the first run of `consecutive_threshold` points that sit more than
/// `factor_threshold` below the reference line; the deviation year is the
/// first point of that run.
pub fn detect_deviation(series: &[(f64, f64)], config: DeviationReport) -> Result<DeviationReport> {
    if !(config.factor_threshold.is_finite() && config.factor_threshold > 1.0) {
        return Err(Error::InvalidParams("factor_threshold must be > 1"));
    }
    if config.consecutive_threshold < 1 {
        return Err(Error::InvalidParams("consecutive_threshold must be >= 1"));
    }
    if !config.reference_slope_log2_per_year.is_finite() {
        return Err(Error::InvalidParams("reference slope must be finite"));
    }
    let needed = config.consecutive_threshold + 2;
    if series.len() < needed {
        return Err(Error::InsufficientPoints { needed, got: series.len() });
    }
    if series.windows(2).any(|w| w[1].0 < w[0].0) {
        return Err(Error::InvalidParams("series must be sorted by year"));
    }
    if let Some(&(_, value)) = series.iter().find(|p| !(p.1.is_finite() && p.1 > 0.0)) {
        return Err(Error::NonPositiveFactor { name: "series value", value });
    }

    let (t0, v0) = series[0];
    let log_v0 = libm::log2(v0);
    let threshold = libm::log2(config.factor_threshold);
    let mut run_start = None;
    let mut run_len = 0;
    for &(t, v) in series {
        // doublings the point lags behind the reference line
        let deficit = config.reference_slope_log2_per_year * (t - t0) - (libm::log2(v) - log_v0);
        if deficit > threshold * (1.0 + 1e-12) {
            run_start.get_or_insert(t);
            run_len += 1;
            if run_len >= config.consecutive_threshold {
                return Ok(DeviationReport { deviation_year: run_start, ..config });
            }
        } else {
            run_start = None;
            run_len = 0;
        }
    }
    Ok(DeviationReport { deviation_year: None, ..config })
}
