//! Break-even length between two link technologies and the year × length
//! CLEAR surface.
//!
//! The crossing is searched on `ln(a / b)` over log-spaced lengths: a
//! pre-scan locates the smallest-length sign change, then bisection in
//! log-length narrows it until the bracket width relative to its midpoint
//! drops below `rel_tol`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fom::WeightVector;
use crate::models::{link_clear, TechnologyParams};

pub const DEFAULT_REL_TOL: f64 = 1e-3;
/// Minimum number of pre-scan points.
pub const MIN_SCAN_POINTS: usize = 8;
const EQUALITY_EPS: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Log-spaced length axis in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthRange {
    pub min_m: f64,
    pub max_m: f64,
    pub n_points: usize,
}

impl Default for LengthRange {
    fn default() -> Self {
        LengthRange { min_m: 1e-6, max_m: 1.0, n_points: 200 }
    }
}

impl LengthRange {
    pub fn new(min_m: f64, max_m: f64, n_points: usize) -> Result<Self> {
        let r = LengthRange { min_m, max_m, n_points };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_m.is_finite() && self.max_m.is_finite() && self.min_m > 0.0) {
            return Err(Error::InvalidRange("bounds must be positive and finite"));
        }
        if self.min_m >= self.max_m {
            return Err(Error::InvalidRange("min must be below max"));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidRange("need at least 2 points"));
        }
        Ok(())
    }

    /// The `n_points` lengths, endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        log_spaced(self.min_m, self.max_m, self.n_points)
    }
}

fn log_spaced(min: f64, max: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (libm::log(min), libm::log(max));
    (0..n)
        .map(|i| match i {
            0 => min,
            i if i == n - 1 => max,
            i => libm::exp(lo + (hi - lo) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// Which of the two compared technologies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn swap(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingResult {
    Crossing {
        length_m: f64,
    },
    /// No sign change in range; `dominant` wins everywhere.
    NoCrossing {
        dominant: Side,
    },
}

impl CrossingResult {
    pub fn length_m(&self) -> Option<f64> {
        match *self {
            CrossingResult::Crossing { length_m } => Some(length_m),
            CrossingResult::NoCrossing { .. } => None,
        }
    }
}

fn log_ratio<A, B>(eval_a: &A, eval_b: &B, length_m: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    let a = eval_a(length_m)?;
    let b = eval_b(length_m)?;
    for value in [a, b] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveEvaluation { length_m, value });
        }
    }
    Ok(libm::log(a) - libm::log(b))
}

/// Length at which `eval_a` and `eval_b` are equal, or the side that
/// dominates the whole range.
///
/// When several crossings exist the one at the smallest length is
/// returned. A scan point where `|ln(a/b)| < 1e-12` counts as a crossing at
/// that point, so identical evaluators cross at `range.min_m`.
pub fn break_even_length<A, B>(eval_a: A, eval_b: B, range: &LengthRange, rel_tol: f64) -> Result<CrossingResult>
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    range.validate()?;
    if !(rel_tol > 0.0 && rel_tol <= 0.1) {
        return Err(Error::InvalidRange("rel_tol must lie in (0, 0.1]"));
    }
    let scan = log_spaced(range.min_m, range.max_m, range.n_points.max(MIN_SCAN_POINTS));
    let mut prev: Option<(f64, f64)> = None;
    for &len in &scan {
        let g = log_ratio(&eval_a, &eval_b, len)?;
        if g.abs() < EQUALITY_EPS {
            return Ok(CrossingResult::Crossing { length_m: len });
        }
        if let Some((prev_len, prev_g)) = prev {
            if (prev_g < 0.0) != (g < 0.0) {
                let length_m = bisect(&eval_a, &eval_b, prev_len, prev_g, len, rel_tol)?;
                return Ok(CrossingResult::Crossing { length_m });
            }
        }
        prev = Some((len, g));
    }
    let (_, last_g) = prev.expect("scan has at least two points");
    let dominant = if last_g > 0.0 { Side::A } else { Side::B };
    Ok(CrossingResult::NoCrossing { dominant })
}

fn bisect<A, B>(eval_a: &A, eval_b: &B, mut lo: f64, lo_g: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    let lo_negative = lo_g < 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = libm::sqrt(lo * hi);
        if (hi - lo) / mid < rel_tol {
            return Ok(mid);
        }
        let g = log_ratio(eval_a, eval_b, mid)?;
        if g.abs() < EQUALITY_EPS {
            return Ok(mid);
        }
        if (g < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(libm::sqrt(lo * hi))
}

fn check_years(years: &[f64]) -> Result<()> {
    if years.is_empty() {
        return Err(Error::InvalidRange("year axis is empty"));
    }
    if years.iter().any(|y| !y.is_finite()) || years.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidRange("years must be finite and ascending"));
    }
    Ok(())
}

/// Per-year break-even length between the link-level CLEAR of `a` and `b`.
pub fn crossing_curve(
    a: &TechnologyParams,
    b: &TechnologyParams,
    years: &[f64],
    range: &LengthRange,
    weights: &WeightVector,
    rel_tol: f64,
) -> Result<Vec<(f64, CrossingResult)>> {
    check_years(years)?;
    years
        .iter()
        .map(|&year| {
            let eval_a = |len: f64| Ok(link_clear(a, len, year, weights)?.value());
            let eval_b = |len: f64| Ok(link_clear(b, len, year, weights)?.value());
            Ok((year, break_even_length(eval_a, eval_b, range, rel_tol)?))
        })
        .collect()
}

/// CLEAR of two technologies over a year × length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub label_a: String,
    pub label_b: String,
    pub years: Vec<f64>,
    pub lengths: Vec<f64>,
    /// rows follow `years`, columns follow `lengths`
    pub values_a: Vec<Vec<f64>>,
    pub values_b: Vec<Vec<f64>>,
    pub crossing_curve: Vec<(f64, CrossingResult)>,
}

impl SurfaceGrid {
    /// Checks axis/matrix shapes and positivity of every value.
    pub fn validate(&self) -> Result<()> {
        for m in [&self.values_a, &self.values_b] {
            if m.len() != self.years.len() || m.iter().any(|row| row.len() != self.lengths.len()) {
                return Err(Error::InvalidRange("matrix shape does not match axes"));
            }
            if m.iter().flatten().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::InvalidRange("surface values must be positive and finite"));
            }
        }
        Ok(())
    }
}

/// Evaluates `link_clear` for both technologies at every grid point and
/// attaches the per-year crossing curve.
pub fn surface(
    a: &TechnologyParams,
    b: &TechnologyParams,
    years: &[f64],
    range: &LengthRange,
    weights: &WeightVector,
    rel_tol: f64,
) -> Result<SurfaceGrid> {
    check_years(years)?;
    range.validate()?;
    let lengths = range.points();
    let fill = |tech: &TechnologyParams| -> Result<Vec<Vec<f64>>> {
        years.iter().map(|&y| lengths.iter().map(|&l| Ok(link_clear(tech, l, y, weights)?.value())).collect()).collect()
    };
    let grid = SurfaceGrid {
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        years: years.to_vec(),
        values_a: fill(a)?,
        values_b: fill(b)?,
        lengths,
        crossing_curve: crossing_curve(a, b, years, range, weights, rel_tol)?,
    };
    Ok(grid)
}
