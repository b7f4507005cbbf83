//! Plain-text reports printed by the command line.

use std::fmt::Write as _;

use clearfom_core::{CrossingResult, Selection, Side, TrendFit, WeightVector};

use crate::numfmt::fmt_f64;

pub fn weights_line(w: &WeightVector) -> String {
    let parts: Vec<String> = w.named().iter().map(|(k, v)| format!("{k}={}", fmt_f64(*v))).collect();
    format!("weights {}", parts.join(" "))
}

/// One line per fact:
///
/// ```text
/// weights wC=1 wL=1 wE=3 wA=1 wR=1
/// rank 1 Y 6 bps^1/(...)
/// rank 2 X 2.5 bps^1/(...)
/// selected Y 6
/// ```
pub fn selection_report(sel: &Selection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", weights_line(&sel.weights));
    for (i, (label, value)) in sel.trace.iter().enumerate() {
        let _ = writeln!(out, "rank {} {} {} {}", i + 1, label, fmt_f64(value.value()), value.unit_signature());
    }
    let _ = writeln!(out, "selected {} {}", sel.label, fmt_f64(sel.value.value()));
    out
}

pub fn fit_report(fit: &TrendFit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n_points {}", fit.n_points);
    let _ = writeln!(out, "year_range {} {}", fmt_f64(fit.year_range.0), fmt_f64(fit.year_range.1));
    let _ = writeln!(out, "slope_log2_per_year {}", fmt_f64(fit.slope_log2_per_year));
    match fit.doubling_time_months {
        Some(m) => {
            let _ = writeln!(out, "doubling_time_months {}", fmt_f64(m));
        }
        None => out.push_str("doubling_time_months none\n"),
    }
    let _ = writeln!(out, "r_squared {}", fmt_f64(fit.r_squared));
    out
}

pub fn crossing_line(year: f64, r: &CrossingResult, label_a: &str, label_b: &str) -> String {
    match r {
        CrossingResult::Crossing { length_m } => {
            format!("year {} crossing_length_m {}", fmt_f64(year), fmt_f64(*length_m))
        }
        CrossingResult::NoCrossing { dominant } => {
            let label = match dominant {
                Side::A => label_a,
                Side::B => label_b,
            };
            format!("year {} no_crossing dominant {}", fmt_f64(year), label)
        }
    }
}
