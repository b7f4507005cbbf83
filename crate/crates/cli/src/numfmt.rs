//! Shortest round-trip decimal formatting for CSV and reports.

/// Formats `x` with the fewest digits that parse back to the same `f64`.
/// Plain notation in `[1e-4, 1e15)`, exponent notation elsewhere.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
