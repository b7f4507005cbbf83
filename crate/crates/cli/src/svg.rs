//! Static SVG plots: trend scatter plots with a fitted line and two-technology
//! CLEAR surfaces with their crossing curve.
//!
//! Output is a standalone SVG 1.1 document. Coordinates are printed with two
//! decimals and nothing time-dependent is embedded, so identical inputs
//! produce identical bytes. Element conventions:
//!
//! * scatter markers are `<circle class="point">`
//! * the fitted trend is the only `<line>` element
//! * axes and ticks are `<path>` elements
//! * surface cells are `<rect>` elements grouped in `<g class="family-a">`
//!   and `<g class="family-b">` by winning technology, with opacity banded by
//!   the decade of the winner's CLEAR value
//! * the crossing curve is `<polyline class="crossing">`
//! * annotations are `<g class="annotation">` holding a marker and a label

use std::fmt::Write as _;
use std::io::Write;

use clearfom_core::{SurfaceGrid, TrendFit};

use crate::FormatError;

/// Default palette: series a (electrical) red, series b (hybrid) blue.
pub const COLOR_A: &str = "#d62728";
pub const COLOR_B: &str = "#1f77b4";
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 56.0;
const MARGIN_BOTTOM: f64 = 56.0;
const OPACITY_BANDS: usize = 5;

/// A labelled point drawn on top of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub annotations: Vec<Annotation>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            width_px: 800,
            height_px: 500,
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            log_x: false,
            log_y: false,
            annotations: Vec::new(),
        }
    }
}

impl PlotSpec {
    pub fn validate(&self) -> Result<(), FormatError> {
        if f64::from(self.width_px) <= MARGIN_LEFT + MARGIN_RIGHT
            || f64::from(self.height_px) <= MARGIN_TOP + MARGIN_BOTTOM
        {
            return Err(FormatError::InvalidPlot("width and height must leave room for the margins"));
        }
        if self.annotations.iter().any(|a| !(a.x.is_finite() && a.y.is_finite())) {
            return Err(FormatError::InvalidPlot("annotation coordinates must be finite"));
        }
        Ok(())
    }
}

/// What to draw.
#[derive(Debug, Clone, Copy)]
pub enum PlotData<'a> {
    /// `(x, y)` points and an optional log2-linear fit to overlay.
    Series { points: &'a [(f64, f64)], fit: Option<&'a TrendFit> },
    /// Lengths on x, years on y.
    Surface(&'a SurfaceGrid),
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: &[f64], log: bool) -> Result<Axis, FormatError> {
        if values.iter().any(|v| !v.is_finite() || (log && *v <= 0.0)) {
            return Err(FormatError::InvalidPlot("log axes need positive finite values"));
        }
        let t: Vec<f64> = values.iter().map(|&v| if log { v.log10() } else { v }).collect();
        let min = t.iter().copied().fold(f64::INFINITY, f64::min);
        let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if log {
            let (lo, hi) = (min.floor(), max.ceil());
            if hi > lo {
                (lo, hi)
            } else {
                (lo, lo + 1.0)
            }
        } else if max - min > 1e-9 * min.abs().max(max.abs()) {
            let pad = 0.05 * (max - min);
            (min - pad, max + pad)
        } else if min != 0.0 {
            let half = 0.01 * min.abs();
            (min - half, max + half)
        } else {
            (min - 1.0, max + 1.0)
        };
        Ok(Axis { lo, hi, log })
    }

    fn frac(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units with their labels.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (lo, hi) = (self.lo as i32, self.hi as i32);
            let stride = ((hi - lo) as usize).div_ceil(10).max(1);
            (lo..=hi).step_by(stride).map(|k| (10f64.powi(k), format!("1e{k}"))).collect()
        } else {
            let raw = (self.hi - self.lo) / 6.0;
            if !(raw.is_finite() && raw > 0.0) {
                return Vec::new();
            }
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
            let decimals = -step.log10().floor();
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last)
                .map(|k| {
                    let v = k as f64 * step;
                    let label = if decimals <= 6.0 && v.abs() < 1e15 {
                        format!("{v:.0$}", decimals.max(0.0) as usize)
                    } else if v == 0.0 {
                        "0".to_string()
                    } else {
                        format!("{v:.2e}")
                    };
                    (v, label)
                })
                .collect()
        }
    }
}

struct Frame {
    x: Axis,
    y: Axis,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn new(spec: &PlotSpec, x: Axis, y: Axis) -> Frame {
        Frame {
            x,
            y,
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            w: f64::from(spec.width_px) - MARGIN_LEFT - MARGIN_RIGHT,
            h: f64::from(spec.height_px) - MARGIN_TOP - MARGIN_BOTTOM,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + self.x.frac(x) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (1.0 - self.y.frac(y)) * self.h
    }

    fn bottom(&self) -> f64 {
        self.top + self.h
    }

    fn right(&self) -> f64 {
        self.left + self.w
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn header(out: &mut String, spec: &PlotSpec) {
    let (w, h) = (spec.width_px, spec.height_px);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    if !spec.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            f64::from(w) / 2.0,
            escape(&spec.title)
        );
    }
}

fn axes(out: &mut String, spec: &PlotSpec, f: &Frame) {
    let _ = writeln!(
        out,
        r#"<path class="axis" d="M{:.2},{:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        f.left,
        f.top,
        f.bottom(),
        f.right()
    );
    let mut d = String::new();
    let mut labels = String::new();
    for (v, label) in f.x.ticks() {
        let x = f.px(v);
        let _ = write!(d, "M{x:.2},{:.2} v5 ", f.bottom());
        let _ = writeln!(
            labels,
            r#"<text class="tick-label" x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            f.bottom() + 18.0,
            escape(&label)
        );
    }
    for (v, label) in f.y.ticks() {
        let y = f.py(v);
        let _ = write!(d, "M{:.2},{y:.2} h-5 ", f.left);
        let _ = writeln!(
            labels,
            r#"<text class="tick-label" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            f.left - 8.0,
            y + 4.0,
            escape(&label)
        );
    }
    let _ = writeln!(out, r#"<path class="tick" d="{}" stroke="black"/>"#, d.trim_end());
    out.push_str(&labels);
    if !spec.x_label.is_empty() {
        let _ = writeln!(
            out,
            r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            f.left + f.w / 2.0,
            f.bottom() + 42.0,
            escape(&spec.x_label)
        );
    }
    if !spec.y_label.is_empty() {
        let (x, y) = (18.0, f.top + f.h / 2.0);
        let _ = writeln!(
            out,
            r#"<text class="axis-label" x="{x:.2}" y="{y:.2}" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"#,
            escape(&spec.y_label)
        );
    }
}

fn annotations(out: &mut String, spec: &PlotSpec, f: &Frame) {
    for a in &spec.annotations {
        let (x, y) = (f.px(a.x), f.py(a.y));
        let (tx, anchor) = if x > f.left + 0.75 * f.w { (x - 8.0, "end") } else { (x + 8.0, "start") };
        let _ = writeln!(
            out,
            r#"<g class="annotation"><circle class="annotation-marker" cx="{x:.2}" cy="{y:.2}" r="5" fill="gold" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="{anchor}">{}</text></g>"#,
            y - 8.0,
            escape(&a.label)
        );
    }
}

fn series(out: &mut String, spec: &PlotSpec, points: &[(f64, f64)], fit: Option<&TrendFit>) -> Result<(), FormatError> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let fit_ends = fit.map(|t| {
        let (x0, x1) = t.year_range;
        ((x0, t.extrapolate(x0)), (x1, t.extrapolate(x1)))
    });
    if let Some(((x0, y0), (x1, y1))) = fit_ends {
        xs.extend([x0, x1]);
        ys.extend([y0, y1]);
    }
    xs.extend(spec.annotations.iter().map(|a| a.x));
    ys.extend(spec.annotations.iter().map(|a| a.y));
    let f = Frame::new(spec, Axis::fit(&xs, spec.log_x)?, Axis::fit(&ys, spec.log_y)?);
    axes(out, spec, &f);
    out.push_str("<g class=\"points\">\n");
    for &(x, y) in points {
        let _ =
            writeln!(out, r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3" fill="{COLOR_B}"/>"#, f.px(x), f.py(y));
    }
    out.push_str("</g>\n");
    if let Some(((x0, y0), (x1, y1))) = fit_ends {
        if spec.log_y && !spec.log_x {
            let _ = writeln!(
                out,
                r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{COLOR_A}" stroke-width="2"/>"#,
                f.px(x0),
                f.py(y0),
                f.px(x1),
                f.py(y1)
            );
        } else {
            // the exponential fit is curved on these axes
            let n = 64;
            let t = fit.expect("fit present");
            let pts: Vec<String> = (0..=n)
                .map(|i| {
                    let x = x0 + (x1 - x0) * i as f64 / n as f64;
                    format!("{:.2},{:.2}", f.px(x), f.py(t.extrapolate(x)))
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline class="fit" points="{}" fill="none" stroke="{COLOR_A}" stroke-width="2"/>"#,
                pts.join(" ")
            );
        }
    }
    annotations(out, spec, &f);
    Ok(())
}

/// Cell edges: midpoints between neighbours in axis space, half a unit
/// beyond the ends.
fn edges(values: &[f64], log: bool) -> Vec<f64> {
    let t: Vec<f64> = values.iter().map(|&v| if log { v.log10() } else { v }).collect();
    let n = t.len();
    let mut e = Vec::with_capacity(n + 1);
    let half = |i: usize| if n > 1 { (t[i + 1] - t[i]) / 2.0 } else { 0.5 };
    e.push(t[0] - if n > 1 { half(0) } else { 0.5 });
    for i in 0..n - 1 {
        e.push((t[i] + t[i + 1]) / 2.0);
    }
    e.push(t[n - 1] + if n > 1 { half(n - 2) } else { 0.5 });
    if log {
        e.iter().map(|v| 10f64.powf(*v)).collect()
    } else {
        e
    }
}

fn snap(px: f64) -> f64 {
    (px * 100.0).round() / 100.0
}

fn band_opacity(log_v: f64, lo: f64, hi: f64) -> f64 {
    let band = if hi > lo {
        (((log_v - lo) / (hi - lo)) * OPACITY_BANDS as f64).floor().min(OPACITY_BANDS as f64 - 1.0)
    } else {
        (OPACITY_BANDS / 2) as f64
    };
    0.25 + 0.7 * band / (OPACITY_BANDS as f64 - 1.0)
}

fn surface(out: &mut String, spec: &PlotSpec, grid: &SurfaceGrid) -> Result<(), FormatError> {
    grid.validate()?;
    if grid.years.windows(2).any(|w| w[0] >= w[1]) || grid.lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FormatError::InvalidPlot("grid axes must be strictly ascending"));
    }
    let x_edges = edges(&grid.lengths, true);
    let y_edges = edges(&grid.years, false);
    let mut xs = x_edges.clone();
    let mut ys = y_edges.clone();
    xs.extend(spec.annotations.iter().map(|a| a.x));
    ys.extend(spec.annotations.iter().map(|a| a.y));
    let f = Frame::new(spec, Axis::fit(&xs, true)?, Axis::fit(&ys, false)?);
    axes(out, spec, &f);

    let mut cells: [Vec<(usize, usize, f64)>; 2] = [Vec::new(), Vec::new()];
    for i in 0..grid.years.len() {
        for j in 0..grid.lengths.len() {
            let (a, b) = (grid.values_a[i][j], grid.values_b[i][j]);
            if a >= b {
                cells[0].push((i, j, a.log10()));
            } else {
                cells[1].push((i, j, b.log10()));
            }
        }
    }
    for (family, (name, color)) in cells.iter().zip([("a", COLOR_A), ("b", COLOR_B)]) {
        let lo = family.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
        let hi = family.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, r#"<g class="family-{name}" fill="{color}" shape-rendering="crispEdges">"#);
        for &(i, j, lv) in family {
            // neighbours share rounded edges so no seams appear
            let (x0, x1) = (snap(f.px(x_edges[j])), snap(f.px(x_edges[j + 1])));
            let (y0, y1) = (snap(f.py(y_edges[i + 1])), snap(f.py(y_edges[i])));
            let _ = writeln!(
                out,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill-opacity="{:.2}"/>"#,
                x1 - x0,
                y1 - y0,
                band_opacity(lv, lo, hi)
            );
        }
        out.push_str("</g>\n");
    }

    let crossing: Vec<String> = grid
        .crossing_curve
        .iter()
        .filter_map(|(year, r)| r.length_m().map(|l| format!("{:.2},{:.2}", f.px(l), f.py(*year))))
        .collect();
    if !crossing.is_empty() {
        let _ = writeln!(
            out,
            r#"<polyline class="crossing" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            crossing.join(" ")
        );
    }
    let cm = 0.01;
    if (x_edges[0]..=x_edges[x_edges.len() - 1]).contains(&cm) {
        let x = f.px(cm);
        let _ = writeln!(
            out,
            r#"<path class="marker" d="M{x:.2},{:.2} V{:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
            f.top,
            f.bottom()
        );
        let _ = writeln!(out, r#"<text class="marker-label" x="{:.2}" y="{:.2}">1 cm</text>"#, x + 4.0, f.top + 12.0);
    }
    let _ = writeln!(out, r#"<g class="legend">"#);
    let y = f.top - 20.0;
    for (k, (label, color)) in [(&grid.label_a, COLOR_A), (&grid.label_b, COLOR_B)].into_iter().enumerate() {
        let x = f.right() - 240.0 + 120.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="12" height="12" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 18.0,
            y + 10.0,
            escape(label)
        );
    }
    out.push_str("</g>\n");
    annotations(out, spec, &f);
    Ok(())
}

/// Renders `data` as an SVG document into a string.
pub fn render_svg_string(data: PlotData<'_>, spec: &PlotSpec) -> Result<String, FormatError> {
    spec.validate()?;
    let empty = match data {
        PlotData::Series { points, .. } => points.is_empty(),
        PlotData::Surface(g) => g.years.is_empty() || g.lengths.is_empty(),
    };
    if empty {
        return Err(FormatError::EmptyData);
    }
    let mut out = String::new();
    header(&mut out, spec);
    match data {
        PlotData::Series { points, fit } => series(&mut out, spec, points, fit)?,
        PlotData::Surface(grid) => surface(&mut out, spec, grid)?,
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes the SVG document to `sink` and returns the number of bytes.
pub fn render_svg<W: Write>(data: PlotData<'_>, spec: &PlotSpec, mut sink: W) -> Result<usize, FormatError> {
    let doc = render_svg_string(data, spec)?;
    sink.write_all(doc.as_bytes()).map_err(FormatError::SinkWrite)?;
    sink.flush().map_err(FormatError::SinkWrite)?;
    Ok(doc.len())
}
