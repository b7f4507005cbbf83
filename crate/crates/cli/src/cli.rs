//! Argument parsing and dispatch for the `clearfom` binary.
//!
//! Exit codes: 0 success, 1 failure writing output, 2 usage or input error,
//! 3 when `breakeven` finds no crossing for some year (results are still
//! printed).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use clearfom_core::{
    compute_clear, compute_makimoto, crossing_curve, detect_deviation, fit_trend, fom_series, link_factors,
    select_technology, surface, ClearFactors, CrossingResult, DeviationReport, FomKind, HierarchyLevel, LengthRange,
    MakimotoFactors, OperatingContext, TechnologyParams, WeightPolicy,
};

use crate::config::{parse_weights, read_json, OptionEntry};
use crate::dataset::ingest_csv;
use crate::grid::{emit_crossing_csv, emit_grid_csv};
use crate::numfmt::fmt_f64;
use crate::params::{defaults, load_params, ParamFile};
use crate::report::{crossing_line, fit_report, selection_report};
use crate::svg::{render_svg_string, Annotation, PlotData, PlotSpec};
use crate::FormatError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_WRITE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CROSSING: i32 = 3;

const DEFAULT_LENGTHS: &str = "1e-6:1:200log";
const DEFAULT_YEARS: &str = "2016:2030:15";

/// CLEAR figure-of-merit modelling: Capability / (Latency x Energy x Amount x Resistance).
#[derive(Debug, Parser)]
#[command(name = "clearfom", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate CLEAR for a factor file, or Makimoto's figure of merit.
    Compute(ComputeArgs),
    /// Model one interconnect at a given year and length.
    Link(LinkArgs),
    /// Fit a log-linear trend to a historical dataset.
    Fit(FitArgs),
    /// Find the electrical/hybrid break-even length per year.
    Breakeven(BreakevenArgs),
    /// Tabulate CLEAR of both technologies over a year x length grid.
    Surface(SurfaceArgs),
    /// Pick the best option for an operating context.
    Select(SelectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Device,
    Link,
    Network,
    System,
}

impl From<Level> for HierarchyLevel {
    fn from(l: Level) -> Self {
        match l {
            Level::Device => HierarchyLevel::Device,
            Level::Link => HierarchyLevel::Link,
            Level::Network => HierarchyLevel::Network,
            Level::System => HierarchyLevel::System,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tech {
    Electrical,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Fom {
    ComponentCount,
    Makimoto,
    Clear,
}

impl From<Fom> for FomKind {
    fn from(f: Fom) -> Self {
        match f {
            Fom::ComponentCount => FomKind::ComponentCount,
            Fom::Makimoto => FomKind::Makimoto,
            Fom::Clear => FomKind::Clear,
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// JSON file with capability_bps, latency_s, energy_j_per_bit, amount_value, amount_dim, resistance_usd
    #[arg(long, value_name = "PATH", required_unless_present = "makimoto", conflicts_with = "makimoto")]
    pub factors: Option<PathBuf>,
    /// JSON file with mips, size_m3, cost_usd, power_w; evaluates MIPS/(Size x Cost x Power)
    #[arg(long, value_name = "PATH")]
    pub makimoto: Option<PathBuf>,
    /// Hierarchy level; inferred from amount_dim when omitted
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    /// Exponents as wC,wL,wE,wA,wR
    #[arg(long, value_name = "W", default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// Technology parameter file (JSON); the shipped defaults when omitted
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Which technology to model
    #[arg(long, value_enum)]
    pub tech: Tech,
    /// Calendar year
    #[arg(long)]
    pub year: f64,
    /// Link length in metres
    #[arg(long, value_name = "METRES")]
    pub length: f64,
    /// Exponents as wC,wL,wE,wA,wR
    #[arg(long, value_name = "W", default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Historical dataset CSV
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Figure of merit to fit
    #[arg(long, value_enum, default_value = "component_count")]
    pub fom: Fom,
    /// Exponents as wC,wL,wE,wA,wR (used with --fom clear)
    #[arg(long, value_name = "W", default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Also search for a deviation from a reference growth line
    #[arg(long)]
    pub deviation: bool,
    /// Reference slope in doublings per year for --deviation
    #[arg(long, value_name = "SLOPE", default_value_t = 1.0)]
    pub reference_slope: f64,
    /// Shortfall factor below the reference line that counts as deviating
    #[arg(long, value_name = "FACTOR", default_value_t = 2.0)]
    pub factor_threshold: f64,
    /// Consecutive deviating points required
    #[arg(long, value_name = "N", default_value_t = 3)]
    pub consecutive: usize,
    /// Write a scatter plot with the fitted line to this SVG file
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Extra labelled point for the plot as LABEL,X,Y (repeatable)
    #[arg(long, value_name = "LABEL,X,Y")]
    pub annotate: Vec<String>,
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BreakevenArgs {
    /// Technology parameter file (JSON); the shipped defaults when omitted
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// A single calendar year
    #[arg(long, conflicts_with = "years", required_unless_present = "years")]
    pub year: Option<f64>,
    /// Years as MIN:MAX:COUNT
    #[arg(long, value_name = "RANGE")]
    pub years: Option<String>,
    /// Search lengths in metres as MIN:MAX:COUNT[log]; always log-spaced
    #[arg(long, value_name = "RANGE", default_value = DEFAULT_LENGTHS)]
    pub lengths: String,
    /// Relative tolerance of the crossing length, in (0, 0.1]
    #[arg(long, value_name = "TOL", default_value_t = clearfom_core::DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// Exponents as wC,wL,wE,wA,wR
    #[arg(long, value_name = "W", default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Write the crossing CSV (year,crossing_length_m) to this file
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Technology parameter file (JSON); the shipped defaults when omitted
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Years as MIN:MAX:COUNT
    #[arg(long, value_name = "RANGE", default_value = DEFAULT_YEARS)]
    pub years: String,
    /// Lengths in metres as MIN:MAX:COUNT[log]; always log-spaced
    #[arg(long, value_name = "RANGE", default_value = DEFAULT_LENGTHS)]
    pub lengths: String,
    /// Relative tolerance of the crossing lengths, in (0, 0.1]
    #[arg(long, value_name = "TOL", default_value_t = clearfom_core::DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// Exponents as wC,wL,wE,wA,wR
    #[arg(long, value_name = "W", default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Write the grid CSV (year,length_m,clear_a,clear_b) here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the crossing CSV (year,crossing_length_m) to this file
    #[arg(long, value_name = "PATH")]
    pub crossing_out: Option<PathBuf>,
    /// Write a surface plot to this SVG file
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Extra labelled point for the plot as LABEL,LENGTH,YEAR (repeatable)
    #[arg(long, value_name = "LABEL,X,Y")]
    pub annotate: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// JSON array of {"label": ..., "factors": {...}} options
    #[arg(long, value_name = "PATH")]
    pub options: PathBuf,
    /// Operating context JSON; full battery and no stimuli when omitted
    #[arg(long, value_name = "PATH")]
    pub context: Option<PathBuf>,
    /// Weight policy JSON; unit base weights and unit gains when omitted
    #[arg(long, value_name = "PATH")]
    pub policy: Option<PathBuf>,
    /// Hierarchy level; inferred from the first option's amount_dim when omitted
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    /// Write the decision trace to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// A parsed `MIN:MAX:COUNT[log]` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl RangeArg {
    pub fn parse(s: &str) -> Result<RangeArg, FormatError> {
        let bad = |why: &str| FormatError::InvalidArgument(format!("range {s:?}: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(bad("expected MIN:MAX:COUNT[log]"));
        };
        let (count, log) = match count.strip_suffix("log") {
            Some(c) => (c, true),
            None => (count, false),
        };
        let min: f64 = min.trim().parse().map_err(|_| bad("MIN is not a number"))?;
        let max: f64 = max.trim().parse().map_err(|_| bad("MAX is not a number"))?;
        let count: usize = count.trim().parse().map_err(|_| bad("COUNT is not a positive integer"))?;
        if !(min.is_finite() && max.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if count == 0 {
            return Err(bad("COUNT must be at least 1"));
        }
        if min > max || (count == 1 && min != max) || (count > 1 && min == max) {
            return Err(bad("need MIN < MAX, or MIN == MAX with COUNT 1"));
        }
        if log && min <= 0.0 {
            return Err(bad("log ranges need MIN > 0"));
        }
        Ok(RangeArg { min, max, count, log })
    }

    /// Evenly spaced values; both ends exact.
    pub fn linear_points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        let mut v: Vec<f64> = (0..self.count).map(|i| self.min + step * i as f64).collect();
        v[self.count - 1] = self.max;
        v
    }
}

fn parse_years(s: &str) -> Result<Vec<f64>, FormatError> {
    let r = RangeArg::parse(s)?;
    if r.log {
        return Err(FormatError::InvalidArgument(format!("year range {s:?} cannot be log-spaced")));
    }
    Ok(r.linear_points())
}

fn parse_lengths(s: &str) -> Result<LengthRange, FormatError> {
    let r = RangeArg::parse(s)?;
    Ok(LengthRange::new(r.min, r.max, r.count)?)
}

fn parse_annotation(s: &str) -> Result<Annotation, FormatError> {
    let bad = || FormatError::InvalidArgument(format!("annotation {s:?}: expected LABEL,X,Y"));
    let mut it = s.rsplitn(3, ',');
    let (y, x, label) = (it.next().ok_or_else(bad)?, it.next().ok_or_else(bad)?, it.next().ok_or_else(bad)?);
    Ok(Annotation {
        label: label.to_string(),
        x: x.trim().parse().map_err(|_| bad())?,
        y: y.trim().parse().map_err(|_| bad())?,
    })
}

fn load_params_or_default(path: Option<&Path>) -> Result<ParamFile, FormatError> {
    match path {
        Some(p) => load_params(p),
        None => Ok(defaults()),
    }
}

fn level_for(factors: &ClearFactors) -> HierarchyLevel {
    HierarchyLevel::ALL
        .into_iter()
        .find(|l| l.amount_dim() == factors.amount_dim)
        .expect("every amount dimension has a level")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    std::fs::write(path, bytes).map_err(|e| FormatError::io(path, e))
}

/// Text for stdout (or `--out`) plus the exit code to return.
struct Outcome {
    text: String,
    out: Option<PathBuf>,
    code: i32,
}

impl Outcome {
    fn ok(text: String, out: Option<PathBuf>) -> Outcome {
        Outcome { text, out, code: EXIT_OK }
    }
}

fn run_compute(a: ComputeArgs) -> Result<Outcome, FormatError> {
    let mut text = String::new();
    if let Some(path) = &a.makimoto {
        let f: MakimotoFactors = read_json(path)?;
        let v = compute_makimoto(&f)?;
        let _ = writeln!(text, "makimoto {}", fmt_f64(v.value()));
        let _ = writeln!(text, "level {}", v.level());
        let _ = writeln!(text, "units {}", v.unit_signature());
        return Ok(Outcome::ok(text, a.out));
    }
    let path = a.factors.as_ref().expect("clap requires --factors or --makimoto");
    let factors: ClearFactors = read_json(path)?;
    let weights = parse_weights(&a.weights)?;
    let level = a.level.map_or_else(|| level_for(&factors), HierarchyLevel::from);
    let v = compute_clear(&factors, &weights, level)?;
    let _ = writeln!(text, "clear {}", fmt_f64(v.value()));
    let _ = writeln!(text, "level {}", v.level());
    let _ = writeln!(text, "units {}", v.unit_signature());
    Ok(Outcome::ok(text, a.out))
}

fn tech(params: &ParamFile, t: Tech) -> &TechnologyParams {
    match t {
        Tech::Electrical => &params.electrical,
        Tech::Hybrid => &params.hybrid,
    }
}

fn run_link(a: LinkArgs) -> Result<Outcome, FormatError> {
    let params = load_params_or_default(a.params.as_deref())?;
    let weights = parse_weights(&a.weights)?;
    let t = tech(&params, a.tech);
    let f = link_factors(t, a.length, a.year)?;
    let v = compute_clear(&f, &weights, HierarchyLevel::Link)?;
    let mut text = String::new();
    let _ = writeln!(text, "technology {}", t.label);
    let _ = writeln!(text, "year {}", fmt_f64(a.year));
    let _ = writeln!(text, "length_m {}", fmt_f64(a.length));
    let _ = writeln!(text, "capability_bps {}", fmt_f64(f.capability_bps));
    let _ = writeln!(text, "latency_s {}", fmt_f64(f.latency_s));
    let _ = writeln!(text, "energy_j_per_bit {}", fmt_f64(f.energy_j_per_bit));
    let _ = writeln!(text, "amount_m2 {}", fmt_f64(f.amount_value));
    let _ = writeln!(text, "resistance_usd {}", fmt_f64(f.resistance_usd));
    let _ = writeln!(text, "clear {}", fmt_f64(v.value()));
    let _ = writeln!(text, "units {}", v.unit_signature());
    Ok(Outcome::ok(text, a.out))
}

fn run_fit(a: FitArgs) -> Result<Outcome, FormatError> {
    let file = std::fs::File::open(&a.input).map_err(|e| FormatError::io(&a.input, e))?;
    let data = ingest_csv(std::io::BufReader::new(file)).map_err(|e| match e {
        FormatError::MalformedRow { .. } | FormatError::MalformedHeader(_) | FormatError::EmptyDataset => {
            FormatError::InvalidArgument(format!("{}: {e}", a.input.display()))
        }
        other => other,
    })?;
    let weights = parse_weights(&a.weights)?;
    let annotations = a.annotate.iter().map(|s| parse_annotation(s)).collect::<Result<Vec<_>, _>>()?;
    let series = fom_series(&data, a.fom.into(), &weights)?;
    let fit = fit_trend(&series.points)?;
    let mut text = String::new();
    let fom_name = a.fom.to_possible_value().expect("no skipped variants").get_name().to_string();
    let _ = writeln!(text, "fom {fom_name}");
    let _ = writeln!(text, "skipped_records {}", series.skipped);
    text.push_str(&fit_report(&fit));
    if a.deviation {
        let config = DeviationReport {
            reference_slope_log2_per_year: a.reference_slope,
            consecutive_threshold: a.consecutive,
            factor_threshold: a.factor_threshold,
            deviation_year: None,
        };
        let report = detect_deviation(&series.points, config)?;
        match report.deviation_year {
            Some(y) => {
                let _ = writeln!(text, "deviation_year {}", fmt_f64(y));
            }
            None => text.push_str("deviation_year none\n"),
        }
    }
    if let Some(path) = &a.svg {
        let spec = PlotSpec {
            title: format!("{fom_name} trend"),
            x_label: "year".into(),
            y_label: fom_name.clone(),
            log_y: true,
            annotations,
            ..Default::default()
        };
        let doc = render_svg_string(PlotData::Series { points: &series.points, fit: Some(&fit) }, &spec)?;
        write_file(path, doc.as_bytes())?;
    }
    Ok(Outcome::ok(text, a.out))
}

fn run_breakeven(a: BreakevenArgs) -> Result<Outcome, FormatError> {
    let params = load_params_or_default(a.params.as_deref())?;
    let weights = parse_weights(&a.weights)?;
    let years = match (a.year, &a.years) {
        (Some(y), _) => vec![y],
        (None, Some(r)) => parse_years(r)?,
        (None, None) => unreachable!("clap requires --year or --years"),
    };
    let range = parse_lengths(&a.lengths)?;
    let (ea, hb) = (&params.electrical, &params.hybrid);
    let curve = crossing_curve(ea, hb, &years, &range, &weights, a.rel_tol)?;
    let mut text = String::new();
    for (year, r) in &curve {
        let _ = writeln!(text, "{}", crossing_line(*year, r, &ea.label, &hb.label));
    }
    if let Some(path) = &a.out {
        let mut buf = Vec::new();
        emit_crossing_csv(&curve, &mut buf)?;
        write_file(path, &buf)?;
    }
    let missing = curve.iter().any(|(_, r)| matches!(r, CrossingResult::NoCrossing { .. }));
    Ok(Outcome { text, out: None, code: if missing { EXIT_NO_CROSSING } else { EXIT_OK } })
}

fn run_surface(a: SurfaceArgs) -> Result<Outcome, FormatError> {
    let params = load_params_or_default(a.params.as_deref())?;
    let weights = parse_weights(&a.weights)?;
    let years = parse_years(&a.years)?;
    let range = parse_lengths(&a.lengths)?;
    let annotations = a.annotate.iter().map(|s| parse_annotation(s)).collect::<Result<Vec<_>, _>>()?;
    let grid = surface(&params.electrical, &params.hybrid, &years, &range, &weights, a.rel_tol)?;
    let mut csv = Vec::new();
    emit_grid_csv(&grid, &mut csv)?;
    if let Some(path) = &a.crossing_out {
        let mut buf = Vec::new();
        emit_crossing_csv(&grid.crossing_curve, &mut buf)?;
        write_file(path, &buf)?;
    }
    if let Some(path) = &a.svg {
        let spec = PlotSpec {
            title: format!("CLEAR: {} (red) vs {} (blue)", grid.label_a, grid.label_b),
            x_label: "length (m)".into(),
            y_label: "year".into(),
            log_x: true,
            annotations,
            ..Default::default()
        };
        write_file(path, render_svg_string(PlotData::Surface(&grid), &spec)?.as_bytes())?;
    }
    let text = String::from_utf8(csv).expect("CSV output is UTF-8");
    Ok(Outcome::ok(text, a.out))
}

fn run_select(a: SelectArgs) -> Result<Outcome, FormatError> {
    let entries: Vec<OptionEntry> = read_json(&a.options)?;
    let ctx: OperatingContext = match &a.context {
        Some(p) => read_json(p)?,
        None => OperatingContext::default(),
    };
    let policy: WeightPolicy = match &a.policy {
        Some(p) => read_json(p)?,
        None => WeightPolicy::default(),
    };
    let level = match (a.level, entries.first()) {
        (Some(l), _) => l.into(),
        (None, Some(e)) => level_for(&e.factors),
        (None, None) => HierarchyLevel::Link,
    };
    let options: Vec<(&str, ClearFactors)> = entries.iter().map(|e| (e.label.as_str(), e.factors)).collect();
    let sel = select_technology(&options, &ctx, &policy, level)?;
    Ok(Outcome::ok(selection_report(&sel), a.out))
}

fn dispatch(cli: Cli) -> Result<Outcome, FormatError> {
    match cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Link(a) => run_link(a),
        Command::Fit(a) => run_fit(a),
        Command::Breakeven(a) => run_breakeven(a),
        Command::Surface(a) => run_surface(a),
        Command::Select(a) => run_select(a),
    }
}

fn exit_code(e: &FormatError) -> i32 {
    match e {
        FormatError::SinkWrite(_) => EXIT_WRITE,
        _ => EXIT_INPUT,
    }
}

/// Parses `argv` (program name first) and runs the subcommand, writing
/// results to `stdout` and diagnostics to `stderr`. Never panics on bad
/// input; returns the process exit code.
pub fn parse_and_dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    if stdout.write_all(text.as_bytes()).is_err() {
                        return EXIT_WRITE;
                    }
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let outcome = match dispatch(cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &outcome.out {
        Some(path) => write_file(path, outcome.text.as_bytes()),
        None => stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush()).map_err(FormatError::SinkWrite),
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
