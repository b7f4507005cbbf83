//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use clearfom::dataset::{ingest_csv, write_csv};
use clearfom::grid::{emit_grid_csv, read_grid_csv};
use clearfom::params::defaults;
use clearfom::svg::{render_svg_string, PlotData, PlotSpec};
use clearfom_core::{
    break_even_length, compute_clear, cost_resistance, crossing_curve, detect_deviation, energy_per_bit, fit_trend,
    landauer_limit, select_technology, shannon_capacity, surface, AmountDim, ClearFactors, CrossingResult, Dataset,
    DeviationReport, HierarchyLevel, HistoricalRecord, KoomeyParams, LengthRange, OperatingContext, Side, TechClass,
    WeightPolicy, WeightVector, DEFAULT_REL_TOL,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn factors(c: f64, l: f64, e: f64, a: f64, r: f64) -> ClearFactors {
    ClearFactors {
        capability_bps: c,
        latency_s: l,
        energy_j_per_bit: e,
        amount_value: a,
        amount_dim: AmountDim::AreaM2,
        resistance_usd: r,
    }
}

fn clear(f: &ClearFactors, w: &WeightVector) -> Result<f64, String> {
    compute_clear(f, w, HierarchyLevel::Link).map(|v| v.value()).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let ones = factors(1.0, 1.0, 1.0, 1.0, 1.0);
    let v = clear(&ones, &WeightVector::ONES)?;
    ensure!(v == 1.0, "all-ones CLEAR = {v}");

    let mut rng = StdRng::seed_from_u64(1);
    let mut log_uniform = |lo: f64, hi: f64| 10f64.powf(rng.random_range(lo..hi));
    for case in 0..1000 {
        let f = factors(
            log_uniform(-3.0, 12.0),
            log_uniform(-12.0, 0.0),
            log_uniform(-21.0, -9.0),
            log_uniform(-12.0, 0.0),
            log_uniform(-3.0, 6.0),
        );
        let w = WeightVector::new(
            log_uniform(-1.0, 0.5),
            log_uniform(-1.0, 0.5),
            log_uniform(-1.0, 0.5),
            log_uniform(-1.0, 0.5),
            log_uniform(-1.0, 0.5),
        )
        .map_err(|e| e.to_string())?;
        let k = log_uniform(-2.0, 2.0);
        let base = clear(&f, &w)?;

        // scaling one factor by k scales CLEAR by k^(+-w)
        let scaled = [
            (
                factors(f.capability_bps * k, f.latency_s, f.energy_j_per_bit, f.amount_value, f.resistance_usd),
                w.capability,
            ),
            (
                factors(f.capability_bps, f.latency_s * k, f.energy_j_per_bit, f.amount_value, f.resistance_usd),
                -w.latency,
            ),
            (
                factors(f.capability_bps, f.latency_s, f.energy_j_per_bit * k, f.amount_value, f.resistance_usd),
                -w.energy,
            ),
            (
                factors(f.capability_bps, f.latency_s, f.energy_j_per_bit, f.amount_value * k, f.resistance_usd),
                -w.amount,
            ),
            (
                factors(f.capability_bps, f.latency_s, f.energy_j_per_bit, f.amount_value, f.resistance_usd * k),
                -w.resistance,
            ),
        ];
        for (idx, (g, exp)) in scaled.iter().enumerate() {
            let got = clear(g, &w)?;
            let want = base * k.powf(*exp);
            ensure!(rel_err(got, want) < 1e-9, "case {case}, factor {idx}: homogeneity {got} vs {want}");
            // k > 1 raises capability and lowers every other term's contribution
            let should_rise = (k > 1.0) == (*exp > 0.0);
            if k != 1.0 {
                ensure!(
                    if should_rise { got > base } else { got < base },
                    "case {case}, factor {idx}: monotonicity violated ({base} -> {got}, k={k})"
                );
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    let clean: Vec<(f64, f64)> = (1946..=2015).map(|y| (f64::from(y), 2f64.powi(y - 1946))).collect();
    ensure!(clean.len() == 70, "series has {} points", clean.len());
    let fit = fit_trend(&clean).map_err(|e| e.to_string())?;
    let months = fit.doubling_time_months.ok_or("no doubling time")?;
    ensure!((months - 12.0).abs() <= 1e-6, "noiseless doubling time {months}");
    ensure!((fit.r_squared - 1.0).abs() <= 1e-12, "noiseless r^2 {}", fit.r_squared);

    for seed in 0..100u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let noisy: Vec<(f64, f64)> =
            clean.iter().map(|&(y, v)| (y, v * (1.0 + rng.random_range(-0.01..=0.01)))).collect();
        let fit = fit_trend(&noisy).map_err(|e| e.to_string())?;
        let months = fit.doubling_time_months.ok_or("no doubling time")?;
        ensure!((months - 12.0).abs() <= 0.1, "seed {seed}: doubling time {months}");
    }
    Ok(())
}

fn criterion_3() -> Check {
    let floor = landauer_limit(300.0).map_err(|e| e.to_string())?;
    ensure!(rel_err(floor, 2.8707e-21) <= 1e-4, "kT ln2 at 300 K = {floor}");
    let params = defaults();
    for tech in [&params.electrical, &params.hybrid] {
        let koomey: &KoomeyParams = &tech.energy;
        ensure!(koomey.temperature == 300.0, "{} defaults use T = {}", tech.label, koomey.temperature);
        for y in 1940..=2200 {
            let e = energy_per_bit(f64::from(y), koomey).map_err(|e| e.to_string())?;
            ensure!(e >= floor, "{} {y}: {e} below the floor", tech.label);
        }
        let e = energy_per_bit(2200.0, koomey).map_err(|e| e.to_string())?;
        ensure!(e == floor, "{} 2200: {e} has not reached {floor}", tech.label);
    }
    let cold = landauer_limit(287.4).map_err(|e| e.to_string())?;
    ensure!(rel_err(cold, 2.75e-21) <= 2e-3, "kT ln2 at 287.4 K = {cold}");
    Ok(())
}

fn criterion_4() -> Check {
    let c = shannon_capacity(1e9, 15.0).map_err(|e| e.to_string())?;
    ensure!(c == 4e9, "capacity(1e9, 15) = {c}");
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..100 {
        let b = 10f64.powf(rng.random_range(0.0..12.0));
        let c = shannon_capacity(b, 0.0).map_err(|e| e.to_string())?;
        ensure!(c == 0.0, "capacity({b}, 0) = {c}");
    }
    Ok(())
}

fn criterion_5() -> Check {
    let p = defaults();
    let (el, hy) = (&p.electrical, &p.hybrid);
    let ratio = cost_resistance(el, 2016.0).map_err(|e| e.to_string())?
        / cost_resistance(hy, 2016.0).map_err(|e| e.to_string())?;
    ensure!((1e-9..=1e-6).contains(&ratio), "2016 cost ratio {ratio}");

    let range = LengthRange::default();
    let w = WeightVector::ONES;
    let at_2016 = crossing_curve(el, hy, &[2016.0], &range, &w, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let len = at_2016[0].1.length_m().ok_or("no crossing in 2016")?;
    ensure!(len > 0.01, "2016 crossing {len} m");

    let grids: [Vec<f64>; 2] =
        [(0..11).map(|i| 2016.0 + 14.0 * f64::from(i) / 10.0).collect(), (2016..=2026).map(f64::from).collect()];
    for years in &grids {
        let curve = crossing_curve(el, hy, years, &range, &w, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        let lens: Vec<f64> =
            curve.iter().map(|(y, r)| r.length_m().ok_or(format!("no crossing in {y}"))).collect::<Result<_, _>>()?;
        for (pair, yrs) in lens.windows(2).zip(years.windows(2)) {
            ensure!(pair[1] <= pair[0], "crossing grows from {} ({} m) to {} ({} m)", yrs[0], pair[0], yrs[1], pair[1]);
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let range = LengthRange::default();
    let c = 3.7;
    let r = break_even_length(|_| Ok(c), |l| Ok(c * 0.01 / l), &range, 1e-3).map_err(|e| e.to_string())?;
    let len = r.length_m().ok_or("oracle found no crossing")?;
    ensure!(rel_err(len, 0.01) <= 1e-3, "oracle crossing {len}");

    let mut rng = StdRng::seed_from_u64(6);
    let (mut crossings, mut dominated) = (0, 0);
    for pair in 0..50 {
        // power laws a = ca L^p, b = cb L^q meeting at `target`
        let p: f64 = rng.random_range(-2.0..2.0);
        let q: f64 = p + rng.random_range(0.2..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let target = 10f64.powf(rng.random_range(-8.0..2.0));
        let ca = 10f64.powf(rng.random_range(-5.0..5.0));
        let cb = ca * target.powf(p - q);
        let a = move |l: f64| Ok(ca * l.powf(p));
        let b = move |l: f64| Ok(cb * l.powf(q));
        let ab = break_even_length(a, b, &range, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        let ba = break_even_length(b, a, &range, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
        match (ab, ba) {
            (CrossingResult::Crossing { length_m: x }, CrossingResult::Crossing { length_m: y }) => {
                ensure!(rel_err(x, y) <= DEFAULT_REL_TOL, "pair {pair}: {x} vs {y}");
                ensure!(rel_err(x, target) <= DEFAULT_REL_TOL, "pair {pair}: {x} vs analytic {target}");
                crossings += 1;
            }
            (CrossingResult::NoCrossing { dominant: d1 }, CrossingResult::NoCrossing { dominant: d2 }) => {
                ensure!(d2 == d1.swap(), "pair {pair}: dominance {d1:?} / {d2:?}");
                ensure!(target < range.min_m || target > range.max_m, "pair {pair}: missed crossing at {target}");
                let winner_a = ca * range.min_m.powf(p) > cb * range.min_m.powf(q);
                ensure!((d1 == Side::A) == winner_a, "pair {pair}: wrong dominant side");
                dominated += 1;
            }
            other => return Err(format!("pair {pair}: asymmetric results {other:?}")),
        }
    }
    ensure!(crossings > 0 && dominated > 0, "sample did not exercise both outcomes ({crossings}/{dominated})");
    Ok(())
}

fn broken_series(break_year: i32) -> Vec<(f64, f64)> {
    (1946..=2015)
        .map(|y| {
            let before = f64::from(y.min(break_year) - 1946);
            let after = f64::from((y - break_year).max(0)) / 2.0;
            (f64::from(y), 2f64.powf(before + after))
        })
        .collect()
}

fn criterion_7() -> Check {
    for y_star in [1965, 1978] {
        let report = detect_deviation(&broken_series(y_star), DeviationReport::default()).map_err(|e| e.to_string())?;
        let found = report.deviation_year.ok_or(format!("no deviation found for {y_star}"))?;
        let lo = f64::from(y_star);
        ensure!((lo..=lo + 4.0).contains(&found), "break at {y_star} detected at {found}");
    }
    let clean: Vec<(f64, f64)> = (1946..=2015).map(|y| (f64::from(y), 2f64.powi(y - 1946))).collect();
    let report = detect_deviation(&clean, DeviationReport::default()).map_err(|e| e.to_string())?;
    ensure!(report.deviation_year.is_none(), "false positive at {:?}", report.deviation_year);
    Ok(())
}

fn criterion_8() -> Check {
    let options = [("X", factors(20.0, 1.0, 2.0, 1.0, 1.0)), ("Y", factors(6.0, 1.0, 1.0, 1.0, 1.0))];
    let policy = WeightPolicy { energy_gain: 2.0, ..Default::default() };
    let full = select_technology(&options, &OperatingContext::default(), &policy, HierarchyLevel::Link)
        .map_err(|e| e.to_string())?;
    ensure!(
        full.label == "X" && full.value.value() == 10.0,
        "full battery picked {} ({})",
        full.label,
        full.value.value()
    );
    let empty = OperatingContext { battery_fraction: 0.0, ..Default::default() };
    let low = select_technology(&options, &empty, &policy, HierarchyLevel::Link).map_err(|e| e.to_string())?;
    ensure!(low.weights.energy == 3.0, "wE = {}", low.weights.energy);
    ensure!(low.label == "Y" && low.value.value() == 6.0, "empty battery picked {} ({})", low.label, low.value.value());
    let x = low.trace.iter().find(|(l, _)| l == "X").ok_or("X missing from trace")?;
    ensure!(x.1.value() == 2.5, "X under wE=3 is {}", x.1.value());
    Ok(())
}

fn run_cli(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out =
        Command::new(env!("CARGO_BIN_EXE_clearfom")).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "clearfom {args:?} exited {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(out.stdout)
}

fn read(path: PathBuf) -> Result<Vec<u8>, String> {
    std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))
}

fn well_formed(doc: &str) -> Check {
    let parsed = roxmltree::Document::parse(doc).map_err(|e| format!("SVG is not well-formed: {e}"))?;
    ensure!(parsed.root_element().tag_name().name() == "svg", "root element is not <svg>");
    Ok(())
}

fn criterion_9() -> Check {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample.csv");
    let sample = sample.to_str().ok_or("non UTF-8 path")?;
    let runs: Vec<Vec<&str>> = vec![
        vec!["surface", "--out", "grid.csv", "--crossing-out", "cross.csv", "--svg", "surface.svg"],
        vec![
            "fit",
            "--input",
            sample,
            "--fom",
            "makimoto",
            "--deviation",
            "--svg",
            "fit.svg",
            "--annotate",
            "IBM 2015,2015,1e3",
        ],
        vec!["breakeven", "--years", "2016:2030:15"],
    ];
    let files = ["grid.csv", "cross.csv", "surface.svg", "fit.svg"];
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut bytes = Vec::new();
        for args in &runs {
            bytes.push(run_cli(args, dir.path())?);
        }
        for f in files {
            bytes.push(read(dir.path().join(f))?);
        }
        outputs.push(bytes);
    }
    ensure!(outputs[0] == outputs[1], "repeated CLI runs differ");
    let [.., surface_svg, fit_svg] = &outputs[0][..] else { unreachable!() };
    well_formed(std::str::from_utf8(surface_svg).map_err(|e| e.to_string())?)?;
    well_formed(std::str::from_utf8(fit_svg).map_err(|e| e.to_string())?)?;

    let p = defaults();
    let years: Vec<f64> = (2016..=2030).map(f64::from).collect();
    let grid = surface(&p.electrical, &p.hybrid, &years, &LengthRange::default(), &WeightVector::ONES, DEFAULT_REL_TOL)
        .map_err(|e| e.to_string())?;
    let mut csv = Vec::new();
    let rows = emit_grid_csv(&grid, &mut csv).map_err(|e| e.to_string())?;
    ensure!(rows == 15 * 200, "grid rows {rows}");
    let back = read_grid_csv(csv.as_slice()).map_err(|e| e.to_string())?;
    ensure!(back.matches(&grid), "surface CSV round-trip is lossy");
    let doc = render_svg_string(PlotData::Surface(&grid), &PlotSpec { log_x: true, ..Default::default() })
        .map_err(|e| e.to_string())?;
    well_formed(&doc)?;

    let shipped = ingest_csv(read(Path::new(sample).to_path_buf())?.as_slice()).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(9);
    let random = Dataset::new(
        (0..200)
            .map(|i| {
                let mut r = HistoricalRecord::new(
                    1900.0 + rng.random_range(0.0..200.0),
                    format!("rec \"{i}\", x"),
                    TechClass::ALL[i % TechClass::ALL.len()],
                );
                let mut pos =
                    || if rng.random_bool(0.8) { Some(10f64.powf(rng.random_range(-30.0..30.0))) } else { None };
                r.mips = pos();
                r.size_m3 = pos();
                r.power_w = pos();
                r.cost_usd = pos();
                r.instruction_length_bits = pos();
                r.latency_s = pos();
                r.component_count = Some(rng.random_range(1..u64::MAX));
                r
            })
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    for data in [shipped, random] {
        let mut out = Vec::new();
        write_csv(&data, &mut out).map_err(|e| e.to_string())?;
        let back = ingest_csv(out.as_slice()).map_err(|e| e.to_string())?;
        ensure!(back == data, "dataset CSV round-trip is lossy");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 CLEAR identity, homogeneity, monotonicity", criterion_1, Duration::from_secs(1)),
        ("2 doubling time from clean and noisy series", criterion_2, Duration::from_secs(5)),
        ("3 Landauer floor on energy per bit", criterion_3, Duration::from_secs(30)),
        ("4 Shannon capacity oracle", criterion_4, Duration::from_secs(30)),
        ("5 2016 calibration anchors", criterion_5, Duration::from_secs(2)),
        ("6 break-even oracle and symmetry", criterion_6, Duration::from_secs(30)),
        ("7 deviation detection", criterion_7, Duration::from_secs(30)),
        ("8 reconfiguration flip", criterion_8, Duration::from_secs(30)),
        ("9 determinism and round-trips", criterion_9, Duration::from_secs(30)),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result =
            result.and_then(
                |()| {
                    if elapsed <= limit {
                        Ok(())
                    } else {
                        Err(format!("took {elapsed:?}, limit {limit:?}"))
                    }
                },
            );
        match result {
            Ok(()) => println!("PASS criterion {name} ({:.3} s)", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.3} s", 9 - failed, suite.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
