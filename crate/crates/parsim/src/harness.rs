//! Scaling-experiment harness: runs a workload over a grid of problem
//! sizes and processor counts with repeats, derives speedup/efficiency
//! through [`crate::perfmodel`], and writes CSV plus plot-ready data.
//!
//! Two experiment shapes are supported. A *strong* scaling plan fixes one
//! problem size and sweeps processor counts; its speedup baseline is the
//! mean of the `p = 1` cell. A *weak* plan fixes one processor count and
//! sweeps problem sizes (work per processor grows with the size), so it
//! reports raw times without a speedup column.
//!
//! Repeat `r` of the cell `(size, p)` runs with seed
//! `mix64(root XOR fnv1a64(size || p || r))`, which makes workload
//! results reproducible while wall-clock timings naturally vary. Cells
//! run one at a time so timings do not interfere.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use crate::life::{run_life, LifeConfig, LifeError, LifeMode};
use crate::network::RoadNetwork;
use crate::perfmodel::{self, measured_speedup, RunRecord};
use crate::rng::{fnv1a64, mix64};
use crate::traffic::{ConfigError, TrafficConfig, TrafficSim, TrafficSimOptions};
use crate::actor::{EngineError, ExecMode};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed result CSV at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("experiment produced no rows")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingKind {
    Strong,
    Weak,
}

impl ScalingKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScalingKind::Strong => "strong",
            ScalingKind::Weak => "weak",
        }
    }
}

impl std::str::FromStr for ScalingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strong" => Ok(ScalingKind::Strong),
            "weak" => Ok(ScalingKind::Weak),
            other => Err(format!("unknown scaling kind '{other}'")),
        }
    }
}

/// What gets timed in each cell.
#[derive(Debug, Clone)]
pub enum Workload {
    /// The cellular automaton: `size` is the grid side length.
    Life { density: f64, steps: u64 },
    /// The traffic simulation: `size` is the simulated minutes; `p` is
    /// the shard count.
    Traffic { net: RoadNetwork, base: Box<TrafficConfig> },
}

impl Workload {
    pub fn name(&self) -> &'static str {
        match self {
            Workload::Life { .. } => "life",
            Workload::Traffic { .. } => "traffic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub kind: ScalingKind,
    pub workload: Workload,
    pub sizes: Vec<u64>,
    pub proc_counts: Vec<u32>,
    pub repeats: u32,
    pub seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repeats < 1 {
            return Err(HarnessError::Plan("repeats must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.proc_counts.is_empty() {
            return Err(HarnessError::Plan("sizes and processor counts must be non-empty".into()));
        }
        if self.proc_counts.contains(&0) || self.sizes.contains(&0) {
            return Err(HarnessError::Plan("sizes and processor counts must be positive".into()));
        }
        match self.kind {
            ScalingKind::Strong if self.sizes.len() != 1 => Err(HarnessError::Plan(
                "a strong scaling plan fixes exactly one problem size".into(),
            )),
            ScalingKind::Weak if self.proc_counts.len() != 1 => Err(HarnessError::Plan(
                "a weak scaling plan fixes exactly one processor count".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    Failed(String),
}

impl RunStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RunStatus::Ok)
    }
}

/// One timed repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub size: u64,
    pub p: u32,
    pub repeat: u32,
    pub seconds: f64,
    pub status: RunStatus,
}

/// Per-cell aggregate: sample mean/stddev over successful repeats, plus
/// speedup and efficiency when a strong-scaling baseline exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub size: u64,
    pub p: u32,
    pub ok_repeats: u32,
    pub mean: f64,
    pub stddev: f64,
    pub speedup: Option<f64>,
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub workload: String,
    pub kind: ScalingKind,
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<Aggregate>,
}

/// Seed for repeat `r` of cell `(size, p)` under the root seed.
pub fn cell_seed(root: u64, size: u64, p: u32, repeat: u32) -> u64 {
    let mut bytes = [0u8; 24];
    bytes[..8].copy_from_slice(&size.to_le_bytes());
    bytes[8..16].copy_from_slice(&(p as u64).to_le_bytes());
    bytes[16..].copy_from_slice(&(repeat as u64).to_le_bytes());
    mix64(root ^ fnv1a64(&bytes))
}

/// Process-grid dimensions for `p` workers on an `size`-sided lattice:
/// the most square factorization of `p` whose factors both divide the
/// size, preferring fewer rows on ties.
pub fn dims_for(p: u32, size: u64) -> Option<(usize, usize)> {
    let p = p as u64;
    let mut best: Option<(u64, u64)> = None;
    for rows in 1..=p {
        if !p.is_multiple_of(rows) {
            continue;
        }
        let cols = p / rows;
        if !size.is_multiple_of(rows) || !size.is_multiple_of(cols) {
            continue;
        }
        let diff = rows.abs_diff(cols);
        if best.is_none_or(|(br, bc)| diff < br.abs_diff(bc) || (diff == br.abs_diff(bc) && rows < br))
        {
            best = Some((rows, cols));
        }
    }
    best.map(|(r, c)| (r as usize, c as usize))
}

fn run_cell(workload: &Workload, size: u64, p: u32, seed: u64) -> Result<f64, String> {
    match workload {
        Workload::Life { density, steps } => {
            let dims = dims_for(p, size)
                .ok_or_else(|| format!("no {p}-worker process grid divides a {size}-sided lattice"))?;
            let cfg = LifeConfig {
                size: size as usize,
                density: *density,
                seed,
                max_steps: *steps,
                print_every: u64::MAX,
                dims,
            };
            // p = 1 runs the serial reference; that is the honest
            // baseline for speedup.
            let mode = if p == 1 { LifeMode::Serial } else { LifeMode::Parallel };
            let run = run_life(&cfg, mode, true).map_err(|e: LifeError| e.to_string())?;
            Ok(run.loop_seconds)
        }
        Workload::Traffic { net, base } => {
            let mut cfg = (**base).clone();
            cfg.max_minutes = size;
            cfg.rng_seed = seed;
            let opts = TrafficSimOptions {
                shard_count: p,
                mode: if p == 1 { ExecMode::Deterministic } else { ExecMode::Parallel },
                quiet: true,
            };
            let mut sim = TrafficSim::new(net.clone(), cfg, opts).map_err(|e| e.to_string())?;
            let outcome = sim.run().map_err(|e: EngineError| e.to_string())?;
            Ok(outcome.elapsed.as_secs_f64())
        }
    }
}

/// Executes every `(size, p)` cell `repeats` times, one run at a time.
/// A failing repeat is recorded as a failed row; the experiment
/// continues.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult, HarnessError> {
    plan.validate()?;
    let mut rows = Vec::new();
    for &size in &plan.sizes {
        for &p in &plan.proc_counts {
            for repeat in 0..plan.repeats {
                let seed = cell_seed(plan.seed, size, p, repeat);
                let started = Instant::now();
                let row = match run_cell(&plan.workload, size, p, seed) {
                    Ok(seconds) => ResultRow { size, p, repeat, seconds, status: RunStatus::Ok },
                    Err(message) => ResultRow {
                        size,
                        p,
                        repeat,
                        seconds: started.elapsed().as_secs_f64(),
                        status: RunStatus::Failed(message),
                    },
                };
                rows.push(row);
            }
        }
    }
    let aggregates = compute_aggregates(&rows, plan.kind);
    Ok(ExperimentResult {
        workload: plan.workload.name().to_string(),
        kind: plan.kind,
        rows,
        aggregates,
    })
}

/// Aggregates rows per cell. Strong plans with a successful `p = 1` cell
/// get speedup (baseline mean over that cell) and efficiency
/// (speedup / p, exactly).
pub fn compute_aggregates(rows: &[ResultRow], kind: ScalingKind) -> Vec<Aggregate> {
    let mut cells: Vec<(u64, u32)> = rows.iter().map(|r| (r.size, r.p)).collect();
    cells.sort_unstable();
    cells.dedup();

    let samples_of = |size: u64, p: u32| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.size == size && r.p == p && r.status.is_ok())
            .map(|r| r.seconds)
            .collect()
    };

    let mut aggregates = Vec::with_capacity(cells.len());
    for (size, p) in cells {
        let samples = samples_of(size, p);
        let mean = perfmodel::mean(&samples);
        let stddev = perfmodel::stddev(&samples);
        let (mut speedup, mut efficiency) = (None, None);
        if kind == ScalingKind::Strong && !samples.is_empty() {
            let baseline = samples_of(size, 1);
            if !baseline.is_empty() {
                let t1 = perfmodel::mean(&baseline);
                if let Ok(report) =
                    measured_speedup(&RunRecord::with_samples(t1, samples.clone(), p as u64))
                {
                    speedup = Some(report.speedup);
                    efficiency = Some(report.efficiency);
                }
            }
        }
        aggregates.push(Aggregate {
            size,
            p,
            ok_repeats: samples.len() as u32,
            mean,
            stddev,
            speedup,
            efficiency,
        });
    }
    aggregates
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Serializes an experiment to CSV. Data rows leave the aggregate
/// columns empty; aggregate rows use `repeat = -1` and put the mean in
/// the `seconds` column. Floats print in shortest round-trip form, so
/// aggregates recompute exactly from the data rows.
pub fn format_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("workload,kind,size,p,repeat,seconds,status,stddev,speedup,efficiency\n");
    for row in &result.rows {
        let status = match &row.status {
            RunStatus::Ok => "ok".to_string(),
            RunStatus::Failed(reason) => format!("failed: {}", reason.replace(',', ";")),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},,,",
            result.workload,
            result.kind.name(),
            row.size,
            row.p,
            row.repeat,
            row.seconds,
            status
        );
    }
    for agg in &result.aggregates {
        let _ = writeln!(
            out,
            "{},{},{},{},-1,{},ok,{},{},{}",
            result.workload,
            result.kind.name(),
            agg.size,
            agg.p,
            agg.mean,
            agg.stddev,
            fmt_opt(agg.speedup),
            fmt_opt(agg.efficiency)
        );
    }
    out
}

pub fn write_csv(result: &ExperimentResult, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, format_csv(result))?;
    Ok(())
}

/// Parses a CSV produced by [`format_csv`] back into rows and embedded
/// aggregates.
pub fn parse_csv(text: &str) -> Result<ExperimentResult, HarnessError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(HarnessError::Csv { line: 1, message: "empty file".into() })?;
    if header != "workload,kind,size,p,repeat,seconds,status,stddev,speedup,efficiency" {
        return Err(HarnessError::Csv { line: 1, message: format!("unexpected header '{header}'") });
    }

    let mut workload = String::new();
    let mut kind = None;
    let mut rows = Vec::new();
    let mut aggregates = Vec::new();

    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(HarnessError::Csv {
                line: line_no,
                message: format!("expected 10 fields, got {}", fields.len()),
            });
        }
        let err = |message: String| HarnessError::Csv { line: line_no, message };
        workload = fields[0].to_string();
        let parsed_kind: ScalingKind =
            fields[1].parse().map_err(|e: String| err(e.clone()))?;
        kind = Some(parsed_kind);
        let size: u64 = fields[2].parse().map_err(|_| err(format!("bad size '{}'", fields[2])))?;
        let p: u32 = fields[3].parse().map_err(|_| err(format!("bad p '{}'", fields[3])))?;
        let repeat: i64 =
            fields[4].parse().map_err(|_| err(format!("bad repeat '{}'", fields[4])))?;
        if repeat >= 0 {
            let seconds: f64 =
                fields[5].parse().map_err(|_| err(format!("bad seconds '{}'", fields[5])))?;
            let status = if fields[6] == "ok" {
                RunStatus::Ok
            } else {
                RunStatus::Failed(fields[6].trim_start_matches("failed: ").to_string())
            };
            rows.push(ResultRow { size, p, repeat: repeat as u32, seconds, status });
        } else {
            let mean: f64 =
                fields[5].parse().map_err(|_| err(format!("bad mean '{}'", fields[5])))?;
            let stddev: f64 =
                fields[7].parse().map_err(|_| err(format!("bad stddev '{}'", fields[7])))?;
            let parse_opt = |s: &str, what: &str| -> Result<Option<f64>, HarnessError> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| HarnessError::Csv {
                        line: line_no,
                        message: format!("bad {what} '{s}'"),
                    })
                }
            };
            aggregates.push(Aggregate {
                size,
                p,
                ok_repeats: 0,
                mean,
                stddev,
                speedup: parse_opt(fields[8], "speedup")?,
                efficiency: parse_opt(fields[9], "efficiency")?,
            });
        }
    }

    let kind = kind.ok_or(HarnessError::Empty)?;
    // ok_repeats is not serialized; restore it from the rows.
    for agg in &mut aggregates {
        agg.ok_repeats = rows
            .iter()
            .filter(|r| r.size == agg.size && r.p == agg.p && r.status.is_ok())
            .count() as u32;
    }
    Ok(ExperimentResult { workload, kind, rows, aggregates })
}

/// Writes per-configuration `size p mean stddev speedup efficiency`
/// columns as plain text, sorted for a monotone x-axis, with failed
/// repeats listed in a footer.
pub fn format_plot_data(result: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# workload={} kind={}", result.workload, result.kind.name());
    let _ = writeln!(out, "# size p mean stddev speedup efficiency");
    let mut aggregates = result.aggregates.clone();
    aggregates.sort_by_key(|a| (a.size, a.p));
    for agg in &aggregates {
        if agg.ok_repeats == 0 {
            continue;
        }
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            agg.size,
            agg.p,
            agg.mean,
            agg.stddev,
            agg.speedup.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            agg.efficiency.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        );
    }
    let failures: Vec<&ResultRow> = result.rows.iter().filter(|r| !r.status.is_ok()).collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "# failed cells:");
        for row in failures {
            let reason = match &row.status {
                RunStatus::Failed(reason) => reason.as_str(),
                RunStatus::Ok => unreachable!(),
            };
            let _ = writeln!(out, "#   size={} p={} repeat={}: {}", row.size, row.p, row.repeat, reason);
        }
    }
    out
}

pub fn write_plot_data(result: &ExperimentResult, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, format_plot_data(result))?;
    Ok(())
}

/// A small self-contained SVG line chart of the experiment: speedup over
/// processor count for strong scaling, mean seconds over problem size
/// for weak scaling.
pub fn format_svg(result: &ExperimentResult) -> String {
    let mut aggregates: Vec<&Aggregate> =
        result.aggregates.iter().filter(|a| a.ok_repeats > 0).collect();
    aggregates.sort_by_key(|a| (a.size, a.p));

    let (points, x_label, y_label): (Vec<(f64, f64)>, &str, String) = match result.kind {
        ScalingKind::Strong => (
            aggregates
                .iter()
                .filter_map(|a| a.speedup.map(|s| (a.p as f64, s)))
                .collect(),
            "processors",
            "speedup".into(),
        ),
        ScalingKind::Weak => (
            aggregates.iter().map(|a| (a.size as f64, a.mean)).collect(),
            "problem size",
            "seconds".into(),
        ),
    };

    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const MARGIN: f64 = 48.0;
    let x_max = points.iter().map(|p| p.0).fold(1.0f64, f64::max);
    let y_max = points.iter().map(|p| p.1).fold(1e-12f64, f64::max);
    let sx = |x: f64| MARGIN + (x / x_max) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y / y_max) * (H - 2.0 * MARGIN);

    let mut path = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(path, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(*x), sy(*y));
    }
    let mut markers = String::new();
    for (x, y) in &points {
        let _ = writeln!(
            markers,
            r##"  <circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4"/>"##,
            sx(*x),
            sy(*y)
        );
    }

    format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">
  <rect width="{W}" height="{H}" fill="white"/>
  <line x1="{m}" y1="{ybase}" x2="{xend}" y2="{ybase}" stroke="black"/>
  <line x1="{m}" y1="{m}" x2="{m}" y2="{ybase}" stroke="black"/>
  <text x="{xmid}" y="{H}" dy="-8" text-anchor="middle" font-size="12">{x_label}</text>
  <text x="12" y="{ymid}" text-anchor="middle" font-size="12" transform="rotate(-90 12 {ymid})">{y_label}</text>
  <text x="{xend}" y="{ybase}" dy="14" text-anchor="end" font-size="10">{x_max}</text>
  <text x="{m}" y="{m}" dx="-4" text-anchor="end" font-size="10">{y_max:.3}</text>
  <path d="{path}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>
{markers}</svg>
"##,
        m = MARGIN,
        ybase = H - MARGIN,
        xend = W - MARGIN,
        xmid = W / 2.0,
        ymid = H / 2.0,
    )
}

pub fn write_svg(result: &ExperimentResult, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, format_svg(result))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_life_plan(kind: ScalingKind, sizes: Vec<u64>, procs: Vec<u32>) -> ExperimentPlan {
        ExperimentPlan {
            kind,
            workload: Workload::Life { density: 0.4, steps: 3 },
            sizes,
            proc_counts: procs,
            repeats: 2,
            seed: 9,
        }
    }

    #[test]
    fn plan_validation() {
        assert!(tiny_life_plan(ScalingKind::Strong, vec![12], vec![1, 2]).validate().is_ok());
        assert!(tiny_life_plan(ScalingKind::Strong, vec![12, 24], vec![1]).validate().is_err());
        assert!(tiny_life_plan(ScalingKind::Weak, vec![12, 24], vec![2]).validate().is_ok());
        assert!(tiny_life_plan(ScalingKind::Weak, vec![12], vec![1, 2]).validate().is_err());
        let mut plan = tiny_life_plan(ScalingKind::Strong, vec![12], vec![1]);
        plan.repeats = 0;
        assert!(plan.validate().is_err());
    }

    #[test]
    fn cell_seeds_are_distinct_and_reproducible() {
        let a = cell_seed(7, 512, 2, 0);
        assert_eq!(a, cell_seed(7, 512, 2, 0));
        assert_ne!(a, cell_seed(7, 512, 2, 1));
        assert_ne!(a, cell_seed(7, 512, 4, 0));
        assert_ne!(a, cell_seed(8, 512, 2, 0));
    }

    #[test]
    fn dims_factorization() {
        assert_eq!(dims_for(1, 60), Some((1, 1)));
        assert_eq!(dims_for(4, 60), Some((2, 2)));
        assert_eq!(dims_for(6, 60), Some((2, 3)));
        assert_eq!(dims_for(2, 1024), Some((1, 2)));
        // 7 does not divide 60.
        assert_eq!(dims_for(7, 60), None);
    }

    #[test]
    fn strong_experiment_shape_and_identities() {
        let plan = tiny_life_plan(ScalingKind::Strong, vec![12], vec![1, 2]);
        let result = run_experiment(&plan).unwrap();
        assert_eq!(result.rows.len(), 4); // 2 cells x 2 repeats
        assert_eq!(result.aggregates.len(), 2);
        for agg in &result.aggregates {
            let speedup = agg.speedup.expect("strong plan with p=1 baseline");
            let efficiency = agg.efficiency.unwrap();
            assert_eq!(efficiency, speedup / agg.p as f64);
        }
        // The p=1 aggregate is its own baseline.
        let base = result.aggregates.iter().find(|a| a.p == 1).unwrap();
        assert_eq!(base.speedup, Some(1.0));
    }

    #[test]
    fn weak_experiment_has_no_speedup_column() {
        let plan = tiny_life_plan(ScalingKind::Weak, vec![6, 12], vec![2]);
        let result = run_experiment(&plan).unwrap();
        assert_eq!(result.rows.len(), 4);
        for agg in &result.aggregates {
            assert!(agg.speedup.is_none());
            assert!(agg.efficiency.is_none());
        }
    }

    #[test]
    fn failed_cells_are_recorded_and_skipped() {
        // p=5 cannot split a 12-sided lattice.
        let plan = tiny_life_plan(ScalingKind::Strong, vec![12], vec![1, 5]);
        let result = run_experiment(&plan).unwrap();
        let failed: Vec<_> = result.rows.iter().filter(|r| !r.status.is_ok()).collect();
        assert_eq!(failed.len(), 2);
        let agg = result.aggregates.iter().find(|a| a.p == 5).unwrap();
        assert_eq!(agg.ok_repeats, 0);
        let plot = format_plot_data(&result);
        assert!(plot.contains("# failed cells:"));
        assert!(!plot.lines().any(|l| !l.starts_with('#') && l.starts_with("12 5")));
    }

    #[test]
    fn csv_round_trip_preserves_rows_and_aggregates() {
        let plan = tiny_life_plan(ScalingKind::Strong, vec![12], vec![1, 2]);
        let result = run_experiment(&plan).unwrap();
        let text = format_csv(&result);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.rows, result.rows);
        assert_eq!(parsed.workload, result.workload);
        assert_eq!(parsed.kind, result.kind);
        // Shortest round-trip float printing makes recomputation exact,
        // comfortably within the 1e-9 contract.
        let recomputed = compute_aggregates(&parsed.rows, parsed.kind);
        for (embedded, fresh) in parsed.aggregates.iter().zip(&recomputed) {
            assert!((embedded.mean - fresh.mean).abs() <= 1e-9);
            assert!((embedded.stddev - fresh.stddev).abs() <= 1e-9);
            match (embedded.speedup, fresh.speedup) {
                (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-9),
                (a, b) => assert_eq!(a.is_none(), b.is_none()),
            }
        }
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let plan = tiny_life_plan(ScalingKind::Strong, vec![12], vec![1, 2]);
        let result = run_experiment(&plan).unwrap();
        let svg = format_svg(&result);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<path"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
