//! Command-line front door. The binary in `src/main.rs` is a thin shim
//! over [`run`].
//!
//! Exit codes: 0 success, 2 usage errors (from argument parsing),
//! 3 validation errors (bad config, network, or plan), 4 workload
//! failures.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::actor::ExecMode;
use crate::harness::{
    self, ExperimentPlan, ExperimentResult, ScalingKind, Workload,
};
use crate::life::{self, LifeConfig, LifeMode};
use crate::network::{self, RoadNetwork};
use crate::perfmodel::{
    amdahl_speedup, bsp_superstep_cost, gustafson_speedup, logp_cost, partition_indices,
    AmdahlInput, BspSuperstep, LogPParams, PartitionStrategy,
};
use crate::traffic::{self, TrafficConfig, TrafficSim, TrafficSimOptions};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_WORKLOAD: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "parsim", version, about = "Message-passing simulation workbench")]
pub struct Cli {
    /// Flat key=value config file with traffic simulation parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root RNG seed (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primary output path (stats CSV, grid file, or experiment CSV).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Repeats per experiment cell.
    #[arg(long, global = true)]
    pub repeats: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Road traffic simulation.
    Traffic {
        #[command(subcommand)]
        cmd: TrafficCmd,
    },
    /// Cellular automaton benchmark.
    Life {
        #[command(subcommand)]
        cmd: LifeCmd,
    },
    /// Scaling experiments over processor counts or problem sizes.
    Scale {
        #[command(subcommand)]
        cmd: ScaleCmd,
    },
    /// Closed-form performance-law calculators.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Re-render the aggregate table and plot data from an experiment CSV.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum TrafficCmd {
    /// Run one simulation and write the final statistics CSV.
    Run(TrafficRunArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("net").required(true).args(["network", "synthetic"]))]
pub struct TrafficRunArgs {
    /// Road network file.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Generate a synthetic ring-with-chords network: "junctions,chords".
    #[arg(long, value_parser = parse_pair)]
    pub synthetic: Option<(u32, u32)>,
    /// Simulated minutes (overrides the config file).
    #[arg(long)]
    pub minutes: Option<u64>,
    /// Vehicles spawned per minute (overrides the config file).
    #[arg(long)]
    pub spawn_per_minute: Option<u32>,
    /// Shards for actor placement.
    #[arg(long, default_value_t = 1)]
    pub shards: u32,
    /// Execution mode.
    #[arg(long, default_value = "deterministic", value_parser = parse_exec_mode)]
    pub mode: ExecMode,
    /// Suppress progress summaries.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum LifeCmd {
    /// Run the automaton and optionally write the final grid.
    Run(LifeRunArgs),
}

#[derive(Debug, Args)]
pub struct LifeRunArgs {
    /// Grid side length.
    #[arg(long = "L")]
    pub size: usize,
    /// Initial live density in [0, 1].
    #[arg(long, default_value_t = 0.49)]
    pub rho: f64,
    /// Maximum number of steps.
    #[arg(long, default_value_t = 100)]
    pub maxstep: u64,
    /// Print a progress line every this many steps.
    #[arg(long, default_value_t = 10)]
    pub printfreq: u64,
    /// Process grid, e.g. 2x2 (parallel mode).
    #[arg(long, default_value = "1x1", value_parser = parse_dims)]
    pub dims: (usize, usize),
    /// serial or parallel.
    #[arg(long, default_value = "serial", value_parser = parse_life_mode)]
    pub mode: LifeMode,
}

#[derive(Debug, Subcommand)]
pub enum ScaleCmd {
    /// Fixed problem size, varying processor count.
    Strong(ScaleArgs),
    /// Fixed processor count, varying problem size.
    Weak(ScaleArgs),
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    /// Workload: life or traffic.
    #[arg(long, default_value = "life")]
    pub workload: String,
    /// Problem sizes (life: grid side; traffic: simulated minutes).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<u64>,
    /// Processor counts (life: workers; traffic: shards).
    #[arg(long, value_delimiter = ',', required = true)]
    pub procs: Vec<u32>,
    /// Life workload: initial density.
    #[arg(long, default_value_t = 0.49)]
    pub rho: f64,
    /// Life workload: steps per run.
    #[arg(long, default_value_t = 100)]
    pub steps: u64,
    /// Traffic workload: road network file.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Traffic workload: synthetic network "junctions,chords"
    /// (default 20,20 when no network file is given).
    #[arg(long, value_parser = parse_pair)]
    pub synthetic: Option<(u32, u32)>,
    /// Also write plot-ready columns here.
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
    /// Also write a self-contained SVG chart here.
    #[arg(long)]
    pub svg_out: Option<PathBuf>,
    /// Include a median column in the printed table.
    #[arg(long)]
    pub median: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Experiment CSV produced by `scale`.
    #[arg(long)]
    pub input: PathBuf,
    /// Also write a self-contained SVG chart here.
    #[arg(long)]
    pub svg_out: Option<PathBuf>,
    /// Include a median column in the printed table.
    #[arg(long)]
    pub median: bool,
}

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    /// Amdahl's law speedup over a processor sweep.
    Amdahl {
        #[arg(long)]
        f: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
    },
    /// Gustafson's scaled speedup over a processor sweep.
    Gustafson {
        #[arg(long)]
        f: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
    },
    /// LogP time for a burst of k messages.
    Logp {
        /// Latency.
        #[arg(long)]
        l: f64,
        /// Per-message overhead.
        #[arg(long)]
        o: f64,
        /// Inter-message gap.
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// BSP superstep cost w + g*h + l.
    Bsp {
        /// Max local work.
        #[arg(long)]
        w: f64,
        /// Max fan-out (messages).
        #[arg(long)]
        h: u64,
        /// Per-message gap.
        #[arg(long)]
        g: f64,
        /// Barrier cost.
        #[arg(long)]
        l: f64,
    },
    /// Index-to-owner assignment under a distribution strategy.
    Partition {
        #[arg(long)]
        strategy: PartitionStrategy,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Block size (block_cyclic only).
        #[arg(long, default_value_t = 1)]
        b: usize,
    },
}

impl clap::ValueEnum for PartitionStrategy {
    fn value_variants<'a>() -> &'a [Self] {
        &[PartitionStrategy::Block, PartitionStrategy::Cyclic, PartitionStrategy::BlockCyclic]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (rows, cols) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got '{s}'"))?;
    let rows = rows.trim().parse().map_err(|_| format!("bad row count '{rows}'"))?;
    let cols = cols.trim().parse().map_err(|_| format!("bad column count '{cols}'"))?;
    Ok((rows, cols))
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'J,C', got '{s}'"))?;
    let a = a.trim().parse().map_err(|_| format!("bad junction count '{a}'"))?;
    let b = b.trim().parse().map_err(|_| format!("bad chord count '{b}'"))?;
    Ok((a, b))
}

fn parse_exec_mode(s: &str) -> Result<ExecMode, String> {
    match s {
        "deterministic" => Ok(ExecMode::Deterministic),
        "parallel" => Ok(ExecMode::Parallel),
        other => Err(format!("unknown mode '{other}' (expected deterministic or parallel)")),
    }
}

fn parse_life_mode(s: &str) -> Result<LifeMode, String> {
    s.parse()
}

/// A failure with an exit code and a message for stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: message.into() }
    }

    fn workload(message: impl Into<String>) -> Self {
        Self { code: EXIT_WORKLOAD, message: message.into() }
    }
}

/// Executes a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

fn load_traffic_config(cli: &Cli) -> Result<TrafficConfig, CliError> {
    let mut cfg = TrafficConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_file(&text).map_err(|e| CliError::validation(e.to_string()))?;
    }
    if let Some(seed) = cli.seed {
        cfg.rng_seed = seed;
    }
    Ok(cfg)
}

fn load_network(
    file: Option<&Path>,
    synthetic: Option<(u32, u32)>,
    seed: u64,
) -> Result<RoadNetwork, CliError> {
    match (file, synthetic) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
            network::parse_network(&text).map_err(|e| CliError::validation(e.to_string()))
        }
        (None, Some((junctions, chords))) => {
            if junctions < 2 {
                return Err(CliError::validation("a synthetic network needs at least 2 junctions"));
            }
            Ok(network::synthetic_network(junctions, chords, seed))
        }
        (None, None) => Ok(network::synthetic_network(20, 20, seed)),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Traffic { cmd: TrafficCmd::Run(args) } => run_traffic(&cli, args),
        Command::Life { cmd: LifeCmd::Run(args) } => run_life_cmd(&cli, args),
        Command::Scale { cmd } => {
            let (kind, args) = match cmd {
                ScaleCmd::Strong(args) => (ScalingKind::Strong, args),
                ScaleCmd::Weak(args) => (ScalingKind::Weak, args),
            };
            run_scale(&cli, kind, args)
        }
        Command::Model { cmd } => run_model(cmd),
        Command::Report(args) => run_report(&cli, args),
    }
}

fn run_traffic(cli: &Cli, args: &TrafficRunArgs) -> Result<(), CliError> {
    if args.shards == 0 {
        return Err(CliError::validation("--shards must be at least 1"));
    }
    let mut cfg = load_traffic_config(cli)?;
    if let Some(minutes) = args.minutes {
        cfg.max_minutes = minutes;
    }
    if let Some(spawn) = args.spawn_per_minute {
        cfg.spawn_per_minute = spawn;
    }
    let net = load_network(args.network.as_deref(), args.synthetic, cfg.rng_seed)?;
    let opts = TrafficSimOptions { shard_count: args.shards, mode: args.mode, quiet: args.quiet };
    let mut sim =
        TrafficSim::new(net, cfg, opts).map_err(|e| CliError::validation(e.to_string()))?;
    let outcome = sim.run().map_err(|e| CliError::workload(e.to_string()))?;

    let stats_path = cli.out.clone().unwrap_or_else(|| PathBuf::from("traffic_stats.csv"));
    traffic::write_final_stats(&outcome.stats, &stats_path)
        .map_err(|e| CliError::workload(format!("writing {}: {e}", stats_path.display())))?;
    let rs = &outcome.run_stats;
    println!(
        "[run] rounds={} sent={} delivered={} dropped={} in_flight={} elapsed={:.3}s",
        rs.rounds,
        rs.sent,
        rs.delivered,
        rs.dropped,
        rs.in_flight_at_shutdown,
        outcome.elapsed.as_secs_f64()
    );
    println!("wrote {}", stats_path.display());
    Ok(())
}

fn run_life_cmd(cli: &Cli, args: &LifeRunArgs) -> Result<(), CliError> {
    let cfg = LifeConfig {
        size: args.size,
        density: args.rho,
        seed: cli.seed.unwrap_or(0),
        max_steps: args.maxstep,
        print_every: args.printfreq,
        dims: args.dims,
    };
    cfg.validate(args.mode).map_err(|e| CliError::validation(e.to_string()))?;
    let run = life::run_life(&cfg, args.mode, false).map_err(|e| CliError::workload(e.to_string()))?;
    println!(
        "steps={} initial_live={} final_live={} avg_step={:.6}s",
        run.steps_executed,
        run.initial_live,
        run.history.last().copied().unwrap_or(run.initial_live),
        run.avg_step_seconds
    );
    if let Some(out) = &cli.out {
        life::write_grid(out, args.size, &run.final_cells)
            .map_err(|e| CliError::workload(format!("writing {}: {e}", out.display())))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn run_scale(cli: &Cli, kind: ScalingKind, args: &ScaleArgs) -> Result<(), CliError> {
    let workload = match args.workload.as_str() {
        "life" => Workload::Life { density: args.rho, steps: args.steps },
        "traffic" => {
            let cfg = load_traffic_config(cli)?;
            let net = load_network(args.network.as_deref(), args.synthetic, cfg.rng_seed)?;
            Workload::Traffic { net, base: Box::new(cfg) }
        }
        other => return Err(CliError::validation(format!("unknown workload '{other}'"))),
    };
    let plan = ExperimentPlan {
        kind,
        workload,
        sizes: args.sizes.clone(),
        proc_counts: args.procs.clone(),
        repeats: cli.repeats.unwrap_or(10),
        seed: cli.seed.unwrap_or(0),
    };
    plan.validate().map_err(|e| CliError::validation(e.to_string()))?;

    let result = harness::run_experiment(&plan).map_err(|e| CliError::workload(e.to_string()))?;
    print_aggregate_table(&result, args.median);

    let csv_path = cli.out.clone().unwrap_or_else(|| PathBuf::from("scale_results.csv"));
    harness::write_csv(&result, &csv_path)
        .map_err(|e| CliError::workload(format!("writing {}: {e}", csv_path.display())))?;
    println!("wrote {}", csv_path.display());
    if let Some(plot) = &args.plot_out {
        harness::write_plot_data(&result, plot)
            .map_err(|e| CliError::workload(format!("writing {}: {e}", plot.display())))?;
        println!("wrote {}", plot.display());
    }
    if let Some(svg) = &args.svg_out {
        harness::write_svg(&result, svg)
            .map_err(|e| CliError::workload(format!("writing {}: {e}", svg.display())))?;
        println!("wrote {}", svg.display());
    }

    if result.rows.iter().all(|r| !r.status.is_ok()) {
        return Err(CliError::workload("every experiment cell failed"));
    }
    Ok(())
}

fn print_aggregate_table(result: &ExperimentResult, with_median: bool) {
    println!("workload={} kind={}", result.workload, result.kind.name());
    let median_header = if with_median { format!(" {:>12}", "median_s") } else { String::new() };
    println!(
        "{:>10} {:>6} {:>12} {:>12}{median_header} {:>10} {:>10}",
        "size", "p", "mean_s", "stddev_s", "speedup", "eff"
    );
    let mut aggregates = result.aggregates.clone();
    aggregates.sort_by_key(|a| (a.size, a.p));
    for agg in aggregates {
        let median_cell = if with_median {
            let samples: Vec<f64> = result
                .rows
                .iter()
                .filter(|r| r.size == agg.size && r.p == agg.p && r.status.is_ok())
                .map(|r| r.seconds)
                .collect();
            format!(" {:>12.6}", crate::perfmodel::median(&samples))
        } else {
            String::new()
        };
        println!(
            "{:>10} {:>6} {:>12.6} {:>12.6}{median_cell} {:>10} {:>10}",
            agg.size,
            agg.p,
            agg.mean,
            agg.stddev,
            agg.speedup.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
            agg.efficiency.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
        );
    }
}

fn run_model(cmd: &ModelCmd) -> Result<(), CliError> {
    match cmd {
        ModelCmd::Amdahl { f, p } => {
            println!("{:>8} {:>12}", "p", "speedup");
            for &procs in p {
                let s = amdahl_speedup(AmdahlInput { serial_fraction: *f, processors: procs })
                    .map_err(|e| CliError::validation(e.to_string()))?;
                println!("{procs:>8} {s:>12.6}");
            }
        }
        ModelCmd::Gustafson { f, p } => {
            println!("{:>8} {:>12}", "p", "speedup");
            for &procs in p {
                let s = gustafson_speedup(*f, procs)
                    .map_err(|e| CliError::validation(e.to_string()))?;
                println!("{procs:>8} {s:>12.6}");
            }
        }
        ModelCmd::Logp { l, o, g, k } => {
            let params = LogPParams { latency: *l, overhead: *o, gap: *g, processors: 1 };
            let cost = logp_cost(params, *k).map_err(|e| CliError::validation(e.to_string()))?;
            println!("{cost}");
        }
        ModelCmd::Bsp { w, h, g, l } => {
            let step = BspSuperstep {
                max_local_work: *w,
                max_fanout: *h,
                per_message_gap: *g,
                barrier_cost: *l,
            };
            let cost = bsp_superstep_cost(step).map_err(|e| CliError::validation(e.to_string()))?;
            println!("{cost}");
        }
        ModelCmd::Partition { strategy, n, p, b } => {
            let owners = partition_indices(*strategy, *n, *p, *b)
                .map_err(|e| CliError::validation(e.to_string()))?;
            let text: Vec<String> = owners.iter().map(|o| o.to_string()).collect();
            println!("[{}]", text.join(","));
        }
    }
    Ok(())
}

fn run_report(cli: &Cli, args: &ReportArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", args.input.display())))?;
    let result = harness::parse_csv(&text).map_err(|e| CliError::validation(e.to_string()))?;
    print_aggregate_table(&result, args.median);
    let plot_path = cli
        .out
        .clone()
        .unwrap_or_else(|| args.input.with_extension("plot.txt"));
    harness::write_plot_data(&result, &plot_path)
        .map_err(|e| CliError::workload(format!("writing {}: {e}", plot_path.display())))?;
    println!("wrote {}", plot_path.display());
    if let Some(svg) = &args.svg_out {
        harness::write_svg(&result, svg)
            .map_err(|e| CliError::workload(format!("writing {}: {e}", svg.display())))?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}
