//! A strong-scaling experiment through the harness: repeated timed runs
//! of the automaton over several worker counts, aggregated into
//! speedup/efficiency, written as CSV, plot columns, and an SVG chart.
//!
//! ```bash
//! cargo run --example scaling_experiment
//! ```

use parsim::harness::{
    format_csv, format_plot_data, run_experiment, write_svg, ExperimentPlan, ScalingKind, Workload,
};

fn main() {
    let plan = ExperimentPlan {
        kind: ScalingKind::Strong,
        workload: Workload::Life { density: 0.49, steps: 60 },
        sizes: vec![512],
        proc_counts: vec![1, 2, 4],
        repeats: 3,
        seed: 7,
    };
    println!("strong scaling: life 512x512, 60 steps, p in {{1, 2, 4}}, 3 repeats each\n");
    let result = run_experiment(&plan).expect("experiment runs");

    println!("{:>4} {:>12} {:>12} {:>9} {:>9}", "p", "mean_s", "stddev_s", "speedup", "eff");
    let mut aggregates = result.aggregates.clone();
    aggregates.sort_by_key(|a| (a.size, a.p));
    for agg in &aggregates {
        println!(
            "{:>4} {:>12.4} {:>12.4} {:>9.3} {:>9.3}",
            agg.p,
            agg.mean,
            agg.stddev,
            agg.speedup.unwrap_or(f64::NAN),
            agg.efficiency.unwrap_or(f64::NAN),
        );
    }

    let out_dir = std::env::temp_dir().join("parsim_scaling_example");
    std::fs::create_dir_all(&out_dir).expect("create output directory");
    let csv_path = out_dir.join("strong_life.csv");
    std::fs::write(&csv_path, format_csv(&result)).expect("write csv");
    let plot_path = out_dir.join("strong_life.plot");
    std::fs::write(&plot_path, format_plot_data(&result)).expect("write plot data");
    let svg_path = out_dir.join("strong_life.svg");
    write_svg(&result, &svg_path).expect("write svg");

    println!("\nwrote {}", csv_path.display());
    println!("wrote {}", plot_path.display());
    println!("wrote {}", svg_path.display());
    println!("\n(reload the CSV later with `parsim report --input {}`)", csv_path.display());
}
