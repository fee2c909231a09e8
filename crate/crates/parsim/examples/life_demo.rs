//! The cellular automaton benchmark: serial against geometrically
//! decomposed parallel execution, showing bit-identical results and the
//! population-based early termination.
//!
//! ```bash
//! cargo run --example life_demo
//! ```

use parsim::life::{format_grid, run_life, LifeConfig, LifeMode};

fn main() {
    let cfg = LifeConfig {
        size: 48,
        density: 0.49,
        seed: 1234,
        max_steps: 200,
        print_every: u64::MAX,
        dims: (1, 1),
    };

    let serial = run_life(&cfg, LifeMode::Serial, true).expect("serial run");
    println!(
        "serial: initial_live={} steps={} final_live={}",
        serial.initial_live,
        serial.steps_executed,
        serial.history.last().copied().unwrap_or(serial.initial_live),
    );
    if (serial.steps_executed as usize) < 200 {
        println!(
            "terminated early: live count left the (0.75x, 1.33x) band of the initial population"
        );
    }

    for dims in [(2, 2), (4, 3), (6, 4)] {
        let parallel = run_life(&LifeConfig { dims, ..cfg.clone() }, LifeMode::Parallel, true)
            .expect("parallel run");
        let identical = parallel.final_cells == serial.final_cells
            && parallel.history == serial.history;
        println!(
            "parallel {}x{} workers: steps={} avg {:.1}us/step  bit-identical={}",
            dims.0,
            dims.1,
            parallel.steps_executed,
            parallel.avg_step_seconds * 1e6,
            identical,
        );
        assert!(identical);
    }

    // A corner of the final grid, in the output-file format.
    let full = format_grid(cfg.size, &serial.final_cells);
    println!("\nfinal grid corner (output-file format):");
    for line in full.lines().take(9) {
        println!("  {}", &line[..line.len().min(33)]);
    }
}
