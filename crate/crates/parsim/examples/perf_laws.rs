//! Closed-form performance laws: Amdahl and Gustafson speedup sweeps,
//! LogP message-burst costs, and BSP superstep costs.
//!
//! ```bash
//! cargo run --example perf_laws
//! ```

use parsim::perfmodel::{
    amdahl_speedup, bsp_superstep_cost, gustafson_speedup, logp_cost, measured_speedup,
    AmdahlInput, BspSuperstep, LogPParams, RunRecord,
};

fn main() {
    println!("Amdahl vs Gustafson, serial fraction f = 0.1");
    println!("{:>6} {:>12} {:>12}", "p", "amdahl", "gustafson");
    for p in [1u64, 2, 4, 8, 16, 64, 1024, 1_000_000] {
        let a = amdahl_speedup(AmdahlInput { serial_fraction: 0.1, processors: p }).unwrap();
        let g = gustafson_speedup(0.1, p).unwrap();
        println!("{p:>6} {a:>12.4} {g:>12.4}");
    }
    println!("(Amdahl converges to 1/f = 10; Gustafson keeps growing with the problem.)");

    println!("\nLogP: L=5, o=2, g=4 (time until the k-th back-to-back message lands)");
    println!("{:>6} {:>8}", "k", "time");
    let params = LogPParams { latency: 5.0, overhead: 2.0, gap: 4.0, processors: 8 };
    for k in [1u64, 2, 3, 8, 32] {
        println!("{k:>6} {:>8}", logp_cost(params, k).unwrap());
    }

    println!("\nBSP superstep: w=100, h=10, g=2, l=50");
    let step = BspSuperstep {
        max_local_work: 100.0,
        max_fanout: 10,
        per_message_gap: 2.0,
        barrier_cost: 50.0,
    };
    println!("cost = {}", bsp_superstep_cost(step).unwrap());

    println!("\nMeasured run: T1=120s, three parallel samples on p=4");
    let record = RunRecord::with_samples(120.0, vec![41.0, 39.5, 40.1], 4);
    let report = measured_speedup(&record).unwrap();
    println!(
        "Tp = {:.3} +/- {:.3}s   S_p = {:.3}   E_p = {:.3}",
        report.mean_parallel_time,
        report.stddev_parallel_time,
        report.speedup,
        report.efficiency
    );
}
