//! A small road-traffic simulation: a lighted grid-ish network, periodic
//! progress summaries, the final statistics table, and a determinism
//! check across shard counts.
//!
//! ```bash
//! cargo run --example traffic_small
//! ```

use parsim::actor::ExecMode;
use parsim::network::parse_network;
use parsim::traffic::{format_final_stats, TrafficConfig, TrafficSim, TrafficSimOptions};

const NETWORK: &str = "\
# Six junctions; 0 and 3 carry traffic lights.
junctions 6
0 1
1 0
2 0
3 1
4 0
5 0
roads 10
0 1 300 14
1 2 250 14
2 3 400 20
3 4 250 14
4 5 300 14
5 0 400 20
0 3 900 25
3 0 900 25
1 4 700 20
4 1 700 20
";

fn main() {
    let net = parse_network(NETWORK).expect("embedded network is well-formed");
    let cfg = TrafficConfig {
        max_minutes: 20,
        spawn_per_minute: 6,
        summary_every_minutes: 5,
        rng_seed: 2024,
        ..TrafficConfig::default()
    };

    println!("running 20 simulated minutes, 6 vehicles per minute\n");
    let opts = TrafficSimOptions { shard_count: 1, mode: ExecMode::Deterministic, quiet: false };
    let mut sim = TrafficSim::new(net.clone(), cfg.clone(), opts).expect("valid configuration");
    let outcome = sim.run().expect("run completes");

    println!("\nfinal statistics (per junction, then per road):");
    print!("{}", format_final_stats(&outcome.stats));
    println!(
        "\nvehicle books: added={} delivered={} crashed={} out-of-fuel={} still-active={}",
        outcome.stats.vehicles_added,
        outcome.stats.vehicles_delivered,
        outcome.stats.crashes,
        outcome.stats.fuel_exhausted,
        outcome.stats.active_vehicles,
    );
    assert!(outcome.stats.vehicles_conserved());
    assert!(outcome.stats.passengers_conserved());

    // The same seed replays byte-identically, whatever the shard count.
    for shards in [2, 4] {
        let opts = TrafficSimOptions { shard_count: shards, mode: ExecMode::Deterministic, quiet: true };
        let mut replay = TrafficSim::new(net.clone(), cfg.clone(), opts).unwrap();
        let replay_outcome = replay.run().unwrap();
        assert_eq!(replay_outcome.summary_text, outcome.summary_text);
        assert_eq!(
            format_final_stats(&replay_outcome.stats),
            format_final_stats(&outcome.stats)
        );
    }
    println!("\nreplay with 2 and 4 shards: byte-identical summaries and statistics");
}
