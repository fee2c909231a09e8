//! Data distribution strategies: how block, cyclic, and block-cyclic
//! assignments spread indices over owners.
//!
//! ```bash
//! cargo run --example partitioning
//! ```

use parsim::perfmodel::{partition_indices, PartitionStrategy};

fn render(owners: &[usize]) -> String {
    owners.iter().map(|o| char::from(b'A' + *o as u8)).collect()
}

fn main() {
    let n = 24;
    let p = 3;
    println!("{n} indices over {p} owners (A, B, C):\n");
    for (strategy, block) in [
        (PartitionStrategy::Block, 1),
        (PartitionStrategy::Cyclic, 1),
        (PartitionStrategy::BlockCyclic, 4),
    ] {
        let owners = partition_indices(strategy, n, p, block).unwrap();
        let label = if strategy == PartitionStrategy::BlockCyclic {
            format!("{} (b={block})", strategy.name())
        } else {
            strategy.name().to_string()
        };
        println!("{label:>18}  {}", render(&owners));
    }

    println!("\nblock with a remainder (n=10, p=3): the first owners take the extra");
    let owners = partition_indices(PartitionStrategy::Block, 10, 3, 1).unwrap();
    println!("{:>18}  {}  -> {owners:?}", "block", render(&owners));
}
