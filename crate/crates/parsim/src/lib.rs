//! parsim: a message-passing simulation workbench.
//!
//! Three things live here, held together by a shared deterministic RNG
//! discipline and a scaling-experiment harness:
//!
//! * [`traffic`]: a road-traffic simulation built on a minimal actor
//!   runtime ([`actor`]): junctions, vehicles, traffic lights, crashes,
//!   fuel, and a coordinating director, all communicating through
//!   per-actor FIFO mailboxes with hash-based shard placement. The road
//!   graph model, file format, congestion law, and route planner are in
//!   [`network`].
//! * [`life`]: a cellular automaton benchmark (neighborhood sum in
//!   {2, 4, 5}, periodic boundaries) with a serial reference and a
//!   geometrically decomposed parallel mode using ghost-cell halo
//!   exchange; both produce bit-identical results.
//! * [`perfmodel`]: closed-form parallel performance laws (Amdahl,
//!   Gustafson, BSP, LogP), measured speedup/efficiency, and data
//!   partitioning strategies, used standalone and by the [`harness`]
//!   that runs strong/weak scaling experiments and writes CSV reports.
//!
//! Every stochastic choice draws from seeded SplitMix64 streams
//! ([`rng`]), so simulations replay bit-exactly across runs, platforms,
//! and shard counts.
//!
//! ```
//! use parsim::perfmodel::{amdahl_speedup, AmdahlInput};
//!
//! // A 10% serial fraction caps speedup at 10 no matter the core count.
//! let s = amdahl_speedup(AmdahlInput { serial_fraction: 0.1, processors: 64 }).unwrap();
//! assert!((s - 8.767).abs() < 1e-3);
//! ```
//!
//! The `parsim` binary exposes all of this as subcommands (`traffic run`,
//! `life run`, `scale strong|weak`, `model <law>`, `report`); the
//! `examples/` directory shows one runnable program per capability.

pub mod actor;
pub mod harness;
pub mod life;
pub mod network;
pub mod perfmodel;
pub mod rng;
pub mod traffic;

pub mod cli;
