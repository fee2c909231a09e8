//! The road traffic simulation: vehicle classes and state, simulation
//! configuration, statistics accounting, and the actor behaviors that
//! implement junctions, vehicles, and the coordinating director.

mod actors;
mod sim;

pub use actors::{DirectorActor, JunctionActor, VehicleActor};
pub use sim::{RunOutcome, TrafficSim, TrafficSimOptions};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::actor::ActorId;
use crate::network::{CongestionParams, JunctionId, RoadId, Route};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown config key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for '{key}': '{value}'")]
    InvalidValue { line: usize, key: String, value: String },
    #[error("config invariant violated: {0}")]
    Invariant(String),
}

/// The six vehicle classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VehicleClass {
    Car,
    Bus,
    MiniBus,
    Coach,
    Motorbike,
    Bike,
}

pub const VEHICLE_CLASSES: [VehicleClass; 6] = [
    VehicleClass::Car,
    VehicleClass::Bus,
    VehicleClass::MiniBus,
    VehicleClass::Coach,
    VehicleClass::Motorbike,
    VehicleClass::Bike,
];

impl VehicleClass {
    pub fn name(&self) -> &'static str {
        match self {
            VehicleClass::Car => "car",
            VehicleClass::Bus => "bus",
            VehicleClass::MiniBus => "mini_bus",
            VehicleClass::Coach => "coach",
            VehicleClass::Motorbike => "motorbike",
            VehicleClass::Bike => "bike",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        VEHICLE_CLASSES.iter().copied().find(|c| c.name() == name)
    }
}

/// Per-class capabilities: maximum speed (m/s) and passenger capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSpec {
    pub max_speed: f64,
    pub max_passengers: u32,
}

/// Capability table for all six classes, indexable by [`VehicleClass`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTable {
    specs: [ClassSpec; 6],
}

impl Default for ClassTable {
    fn default() -> Self {
        Self {
            specs: [
                ClassSpec { max_speed: 33.0, max_passengers: 5 },  // car
                ClassSpec { max_speed: 25.0, max_passengers: 80 }, // bus
                ClassSpec { max_speed: 30.0, max_passengers: 16 }, // mini_bus
                ClassSpec { max_speed: 27.0, max_passengers: 50 }, // coach
                ClassSpec { max_speed: 38.0, max_passengers: 2 },  // motorbike
                ClassSpec { max_speed: 8.0, max_passengers: 1 },   // bike
            ],
        }
    }
}

impl ClassTable {
    pub fn spec(&self, class: VehicleClass) -> ClassSpec {
        self.specs[class as usize]
    }

    pub fn spec_mut(&mut self, class: VehicleClass) -> &mut ClassSpec {
        &mut self.specs[class as usize]
    }
}

/// Simulation parameters. Everything here can be set from a flat
/// `key = value` config file; CLI flags override file values.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficConfig {
    /// Simulated minutes before termination.
    pub max_minutes: u64,
    /// Seconds advanced per tick. The simulated minute is always 60 ticks.
    pub tick_seconds: f64,
    pub summary_every_minutes: u64,
    pub spawn_per_minute: u32,
    /// Draw the per-minute spawn count from a Poisson distribution with
    /// mean `spawn_per_minute` instead of using it as a fixed count.
    pub spawn_poisson: bool,
    /// Fuel endowment range in seconds, inclusive.
    pub fuel_min: u64,
    pub fuel_max: u64,
    /// Crash hazard coefficient: per second, per co-located vehicle.
    pub crash_beta: f64,
    pub congestion: CongestionParams,
    pub rng_seed: u64,
    pub classes: ClassTable,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            max_minutes: 30,
            tick_seconds: 1.0,
            summary_every_minutes: 10,
            spawn_per_minute: 10,
            spawn_poisson: false,
            fuel_min: 600,
            fuel_max: 3600,
            crash_beta: 0.0005,
            congestion: CongestionParams::default(),
            rng_seed: 0,
            classes: ClassTable::default(),
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        // max_minutes = 0 is legal: the run terminates immediately.
        if self.tick_seconds.is_nan() || self.tick_seconds <= 0.0 {
            return Err(ConfigError::Invariant("tick_seconds must be positive".into()));
        }
        if self.summary_every_minutes == 0 {
            return Err(ConfigError::Invariant("summary_every_minutes must be positive".into()));
        }
        if self.fuel_min > self.fuel_max {
            return Err(ConfigError::Invariant("fuel_min must not exceed fuel_max".into()));
        }
        if self.crash_beta.is_nan() || self.crash_beta < 0.0 {
            return Err(ConfigError::Invariant("crash_beta must be non-negative".into()));
        }
        let alpha_bad = self.congestion.alpha.is_nan() || self.congestion.alpha < 0.0;
        let floor_bad = self.congestion.v_floor.is_nan() || self.congestion.v_floor <= 0.0;
        if alpha_bad || floor_bad {
            return Err(ConfigError::Invariant(
                "congestion alpha must be non-negative and v_floor positive".into(),
            ));
        }
        for class in VEHICLE_CLASSES {
            let spec = self.classes.spec(class);
            if spec.max_speed.is_nan() || spec.max_speed <= 0.0 || spec.max_passengers == 0 {
                return Err(ConfigError::Invariant(format!(
                    "vehicle class {} must have positive speed and capacity",
                    class.name()
                )));
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines from a config file on top of `self`.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, text: content.to_string() })?;
            let key = key.trim();
            let value = value.trim();
            self.apply_key(line, key, value)?;
        }
        self.validate()
    }

    fn apply_key(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::InvalidValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "max_minutes" => self.max_minutes = parse(line, key, value)?,
            "tick_seconds" => self.tick_seconds = parse(line, key, value)?,
            "summary_every_minutes" => self.summary_every_minutes = parse(line, key, value)?,
            "spawn_per_minute" => self.spawn_per_minute = parse(line, key, value)?,
            "spawn_poisson" => self.spawn_poisson = parse(line, key, value)?,
            "fuel_min" => self.fuel_min = parse(line, key, value)?,
            "fuel_max" => self.fuel_max = parse(line, key, value)?,
            "crash_beta" => self.crash_beta = parse(line, key, value)?,
            "congestion_alpha" => self.congestion.alpha = parse(line, key, value)?,
            "v_floor" => self.congestion.v_floor = parse(line, key, value)?,
            "rng_seed" => self.rng_seed = parse(line, key, value)?,
            _ => {
                if let Some(rest) = key.strip_prefix("class.") {
                    let (class_name, attr) = rest.split_once('.').ok_or_else(|| {
                        ConfigError::UnknownKey { line, key: key.to_string() }
                    })?;
                    let class = VehicleClass::from_name(class_name).ok_or_else(|| {
                        ConfigError::UnknownKey { line, key: key.to_string() }
                    })?;
                    match attr {
                        "max_speed" => self.classes.spec_mut(class).max_speed = parse(line, key, value)?,
                        "max_passengers" => {
                            self.classes.spec_mut(class).max_passengers = parse(line, key, value)?
                        }
                        _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
                    }
                } else {
                    return Err(ConfigError::UnknownKey { line, key: key.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// Mobile vehicle state. Owned by the vehicle actor while on a road and
/// by the junction's waiting queue between roads; it moves between them
/// inside messages.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub id: ActorId,
    pub class: VehicleClass,
    pub passengers: u32,
    /// Remaining fuel in seconds of running time, moving or waiting.
    pub fuel: f64,
    pub source: JunctionId,
    pub destination: JunctionId,
    pub route: Option<Route>,
    pub current_road: Option<RoadId>,
    /// Metres along the current road.
    pub position: f64,
    /// Locked in at road entry; never re-read mid-road.
    pub speed: f64,
}

/// Counter deltas reported to the director as events happen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatsDelta {
    pub delivered_vehicles: u64,
    pub delivered_passengers: u64,
    pub stranded_passengers: u64,
    pub crashes: u64,
    pub fuel_exhausted: u64,
    pub replan_dead_ends: u64,
}

/// Final per-road row reported by the owning junction at shutdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoadUsage {
    pub road: RoadId,
    pub from: JunctionId,
    pub to: JunctionId,
    pub vehicles_total: u64,
    pub max_concurrent: u32,
}

/// Payload of a `StatsReport` message.
#[derive(Debug, Clone, PartialEq)]
pub enum StatsBody {
    Delta(StatsDelta),
    JunctionFinal {
        junction: JunctionId,
        crashes: u64,
        vehicles_passed: u64,
        roads: Vec<RoadUsage>,
    },
}

/// Per-junction row of the final statistics table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JunctionUsage {
    pub crashes: u64,
    pub vehicles_passed: u64,
}

/// Aggregate simulation statistics, owned by the director. All counters
/// are monotone non-decreasing over a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimStats {
    pub sim_minutes: u64,
    pub vehicles_added: u64,
    pub spawn_failures: u64,
    pub vehicles_delivered: u64,
    pub passengers_delivered: u64,
    pub passengers_stranded: u64,
    pub crashes: u64,
    pub fuel_exhausted: u64,
    pub replan_dead_ends: u64,
    /// Vehicles currently alive (spawned, not yet removed).
    pub active_vehicles: u64,
    /// Passengers aboard active vehicles.
    pub passengers_aboard: u64,
    pub passengers_created: u64,
    pub per_junction: BTreeMap<JunctionId, JunctionUsage>,
    pub per_road: BTreeMap<RoadId, RoadUsage>,
}

impl SimStats {
    pub fn absorb_delta(&mut self, delta: &StatsDelta) {
        self.vehicles_delivered += delta.delivered_vehicles;
        self.passengers_delivered += delta.delivered_passengers;
        self.passengers_stranded += delta.stranded_passengers;
        self.crashes += delta.crashes;
        self.fuel_exhausted += delta.fuel_exhausted;
        self.replan_dead_ends += delta.replan_dead_ends;
        let removed = delta.delivered_vehicles + delta.crashes + delta.fuel_exhausted + delta.replan_dead_ends;
        self.active_vehicles -= removed;
        self.passengers_aboard -= delta.delivered_passengers + delta.stranded_passengers;
    }

    /// Vehicle conservation: every spawned vehicle is active or accounted
    /// for by exactly one removal cause.
    pub fn vehicles_conserved(&self) -> bool {
        self.vehicles_added
            == self.active_vehicles
                + self.vehicles_delivered
                + self.crashes
                + self.fuel_exhausted
                + self.replan_dead_ends
    }

    /// Passenger conservation: delivered + stranded + aboard = created.
    pub fn passengers_conserved(&self) -> bool {
        self.passengers_created
            == self.passengers_delivered + self.passengers_stranded + self.passengers_aboard
    }
}

/// Formats one progress summary block.
pub fn emit_summary(stats: &SimStats, minute: u64) -> String {
    format!(
        "[minute={}] added={} delivered={} stranded={} crashes={} no_fuel={}",
        minute,
        stats.vehicles_added,
        stats.passengers_delivered,
        stats.passengers_stranded,
        stats.crashes,
        stats.fuel_exhausted,
    )
}

/// Formats the final statistics CSV: one row per junction, then one row
/// per road, in id order. Deterministic runs produce byte-identical text.
pub fn format_final_stats(stats: &SimStats) -> String {
    let mut out = String::from("kind,id_a,id_b,metric1,metric2\n");
    for (junction, usage) in &stats.per_junction {
        let _ = writeln!(out, "junction,{},,{},{}", junction, usage.crashes, usage.vehicles_passed);
    }
    for usage in stats.per_road.values() {
        let _ = writeln!(
            out,
            "road,{},{},{},{}",
            usage.from, usage.to, usage.vehicles_total, usage.max_concurrent
        );
    }
    out
}

pub fn write_final_stats(stats: &SimStats, path: &std::path::Path) -> std::io::Result<()> {
    std::fs::write(path, format_final_stats(stats))
}

/// Crash hazard for one vehicle among `k` co-located vehicles over `dt`
/// seconds: `min(1, beta * (k - 1) * dt)`. A lone vehicle never crashes.
pub fn crash_probability(beta: f64, k: u32, dt: f64) -> f64 {
    (beta * k.saturating_sub(1) as f64 * dt).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        TrafficConfig::default().validate().unwrap();
    }

    #[test]
    fn config_file_overrides_defaults() {
        let mut cfg = TrafficConfig::default();
        cfg.apply_file(
            "# comment\nmax_minutes = 5\nspawn_per_minute = 3\ncrash_beta = 0.01\n\
             congestion_alpha = 0.2\nclass.bike.max_speed = 9.5\nrng_seed = 99\n",
        )
        .unwrap();
        assert_eq!(cfg.max_minutes, 5);
        assert_eq!(cfg.spawn_per_minute, 3);
        assert_eq!(cfg.crash_beta, 0.01);
        assert_eq!(cfg.congestion.alpha, 0.2);
        assert_eq!(cfg.classes.spec(VehicleClass::Bike).max_speed, 9.5);
        assert_eq!(cfg.rng_seed, 99);
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        let mut cfg = TrafficConfig::default();
        assert_eq!(
            cfg.apply_file("no_such_key = 1\n"),
            Err(ConfigError::UnknownKey { line: 1, key: "no_such_key".into() })
        );
        let mut cfg = TrafficConfig::default();
        assert!(matches!(
            cfg.apply_file("max_minutes = banana\n"),
            Err(ConfigError::InvalidValue { line: 1, .. })
        ));
        let mut cfg = TrafficConfig::default();
        assert!(matches!(
            cfg.apply_file("fuel_min = 100\nfuel_max = 50\n"),
            Err(ConfigError::Invariant(_))
        ));
    }

    #[test]
    fn class_table_has_six_positive_classes() {
        let table = ClassTable::default();
        assert_eq!(VEHICLE_CLASSES.len(), 6);
        for class in VEHICLE_CLASSES {
            let spec = table.spec(class);
            assert!(spec.max_speed > 0.0);
            assert!(spec.max_passengers > 0);
        }
    }

    #[test]
    fn crash_probability_examples() {
        // A lone vehicle (or an empty junction) never crashes.
        assert_eq!(crash_probability(0.001, 0, 1.0), 0.0);
        assert_eq!(crash_probability(0.001, 1, 1.0), 0.0);
        // Hand evaluation: 0.001 * (11 - 1) * 1 = 0.01.
        assert_eq!(crash_probability(0.001, 11, 1.0), 0.01);
        // Saturates at 1.
        assert_eq!(crash_probability(1.0, 1000, 1.0), 1.0);
        // Monotone non-decreasing in k.
        let mut last = 0.0;
        for k in 0..=1000 {
            let p = crash_probability(0.0005, k, 1.0);
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn summary_format_is_exact() {
        let mut stats = SimStats::default();
        assert_eq!(
            emit_summary(&stats, 0),
            "[minute=0] added=0 delivered=0 stranded=0 crashes=0 no_fuel=0"
        );
        stats.vehicles_added = 12;
        stats.passengers_delivered = 3;
        stats.passengers_stranded = 4;
        stats.crashes = 1;
        stats.fuel_exhausted = 2;
        assert_eq!(
            emit_summary(&stats, 10),
            "[minute=10] added=12 delivered=3 stranded=4 crashes=1 no_fuel=2"
        );
    }

    #[test]
    fn final_stats_csv_format() {
        let mut stats = SimStats::default();
        stats.per_junction.insert(2, JunctionUsage { crashes: 1, vehicles_passed: 7 });
        stats.per_junction.insert(0, JunctionUsage { crashes: 0, vehicles_passed: 3 });
        stats.per_road.insert(
            0,
            RoadUsage { road: 0, from: 0, to: 2, vehicles_total: 5, max_concurrent: 2 },
        );
        assert_eq!(
            format_final_stats(&stats),
            "kind,id_a,id_b,metric1,metric2\n\
             junction,0,,0,3\n\
             junction,2,,1,7\n\
             road,0,2,5,2\n"
        );
    }

    #[test]
    fn conservation_identities() {
        let mut stats = SimStats {
            vehicles_added: 5,
            active_vehicles: 5,
            passengers_created: 20,
            passengers_aboard: 20,
            ..SimStats::default()
        };
        assert!(stats.vehicles_conserved());
        assert!(stats.passengers_conserved());
        stats.absorb_delta(&StatsDelta {
            delivered_vehicles: 1,
            delivered_passengers: 4,
            ..StatsDelta::default()
        });
        stats.absorb_delta(&StatsDelta {
            crashes: 1,
            stranded_passengers: 3,
            ..StatsDelta::default()
        });
        assert!(stats.vehicles_conserved());
        assert!(stats.passengers_conserved());
        assert_eq!(stats.active_vehicles, 3);
        assert_eq!(stats.passengers_aboard, 13);
    }
}
