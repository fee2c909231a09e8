//! Minimal actor runtime for the traffic simulation.
//!
//! Actors are identified by `(kind, serial)` pairs, communicate only
//! through tagged messages delivered to per-actor FIFO mailboxes, and are
//! placed onto shards by a stable FNV-1a hash of their id. A single
//! Director actor owns simulated time: it emits `Tick` every simulated
//! second and `MinuteElapsed` every 60 ticks, and decides when the run
//! shuts down. Actors never self-schedule time, and new actors enter the
//! system only through the director.
//!
//! No actor state is shared: each actor owns its state outright, state
//! crosses shard boundaries only inside messages, and the ownership
//! rules make any violation a compile error rather than a data race.
//!
//! The engine (see [`engine`]) executes in rounds, one round per tick.
//! Messages sent while processing round `t` are delivered in round
//! `t + 1`; within a round, delivery follows the total order
//! `(tick, recipient, sender, send_seq)`, which makes deterministic runs
//! replay exactly for any shard count.

pub mod engine;

pub use engine::{
    Director, DirectorCtx, EngineError, ExecMode, RunStats, Runtime, TickDirective, TraceEvent,
};

use std::collections::VecDeque;

use crate::network::RoadId;
use crate::rng::fnv1a64;
use crate::traffic::{StatsBody, VehicleState};

/// Actor kind. The discriminant doubles as the kind byte in the shard
/// hash encoding, so the order here is load-bearing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum ActorKind {
    Director = 0,
    Junction = 1,
    Road = 2,
    Vehicle = 3,
}

/// Unique actor identity for the lifetime of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActorId {
    pub kind: ActorKind,
    pub serial: u64,
}

impl ActorId {
    pub const fn new(kind: ActorKind, serial: u64) -> Self {
        Self { kind, serial }
    }

    pub const fn director() -> Self {
        Self::new(ActorKind::Director, 0)
    }

    /// Stable byte encoding: kind byte followed by the serial as eight
    /// little-endian bytes. Shard placement and per-actor RNG seeding
    /// both hash this encoding.
    pub fn encode(&self) -> [u8; 9] {
        let mut bytes = [0u8; 9];
        bytes[0] = self.kind as u8;
        bytes[1..].copy_from_slice(&self.serial.to_le_bytes());
        bytes
    }

    pub fn hash64(&self) -> u64 {
        fnv1a64(&self.encode())
    }
}

impl std::fmt::Display for ActorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            ActorKind::Director => "director",
            ActorKind::Junction => "junction",
            ActorKind::Road => "road",
            ActorKind::Vehicle => "vehicle",
        };
        write!(f, "{kind}#{}", self.serial)
    }
}

/// Shard index for an actor: `fnv1a64(kind byte || serial LE bytes) mod S`.
/// Pure and platform-independent, so placement is identical across runs.
pub fn shard_of(id: ActorId, shard_count: u32) -> u32 {
    assert!(shard_count >= 1, "shard_count must be at least 1");
    (id.hash64() % shard_count as u64) as u32
}

/// Stable actor-to-shard assignment for a fixed shard count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardMap {
    shard_count: u32,
}

impl ShardMap {
    pub fn new(shard_count: u32) -> Self {
        assert!(shard_count >= 1, "shard_count must be at least 1");
        Self { shard_count }
    }

    pub fn shard_count(&self) -> u32 {
        self.shard_count
    }

    pub fn assign(&self, id: ActorId) -> u32 {
        shard_of(id, self.shard_count)
    }
}

/// Simulation message. The payload shape is determined solely by the tag.
#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    /// One simulated second, emitted by the director.
    Tick { tick: u64 },
    /// A minute boundary; lighted junctions rotate on this.
    MinuteElapsed { minute: u64 },
    /// A vehicle standing at a junction asks to proceed toward its
    /// destination. Carries the vehicle state; `via_road` is the road the
    /// vehicle just finished, or `None` straight after spawning.
    RequestEntry { state: Box<VehicleState>, via_road: Option<RoadId> },
    /// The junction admits the vehicle onto `road` at the locked-in
    /// `speed`, returning its state.
    GrantEntry { state: Box<VehicleState>, road: RoadId, speed: f64 },
    /// A vehicle finished traversing `road`; sent to the junction that
    /// owns the road's occupancy counter.
    VehicleArrived { vehicle: ActorId, road: RoadId },
    /// Birth certificate from the director to a fresh vehicle actor.
    SpawnVehicle { state: Box<VehicleState> },
    /// The junction removed this waiting vehicle in a crash.
    Crash { vehicle: ActorId },
    /// Fuel ran out: junction-to-vehicle for queued vehicles, or
    /// vehicle-to-junction (with the road) for vehicles that died on a
    /// road the junction owns.
    FuelExhausted { vehicle: ActorId, road: Option<RoadId> },
    /// Statistics flowing to the director.
    StatsReport { body: Box<StatsBody> },
    /// End of life: broadcast by the director at termination, or sent to
    /// a single vehicle actor whose journey ended.
    Shutdown,
}

impl Message {
    pub fn tag(&self) -> &'static str {
        match self {
            Message::Tick { .. } => "Tick",
            Message::MinuteElapsed { .. } => "MinuteElapsed",
            Message::RequestEntry { .. } => "RequestEntry",
            Message::GrantEntry { .. } => "GrantEntry",
            Message::VehicleArrived { .. } => "VehicleArrived",
            Message::SpawnVehicle { .. } => "SpawnVehicle",
            Message::Crash { .. } => "Crash",
            Message::FuelExhausted { .. } => "FuelExhausted",
            Message::StatsReport { .. } => "StatsReport",
            Message::Shutdown => "Shutdown",
        }
    }
}

/// A message in flight: sender, recipient, the sender's monotone
/// sequence number, and the delivery tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub from: ActorId,
    pub to: ActorId,
    pub send_seq: u64,
    pub tick: u64,
    pub msg: Message,
}

/// Per-actor FIFO queue of incoming messages. The engine enqueues each
/// round's deliveries in `(sender, send_seq)` order, so dequeuing
/// preserves per-sender send order.
#[derive(Debug, Default)]
pub struct Mailbox {
    queue: VecDeque<Envelope>,
}

impl Mailbox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enqueue(&mut self, env: Envelope) {
        self.queue.push_back(env);
    }

    pub fn dequeue(&mut self) -> Option<Envelope> {
        self.queue.pop_front()
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

/// Context handed to an actor while it processes one message.
pub struct ActorCtx<'a> {
    self_id: ActorId,
    tick: u64,
    outbox: &'a mut Vec<(ActorId, Message)>,
    stop_requested: &'a mut bool,
}

impl<'a> ActorCtx<'a> {
    pub(crate) fn new(
        self_id: ActorId,
        tick: u64,
        outbox: &'a mut Vec<(ActorId, Message)>,
        stop_requested: &'a mut bool,
    ) -> Self {
        Self { self_id, tick, outbox, stop_requested }
    }

    pub fn self_id(&self) -> ActorId {
        self.self_id
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Sends asynchronously; the message is delivered next round. Sends
    /// to actors that no longer exist are dropped and counted, never an
    /// error.
    pub fn send(&mut self, to: ActorId, msg: Message) {
        self.outbox.push((to, msg));
    }

    /// Removes this actor from the system once the current message has
    /// been handled. Later messages addressed to it are dropped.
    pub fn stop_self(&mut self) {
        *self.stop_requested = true;
    }
}

/// A message-driven simulation entity.
pub trait Actor: Send {
    fn on_message(&mut self, ctx: &mut ActorCtx<'_>, env: Envelope);

    /// Runtime introspection hook used by tests and diagnostics.
    fn as_any(&self) -> &dyn std::any::Any;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actor_ids_order_by_kind_then_serial() {
        let director = ActorId::director();
        let junction = ActorId::new(ActorKind::Junction, 0);
        let vehicle = ActorId::new(ActorKind::Vehicle, 0);
        assert!(director < junction);
        assert!(junction < vehicle);
        assert!(ActorId::new(ActorKind::Vehicle, 3) < ActorId::new(ActorKind::Vehicle, 10));
    }

    #[test]
    fn shard_hash_is_bit_exact() {
        // Independent evaluation of FNV-1a over the 9-byte encoding of
        // (vehicle, 0): kind byte 3, serial 0.
        let id = ActorId::new(ActorKind::Vehicle, 0);
        assert_eq!(id.hash64(), 8750168172674097106);
        assert_eq!(shard_of(id, 4), (8750168172674097106u64 % 4) as u32);
        assert_eq!(shard_of(id, 4), 2);
    }

    #[test]
    fn shard_of_single_shard_is_zero() {
        for serial in 0..100 {
            for kind in [ActorKind::Director, ActorKind::Junction, ActorKind::Road, ActorKind::Vehicle] {
                assert_eq!(shard_of(ActorId::new(kind, serial), 1), 0);
            }
        }
    }

    #[test]
    fn shard_of_is_stable_and_in_range() {
        let map = ShardMap::new(2);
        let a = ActorId::new(ActorKind::Vehicle, 17);
        let b = ActorId::new(ActorKind::Junction, 17);
        let first = (map.assign(a), map.assign(b));
        for _ in 0..100 {
            assert_eq!((map.assign(a), map.assign(b)), first);
        }
        assert!(first.0 < 2 && first.1 < 2);
    }

    #[test]
    fn spawned_actor_serials_spread_over_every_shard() {
        // Hash-placement sanity: a thousand sequentially spawned vehicle
        // ids must leave no shard empty.
        let map = ShardMap::new(4);
        let mut seen = [false; 4];
        for serial in 0..1000 {
            seen[map.assign(ActorId::new(ActorKind::Vehicle, serial)) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s), "a shard received no actors: {seen:?}");
    }

    #[test]
    fn mailbox_is_fifo() {
        let mut mailbox = Mailbox::new();
        let from = ActorId::new(ActorKind::Vehicle, 1);
        let to = ActorId::new(ActorKind::Junction, 0);
        for seq in 0..3 {
            mailbox.enqueue(Envelope { from, to, send_seq: seq, tick: 0, msg: Message::Shutdown });
        }
        assert_eq!(mailbox.len(), 3);
        for expected in 0..3 {
            assert_eq!(mailbox.dequeue().unwrap().send_seq, expected);
        }
        assert!(mailbox.is_empty());
    }
}
