//! Round-based execution engine for the actor runtime.
//!
//! Each round is one simulated tick. A round proceeds in three phases:
//! the director's mailbox is processed first, then the director's
//! `begin_tick` hook runs (this is where `Tick` broadcasts, minute
//! boundaries, and vehicle spawning originate; its sends are delivered
//! within the same round), and finally every other delivery for the round
//! is processed in `(recipient, sender, send_seq)` order. Messages sent
//! while handling a round-`t` message are delivered in round `t + 1`.
//!
//! Two execution modes share this round structure:
//!
//! * **deterministic**: a single logical scheduler processes the total
//!   order above; used by all correctness tests. The shard count only
//!   affects placement bookkeeping.
//! * **parallel**: one worker thread per shard processes its own actors'
//!   deliveries each round, with cross-shard sends exchanged between
//!   rounds. Because an actor's behavior depends only on its own state
//!   and its sorted per-round deliveries, parallel runs produce the same
//!   results as deterministic runs for any shard count.

use std::any::Any;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::mpsc;

use thiserror::Error;

use super::{shard_of, Actor, ActorCtx, ActorId, ActorKind, Envelope, Message, ShardMap};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("deadlock at tick {tick}: all mailboxes empty and the director did not stop")]
    Deadlock { tick: u64 },
    #[error("runtime is stopped")]
    RuntimeStopped,
    #[error("actor id {0} is already registered")]
    DuplicateActor(ActorId),
    #[error("step_round is only available in deterministic mode")]
    StepInParallelMode,
    #[error("a shard worker failed")]
    WorkerFailed,
}

/// What the director wants the engine to do after `begin_tick`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TickDirective {
    Continue,
    Stop,
}

/// The coordinating actor. Exactly one exists per run; it owns simulated
/// time and termination.
pub trait Director: Actor {
    /// Called at the start of every round, after the director's mailbox
    /// has been drained. Sends made here are delivered within the same
    /// round.
    fn begin_tick(&mut self, ctx: &mut DirectorCtx<'_>) -> TickDirective;
}

/// Execution mode for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Deterministic,
    Parallel,
}

/// Instrumentation counters for a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Rounds executed (one per tick, plus the shutdown drain rounds).
    pub rounds: u64,
    pub sent: u64,
    pub delivered: u64,
    /// Deliveries addressed to actors that no longer (or never) existed.
    pub dropped: u64,
    /// Messages still queued for later rounds when the run stopped.
    pub in_flight_at_shutdown: u64,
    /// Peak per-round delivery count per shard.
    pub shard_queue_peaks: Vec<u64>,
}

impl RunStats {
    /// Message conservation: every send is delivered, dropped, or still
    /// in flight at shutdown.
    pub fn conserved(&self) -> bool {
        self.sent == self.delivered + self.dropped + self.in_flight_at_shutdown
    }
}

/// One delivery observed by the deterministic engine's trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub tick: u64,
    pub from: ActorId,
    pub to: ActorId,
    pub send_seq: u64,
    pub tag: &'static str,
    pub delivered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RunState {
    Running,
    Stopping,
    Stopped,
}

struct ActorEntry {
    actor: Box<dyn Actor>,
    send_seq: u64,
}

struct Core {
    director_id: ActorId,
    actors: BTreeMap<ActorId, ActorEntry>,
    /// Non-director actors currently alive. In parallel mode this is the
    /// main-thread mirror of worker-owned registries.
    live: BTreeSet<ActorId>,
    next_serial: [u64; 4],
    director_seq: u64,
    tick: u64,
    state: RunState,
    shards: ShardMap,
    stats: RunStats,
    trace: Option<Vec<TraceEvent>>,
}

impl Core {
    fn allocate_id(&mut self, kind: ActorKind) -> ActorId {
        let serial = self.next_serial[kind as usize];
        self.next_serial[kind as usize] += 1;
        ActorId::new(kind, serial)
    }

    fn note_registered(&mut self, id: ActorId) {
        let slot = &mut self.next_serial[id.kind as usize];
        *slot = (*slot).max(id.serial + 1);
        self.live.insert(id);
    }
}

/// Context handed to the director's `begin_tick`.
pub struct DirectorCtx<'a> {
    core: &'a mut Core,
    /// Sends made during `begin_tick`, delivered within the current round.
    injected: &'a mut Vec<Envelope>,
    spawned: &'a mut Vec<(ActorId, Box<dyn Actor>)>,
}

impl<'a> DirectorCtx<'a> {
    pub fn tick(&self) -> u64 {
        self.core.tick
    }

    pub fn shard_count(&self) -> u32 {
        self.core.shards.shard_count()
    }

    /// Sends a message delivered within the current round.
    pub fn send(&mut self, to: ActorId, msg: Message) {
        let env = Envelope {
            from: self.core.director_id,
            to,
            send_seq: self.core.director_seq,
            tick: self.core.tick,
            msg,
        };
        self.core.director_seq += 1;
        self.core.stats.sent += 1;
        self.injected.push(env);
    }

    /// Creates a new actor with the next serial for `kind`. Its messages
    /// start flowing this round.
    pub fn spawn(&mut self, kind: ActorKind, actor: Box<dyn Actor>) -> ActorId {
        let id = self.core.allocate_id(kind);
        self.core.live.insert(id);
        self.spawned.push((id, actor));
        id
    }

    /// Ids of all live non-director actors, in id order.
    pub fn live_actors(&self) -> impl Iterator<Item = ActorId> + '_ {
        self.core.live.iter().copied()
    }

    pub fn live_count(&self) -> usize {
        self.core.live.len()
    }
}

/// The actor runtime. `D` is the director type driving the run.
pub struct Runtime<D: Director> {
    director: D,
    core: Core,
    mode: ExecMode,
    /// Deliveries for the round currently executing.
    current_round: Vec<Envelope>,
    /// Deliveries scheduled for the next round.
    next_round: Vec<Envelope>,
}

impl<D: Director> Runtime<D> {
    pub fn new(director: D, shard_count: u32, mode: ExecMode) -> Self {
        let shards = ShardMap::new(shard_count);
        Self {
            director,
            core: Core {
                director_id: ActorId::director(),
                actors: BTreeMap::new(),
                live: BTreeSet::new(),
                next_serial: [1, 0, 0, 0], // director occupies serial 0
                director_seq: 0,
                tick: 0,
                state: RunState::Running,
                shards,
                stats: RunStats {
                    shard_queue_peaks: vec![0; shard_count as usize],
                    ..RunStats::default()
                },
                trace: None,
            },
            mode,
            current_round: Vec::new(),
            next_round: Vec::new(),
        }
    }

    /// Records every delivery attempt for later inspection
    /// (deterministic mode only).
    pub fn enable_trace(&mut self) {
        self.core.trace = Some(Vec::new());
    }

    pub fn trace(&self) -> Option<&[TraceEvent]> {
        self.core.trace.as_deref()
    }

    pub fn director(&self) -> &D {
        &self.director
    }

    pub fn director_mut(&mut self) -> &mut D {
        &mut self.director
    }

    pub fn director_id(&self) -> ActorId {
        self.core.director_id
    }

    pub fn tick(&self) -> u64 {
        self.core.tick
    }

    pub fn stats(&self) -> &RunStats {
        &self.core.stats
    }

    /// Registers an actor under an explicit id (junctions use their
    /// network junction id as serial).
    pub fn register(&mut self, id: ActorId, actor: Box<dyn Actor>) -> Result<(), EngineError> {
        if self.core.state != RunState::Running {
            return Err(EngineError::RuntimeStopped);
        }
        if id == self.core.director_id || self.core.actors.contains_key(&id) {
            return Err(EngineError::DuplicateActor(id));
        }
        self.core.actors.insert(id, ActorEntry { actor, send_seq: 0 });
        self.core.note_registered(id);
        Ok(())
    }

    /// Creates an actor with the next serial for `kind`.
    pub fn spawn(&mut self, kind: ActorKind, actor: Box<dyn Actor>) -> Result<ActorId, EngineError> {
        if self.core.state != RunState::Running {
            return Err(EngineError::RuntimeStopped);
        }
        let id = self.core.allocate_id(kind);
        self.core.actors.insert(id, ActorEntry { actor, send_seq: 0 });
        self.core.live.insert(id);
        Ok(id)
    }

    pub fn is_live(&self, id: ActorId) -> bool {
        self.core.live.contains(&id)
    }

    /// Borrow a live actor's concrete state (deterministic mode, or any
    /// mode after the run has finished).
    pub fn actor_as<T: Any>(&self, id: ActorId) -> Option<&T> {
        self.core.actors.get(&id).and_then(|e| e.actor.as_any().downcast_ref())
    }

    /// Runs rounds until the director stops the run.
    pub fn run(&mut self) -> Result<RunStats, EngineError> {
        match self.mode {
            ExecMode::Deterministic => {
                while self.step_round()? {}
                Ok(self.core.stats.clone())
            }
            ExecMode::Parallel => self.run_parallel(),
        }
    }

    /// Executes one round in deterministic mode. Returns `false` once the
    /// director has stopped the run.
    pub fn step_round(&mut self) -> Result<bool, EngineError> {
        if self.mode != ExecMode::Deterministic {
            return Err(EngineError::StepInParallelMode);
        }
        if self.core.state == RunState::Stopped {
            return Ok(false);
        }

        let mut round = std::mem::take(&mut self.current_round);
        round.sort_by_key(|e| (e.to, e.from, e.send_seq));
        self.update_peaks(&round);

        let mut processed: u64 = 0;

        // Phase A: the director's mailbox. Director messages form a
        // sorted prefix because the director id is minimal.
        let split = round.partition_point(|e| e.to == self.core.director_id);
        let director_mail: Vec<Envelope> = round.drain(..split).collect();
        for env in director_mail {
            self.deliver_to_director(env);
            processed += 1;
        }

        // Phase B: the director opens the tick.
        let mut injected = Vec::new();
        let mut spawned = Vec::new();
        let directive = {
            let mut ctx = DirectorCtx {
                core: &mut self.core,
                injected: &mut injected,
                spawned: &mut spawned,
            };
            self.director.begin_tick(&mut ctx)
        };
        for (id, actor) in spawned {
            self.core.actors.insert(id, ActorEntry { actor, send_seq: 0 });
        }
        if directive == TickDirective::Stop {
            self.core.state = RunState::Stopping;
        }

        // Phase C: everything else for this round, merged with the
        // director's same-round sends, in (recipient, sender, seq) order.
        injected.sort_by_key(|e| (e.to, e.send_seq));
        let merged = merge_sorted(round, injected);
        for env in merged {
            processed += 1;
            if env.to == self.core.director_id {
                self.deliver_to_director(env);
            } else {
                self.deliver_to_actor(env);
            }
        }

        self.core.stats.rounds += 1;

        if self.core.state == RunState::Stopping {
            self.core.stats.in_flight_at_shutdown = self.next_round.len() as u64;
            self.core.state = RunState::Stopped;
            return Ok(false);
        }
        if processed == 0 && self.next_round.is_empty() {
            self.core.state = RunState::Stopped;
            return Err(EngineError::Deadlock { tick: self.core.tick });
        }
        self.core.tick += 1;
        self.current_round = std::mem::take(&mut self.next_round);
        Ok(true)
    }

    fn update_peaks(&mut self, round: &[Envelope]) {
        let shard_count = self.core.shards.shard_count();
        let mut loads = vec![0u64; shard_count as usize];
        for env in round {
            loads[shard_of(env.to, shard_count) as usize] += 1;
        }
        for (peak, load) in self.core.stats.shard_queue_peaks.iter_mut().zip(loads) {
            *peak = (*peak).max(load);
        }
    }

    fn deliver_to_director(&mut self, env: Envelope) {
        self.core.stats.delivered += 1;
        self.trace_event(&env, true);
        let mut outbox = Vec::new();
        let mut stop_requested = false;
        let tick = self.core.tick;
        let director_id = self.core.director_id;
        {
            let mut ctx = ActorCtx::new(director_id, tick, &mut outbox, &mut stop_requested);
            self.director.on_message(&mut ctx, env);
        }
        // Director sends from `on_message` are delivered next round, like
        // any actor send.
        for (dest, msg) in outbox {
            let seq = self.core.director_seq;
            self.core.director_seq += 1;
            self.core.stats.sent += 1;
            self.next_round.push(Envelope {
                from: director_id,
                to: dest,
                send_seq: seq,
                tick: tick + 1,
                msg,
            });
        }
    }

    fn deliver_to_actor(&mut self, env: Envelope) {
        let to = env.to;
        if !self.core.actors.contains_key(&to) {
            self.core.stats.dropped += 1;
            self.trace_event(&env, false);
            return;
        }
        self.core.stats.delivered += 1;
        self.trace_event(&env, true);
        let entry = self.core.actors.get_mut(&to).expect("checked above");
        let tick = self.core.tick;
        let mut outbox = Vec::new();
        let mut stop_requested = false;
        {
            let mut ctx = ActorCtx::new(to, tick, &mut outbox, &mut stop_requested);
            entry.actor.on_message(&mut ctx, env);
        }
        let seq_base = entry.send_seq;
        entry.send_seq += outbox.len() as u64;
        for (offset, (dest, msg)) in outbox.into_iter().enumerate() {
            self.core.stats.sent += 1;
            self.next_round.push(Envelope {
                from: to,
                to: dest,
                send_seq: seq_base + offset as u64,
                tick: tick + 1,
                msg,
            });
        }
        if stop_requested {
            self.core.actors.remove(&to);
            self.core.live.remove(&to);
        }
    }

    fn trace_event(&mut self, env: &Envelope, delivered: bool) {
        if let Some(trace) = &mut self.core.trace {
            trace.push(TraceEvent {
                tick: self.core.tick,
                from: env.from,
                to: env.to,
                send_seq: env.send_seq,
                tag: env.msg.tag(),
                delivered,
            });
        }
    }

    /// Parallel execution: one worker per shard, cross-shard sends
    /// exchanged between rounds.
    fn run_parallel(&mut self) -> Result<RunStats, EngineError> {
        if self.core.state == RunState::Stopped {
            return Ok(self.core.stats.clone());
        }
        let shard_count = self.core.shards.shard_count() as usize;

        enum Work {
            Round { tick: u64, envelopes: Vec<Envelope>, spawns: Vec<(ActorId, ActorEntry)> },
            Finish,
        }
        struct RoundResult {
            outbound: Vec<Envelope>,
            removed: Vec<ActorId>,
            delivered: u64,
            dropped: u64,
            processed: u64,
        }
        enum Reply {
            Round(RoundResult),
            Final(BTreeMap<ActorId, ActorEntry>),
        }

        // Partition the registry across shards.
        let mut shard_maps: Vec<BTreeMap<ActorId, ActorEntry>> =
            (0..shard_count).map(|_| BTreeMap::new()).collect();
        for (id, entry) in std::mem::take(&mut self.core.actors) {
            let shard = shard_of(id, shard_count as u32) as usize;
            shard_maps[shard].insert(id, entry);
        }

        let result = std::thread::scope(|scope| -> Result<(), EngineError> {
            let (reply_tx, reply_rx) = mpsc::channel::<Reply>();
            let mut work_txs = Vec::with_capacity(shard_count);
            for mut actors in shard_maps.drain(..) {
                let (work_tx, work_rx) = mpsc::channel::<Work>();
                work_txs.push(work_tx);
                let reply_tx = reply_tx.clone();
                scope.spawn(move || {
                    while let Ok(work) = work_rx.recv() {
                        match work {
                            Work::Round { tick, mut envelopes, spawns } => {
                                for (id, entry) in spawns {
                                    actors.insert(id, entry);
                                }
                                envelopes.sort_by_key(|e| (e.to, e.from, e.send_seq));
                                let mut result = RoundResult {
                                    outbound: Vec::new(),
                                    removed: Vec::new(),
                                    delivered: 0,
                                    dropped: 0,
                                    processed: 0,
                                };
                                for env in envelopes {
                                    result.processed += 1;
                                    let to = env.to;
                                    let Some(entry) = actors.get_mut(&to) else {
                                        result.dropped += 1;
                                        continue;
                                    };
                                    result.delivered += 1;
                                    let mut outbox = Vec::new();
                                    let mut stop_requested = false;
                                    {
                                        let mut ctx = ActorCtx::new(
                                            to,
                                            tick,
                                            &mut outbox,
                                            &mut stop_requested,
                                        );
                                        entry.actor.on_message(&mut ctx, env);
                                    }
                                    for (dest, msg) in outbox {
                                        let out = Envelope {
                                            from: to,
                                            to: dest,
                                            send_seq: entry.send_seq,
                                            tick: tick + 1,
                                            msg,
                                        };
                                        entry.send_seq += 1;
                                        result.outbound.push(out);
                                    }
                                    if stop_requested {
                                        actors.remove(&to);
                                        result.removed.push(to);
                                    }
                                }
                                if reply_tx.send(Reply::Round(result)).is_err() {
                                    break;
                                }
                            }
                            Work::Finish => {
                                let _ = reply_tx.send(Reply::Final(actors));
                                break;
                            }
                        }
                    }
                });
            }
            drop(reply_tx);

            let finish = |work_txs: &[mpsc::Sender<Work>]| {
                for tx in work_txs {
                    let _ = tx.send(Work::Finish);
                }
            };

            loop {
                let mut round = std::mem::take(&mut self.current_round);
                round.sort_by_key(|e| (e.to, e.from, e.send_seq));
                self.update_peaks(&round);

                let mut processed: u64 = 0;

                let split = round.partition_point(|e| e.to == self.core.director_id);
                let director_mail: Vec<Envelope> = round.drain(..split).collect();
                for env in director_mail {
                    self.deliver_to_director(env);
                    processed += 1;
                }

                let mut injected = Vec::new();
                let mut spawned = Vec::new();
                let directive = {
                    let mut ctx = DirectorCtx {
                        core: &mut self.core,
                        injected: &mut injected,
                        spawned: &mut spawned,
                    };
                    self.director.begin_tick(&mut ctx)
                };
                if directive == TickDirective::Stop {
                    self.core.state = RunState::Stopping;
                }

                // Distribute this round's work: leftover deliveries plus
                // the director's same-round sends and spawned actors.
                let mut bins: Vec<Vec<Envelope>> = (0..shard_count).map(|_| Vec::new()).collect();
                let mut director_self = Vec::new();
                for env in round.into_iter().chain(injected) {
                    if env.to == self.core.director_id {
                        director_self.push(env);
                        continue;
                    }
                    bins[shard_of(env.to, shard_count as u32) as usize].push(env);
                }
                for env in director_self {
                    self.deliver_to_director(env);
                    processed += 1;
                }
                let mut spawn_bins: Vec<Vec<(ActorId, ActorEntry)>> =
                    (0..shard_count).map(|_| Vec::new()).collect();
                for (id, actor) in spawned {
                    let shard = shard_of(id, shard_count as u32) as usize;
                    spawn_bins[shard].push((id, ActorEntry { actor, send_seq: 0 }));
                }

                let tick = self.core.tick;
                for (shard, tx) in work_txs.iter().enumerate() {
                    let work = Work::Round {
                        tick,
                        envelopes: std::mem::take(&mut bins[shard]),
                        spawns: std::mem::take(&mut spawn_bins[shard]),
                    };
                    if tx.send(work).is_err() {
                        finish(&work_txs);
                        return Err(EngineError::WorkerFailed);
                    }
                }

                for _ in 0..shard_count {
                    match reply_rx.recv() {
                        Ok(Reply::Round(result)) => {
                            processed += result.processed;
                            self.core.stats.delivered += result.delivered;
                            self.core.stats.dropped += result.dropped;
                            self.core.stats.sent += result.outbound.len() as u64;
                            for id in result.removed {
                                self.core.live.remove(&id);
                            }
                            self.next_round.extend(result.outbound);
                        }
                        Ok(Reply::Final(..)) | Err(_) => {
                            return Err(EngineError::WorkerFailed);
                        }
                    }
                }

                self.core.stats.rounds += 1;

                if self.core.state == RunState::Stopping {
                    self.core.stats.in_flight_at_shutdown = self.next_round.len() as u64;
                    self.core.state = RunState::Stopped;
                    finish(&work_txs);
                    break;
                }
                if processed == 0 && self.next_round.is_empty() {
                    self.core.state = RunState::Stopped;
                    finish(&work_txs);
                    // Collect registries before reporting the deadlock.
                    for reply in reply_rx.iter() {
                        if let Reply::Final(actors) = reply {
                            self.core.actors.extend(actors);
                        }
                    }
                    return Err(EngineError::Deadlock { tick: self.core.tick });
                }
                self.core.tick += 1;
                self.current_round = std::mem::take(&mut self.next_round);
            }

            for reply in reply_rx.iter() {
                if let Reply::Final(actors) = reply {
                    self.core.actors.extend(actors);
                }
            }
            Ok(())
        });

        result?;
        Ok(self.core.stats.clone())
    }
}

/// Merges two vectors already sorted by `(to, from, send_seq)`.
fn merge_sorted(a: Vec<Envelope>, b: Vec<Envelope>) -> Vec<Envelope> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut a = a.into_iter().peekable();
    let mut b = b.into_iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => {
                let key_x = (x.to, x.from, x.send_seq);
                let key_y = (y.to, y.from, y.send_seq);
                if key_x <= key_y {
                    merged.push(a.next().unwrap());
                } else {
                    merged.push(b.next().unwrap());
                }
            }
            (Some(_), None) => merged.push(a.next().unwrap()),
            (None, Some(_)) => merged.push(b.next().unwrap()),
            (None, None) => break,
        }
    }
    merged
}
