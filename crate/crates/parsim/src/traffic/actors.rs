//! Actor behaviors for the traffic simulation.
//!
//! Junction actors own their traffic light state, per-road waiting
//! queues, crash rolls, and the occupancy counters of their outgoing
//! roads. Vehicle actors own their state while driving along a road;
//! between roads the state travels inside `RequestEntry`/`GrantEntry`
//! messages and sits in the junction's queues. The director owns
//! simulated time, vehicle spawning, statistics aggregation, and
//! shutdown.
//!
//! Fuel accounting: a vehicle loses exactly `tick_seconds` of fuel per
//! tick, moving or waiting. Whoever holds the state applies the drain:
//! the vehicle actor on `Tick` while driving, the junction on `Tick` for
//! queued vehicles, and the recipient of a state-carrying message
//! (`RequestEntry`, `GrantEntry`) for the round in which the state was in
//! flight.

use std::any::Any;
use std::collections::VecDeque;
use std::sync::Arc;

use crate::actor::{Actor, ActorCtx, ActorId, ActorKind, Director, DirectorCtx, Envelope, Message, TickDirective};
use crate::network::{current_speed_at, plan_route_with, JunctionId, NetworkError, ReachCache, RoadId, RoadNetwork};
use crate::rng::SplitMix64;
use crate::traffic::{
    crash_probability, emit_summary, JunctionUsage, RoadUsage, SimStats, StatsBody, StatsDelta,
    TrafficConfig, VehicleState, VEHICLE_CLASSES,
};

pub(crate) const TICKS_PER_MINUTE: u64 = 60;

fn junction_actor_id(junction: JunctionId) -> ActorId {
    ActorId::new(ActorKind::Junction, junction as u64)
}

/// Traffic light state of one lighted junction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LightState {
    /// Index into the junction's outgoing road list, in input-file order.
    pub enabled_index: usize,
    pub minute_of_last_change: u64,
}

/// A vehicle waiting at a junction for entry to its chosen road.
#[derive(Debug)]
struct PendingVehicle {
    state: Box<VehicleState>,
    joined_tick: u64,
}

pub struct JunctionActor {
    junction: JunctionId,
    cfg: Arc<TrafficConfig>,
    net: Arc<RoadNetwork>,
    rng: SplitMix64,
    has_lights: bool,
    light: Option<LightState>,
    /// All indexed by outgoing-road slot (input-file order).
    outgoing: Vec<RoadId>,
    occupancy: Vec<u32>,
    queues: Vec<VecDeque<PendingVehicle>>,
    road_total: Vec<u64>,
    road_peak: Vec<u32>,
    crashes: u64,
    vehicles_passed: u64,
}

impl JunctionActor {
    pub fn new(junction: JunctionId, cfg: Arc<TrafficConfig>, net: Arc<RoadNetwork>) -> Self {
        let info = net.junction(junction).expect("junction exists");
        let outgoing = info.outgoing.clone();
        let has_lights = info.has_traffic_lights;
        // A lighted junction with no outgoing roads has nothing to
        // enable; it carries no light state.
        let light = (has_lights && !outgoing.is_empty())
            .then_some(LightState { enabled_index: 0, minute_of_last_change: 0 });
        let id = junction_actor_id(junction);
        let rng = SplitMix64::new(cfg.rng_seed ^ id.hash64());
        let slots = outgoing.len();
        Self {
            junction,
            cfg,
            net,
            rng,
            has_lights,
            light,
            outgoing,
            occupancy: vec![0; slots],
            queues: (0..slots).map(|_| VecDeque::new()).collect(),
            road_total: vec![0; slots],
            road_peak: vec![0; slots],
            crashes: 0,
            vehicles_passed: 0,
        }
    }

    pub fn light_state(&self) -> Option<LightState> {
        self.light
    }

    pub fn enabled_road(&self) -> Option<RoadId> {
        self.light.map(|l| self.outgoing[l.enabled_index])
    }

    pub fn occupancy_of(&self, road: RoadId) -> Option<u32> {
        self.slot_of(road).map(|s| self.occupancy[s])
    }

    pub fn queued_total(&self) -> usize {
        self.queues.iter().map(|q| q.len()).sum()
    }

    fn slot_of(&self, road: RoadId) -> Option<usize> {
        self.outgoing.iter().position(|&r| r == road)
    }

    fn send_delta(&self, ctx: &mut ActorCtx<'_>, delta: StatsDelta) {
        if delta != StatsDelta::default() {
            ctx.send(
                ActorId::director(),
                Message::StatsReport { body: Box::new(StatsBody::Delta(delta)) },
            );
        }
    }

    /// Admits one waiting vehicle onto the road in `slot`: locks its speed
    /// to `min(class max speed, current road speed)`, claims occupancy,
    /// and hands the state back to the vehicle actor.
    fn admit(&mut self, ctx: &mut ActorCtx<'_>, slot: usize, mut pending: PendingVehicle) {
        let road = self.net.road(self.outgoing[slot]);
        let class_speed = self.cfg.classes.spec(pending.state.class).max_speed;
        let road_speed = current_speed_at(road.max_speed, self.occupancy[slot], &self.cfg.congestion);
        let speed = class_speed.min(road_speed);
        self.occupancy[slot] += 1;
        self.road_total[slot] += 1;
        self.road_peak[slot] = self.road_peak[slot].max(self.occupancy[slot]);
        let vehicle = pending.state.id;
        pending.state.speed = speed;
        ctx.send(vehicle, Message::GrantEntry { state: pending.state, road: road.id, speed });
    }

    fn on_tick(&mut self, ctx: &mut ActorCtx<'_>, tick: u64) {
        let dt = self.cfg.tick_seconds;
        let mut delta = StatsDelta::default();

        // Queued vehicles burn fuel while waiting.
        for queue in &mut self.queues {
            let mut survivors = VecDeque::with_capacity(queue.len());
            while let Some(mut pending) = queue.pop_front() {
                if pending.joined_tick < tick {
                    pending.state.fuel -= dt;
                    if pending.state.fuel <= 0.0 {
                        delta.fuel_exhausted += 1;
                        delta.stranded_passengers += pending.state.passengers as u64;
                        ctx.send(
                            pending.state.id,
                            Message::FuelExhausted { vehicle: pending.state.id, road: None },
                        );
                        continue;
                    }
                }
                survivors.push_back(pending);
            }
            *queue = survivors;
        }

        // Crash rolls happen only at junctions without traffic lights.
        if !self.has_lights {
            let k: u32 = self.queues.iter().map(|q| q.len() as u32).sum();
            let p = crash_probability(self.cfg.crash_beta, k, dt);
            if p > 0.0 {
                for queue in &mut self.queues {
                    let mut survivors = VecDeque::with_capacity(queue.len());
                    while let Some(pending) = queue.pop_front() {
                        if self.rng.next_f64() < p {
                            self.crashes += 1;
                            delta.crashes += 1;
                            delta.stranded_passengers += pending.state.passengers as u64;
                            ctx.send(
                                pending.state.id,
                                Message::Crash { vehicle: pending.state.id },
                            );
                        } else {
                            survivors.push_back(pending);
                        }
                    }
                    *queue = survivors;
                }
            }
        }

        // Admissions. Without lights every waiting vehicle enters its
        // chosen road now; with lights only the head of the enabled
        // road's queue enters, one vehicle per tick.
        match self.light {
            None => {
                for slot in 0..self.queues.len() {
                    while let Some(pending) = self.queues[slot].pop_front() {
                        self.admit(ctx, slot, pending);
                    }
                }
            }
            Some(light) => {
                let slot = light.enabled_index;
                if let Some(pending) = self.queues[slot].pop_front() {
                    self.admit(ctx, slot, pending);
                }
            }
        }

        self.send_delta(ctx, delta);
    }

    fn on_request_entry(
        &mut self,
        ctx: &mut ActorCtx<'_>,
        mut state: Box<VehicleState>,
        via_road: Option<RoadId>,
        tick: u64,
    ) {
        // The state was in flight this round; apply its fuel drain here.
        state.fuel -= self.cfg.tick_seconds;
        if state.fuel <= 0.0 {
            ctx.send(state.id, Message::FuelExhausted { vehicle: state.id, road: None });
            self.send_delta(
                ctx,
                StatsDelta {
                    fuel_exhausted: 1,
                    stranded_passengers: state.passengers as u64,
                    ..StatsDelta::default()
                },
            );
            return;
        }

        if via_road.is_some() {
            self.vehicles_passed += 1;
        }

        if state.destination == self.junction {
            ctx.send(state.id, Message::Shutdown);
            self.send_delta(
                ctx,
                StatsDelta {
                    delivered_vehicles: 1,
                    delivered_passengers: state.passengers as u64,
                    ..StatsDelta::default()
                },
            );
            return;
        }

        let occupancy = &self.occupancy;
        let outgoing = &self.outgoing;
        let plan = plan_route_with(
            &self.net,
            self.junction,
            state.destination,
            &self.cfg.congestion,
            |road| {
                outgoing
                    .iter()
                    .position(|&r| r == road)
                    .map_or(0, |slot| occupancy[slot])
            },
        );
        match plan {
            Ok(route) => {
                let slot = self
                    .slot_of(route.road_sequence[0])
                    .expect("first hop leaves this junction");
                state.route = Some(route);
                self.queues[slot].push_back(PendingVehicle { state, joined_tick: tick });
            }
            Err(NetworkError::NoRoute { .. }) => {
                ctx.send(state.id, Message::Shutdown);
                self.send_delta(
                    ctx,
                    StatsDelta {
                        replan_dead_ends: 1,
                        stranded_passengers: state.passengers as u64,
                        ..StatsDelta::default()
                    },
                );
            }
            Err(err) => unreachable!("route planning failed unexpectedly: {err}"),
        }
    }

    fn final_report(&self, ctx: &mut ActorCtx<'_>) {
        let roads = self
            .outgoing
            .iter()
            .enumerate()
            .map(|(slot, &road_id)| {
                let road = self.net.road(road_id);
                RoadUsage {
                    road: road_id,
                    from: road.from,
                    to: road.to,
                    vehicles_total: self.road_total[slot],
                    max_concurrent: self.road_peak[slot],
                }
            })
            .collect();
        ctx.send(
            ActorId::director(),
            Message::StatsReport {
                body: Box::new(StatsBody::JunctionFinal {
                    junction: self.junction,
                    crashes: self.crashes,
                    vehicles_passed: self.vehicles_passed,
                    roads,
                }),
            },
        );
    }
}

impl Actor for JunctionActor {
    fn on_message(&mut self, ctx: &mut ActorCtx<'_>, env: Envelope) {
        let tick = ctx.tick();
        match env.msg {
            Message::Tick { tick: t } => self.on_tick(ctx, t),
            Message::MinuteElapsed { minute } => {
                if let Some(light) = &mut self.light {
                    light.enabled_index = (light.enabled_index + 1) % self.outgoing.len();
                    light.minute_of_last_change = minute;
                }
            }
            Message::RequestEntry { state, via_road } => {
                self.on_request_entry(ctx, state, via_road, tick)
            }
            Message::VehicleArrived { road, .. } | Message::FuelExhausted { road: Some(road), .. } => {
                if let Some(slot) = self.slot_of(road) {
                    debug_assert!(self.occupancy[slot] > 0, "occupancy underflow on road {road}");
                    self.occupancy[slot] = self.occupancy[slot].saturating_sub(1);
                }
            }
            Message::Shutdown => {
                self.final_report(ctx);
                ctx.stop_self();
            }
            // Remaining tags are not addressed to junctions.
            _ => {}
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub struct VehicleActor {
    cfg: Arc<TrafficConfig>,
    net: Arc<RoadNetwork>,
    /// `Some` while driving along a road; `None` while the state lives in
    /// a junction queue or in a message.
    state: Option<Box<VehicleState>>,
}

impl VehicleActor {
    pub fn new(cfg: Arc<TrafficConfig>, net: Arc<RoadNetwork>) -> Self {
        Self { cfg, net, state: None }
    }

    pub fn state(&self) -> Option<&VehicleState> {
        self.state.as_deref()
    }

    /// One second of driving: advance along the road, burn fuel, and
    /// resolve fuel exhaustion or arrival. Fuel exhaustion wins when both
    /// trigger in the same tick; the tank ran dry mid-second.
    fn advance(&mut self, ctx: &mut ActorCtx<'_>) {
        let dt = self.cfg.tick_seconds;
        let Some(state) = self.state.as_mut() else { return };
        let road_id = state.current_road.expect("driving state has a road");
        let road = self.net.road(road_id);
        state.position += state.speed * dt;
        state.fuel -= dt;
        if state.fuel <= 0.0 {
            let state = self.state.take().expect("checked above");
            ctx.send(
                junction_actor_id(road.from),
                Message::FuelExhausted { vehicle: state.id, road: Some(road_id) },
            );
            ctx.send(
                ActorId::director(),
                Message::StatsReport {
                    body: Box::new(StatsBody::Delta(StatsDelta {
                        fuel_exhausted: 1,
                        stranded_passengers: state.passengers as u64,
                        ..StatsDelta::default()
                    })),
                },
            );
            ctx.stop_self();
        } else if state.position >= road.length {
            state.position = road.length;
            let mut state = self.state.take().expect("checked above");
            state.current_road = None;
            state.position = 0.0;
            ctx.send(
                junction_actor_id(road.from),
                Message::VehicleArrived { vehicle: state.id, road: road_id },
            );
            ctx.send(
                junction_actor_id(road.to),
                Message::RequestEntry { state, via_road: Some(road_id) },
            );
        }
    }
}

impl Actor for VehicleActor {
    fn on_message(&mut self, ctx: &mut ActorCtx<'_>, env: Envelope) {
        match env.msg {
            Message::SpawnVehicle { state } => {
                let source = state.source;
                ctx.send(
                    junction_actor_id(source),
                    Message::RequestEntry { state, via_road: None },
                );
            }
            Message::GrantEntry { mut state, road, speed } => {
                state.current_road = Some(road);
                state.position = 0.0;
                state.speed = speed;
                self.state = Some(state);
                // The granting round is already a driving second.
                self.advance(ctx);
            }
            Message::Tick { .. } => {
                if self.state.is_some() {
                    self.advance(ctx);
                }
            }
            Message::Crash { .. } | Message::FuelExhausted { .. } | Message::Shutdown => {
                // The junction (or the director at termination) settled
                // the books; this actor just winds down.
                self.state = None;
                ctx.stop_self();
            }
            _ => {}
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The coordinator: owns the simulated clock, spawns vehicle waves,
/// aggregates statistics, prints summaries, and signals shutdown.
pub struct DirectorActor {
    cfg: Arc<TrafficConfig>,
    net: Arc<RoadNetwork>,
    rng: SplitMix64,
    reach: ReachCache,
    stats: SimStats,
    summaries: Vec<(u64, SimStats)>,
    summary_text: String,
    quiet: bool,
    draining: bool,
    junction_reports_pending: usize,
    ticks_emitted: u64,
}

impl DirectorActor {
    pub fn new(cfg: Arc<TrafficConfig>, net: Arc<RoadNetwork>, quiet: bool) -> Self {
        let rng = SplitMix64::new(cfg.rng_seed ^ ActorId::director().hash64());
        let junction_count = net.junctions().len();
        Self {
            cfg,
            net,
            rng,
            reach: ReachCache::new(),
            stats: SimStats::default(),
            summaries: Vec::new(),
            summary_text: String::new(),
            quiet,
            draining: false,
            junction_reports_pending: junction_count,
            ticks_emitted: 0,
        }
    }

    pub fn stats(&self) -> &SimStats {
        &self.stats
    }

    /// Snapshots taken at each printed summary, in minute order.
    pub fn summaries(&self) -> &[(u64, SimStats)] {
        &self.summaries
    }

    pub fn summary_text(&self) -> &str {
        &self.summary_text
    }

    pub fn ticks_emitted(&self) -> u64 {
        self.ticks_emitted
    }

    fn record_summary(&mut self, minute: u64) {
        let line = emit_summary(&self.stats, minute);
        if !self.quiet {
            println!("{line}");
        }
        self.summary_text.push_str(&line);
        self.summary_text.push('\n');
        self.summaries.push((minute, self.stats.clone()));
    }

    fn spawn_wave(&mut self, ctx: &mut DirectorCtx<'_>) {
        let junctions = self.net.junctions();
        let n = junctions.len() as u64;
        let count = if self.cfg.spawn_poisson {
            self.rng.next_poisson(self.cfg.spawn_per_minute as f64)
        } else {
            self.cfg.spawn_per_minute as u64
        };
        for _ in 0..count {
            let mut endpoints = None;
            if n > 0 {
                for _ in 0..64 {
                    let source = junctions[self.rng.next_below(n) as usize].id;
                    let destination = junctions[self.rng.next_below(n) as usize].id;
                    if source != destination
                        && self
                            .reach
                            .reachable(&self.net, source, destination)
                            .expect("sampled junctions exist")
                    {
                        endpoints = Some((source, destination));
                        break;
                    }
                }
            }
            let Some((source, destination)) = endpoints else {
                self.stats.spawn_failures += 1;
                continue;
            };
            let class = VEHICLE_CLASSES[self.rng.next_below(6) as usize];
            let spec = self.cfg.classes.spec(class);
            let passengers = self.rng.next_range(1, spec.max_passengers as u64) as u32;
            let fuel = self.rng.next_range(self.cfg.fuel_min, self.cfg.fuel_max) as f64;
            let actor = VehicleActor::new(self.cfg.clone(), self.net.clone());
            let id = ctx.spawn(ActorKind::Vehicle, Box::new(actor));
            let state = VehicleState {
                id,
                class,
                passengers,
                fuel,
                source,
                destination,
                route: None,
                current_road: None,
                position: 0.0,
                speed: 0.0,
            };
            ctx.send(id, Message::SpawnVehicle { state: Box::new(state) });
            self.stats.vehicles_added += 1;
            self.stats.active_vehicles += 1;
            self.stats.passengers_created += passengers as u64;
            self.stats.passengers_aboard += passengers as u64;
        }
    }
}

impl Actor for DirectorActor {
    fn on_message(&mut self, _ctx: &mut ActorCtx<'_>, env: Envelope) {
        if let Message::StatsReport { body } = env.msg {
            match *body {
                StatsBody::Delta(delta) => self.stats.absorb_delta(&delta),
                StatsBody::JunctionFinal { junction, crashes, vehicles_passed, roads } => {
                    self.stats
                        .per_junction
                        .insert(junction, JunctionUsage { crashes, vehicles_passed });
                    for usage in roads {
                        self.stats.per_road.insert(usage.road, usage);
                    }
                    self.junction_reports_pending -= 1;
                }
            }
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

impl Director for DirectorActor {
    fn begin_tick(&mut self, ctx: &mut DirectorCtx<'_>) -> TickDirective {
        if self.draining {
            return if self.junction_reports_pending == 0 {
                TickDirective::Stop
            } else {
                TickDirective::Continue
            };
        }

        let tick = ctx.tick();
        if tick.is_multiple_of(TICKS_PER_MINUTE) {
            let minute = tick / TICKS_PER_MINUTE;
            self.stats.sim_minutes = minute;
            if minute.is_multiple_of(self.cfg.summary_every_minutes) || minute == self.cfg.max_minutes {
                self.record_summary(minute);
            }
            if minute == self.cfg.max_minutes {
                self.draining = true;
                let live: Vec<ActorId> = ctx.live_actors().collect();
                for id in live {
                    ctx.send(id, Message::Shutdown);
                }
                return TickDirective::Continue;
            }
            if minute > 0 {
                for junction in self.net.junctions() {
                    ctx.send(junction_actor_id(junction.id), Message::MinuteElapsed { minute });
                }
            }
            let live: Vec<ActorId> = ctx.live_actors().collect();
            for id in live {
                ctx.send(id, Message::Tick { tick });
            }
            self.ticks_emitted += 1;
            self.spawn_wave(ctx);
        } else {
            let live: Vec<ActorId> = ctx.live_actors().collect();
            for id in live {
                ctx.send(id, Message::Tick { tick });
            }
            self.ticks_emitted += 1;
        }
        TickDirective::Continue
    }
}
