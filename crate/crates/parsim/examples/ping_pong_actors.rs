//! Writing actors against the runtime directly: a ping-pong pair driven
//! by a custom director, with per-sender FIFO mailboxes, hash-based
//! shard placement, and message accounting.
//!
//! ```bash
//! cargo run --example ping_pong_actors
//! ```

use parsim::actor::{
    shard_of, Actor, ActorCtx, ActorId, ActorKind, Director, DirectorCtx, Envelope, ExecMode,
    Message, Runtime, TickDirective,
};

/// Bounces a countdown carried in `Tick` payloads; reports completion to
/// the director when it reaches zero.
struct Bouncer {
    peer: ActorId,
    bounces: u64,
}

impl Actor for Bouncer {
    fn on_message(&mut self, ctx: &mut ActorCtx<'_>, env: Envelope) {
        if let Message::Tick { tick } = env.msg {
            self.bounces += 1;
            if tick == 0 {
                ctx.send(ActorId::director(), Message::Shutdown);
            } else {
                ctx.send(self.peer, Message::Tick { tick: tick - 1 });
            }
        }
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

/// Kicks the exchange off and stops the run once the pair reports back.
struct PingPongDirector {
    first: ActorId,
    exchanges: u64,
    done: bool,
}

impl Actor for PingPongDirector {
    fn on_message(&mut self, _ctx: &mut ActorCtx<'_>, env: Envelope) {
        if matches!(env.msg, Message::Shutdown) {
            self.done = true;
        }
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

impl Director for PingPongDirector {
    fn begin_tick(&mut self, ctx: &mut DirectorCtx<'_>) -> TickDirective {
        if self.done {
            return TickDirective::Stop;
        }
        if ctx.tick() == 0 {
            // 2N - 1 hops means the pair sees exactly 2N deliveries.
            ctx.send(self.first, Message::Tick { tick: 2 * self.exchanges - 1 });
        }
        TickDirective::Continue
    }
}

fn main() {
    let exchanges = 10_000;
    let ping = ActorId::new(ActorKind::Vehicle, 0);
    let pong = ActorId::new(ActorKind::Vehicle, 1);

    let shard_count = 4;
    println!("placement over {shard_count} shards (FNV-1a of the actor id):");
    for id in [ping, pong] {
        println!("  {id} -> shard {}", shard_of(id, shard_count));
    }

    let director = PingPongDirector { first: ping, exchanges, done: false };
    let mut rt = Runtime::new(director, shard_count, ExecMode::Deterministic);
    rt.spawn(ActorKind::Vehicle, Box::new(Bouncer { peer: pong, bounces: 0 })).unwrap();
    rt.spawn(ActorKind::Vehicle, Box::new(Bouncer { peer: ping, bounces: 0 })).unwrap();

    let stats = rt.run().unwrap();
    let ping_bounces = rt.actor_as::<Bouncer>(ping).unwrap().bounces;
    let pong_bounces = rt.actor_as::<Bouncer>(pong).unwrap().bounces;

    println!("\n{exchanges} exchanges requested");
    println!("ping deliveries: {ping_bounces}");
    println!("pong deliveries: {pong_bounces}");
    println!(
        "runtime: rounds={} sent={} delivered={} dropped={} in-flight-at-shutdown={}",
        stats.rounds, stats.sent, stats.delivered, stats.dropped, stats.in_flight_at_shutdown
    );
    assert_eq!(ping_bounces + pong_bounces, 2 * exchanges);
    assert!(stats.conserved());
    println!("message conservation holds: sent = delivered + dropped + in-flight");
}
