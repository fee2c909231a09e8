//! Assembly and execution of one traffic simulation run.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::actor::{ActorId, ActorKind, EngineError, ExecMode, RunStats, Runtime};
use crate::network::RoadNetwork;
use crate::traffic::{ConfigError, DirectorActor, JunctionActor, SimStats, TrafficConfig};

#[derive(Debug, Clone, Copy)]
pub struct TrafficSimOptions {
    pub shard_count: u32,
    pub mode: ExecMode,
    /// Suppress summary printing; summaries are still recorded.
    pub quiet: bool,
}

impl Default for TrafficSimOptions {
    fn default() -> Self {
        Self { shard_count: 1, mode: ExecMode::Deterministic, quiet: false }
    }
}

/// Results of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub stats: SimStats,
    /// Statistics snapshots taken at each printed summary.
    pub summaries: Vec<(u64, SimStats)>,
    /// The exact summary text, one block per line.
    pub summary_text: String,
    pub run_stats: RunStats,
    /// Wall-clock time spent inside the message loop (excludes setup).
    pub elapsed: Duration,
}

/// One traffic simulation: a director plus one actor per junction,
/// driven by the round engine.
pub struct TrafficSim {
    runtime: Runtime<DirectorActor>,
}

impl TrafficSim {
    pub fn new(
        net: RoadNetwork,
        cfg: TrafficConfig,
        opts: TrafficSimOptions,
    ) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let net = Arc::new(net);
        let cfg = Arc::new(cfg);
        let director = DirectorActor::new(cfg.clone(), net.clone(), opts.quiet);
        let mut runtime = Runtime::new(director, opts.shard_count, opts.mode);
        for junction in net.junctions() {
            let actor = JunctionActor::new(junction.id, cfg.clone(), net.clone());
            runtime
                .register(ActorId::new(ActorKind::Junction, junction.id as u64), Box::new(actor))
                .expect("junction ids are unique");
        }
        Ok(Self { runtime })
    }

    /// Runs to completion and collects statistics.
    pub fn run(&mut self) -> Result<RunOutcome, EngineError> {
        let started = Instant::now();
        let run_stats = self.runtime.run()?;
        let elapsed = started.elapsed();
        let director = self.runtime.director();
        Ok(RunOutcome {
            stats: director.stats().clone(),
            summaries: director.summaries().to_vec(),
            summary_text: director.summary_text().to_string(),
            run_stats,
            elapsed,
        })
    }

    /// The underlying runtime, for stepping and inspection in tests.
    pub fn runtime(&self) -> &Runtime<DirectorActor> {
        &self.runtime
    }

    pub fn runtime_mut(&mut self) -> &mut Runtime<DirectorActor> {
        &mut self.runtime
    }
}
