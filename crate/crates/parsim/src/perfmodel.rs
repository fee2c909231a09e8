//! Closed-form parallel performance laws, communication cost models, and
//! index partitioning strategies.
//!
//! All operations here are pure functions over `f64`; they are used both
//! as a standalone calculator (`parsim model ...`) and by the scaling
//! harness to turn timing records into speedup/efficiency figures.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("serial fraction must lie in [0, 1], got {0}")]
    SerialFractionOutOfRange(f64),
    #[error("processor count must be at least 1, got {0}")]
    ProcessorCount(u64),
    #[error("{name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("message count must be at least 1")]
    MessageCount,
    #[error("{name} must be positive, got {value}")]
    NonPositiveTime { name: &'static str, value: f64 },
    #[error("{0} must be non-zero")]
    ZeroPartitionParameter(&'static str),
    #[error("sample count {samples} does not match declared repeats {repeats}")]
    SampleCountMismatch { samples: usize, repeats: u32 },
}

/// Inputs to Amdahl's law: serial fraction `f` and processor count `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmdahlInput {
    pub serial_fraction: f64,
    pub processors: u64,
}

impl AmdahlInput {
    pub fn new(serial_fraction: f64, processors: u64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&serial_fraction) {
            return Err(ModelError::SerialFractionOutOfRange(serial_fraction));
        }
        if processors < 1 {
            return Err(ModelError::ProcessorCount(processors));
        }
        Ok(Self { serial_fraction, processors })
    }
}

/// The four LogP machine parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPParams {
    /// Network latency for a single message.
    pub latency: f64,
    /// Sender/receiver processing overhead per message.
    pub overhead: f64,
    /// Minimum interval between consecutive transmissions.
    pub gap: f64,
    pub processors: u64,
}

impl LogPParams {
    pub fn new(latency: f64, overhead: f64, gap: f64, processors: u64) -> Result<Self, ModelError> {
        for (name, value) in [("latency", latency), ("overhead", overhead), ("gap", gap)] {
            if value.is_nan() || value < 0.0 {
                return Err(ModelError::NegativeParameter { name, value });
            }
        }
        if processors < 1 {
            return Err(ModelError::ProcessorCount(processors));
        }
        Ok(Self { latency, overhead, gap, processors })
    }
}

/// One BSP superstep: local work, bounded fan-out, per-message gap and the
/// barrier cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BspSuperstep {
    /// Maximum local computation time over all processors.
    pub max_local_work: f64,
    /// Maximum number of messages sent or received by any processor.
    pub max_fanout: u64,
    /// Time per message (the BSP `g`).
    pub per_message_gap: f64,
    /// Barrier synchronization cost (the BSP `l`).
    pub barrier_cost: f64,
}

impl BspSuperstep {
    pub fn new(
        max_local_work: f64,
        max_fanout: u64,
        per_message_gap: f64,
        barrier_cost: f64,
    ) -> Result<Self, ModelError> {
        for (name, value) in [
            ("max_local_work", max_local_work),
            ("per_message_gap", per_message_gap),
            ("barrier_cost", barrier_cost),
        ] {
            if value.is_nan() || value < 0.0 {
                return Err(ModelError::NegativeParameter { name, value });
            }
        }
        Ok(Self { max_local_work, max_fanout, per_message_gap, barrier_cost })
    }
}

/// A timing sample pair: serial time, parallel time on `processors`
/// workers, optionally backed by the individual repeat samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub serial_time: f64,
    pub parallel_time: f64,
    pub processors: u64,
    pub repeats: u32,
    pub samples: Vec<f64>,
}

impl RunRecord {
    pub fn new(serial_time: f64, parallel_time: f64, processors: u64) -> Self {
        Self { serial_time, parallel_time, processors, repeats: 1, samples: Vec::new() }
    }

    pub fn with_samples(serial_time: f64, samples: Vec<f64>, processors: u64) -> Self {
        let mean = mean(&samples);
        Self {
            serial_time,
            parallel_time: mean,
            processors,
            repeats: samples.len() as u32,
            samples,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.serial_time.is_nan() || self.serial_time <= 0.0 {
            return Err(ModelError::NonPositiveTime { name: "serial_time", value: self.serial_time });
        }
        if self.parallel_time.is_nan() || self.parallel_time <= 0.0 {
            return Err(ModelError::NonPositiveTime {
                name: "parallel_time",
                value: self.parallel_time,
            });
        }
        if self.processors < 1 {
            return Err(ModelError::ProcessorCount(self.processors));
        }
        if !self.samples.is_empty() && self.samples.len() != self.repeats as usize {
            return Err(ModelError::SampleCountMismatch {
                samples: self.samples.len(),
                repeats: self.repeats,
            });
        }
        Ok(())
    }
}

/// Speedup and efficiency derived from a [`RunRecord`], plus the sample
/// statistics when repeats were recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedupReport {
    pub speedup: f64,
    pub efficiency: f64,
    pub mean_parallel_time: f64,
    /// Sample standard deviation of the repeats; 0 when fewer than two
    /// samples are present.
    pub stddev_parallel_time: f64,
}

/// Amdahl's law: `S(P) = 1 / (f + (1 - f) / P)`.
pub fn amdahl_speedup(input: AmdahlInput) -> Result<f64, ModelError> {
    let input = AmdahlInput::new(input.serial_fraction, input.processors)?;
    let f = input.serial_fraction;
    let p = input.processors as f64;
    Ok(1.0 / (f + (1.0 - f) / p))
}

/// Gustafson's scaled speedup: `S(P) = P - f * (P - 1)`.
pub fn gustafson_speedup(serial_fraction: f64, processors: u64) -> Result<f64, ModelError> {
    if !(0.0..=1.0).contains(&serial_fraction) {
        return Err(ModelError::SerialFractionOutOfRange(serial_fraction));
    }
    if processors < 1 {
        return Err(ModelError::ProcessorCount(processors));
    }
    let p = processors as f64;
    Ok(p - serial_fraction * (p - 1.0))
}

/// Measured speedup `S_p = T1 / Tp` and efficiency `E_p = S_p / p`.
///
/// When the record carries samples, `Tp` is their arithmetic mean and the
/// report includes the sample standard deviation.
pub fn measured_speedup(run: &RunRecord) -> Result<SpeedupReport, ModelError> {
    run.validate()?;
    let (tp, stddev) = if run.samples.is_empty() {
        (run.parallel_time, 0.0)
    } else {
        (mean(&run.samples), stddev(&run.samples))
    };
    if tp.is_nan() || tp <= 0.0 {
        return Err(ModelError::NonPositiveTime { name: "parallel_time", value: tp });
    }
    let speedup = run.serial_time / tp;
    Ok(SpeedupReport {
        speedup,
        efficiency: speedup / run.processors as f64,
        mean_parallel_time: tp,
        stddev_parallel_time: stddev,
    })
}

/// Time until the last of `k` back-to-back messages from one sender is
/// received: `(k - 1) g + 2 o + L`.
pub fn logp_cost(params: LogPParams, message_count: u64) -> Result<f64, ModelError> {
    let params = LogPParams::new(params.latency, params.overhead, params.gap, params.processors)?;
    if message_count < 1 {
        return Err(ModelError::MessageCount);
    }
    Ok((message_count - 1) as f64 * params.gap + 2.0 * params.overhead + params.latency)
}

/// BSP superstep cost: `w + g * h + l`.
pub fn bsp_superstep_cost(step: BspSuperstep) -> Result<f64, ModelError> {
    let step = BspSuperstep::new(
        step.max_local_work,
        step.max_fanout,
        step.per_message_gap,
        step.barrier_cost,
    )?;
    Ok(step.max_local_work + step.per_message_gap * step.max_fanout as f64 + step.barrier_cost)
}

/// Data distribution strategies for assigning `n` indices to `p` owners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionStrategy {
    /// Contiguous chunks; the remainder goes to the lowest-ranked owners.
    Block,
    /// Round-robin: `owner[i] = i mod p`.
    Cyclic,
    /// Round-robin over blocks of size `b`: `owner[i] = floor(i / b) mod p`.
    BlockCyclic,
}

impl PartitionStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            PartitionStrategy::Block => "block",
            PartitionStrategy::Cyclic => "cyclic",
            PartitionStrategy::BlockCyclic => "block_cyclic",
        }
    }
}

impl std::str::FromStr for PartitionStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(PartitionStrategy::Block),
            "cyclic" => Ok(PartitionStrategy::Cyclic),
            "block_cyclic" | "block-cyclic" => Ok(PartitionStrategy::BlockCyclic),
            other => Err(format!("unknown partition strategy '{other}'")),
        }
    }
}

/// Owner of each of `n` indices under the given strategy across `p`
/// owners. `block_size` is only consulted for [`PartitionStrategy::BlockCyclic`].
pub fn partition_indices(
    strategy: PartitionStrategy,
    n: usize,
    p: usize,
    block_size: usize,
) -> Result<Vec<usize>, ModelError> {
    if n == 0 {
        return Err(ModelError::ZeroPartitionParameter("n"));
    }
    if p == 0 {
        return Err(ModelError::ZeroPartitionParameter("p"));
    }
    if block_size == 0 && strategy == PartitionStrategy::BlockCyclic {
        return Err(ModelError::ZeroPartitionParameter("block_size"));
    }
    let owners = match strategy {
        PartitionStrategy::Block => {
            let base = n / p;
            let remainder = n % p;
            let mut owners = Vec::with_capacity(n);
            for owner in 0..p {
                let count = base + usize::from(owner < remainder);
                owners.extend(std::iter::repeat_n(owner, count));
            }
            owners
        }
        PartitionStrategy::Cyclic => (0..n).map(|i| i % p).collect(),
        PartitionStrategy::BlockCyclic => (0..n).map(|i| (i / block_size) % p).collect(),
    };
    Ok(owners)
}

pub fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two
/// samples.
pub fn stddev(samples: &[f64]) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let m = mean(samples);
    let var = samples.iter().map(|s| (s - m) * (s - m)).sum::<f64>() / (samples.len() - 1) as f64;
    var.sqrt()
}

/// Median; the midpoint average for even sample counts, 0 when empty.
pub fn median(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}
