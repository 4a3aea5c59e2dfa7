//! Batch execution across workers plus the load statistics that motivate
//! intra-query parallelism in the first place.
//!
//! Tasks are distributed over a work-stealing pool; the contract is result
//! determinism, not assignment determinism: scores, coordinates, and
//! counters are independent of `worker_count` and scheduling order, and
//! results come back in input order.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::baseline::align_one_baseline;
use crate::engine::{AlignmentResult, AlignmentTask, Engine, EngineConfig};
use crate::oracle::{oracle_align, OracleError};
use crate::scoring::ScoringScheme;
use crate::traffic::TrafficCounters;
use crate::wavefront::align_one;

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("no tasks to run")]
    EmptyBatch,
    #[error("worker count must be >= 1")]
    NoWorkers,
    #[error("bin width must be >= 1")]
    ZeroBinWidth,
    #[error("task {id}: {source}")]
    Task {
        id: u64,
        #[source]
        source: OracleError,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Length counts in `[k * bin_width, (k + 1) * bin_width)` bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub bin_width: usize,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_lengths<I: IntoIterator<Item = usize>>(
        lengths: I,
        bin_width: usize,
    ) -> Result<Self, BatchError> {
        if bin_width == 0 {
            return Err(BatchError::ZeroBinWidth);
        }
        let mut counts = Vec::new();
        for length in lengths {
            let bin = length / bin_width;
            if counts.len() <= bin {
                counts.resize(bin + 1, 0);
            }
            counts[bin] += 1;
        }
        Ok(Self { bin_width, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Query and target length histograms of a batch.
#[derive(Debug, Clone, Serialize)]
pub struct LengthHistograms {
    pub query: Histogram,
    pub target: Histogram,
}

/// Per-bin TSV with both sequence roles side by side:
/// `bin_start<TAB>query_count<TAB>target_count`.
impl LengthHistograms {
    pub fn to_tsv(&self) -> String {
        let bins = self.query.counts.len().max(self.target.counts.len());
        let mut out = String::from("bin_start\tquery_count\ttarget_count\n");
        for bin in 0..bins {
            let q = self.query.counts.get(bin).copied().unwrap_or(0);
            let t = self.target.counts.get(bin).copied().unwrap_or(0);
            out.push_str(&format!("{}\t{}\t{}\n", bin * self.query.bin_width, q, t));
        }
        out
    }
}

/// Histograms of query and target lengths over a batch.
pub fn length_histogram(
    tasks: &[AlignmentTask],
    bin_width: usize,
) -> Result<LengthHistograms, BatchError> {
    if tasks.is_empty() {
        return Err(BatchError::EmptyBatch);
    }
    Ok(LengthHistograms {
        query: Histogram::from_lengths(tasks.iter().map(|t| t.query.len()), bin_width)?,
        target: Histogram::from_lengths(tasks.iter().map(|t| t.target.len()), bin_width)?,
    })
}

/// Workload spread under the Q*R block cost model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ImbalanceStats {
    pub max_over_mean: f64,
    pub coeff_variation: f64,
}

/// Per-task block costs and their imbalance statistics.
pub fn cost_stats(tasks: &[AlignmentTask]) -> (Vec<u64>, ImbalanceStats) {
    let costs: Vec<u64> = tasks.iter().map(AlignmentTask::cost_blocks).collect();
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<u64>() as f64 / n;
    let max = costs.iter().copied().max().unwrap_or(0) as f64;
    let variance = costs
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    let stats = ImbalanceStats {
        max_over_mean: max / mean,
        coeff_variation: variance.sqrt() / mean,
    };
    (costs, stats)
}

/// Everything a batch run produces.
#[derive(Debug, Clone)]
pub struct BatchReport {
    pub results: Vec<AlignmentResult>,
    pub wall_ms: f64,
    pub costs: Vec<u64>,
    pub imbalance: ImbalanceStats,
    pub histograms: LengthHistograms,
    pub counters: TrafficCounters,
}

/// JSON-facing summary of a report (per-task results stay in the TSV).
#[derive(Debug, Clone, Serialize)]
pub struct BatchMetrics {
    pub task_count: usize,
    pub engine: Engine,
    pub group_size: usize,
    pub worker_count: usize,
    pub wall_ms: f64,
    pub total_cost_blocks: u64,
    pub imbalance: ImbalanceStats,
    pub counters: TrafficCounters,
    pub histograms: LengthHistograms,
}

impl BatchReport {
    pub fn metrics(&self, config: &EngineConfig, worker_count: usize) -> BatchMetrics {
        BatchMetrics {
            task_count: self.results.len(),
            engine: config.engine,
            group_size: config.group_size,
            worker_count,
            wall_ms: self.wall_ms,
            total_cost_blocks: self.costs.iter().sum(),
            imbalance: self.imbalance,
            counters: self.counters,
            histograms: self.histograms.clone(),
        }
    }
}

fn dispatch(
    task: &AlignmentTask,
    scheme: &ScoringScheme,
    config: &EngineConfig,
) -> Result<AlignmentResult, BatchError> {
    match config.engine {
        Engine::Wavefront => Ok(align_one(task, scheme, config)),
        Engine::Baseline => Ok(align_one_baseline(task, scheme, config)),
        Engine::Oracle => oracle_align(task, scheme).map_err(|source| BatchError::Task {
            id: task.id,
            source,
        }),
    }
}

/// Run every task on `worker_count` workers with the engine selected by
/// `config`. Results are returned in input order; the default histogram
/// bin width is 50 bp (override via [`length_histogram`] for reports).
pub fn run_batch(
    tasks: &[AlignmentTask],
    scheme: &ScoringScheme,
    config: &EngineConfig,
    worker_count: usize,
) -> Result<BatchReport, BatchError> {
    run_batch_binned(tasks, scheme, config, worker_count, 50)
}

/// [`run_batch`] with an explicit histogram bin width.
pub fn run_batch_binned(
    tasks: &[AlignmentTask],
    scheme: &ScoringScheme,
    config: &EngineConfig,
    worker_count: usize,
    bin_width: usize,
) -> Result<BatchReport, BatchError> {
    if tasks.is_empty() {
        return Err(BatchError::EmptyBatch);
    }
    if worker_count == 0 {
        return Err(BatchError::NoWorkers);
    }
    let histograms = length_histogram(tasks, bin_width)?;
    let (costs, imbalance) = cost_stats(tasks);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count)
        .build()
        .map_err(|e| BatchError::Pool(e.to_string()))?;

    let start = Instant::now();
    let outcomes: Vec<Result<AlignmentResult, BatchError>> = pool.install(|| {
        use rayon::prelude::*;
        tasks
            .par_iter()
            .map(|task| dispatch(task, scheme, config))
            .collect()
    });
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    // Report the first failure in input order, independent of scheduling.
    let mut results = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        results.push(outcome?);
    }

    let mut counters = TrafficCounters::default();
    for result in &results {
        counters.merge(&result.counters);
    }

    Ok(BatchReport {
        results,
        wall_ms,
        costs,
        imbalance,
        histograms,
        counters,
    })
}
