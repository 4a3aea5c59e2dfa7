//! Throughput sweep over synthetic equal-length batches.

use serde::Serialize;
use thiserror::Error;

use crate::batch::{run_batch, BatchError};
use crate::engine::{Engine, EngineConfig};
use crate::readsim::{generate_reference, generate_tasks, LengthSpec, SimError, SimProfile};
use crate::scoring::ScoringScheme;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("lengths must be >= 8 bp, got {0}")]
    LengthTooShort(usize),
    #[error("batch size must be >= 1")]
    EmptyBatch,
    #[error("repetitions must be >= 1")]
    NoReps,
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Batch(#[from] BatchError),
}

/// Sweep parameters: for each length, a batch of simulated reads is aligned
/// by each engine `reps` times and the wall times averaged.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub lengths: Vec<usize>,
    pub batch: usize,
    pub reps: usize,
    pub scheme: ScoringScheme,
    pub group_size: usize,
    pub engines: Vec<Engine>,
    pub threads: usize,
    pub seed: u64,
}

/// One (length, engine) row of the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub length: usize,
    pub engine: Engine,
    pub wall_ms: f64,
    pub cells_per_sec: f64,
    pub spill_transactions: u64,
    pub eager_transactions_equiv: u64,
    pub boundary_cells_written: u64,
}

/// Run the sweep. Batches are regenerated per length from the seed, so
/// every engine sees identical tasks.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, BenchError> {
    if config.batch == 0 {
        return Err(BenchError::EmptyBatch);
    }
    if config.reps == 0 {
        return Err(BenchError::NoReps);
    }
    if let Some(&short) = config.lengths.iter().find(|&&l| l < 8) {
        return Err(BenchError::LengthTooShort(short));
    }

    let mut rows = Vec::new();
    for &length in &config.lengths {
        let reference = generate_reference(4 * length, config.seed ^ length as u64)?;
        let profile = SimProfile {
            length: LengthSpec::Fixed(length),
            count: config.batch,
            sub_rate: 0.01,
            ins_rate: 0.001,
            del_rate: 0.001,
            seed: config.seed,
        };
        let tasks = generate_tasks(&reference, &profile)?;
        let cells: u64 = tasks
            .iter()
            .map(|t| t.query.len() as u64 * t.target.len() as u64)
            .sum();

        for &engine in &config.engines {
            let engine_config = EngineConfig::new(engine, config.group_size)
                .expect("group size validated by the caller");
            let mut wall_ms = 0.0;
            let mut report = None;
            for _ in 0..config.reps {
                let r = run_batch(&tasks, &config.scheme, &engine_config, config.threads)?;
                wall_ms += r.wall_ms;
                report = Some(r);
            }
            let report = report.expect("reps >= 1");
            let wall_ms = wall_ms / config.reps as f64;
            rows.push(SweepRow {
                length,
                engine,
                wall_ms,
                cells_per_sec: cells as f64 / (wall_ms / 1e3),
                spill_transactions: report.counters.spill_transactions,
                eager_transactions_equiv: report.counters.eager_transactions_equiv,
                boundary_cells_written: report.counters.boundary_cells_written,
            });
        }
    }
    Ok(rows)
}

/// TSV rendering with a header row, one row per (length, engine).
pub fn rows_to_tsv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("length\tengine\twall_ms\tcells_per_sec\tspill_transactions\teager_equiv\n");
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.3}\t{:.0}\t{}\t{}\n",
            row.length,
            row.engine.name(),
            row.wall_ms,
            row.cells_per_sec,
            row.spill_transactions,
            row.eager_transactions_equiv
        ));
    }
    out
}
