//! Shared task/result types and engine configuration.

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::seqpack::PackedSequence;
use crate::traffic::TrafficCounters;

/// Admissible lockstep group sizes.
pub const GROUP_SIZES: [usize; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("group size must be one of {GROUP_SIZES:?}, got {0}")]
    InvalidGroupSize(usize),
}

/// Which aligner processes a task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Wavefront,
    Baseline,
    Oracle,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Wavefront => "wavefront",
            Engine::Baseline => "baseline",
            Engine::Oracle => "oracle",
        }
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wavefront" => Ok(Engine::Wavefront),
            "baseline" => Ok(Engine::Baseline),
            "oracle" => Ok(Engine::Oracle),
            other => Err(format!(
                "unknown engine {other:?}; expected wavefront, baseline, or oracle"
            )),
        }
    }
}

/// Engine selection plus the lockstep group size G.
///
/// A group of G lanes sweeps chunks of G strips (8*G DP rows); its rotating
/// boundary scratch holds `2 * G` slots (a double buffer of half-size G).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub engine: Engine,
    pub group_size: usize,
}

impl EngineConfig {
    /// Block edge length in DP cells, fixed by the 4-bit packing of a
    /// 32-bit word.
    pub const BLOCK_DIM: usize = 8;

    pub fn new(engine: Engine, group_size: usize) -> Result<Self, ConfigError> {
        if !GROUP_SIZES.contains(&group_size) {
            return Err(ConfigError::InvalidGroupSize(group_size));
        }
        Ok(Self { engine, group_size })
    }

    /// Rotating scratch slots per group: a double buffer of two G-slot halves.
    pub fn scratch_slots(&self) -> usize {
        2 * self.group_size
    }

    /// Chunk height in DP rows.
    pub fn chunk_rows(&self) -> usize {
        Self::BLOCK_DIM * self.group_size
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            engine: Engine::Wavefront,
            group_size: 16,
        }
    }
}

/// One query-target pair to align.
#[derive(Debug, Clone)]
pub struct AlignmentTask {
    pub id: u64,
    pub query: PackedSequence,
    pub target: PackedSequence,
}

impl AlignmentTask {
    pub fn new(id: u64, query: PackedSequence, target: PackedSequence) -> Self {
        Self { id, query, target }
    }

    /// Cost in blocks, Q * R: the workload model for imbalance reporting.
    pub fn cost_blocks(&self) -> u64 {
        self.query.word_count() as u64 * self.target.word_count() as u64
    }
}

/// Best local score with its end coordinates plus run instrumentation.
///
/// `score == 0` implies `(end_query, end_target) == (0, 0)` by the shared
/// tie-break convention (maximal score, then smallest target index, then
/// smallest query index). The oracle reports zero `steps_taken` and empty
/// counters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentResult {
    pub id: u64,
    pub score: i32,
    /// 0-based query index of the best cell.
    pub end_query: usize,
    /// 0-based target index of the best cell.
    pub end_target: usize,
    pub steps_taken: u64,
    pub counters: TrafficCounters,
}

/// Running maximum under the shared tie-break rule.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BestCell {
    pub score: i32,
    pub end_target: usize,
    pub end_query: usize,
}

impl BestCell {
    pub fn new() -> Self {
        Self {
            score: -1,
            end_target: 0,
            end_query: 0,
        }
    }

    pub fn consider(&mut self, score: i32, end_target: usize, end_query: usize) {
        if score > self.score
            || (score == self.score && (end_target, end_query) < (self.end_target, self.end_query))
        {
            self.score = score;
            self.end_target = end_target;
            self.end_query = end_query;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_size_validation() {
        for g in GROUP_SIZES {
            assert!(EngineConfig::new(Engine::Wavefront, g).is_ok());
        }
        assert!(EngineConfig::new(Engine::Wavefront, 3).is_err());
        assert!(EngineConfig::new(Engine::Wavefront, 0).is_err());
        assert!(EngineConfig::new(Engine::Wavefront, 64).is_err());
    }

    #[test]
    fn scratch_is_double_buffered() {
        let config = EngineConfig::new(Engine::Wavefront, 8).unwrap();
        assert_eq!(config.scratch_slots(), 16);
        assert_eq!(config.chunk_rows(), 64);
    }

    #[test]
    fn best_cell_tie_breaks_on_coordinates() {
        let mut best = BestCell::new();
        best.consider(5, 9, 2);
        best.consider(5, 3, 7);
        assert_eq!((best.score, best.end_target, best.end_query), (5, 3, 7));
        best.consider(5, 3, 9);
        assert_eq!((best.score, best.end_target, best.end_query), (5, 3, 7));
        best.consider(6, 10, 10);
        assert_eq!(best.score, 6);
    }
}
