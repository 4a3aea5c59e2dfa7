//! Single-lane reference scheduler: one lane walks the whole table strip by
//! strip, left to right, storing every interior strip-bottom boundary
//! through the backing store — the inter-query strategy whose boundary
//! traffic the wavefront engine divides by G.
//!
//! Every boundary record round-trips individually, so for this engine each
//! write is its own transaction and `spill_transactions` equals
//! `eager_transactions_equiv`.

use crate::block::{compute_block, BlockBoundary, LaneCarry};
use crate::engine::{AlignmentResult, AlignmentTask, BestCell, EngineConfig};
use crate::scoring::ScoringScheme;
use crate::seqpack::BASES_PER_WORD;
use crate::traffic::{TrafficCounters, BOUNDARY_CELLS};

/// Align one task strip by strip. Scores and end coordinates are identical
/// to the oracle's and the wavefront engine's; `steps_taken` counts blocks,
/// one block per step for the single lane. The group size in `config` does
/// not affect this engine.
#[allow(clippy::needless_range_loop)] // col selects both the word and the store record
pub fn align_one_baseline(
    task: &AlignmentTask,
    scheme: &ScoringScheme,
    _config: &EngineConfig,
) -> AlignmentResult {
    let q_blocks = task.query.word_count();
    let t_blocks = task.target.word_count();

    // One strip bottom in flight: written while walking strip s, read back
    // while walking strip s + 1.
    let mut store = vec![BlockBoundary::default(); q_blocks];
    let mut counters = TrafficCounters::default();
    let mut best = BestCell::new();
    let mut steps_taken = 0u64;

    for strip in 0..t_blocks {
        let t_valid = task.target.valid_in_block(strip);
        let t_word = task.target.word(strip).expect("strip in range");
        let mut carry = LaneCarry::default();
        let interior = strip + 1 < t_blocks;

        for col in 0..q_blocks {
            let q_valid = task.query.valid_in_block(col);
            let top = if strip == 0 {
                BlockBoundary::default()
            } else {
                counters.boundary_cells_read += BOUNDARY_CELLS;
                store[col]
            };
            let mut left = carry;
            left.diag_h = top.corner_h;

            let out = compute_block(
                task.query.word(col).expect("column in range"),
                t_word,
                q_valid,
                t_valid,
                &left,
                &top,
                scheme,
            )
            .expect("valid counts in 1..=8");

            carry = out.right;
            if interior {
                store[col] = out.bottom;
                counters.boundary_cells_written += BOUNDARY_CELLS;
                counters.spill_transactions += 1;
                counters.eager_transactions_equiv += 1;
            }
            best.consider(
                out.local_max.score,
                BASES_PER_WORD * strip + out.local_max.row,
                BASES_PER_WORD * col + out.local_max.col,
            );
            steps_taken += 1;
        }
    }

    AlignmentResult {
        id: task.id,
        score: best.score,
        end_query: best.end_query,
        end_target: best.end_target,
        steps_taken,
        counters,
    }
}
