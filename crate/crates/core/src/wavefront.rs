//! Anti-diagonal lockstep engine with lazy-spill boundary buffering.
//!
//! One task is processed by a group of G lanes. The target is cut into
//! chunks of G strips (8*G DP rows); within a chunk, lane k owns strip k and
//! at step s computes block column `s - k`, so the active blocks form an
//! anti-diagonal that ramps up over a (G-1)-step prologue, runs a main loop,
//! and drains over a (G-1)-step epilogue: `Q + G - 1` steps per chunk for Q
//! query blocks.
//!
//! Strip-to-strip boundaries flow through a rotating scratch of `2 * G`
//! slots; lane k writes the boundary of block column b into slot `b % 2G`
//! right after reading the same slot, so at any step no two lanes touch the
//! same slot and lane k+1 reads at step s+1 exactly what lane k wrote at
//! step s. The last lane's writes are the chunk-bottom boundaries; they
//! accumulate until the lead lane wraps past a half of the buffer, then the
//! whole half is flushed to the backing store in one batch (lazy spilling)
//! and re-read by the first lane of the next chunk. Only interior chunk
//! bottoms are spilled.
//!
//! On this CPU the group is emulated by one worker iterating lanes inside a
//! strict step barrier, which preserves the dependency and scratch-rotation
//! semantics exactly; idle lanes of a short final chunk still advance the
//! step counter, mirroring masked lanes.

use num_rational::Ratio;

use crate::block::{compute_block, BlockBoundary, LaneCarry};
use crate::engine::{AlignmentResult, AlignmentTask, BestCell, EngineConfig};
use crate::scoring::ScoringScheme;
use crate::seqpack::BASES_PER_WORD;
use crate::traffic::{TrafficCounters, BOUNDARY_CELLS};

/// Steps a group of `group_size` lanes needs for one chunk over
/// `query_blocks` block columns: `Q + G - 1`.
pub fn chunk_steps(query_blocks: u64, group_size: u64) -> u64 {
    debug_assert!(query_blocks >= 1 && group_size >= 1);
    query_blocks + group_size - 1
}

/// Batched flush transactions per interior chunk bottom: one per scratch
/// half, `ceil(Q / G)`. An eager per-column policy would issue `Q`.
pub fn spill_flush_count(query_blocks: u64, group_size: u64) -> u64 {
    debug_assert!(query_blocks >= 1 && group_size >= 1);
    query_blocks.div_ceil(group_size)
}

/// Lane utilization of a chunk sweep, in exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Utilization {
    /// Active lane-steps over total lane-steps: `Q / (Q + G - 1)`.
    pub overall: Ratio<u64>,
    /// Average over the prologue and epilogue alone; the triangular ramp
    /// makes this exactly 1/2 (taken as 1/2 for G = 1, where both phases
    /// are empty).
    pub ramp_average: Ratio<u64>,
    /// False when Q < G: the anti-diagonal never fills all lanes and the
    /// main loop is absent. Utilization is still well defined; callers
    /// report the flag.
    pub main_loop_present: bool,
}

/// Utilization for a chunk of `group_size` lanes over `query_blocks`
/// columns. Active lane-steps are `G*(G-1)/2` in each of the prologue and
/// epilogue plus `(Q - G + 1) * G` in the main loop, totalling `Q * G` out
/// of `G * (Q + G - 1)`.
pub fn phase_utilization(query_blocks: u64, group_size: u64) -> Utilization {
    debug_assert!(query_blocks >= 1 && group_size >= 1);
    let ramp_average = if group_size == 1 {
        Ratio::new(1, 2)
    } else {
        let active = group_size * (group_size - 1);
        Ratio::new(active, 2 * active)
    };
    Utilization {
        overall: Ratio::new(query_blocks, chunk_steps(query_blocks, group_size)),
        ramp_average,
        main_loop_present: query_blocks >= group_size,
    }
}

/// Rotating boundary scratch of one group, modeling the double-buffered
/// shared-memory region of `2 * G` slots.
struct ChunkScratch {
    slots: Vec<BlockBoundary>,
    #[cfg(debug_assertions)]
    stamps: Vec<Option<(usize, usize)>>,
}

impl ChunkScratch {
    fn new(slot_count: usize) -> Self {
        Self {
            slots: vec![BlockBoundary::default(); slot_count],
            #[cfg(debug_assertions)]
            stamps: vec![None; slot_count],
        }
    }

    fn slot_of(&self, col: usize) -> usize {
        col % self.slots.len()
    }

    /// Read the boundary for block column `col`. In debug builds, asserts
    /// the slot was written at the previous step by the adjacent lane.
    fn read(&self, step: usize, lane: usize, col: usize) -> BlockBoundary {
        let slot = self.slot_of(col);
        #[cfg(debug_assertions)]
        {
            debug_assert_eq!(
                self.stamps[slot],
                Some((step - 1, lane - 1)),
                "scratch slot {slot} read at step {step} by lane {lane} holds a stale record"
            );
        }
        #[cfg(not(debug_assertions))]
        let _ = (step, lane);
        self.slots[slot]
    }

    fn write(&mut self, step: usize, lane: usize, col: usize, boundary: BlockBoundary) {
        let slot = self.slot_of(col);
        self.slots[slot] = boundary;
        #[cfg(debug_assertions)]
        {
            self.stamps[slot] = Some((step, lane));
        }
        #[cfg(not(debug_assertions))]
        let _ = (step, lane);
    }
}

/// Copy one scratch half's worth of finalized chunk-bottom records into the
/// backing store as a single batched transaction.
#[allow(clippy::needless_range_loop)] // col selects both the slot and the store record
fn flush_half(
    scratch: &ChunkScratch,
    store: &mut [BlockBoundary],
    spill_cursor: &mut usize,
    group_size: usize,
    counters: &mut TrafficCounters,
) {
    let end = (*spill_cursor + group_size).min(store.len());
    debug_assert!(*spill_cursor < end, "flush of an empty half");
    for col in *spill_cursor..end {
        store[col] = scratch.slots[col % scratch.slots.len()];
        counters.boundary_cells_written += BOUNDARY_CELLS;
        counters.eager_transactions_equiv += 1;
    }
    counters.spill_transactions += 1;
    *spill_cursor = end;
}

/// Align one task with the wavefront engine. Score and end coordinates are
/// identical to the oracle's for every admissible group size.
#[allow(clippy::needless_range_loop)] // lane index drives the step/slot arithmetic
pub fn align_one(
    task: &AlignmentTask,
    scheme: &ScoringScheme,
    config: &EngineConfig,
) -> AlignmentResult {
    let q_len = task.query.len();
    let t_len = task.target.len();
    let q_blocks = task.query.word_count();
    let t_blocks = task.target.word_count();
    let group = config.group_size;
    let chunk_count = t_blocks.div_ceil(group);
    let steps_per_chunk = chunk_steps(q_blocks as u64, group as u64) as usize;

    // Inter-chunk backing store, double buffered: written by chunk c, read
    // by chunk c + 1.
    let mut store_prev = vec![BlockBoundary::default(); q_blocks];
    let mut store_next = vec![BlockBoundary::default(); q_blocks];

    let mut counters = TrafficCounters::default();
    let mut best = BestCell::new();
    let mut steps_taken = 0u64;

    for chunk in 0..chunk_count {
        let strips = group.min(t_blocks - chunk * group);
        let interior = chunk + 1 < chunk_count;
        let mut scratch = ChunkScratch::new(config.scratch_slots());
        let mut carries = vec![LaneCarry::default(); strips];
        let mut spill_cursor = 0usize;

        for step in 0..steps_per_chunk {
            // The lead lane is about to wrap into a scratch half whose
            // records are all finalized: spill it first.
            if interior && step >= 2 * group && step % group == 0 {
                flush_half(
                    &scratch,
                    &mut store_next,
                    &mut spill_cursor,
                    group,
                    &mut counters,
                );
            }

            for lane in 0..strips {
                if step < lane {
                    continue;
                }
                let col = step - lane;
                if col >= q_blocks {
                    continue;
                }
                let strip_block = chunk * group + lane;
                let q_valid = task.query.valid_in_block(col);
                let t_valid = task.target.valid_in_block(strip_block);

                let top = if lane == 0 {
                    if chunk == 0 {
                        BlockBoundary::default()
                    } else {
                        counters.boundary_cells_read += BOUNDARY_CELLS;
                        store_prev[col]
                    }
                } else {
                    scratch.read(step, lane, col)
                };

                let mut left = carries[lane];
                left.diag_h = top.corner_h;

                let out = compute_block(
                    task.query.word(col).expect("column in range"),
                    task.target.word(strip_block).expect("strip in range"),
                    q_valid,
                    t_valid,
                    &left,
                    &top,
                    scheme,
                )
                .expect("valid counts in 1..=8");

                carries[lane] = out.right;
                scratch.write(step, lane, col, out.bottom);
                best.consider(
                    out.local_max.score,
                    BASES_PER_WORD * strip_block + out.local_max.row,
                    BASES_PER_WORD * col + out.local_max.col,
                );
            }
            steps_taken += 1;
        }

        if interior {
            while spill_cursor < q_blocks {
                flush_half(
                    &scratch,
                    &mut store_next,
                    &mut spill_cursor,
                    group,
                    &mut counters,
                );
            }
        }
        std::mem::swap(&mut store_prev, &mut store_next);
    }

    debug_assert!(best.score >= 0 && best.end_query < q_len && best.end_target < t_len);
    AlignmentResult {
        id: task.id,
        score: best.score,
        end_query: best.end_query,
        end_target: best.end_target,
        steps_taken,
        counters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::oracle::oracle_align;
    use crate::seqpack::PackedSequence;

    fn task(query: &[u8], target: &[u8]) -> AlignmentTask {
        AlignmentTask::new(
            7,
            PackedSequence::pack(query).unwrap(),
            PackedSequence::pack(target).unwrap(),
        )
    }

    fn scheme(m: i32, x: i32, a: i32, b: i32) -> ScoringScheme {
        ScoringScheme::new(m, x, a, b).unwrap()
    }

    fn config(group: usize) -> EngineConfig {
        EngineConfig::new(Engine::Wavefront, group).unwrap()
    }

    #[test]
    fn perfect_match_group_of_four() {
        let r = align_one(&task(b"ACGT", b"ACGT"), &scheme(1, -4, 6, 1), &config(4));
        assert_eq!((r.score, r.end_target, r.end_query), (4, 3, 3));
        assert_eq!(r.id, 7);
    }

    #[test]
    fn all_mismatch_scores_zero() {
        let r = align_one(&task(b"AAAA", b"TTTT"), &scheme(1, -4, 6, 1), &config(4));
        assert_eq!((r.score, r.end_target, r.end_query), (0, 0, 0));
    }

    #[test]
    fn deletion_pair_matches_frozen_oracle_value() {
        // Fixed before the engine was built; see the oracle regression test.
        let t = task(b"ACGTACGTAC", b"ACGTCGTAC");
        let s = scheme(1, -4, 2, 1);
        for g in [1, 2, 4, 8, 16, 32] {
            let r = align_one(&t, &s, &config(g));
            assert_eq!((r.score, r.end_target, r.end_query), (7, 8, 9), "G={g}");
        }
    }

    #[test]
    fn chunk_steps_examples() {
        assert_eq!(chunk_steps(40, 32), 71);
        assert_eq!(chunk_steps(1, 1), 1);
        assert_eq!(chunk_steps(256, 8), 263);
    }

    #[test]
    fn spill_flush_count_examples() {
        assert_eq!(spill_flush_count(256, 32), 8);
        assert_eq!(spill_flush_count(1, 32), 1);
        assert_eq!(spill_flush_count(100, 16), 7);
    }

    #[test]
    fn utilization_examples() {
        let u = phase_utilization(32, 32);
        assert_eq!(u.overall, Ratio::new(32, 63));
        assert_eq!(u.ramp_average, Ratio::new(1, 2));
        assert!(u.main_loop_present);

        for g in [1, 2, 4, 8, 16, 32] {
            assert_eq!(phase_utilization(64, g).ramp_average, Ratio::new(1, 2));
        }
        assert!(!phase_utilization(4, 8).main_loop_present);
        // Q >> G pushes overall utilization toward 1.
        let u = phase_utilization(1_000_000, 32);
        assert!(u.overall > Ratio::new(99, 100));
    }

    #[test]
    fn steps_follow_the_chunk_law() {
        let s = scheme(1, -4, 6, 1);
        for (q_len, t_len, g) in [
            (1usize, 1usize, 1usize),
            (64, 64, 4),
            (100, 260, 8),
            (320, 40, 32),
            (512, 512, 16),
        ] {
            let q = vec![b'A'; q_len];
            let t = vec![b'C'; t_len];
            let r = align_one(&task(&q, &t), &s, &config(g));
            let q_blocks = q_len.div_ceil(8) as u64;
            let chunks = t_len.div_ceil(8).div_ceil(g) as u64;
            assert_eq!(
                r.steps_taken,
                chunks * chunk_steps(q_blocks, g as u64),
                "q={q_len} t={t_len} G={g}"
            );
        }
    }

    #[test]
    fn boundary_traffic_is_conserved() {
        let s = scheme(1, -4, 6, 1);
        for (q_len, t_len, g) in [(64usize, 128usize, 2usize), (200, 520, 8), (48, 2048, 32)] {
            let q = vec![b'G'; q_len];
            let t = vec![b'G'; t_len];
            let r = align_one(&task(&q, &t), &s, &config(g));
            let q_blocks = q_len.div_ceil(8) as u64;
            let t_blocks = t_len.div_ceil(8);
            let interior = (t_blocks.div_ceil(g) - 1) as u64;
            assert_eq!(
                r.counters.boundary_cells_written,
                2 * 8 * interior * q_blocks,
                "write conservation q={q_len} t={t_len} G={g}"
            );
            assert_eq!(
                r.counters.boundary_cells_read,
                r.counters.boundary_cells_written
            );
            assert_eq!(
                r.counters.spill_transactions,
                interior * spill_flush_count(q_blocks, g as u64)
            );
            assert_eq!(r.counters.eager_transactions_equiv, interior * q_blocks);
        }
    }

    #[test]
    fn lazy_vs_eager_ratio_exact_when_group_divides_columns() {
        let s = scheme(1, -4, 6, 1);
        let r = align_one(&task(&vec![b'A'; 256], &vec![b'A'; 512]), &s, &config(32));
        // 512 bp target = 64 strips = 2 chunks of G=32: one interior
        // boundary of 32 block columns.
        assert_eq!(r.counters.spill_transactions, 1);
        assert_eq!(r.counters.eager_transactions_equiv, 32);
        assert_eq!(
            r.counters.spill_transactions * 32,
            r.counters.eager_transactions_equiv
        );
    }

    #[test]
    fn group_size_invariance_on_mixed_content() {
        let s = scheme(2, -3, 5, 2);
        let q: Vec<u8> = (0..217).map(|i| b"ACGTN"[i % 5]).collect();
        let t: Vec<u8> = (0..175).map(|i| b"ACGT"[(i * 7) % 4]).collect();
        let reference = align_one(&task(&q, &t), &s, &config(1));
        let oracle = oracle_align(&task(&q, &t), &s).unwrap();
        assert_eq!(
            (reference.score, reference.end_target, reference.end_query),
            (oracle.score, oracle.end_target, oracle.end_query)
        );
        for g in [2, 4, 8, 16, 32] {
            let r = align_one(&task(&q, &t), &s, &config(g));
            assert_eq!(
                (r.score, r.end_target, r.end_query),
                (reference.score, reference.end_target, reference.end_query),
                "G={g}"
            );
        }
    }
}
