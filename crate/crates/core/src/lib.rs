//! Batch pairwise local alignment (seed extension) over 4-bit packed
//! nucleotide sequences.
//!
//! The DP table is tiled into 8x8 blocks, one packed word of query against
//! one packed word of target. Two schedulers drive the same block kernel:
//!
//! * [`baseline`] walks the table one strip (block row) at a time, storing
//!   every strip-bottom boundary through the backing store;
//! * [`wavefront`] sweeps G strips at once in anti-diagonal lockstep,
//!   accumulating chunk-bottom boundaries in a rotating double buffer and
//!   spilling them in batches (lazy spilling).
//!
//! Both are validated cell-for-cell against the quadratic-space [`oracle`].
//! Traffic counters record boundary traffic so the storage/access arithmetic
//! of the two strategies can be compared exactly.

pub mod baseline;
pub mod batch;
pub mod bench;
pub mod block;
pub mod engine;
pub mod oracle;
pub mod readsim;
pub mod scoring;
pub mod seqpack;
pub mod traffic;
pub mod wavefront;

pub use block::{compute_block, BlockBoundary, BlockResult, LaneCarry};
pub use engine::{AlignmentResult, AlignmentTask, Engine, EngineConfig};
pub use scoring::{cell_update, CellState, ScoringScheme};
pub use seqpack::PackedSequence;
pub use traffic::{predict_traffic, AccessGranularity, TrafficCounters, TrafficModel};
