//! Boundary-traffic instrumentation and the analytic storage/access model.

use serde::Serialize;

/// Cells counted per boundary record crossing a strip or chunk bottom:
/// eight H plus eight F values. The diagonal corner rides along as record
/// metadata and is not counted.
pub const BOUNDARY_CELLS: u64 = 16;
/// Bytes per DP cell value.
pub const CELL_BYTES: u64 = 4;

/// Counts of intermediate boundary traffic through the backing store.
///
/// `spill_transactions` counts contiguous batched flushes on the write side;
/// `eager_transactions_equiv` is what a flush-per-block-column policy would
/// have issued for the same data. Monotone non-decreasing during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrafficCounters {
    pub boundary_cells_written: u64,
    pub boundary_cells_read: u64,
    pub spill_transactions: u64,
    pub eager_transactions_equiv: u64,
}

impl TrafficCounters {
    pub fn merge(&mut self, other: &TrafficCounters) {
        self.boundary_cells_written += other.boundary_cells_written;
        self.boundary_cells_read += other.boundary_cells_read;
        self.spill_transactions += other.spill_transactions;
        self.eager_transactions_equiv += other.eager_transactions_equiv;
    }
}

/// Minimum global-memory transaction size for the access model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessGranularity {
    /// 128-byte transactions (architectures until Pascal).
    PreVolta,
    /// 32-byte transactions (Volta and after).
    PostVolta,
}

impl AccessGranularity {
    pub fn bytes(self) -> u64 {
        match self {
            AccessGranularity::PreVolta => 128,
            AccessGranularity::PostVolta => 32,
        }
    }
}

/// Square-table single-lane storage model: one n x n DP table walked strip
/// by strip with every strip-bottom boundary round-tripping through the
/// backing store.
#[derive(Debug, Clone, Copy)]
pub struct TrafficModel {
    /// Sequence length in bp (square-table assumption).
    pub n: u64,
    pub granularity: AccessGranularity,
}

/// Predicted data volumes for [`TrafficModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrafficPrediction {
    /// Input actually needed by the extension: the two sequences, `2n`.
    pub necessary: u64,
    /// Input plus intermediate boundary data: `2n + n^2/4`.
    pub stored: u64,
    /// Volume moved once access granularity is applied:
    /// `128n + 16n^2` pre-Volta, `32n + 4n^2` post-Volta.
    pub accessed: u64,
}

/// Evaluate the model formulas. The quadratic term counts two 4-byte
/// boundary values (H, F) per cell column for each of the n/8 strip bottoms,
/// i.e. `n^2/4` cell-sized units; instrumented engines count the same units
/// in `boundary_cells_written`, interior bottoms only (the instrumented
/// count is short of the formula by exactly one strip, `2n` cells).
pub fn predict_traffic(model: &TrafficModel) -> TrafficPrediction {
    let n = model.n;
    let quadratic = n * n / 4;
    let accessed = match model.granularity {
        AccessGranularity::PreVolta => 128 * n + 16 * n * n,
        AccessGranularity::PostVolta => 32 * n + 4 * n * n,
    };
    TrafficPrediction {
        necessary: 2 * n,
        stored: 2 * n + quadratic,
        accessed,
    }
}
