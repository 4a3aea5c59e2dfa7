//! The 8x8 block kernel: one packed query word against one packed target
//! word, the unit of work both engines schedule.
//!
//! A block receives its left column (H, E) and diagonal corner in a
//! [`LaneCarry`] and its top row (H, F) plus the corner for the block below
//! in a [`BlockBoundary`], evaluates the cells in row-major order, and
//! returns the carries for the right neighbor and the block below together
//! with the block-local maximum. Rows index the target, columns the query.
//!
//! Partial blocks are handled by valid counts: cells at or past
//! `q_valid`/`t_valid` are never evaluated, so padding nibbles never reach
//! scoring and masked lanes of the outgoing carries are zero.

use thiserror::Error;

use crate::scoring::{cell_update, ScoringScheme};
use crate::seqpack::BASES_PER_WORD;

#[derive(Debug, Error)]
pub enum BlockError {
    #[error("valid counts must be in 1..=8, got query {q_valid}, target {t_valid}")]
    InvalidValidCount { q_valid: usize, t_valid: usize },
}

/// Bottom-row boundary a block passes to the block below: eight H values,
/// eight F values, and the corner H the block below-right needs diagonally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockBoundary {
    pub h: [i32; BASES_PER_WORD],
    pub f: [i32; BASES_PER_WORD],
    pub corner_h: i32,
}

/// Right-column state a lane keeps in registers between consecutive blocks
/// of a strip: eight H values, eight E values, and the top-left corner for
/// the next block. Reset to zero at the start of each strip.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LaneCarry {
    pub h: [i32; BASES_PER_WORD],
    pub e: [i32; BASES_PER_WORD],
    pub diag_h: i32,
}

/// Block-local maximum with its in-block coordinates. Ties go to the
/// smallest row, then the smallest column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockMax {
    pub score: i32,
    pub row: usize,
    pub col: usize,
}

/// Everything a block hands to its neighbors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockResult {
    pub right: LaneCarry,
    pub bottom: BlockBoundary,
    pub local_max: BlockMax,
}

fn unpack_codes(word: u32, valid: usize) -> [u8; BASES_PER_WORD] {
    let mut codes = [0u8; BASES_PER_WORD];
    for (p, code) in codes.iter_mut().enumerate() {
        *code = ((word >> (4 * p)) & 0xF) as u8;
    }
    debug_assert!(
        codes[..valid].iter().all(|&c| c <= 4),
        "padding nibble inside the valid range"
    );
    codes
}

/// Compute one block of up to 8x8 cells.
///
/// Dependencies are wired as the engine schedules them: the left column and
/// diagonal corner from `left`, the top row from `top`, interior cells from
/// block-local values. Outputs:
///
/// * `right.h/e` — the last valid column, zero in masked rows; `right.diag_h`
///   is `top.h[q_valid - 1]`, the corner the next block to the right needs;
/// * `bottom.h/f` — the last valid row, zero in masked columns;
///   `bottom.corner_h` is `left.h[t_valid - 1]`, the corner the block
///   below-right of the left neighbor (i.e. directly below this block's
///   reader) needs diagonally;
/// * `local_max` — the maximum H over valid cells.
#[allow(clippy::needless_range_loop)] // rows/columns index several lanes at once
pub fn compute_block(
    q_word: u32,
    t_word: u32,
    q_valid: usize,
    t_valid: usize,
    left: &LaneCarry,
    top: &BlockBoundary,
    scheme: &ScoringScheme,
) -> Result<BlockResult, BlockError> {
    if !(1..=BASES_PER_WORD).contains(&q_valid) || !(1..=BASES_PER_WORD).contains(&t_valid) {
        return Err(BlockError::InvalidValidCount { q_valid, t_valid });
    }
    let q = unpack_codes(q_word, q_valid);
    let t = unpack_codes(t_word, t_valid);

    // h_above/f_above start as the top row and become row r as it completes.
    let mut h_above = top.h;
    let mut f_above = top.f;
    let mut result = BlockResult::default();
    let mut best = BlockMax {
        score: -1,
        row: 0,
        col: 0,
    };

    for r in 0..t_valid {
        let mut h_left = left.h[r];
        let mut e_left = left.e[r];
        // Corner for column 0: the carry's corner in row 0, the left
        // column one row up otherwise.
        let mut h_diag = if r == 0 { left.diag_h } else { left.h[r - 1] };

        for c in 0..q_valid {
            let h_up = h_above[c];
            let f_up = f_above[c];
            let s = scheme.substitution(t[r], q[c]);
            let cell = cell_update(h_diag, h_left, e_left, h_up, f_up, s, scheme);

            if cell.h > best.score {
                best = BlockMax {
                    score: cell.h,
                    row: r,
                    col: c,
                };
            }
            h_diag = h_up;
            h_left = cell.h;
            e_left = cell.e;
            h_above[c] = cell.h;
            f_above[c] = cell.f;
        }
        result.right.h[r] = h_left;
        result.right.e[r] = e_left;
    }

    result.right.diag_h = top.h[q_valid - 1];
    result.bottom.h[..q_valid].copy_from_slice(&h_above[..q_valid]);
    result.bottom.f[..q_valid].copy_from_slice(&f_above[..q_valid]);
    result.bottom.corner_h = left.h[t_valid - 1];
    result.local_max = best;
    Ok(result)
}
