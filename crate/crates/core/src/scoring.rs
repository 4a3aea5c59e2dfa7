//! Affine-gap scoring parameters and the single-cell recurrence.
//!
//! For cell (i, j) with substitution score `s`:
//!
//! ```text
//! E(i,j) = max(H(i,j-1) - alpha, E(i,j-1) - beta)    gap along the query
//! F(i,j) = max(H(i-1,j) - alpha, F(i-1,j) - beta)    gap along the target
//! H(i,j) = max(0, E(i,j), F(i,j), H(i-1,j-1) + s)
//! ```
//!
//! `alpha` is the full penalty charged on the first base of a gap and `beta`
//! on each continuation; there is no separate open+extend recombination.
//! Callers wanting BWA-MEM-style `(o=6, e=1)` semantics pass `alpha=7,
//! beta=1`. E and F are clamped at 0 here (unsigned-style arithmetic); the
//! clamp can only replace a negative candidate, which the max-with-0 in H
//! already dominates, so H is unchanged — asserted against the unclamped
//! oracle in tests.

use serde::Serialize;
use thiserror::Error;

use crate::seqpack::CODE_N;

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("match score must be >= 1, got {0}")]
    MatchScore(i32),
    #[error("mismatch score must be <= -1, got {0}")]
    MismatchScore(i32),
    #[error(
        "gap penalties must satisfy gap_open >= gap_extend >= 1, got open={open} extend={extend}"
    )]
    GapPenalties { open: i32, extend: i32 },
}

/// Match/mismatch scores and affine gap penalties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScoringScheme {
    pub match_score: i32,
    pub mismatch_score: i32,
    /// Penalty for the first base of a gap (alpha), stored positive.
    pub gap_open: i32,
    /// Penalty for each further gap base (beta), stored positive.
    pub gap_extend: i32,
}

impl ScoringScheme {
    pub fn new(
        match_score: i32,
        mismatch_score: i32,
        gap_open: i32,
        gap_extend: i32,
    ) -> Result<Self, ScoringError> {
        if match_score < 1 {
            return Err(ScoringError::MatchScore(match_score));
        }
        if mismatch_score > -1 {
            return Err(ScoringError::MismatchScore(mismatch_score));
        }
        if gap_extend < 1 || gap_open < gap_extend {
            return Err(ScoringError::GapPenalties {
                open: gap_open,
                extend: gap_extend,
            });
        }
        Ok(Self {
            match_score,
            mismatch_score,
            gap_open,
            gap_extend,
        })
    }

    /// Substitution score for two base codes. N never matches, not even N
    /// against N.
    pub fn substitution(&self, a: u8, b: u8) -> i32 {
        debug_assert!(a <= CODE_N && b <= CODE_N, "padding reached scoring");
        if a == b && a != CODE_N {
            self.match_score
        } else {
            self.mismatch_score
        }
    }
}

/// One DP cell: best local score plus the two gap lanes, all clamped at 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellState {
    pub h: i32,
    pub e: i32,
    pub f: i32,
}

/// Evaluate the recurrence for one cell from its three neighbors.
#[inline]
pub fn cell_update(
    h_diag: i32,
    h_left: i32,
    e_left: i32,
    h_up: i32,
    f_up: i32,
    s: i32,
    scheme: &ScoringScheme,
) -> CellState {
    let e = 0
        .max(h_left - scheme.gap_open)
        .max(e_left - scheme.gap_extend);
    let f = 0.max(h_up - scheme.gap_open).max(f_up - scheme.gap_extend);
    let h = 0.max(e).max(f).max(h_diag + s);
    CellState { h, e, f }
}
