//! Property tests wiring the modules against each other and against the
//! full-table oracle.
#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use wavesw::baseline::align_one_baseline;
use wavesw::block::{compute_block, BlockBoundary, LaneCarry};
use wavesw::engine::{AlignmentTask, Engine, EngineConfig, GROUP_SIZES};
use wavesw::oracle::{oracle_align, FullTable, GapLaneMode};
use wavesw::scoring::ScoringScheme;
use wavesw::seqpack::{PackedSequence, BASES_PER_WORD};
use wavesw::wavefront::align_one;

fn any_scheme() -> impl Strategy<Value = ScoringScheme> {
    (1i32..=4, -6i32..=-1, 1i32..=3)
        .prop_flat_map(|(m, x, b)| (Just(m), Just(x), b..=8, Just(b)))
        .prop_map(|(m, x, a, b)| ScoringScheme::new(m, x, a, b).unwrap())
}

fn dna(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..=max_len)
}

fn dna_with_n(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"ACGTN".to_vec()), 1..=max_len)
}

fn task(query: &[u8], target: &[u8]) -> AlignmentTask {
    AlignmentTask::new(
        0,
        PackedSequence::pack(query).unwrap(),
        PackedSequence::pack(target).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// unpack(pack(t)) = uppercase(t) with U folded to T, and the word
    /// count is always ceil(len / 8).
    #[test]
    fn seqpack_round_trip(text in prop::collection::vec(
        prop::sample::select(b"ACGTUNacgtun".to_vec()), 1..=10_000
    )) {
        let packed = PackedSequence::pack(&text).unwrap();
        prop_assert_eq!(packed.word_count(), text.len().div_ceil(BASES_PER_WORD));
        let normalized: Vec<u8> = text
            .iter()
            .map(|b| match b.to_ascii_uppercase() {
                b'U' => b'T',
                up => up,
            })
            .collect();
        prop_assert_eq!(packed.unpack().unwrap(), normalized);
        prop_assert_eq!(packed.len(), text.len());
    }

    /// Clamping E/F at zero never changes H.
    #[test]
    fn clamped_gap_lanes_preserve_h(
        query in dna_with_n(48),
        target in dna(48),
        scheme in any_scheme(),
    ) {
        let q = PackedSequence::pack(&query).unwrap();
        let t = PackedSequence::pack(&target).unwrap();
        let literal = FullTable::build(&q, &t, &scheme, GapLaneMode::Literal).unwrap();
        let clamped = FullTable::build(&q, &t, &scheme, GapLaneMode::ClampedAtZero).unwrap();
        prop_assert_eq!(literal.h, clamped.h);
    }

    /// Local alignment score is symmetric under swapping the sequences.
    #[test]
    fn oracle_score_is_symmetric(
        a in dna(64),
        b in dna(64),
        scheme in any_scheme(),
    ) {
        let forward = oracle_align(&task(&a, &b), &scheme).unwrap();
        let backward = oracle_align(&task(&b, &a), &scheme).unwrap();
        prop_assert_eq!(forward.score, backward.score);
    }

    /// Appending bases to either sequence never lowers the score.
    #[test]
    fn oracle_score_is_prefix_monotone(
        query in dna(48),
        target in dna(48),
        query_tail in dna(16),
        target_tail in dna(16),
        scheme in any_scheme(),
    ) {
        let base = oracle_align(&task(&query, &target), &scheme).unwrap().score;
        let mut longer_q = query.clone();
        longer_q.extend_from_slice(&query_tail);
        prop_assert!(oracle_align(&task(&longer_q, &target), &scheme).unwrap().score >= base);
        let mut longer_t = target.clone();
        longer_t.extend_from_slice(&target_tail);
        prop_assert!(oracle_align(&task(&query, &longer_t), &scheme).unwrap().score >= base);
    }

    /// H never exceeds the diagonal budget min(i+1, j+1) * match.
    #[test]
    fn oracle_h_respects_diagonal_budget(
        query in dna(40),
        target in dna(40),
        scheme in any_scheme(),
    ) {
        let q = PackedSequence::pack(&query).unwrap();
        let t = PackedSequence::pack(&target).unwrap();
        let table = FullTable::build(&q, &t, &scheme, GapLaneMode::Literal).unwrap();
        for (i, row) in table.h.iter().enumerate() {
            for (j, &h) in row.iter().enumerate() {
                let budget = (i + 1).min(j + 1) as i32 * scheme.match_score;
                prop_assert!(h >= 0 && h <= budget, "H({},{}) = {} over budget {}", i, j, h, budget);
            }
        }
    }

    /// Tiling the table with compute_block wired left-to-right and
    /// top-to-bottom reproduces the oracle's full table: every strip-bottom
    /// H/F row, every right-column H/E lane, and the global best.
    #[test]
    fn block_composition_matches_oracle(
        query in dna_with_n(64),
        target in dna(64),
        scheme in any_scheme(),
    ) {
        let q = PackedSequence::pack(&query).unwrap();
        let t = PackedSequence::pack(&target).unwrap();
        let table = FullTable::build(&q, &t, &scheme, GapLaneMode::ClampedAtZero).unwrap();
        let (expect_score, expect_ti, expect_qj) = table.best();

        let q_blocks = q.word_count();
        let t_blocks = t.word_count();
        let mut store: Vec<BlockBoundary> = vec![BlockBoundary::default(); q_blocks];
        let mut best = (-1i32, 0usize, 0usize);

        for strip in 0..t_blocks {
            let t_valid = t.valid_in_block(strip);
            let mut carry = LaneCarry::default();
            for col in 0..q_blocks {
                let q_valid = q.valid_in_block(col);
                let top = if strip == 0 { BlockBoundary::default() } else { store[col] };
                let mut left = carry;
                left.diag_h = top.corner_h;
                let out = compute_block(
                    q.word(col).unwrap(),
                    t.word(strip).unwrap(),
                    q_valid,
                    t_valid,
                    &left,
                    &top,
                    &scheme,
                )
                .unwrap();

                let last_row = strip * 8 + t_valid - 1;
                for c in 0..q_valid {
                    prop_assert_eq!(out.bottom.h[c], table.h[last_row][col * 8 + c]);
                    prop_assert_eq!(out.bottom.f[c], table.f[last_row][col * 8 + c]);
                }
                let last_col = col * 8 + q_valid - 1;
                for r in 0..t_valid {
                    prop_assert_eq!(out.right.h[r], table.h[strip * 8 + r][last_col]);
                    prop_assert_eq!(out.right.e[r], table.e[strip * 8 + r][last_col]);
                }

                let cell = (
                    out.local_max.score,
                    strip * 8 + out.local_max.row,
                    col * 8 + out.local_max.col,
                );
                if cell.0 > best.0 || (cell.0 == best.0 && (cell.1, cell.2) < (best.1, best.2)) {
                    best = cell;
                }
                carry = out.right;
                store[col] = out.bottom;
            }
        }
        prop_assert_eq!(best, (expect_score, expect_ti, expect_qj));
    }

    /// Both engines reproduce the oracle exactly, for a group size drawn
    /// per case.
    #[test]
    fn engines_match_oracle_on_random_pairs(
        query in dna_with_n(96),
        target in dna_with_n(96),
        scheme in any_scheme(),
        g_index in 0usize..GROUP_SIZES.len(),
    ) {
        let task = task(&query, &target);
        let expect = oracle_align(&task, &scheme).unwrap();
        let wave = align_one(
            &task,
            &scheme,
            &EngineConfig::new(Engine::Wavefront, GROUP_SIZES[g_index]).unwrap(),
        );
        let base = align_one_baseline(
            &task,
            &scheme,
            &EngineConfig::new(Engine::Baseline, 16).unwrap(),
        );
        for got in [&wave, &base] {
            prop_assert_eq!(got.score, expect.score);
            prop_assert_eq!(got.end_target, expect.end_target);
            prop_assert_eq!(got.end_query, expect.end_query);
        }
    }

    /// Scores and coordinates are independent of worker count and
    /// submission order.
    #[test]
    fn batch_results_are_schedule_transparent(
        seed in 0u64..1_000,
    ) {
        use wavesw::batch::run_batch;
        use wavesw::readsim::{generate_reference, generate_tasks, LengthSpec, SimProfile};

        let reference = generate_reference(2_000, seed).unwrap();
        let profile = SimProfile {
            length: LengthSpec::Range { min: 9, max: 120 },
            count: 24,
            sub_rate: 0.05,
            ins_rate: 0.01,
            del_rate: 0.01,
            seed,
        };
        let tasks = generate_tasks(&reference, &profile).unwrap();
        let scheme = ScoringScheme::new(1, -4, 6, 1).unwrap();
        let config = EngineConfig::new(Engine::Wavefront, 4).unwrap();

        let serial = run_batch(&tasks, &scheme, &config, 1).unwrap();
        let parallel = run_batch(&tasks, &scheme, &config, 3).unwrap();
        prop_assert_eq!(&serial.results, &parallel.results);

        let mut reversed_tasks = tasks.clone();
        reversed_tasks.reverse();
        let reversed = run_batch(&reversed_tasks, &scheme, &config, 3).unwrap();
        let mut back = reversed.results.clone();
        back.reverse();
        prop_assert_eq!(&serial.results, &back);
    }
}
