//! Wgsim-style synthetic read generator.
//!
//! Produces query/target pairs of controlled length and error profile:
//! targets are substrings of a uniform random reference, queries are the
//! same substrings with per-base substitutions and single-base indels
//! applied at the profile rates. Multi-base gaps emerge from adjacent
//! events.
//!
//! Determinism contract: all randomness comes from [`SimRng`], a
//! xoshiro256** generator seeded through splitmix64, both implemented here
//! so batches are bit-reproducible from the seed alone across platforms and
//! toolchain versions. Pair i draws from an independent stream derived from
//! `(seed, i)`, so generation order never changes content. The generator
//! choice is part of this crate's public contract and is never changed
//! silently.

use thiserror::Error;

use crate::engine::AlignmentTask;
use crate::seqpack::PackedSequence;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("reference length must be >= 1")]
    EmptyLength,
    #[error("invalid profile: {0}")]
    ProfileInvalid(String),
}

const BASES: [u8; 4] = *b"ACGT";
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256** 1.0, seeded by four successive splitmix64 outputs.
#[derive(Debug, Clone)]
pub struct SimRng {
    s: [u64; 4],
}

impl SimRng {
    pub fn seeded(seed: u64) -> Self {
        let mut state = seed;
        let mut s = [0u64; 4];
        for word in &mut s {
            *word = splitmix64(&mut state);
        }
        Self { s }
    }

    /// Independent child stream for `(seed, stream)`; used for per-pair
    /// generation so pairs can be produced in any order.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut state = seed ^ stream.wrapping_mul(GOLDEN_GAMMA);
        Self::seeded(splitmix64(&mut state))
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, bound)` by 128-bit fixed-point scaling.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }

    /// Uniform f64 in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn base(&mut self) -> u8 {
        BASES[self.next_below(4) as usize]
    }
}

/// Read length selection: every pair the same length, or uniform over an
/// inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthSpec {
    Fixed(usize),
    Range { min: usize, max: usize },
}

impl LengthSpec {
    pub fn max(&self) -> usize {
        match *self {
            LengthSpec::Fixed(n) => n,
            LengthSpec::Range { max, .. } => max,
        }
    }

    fn draw(&self, rng: &mut SimRng) -> usize {
        match *self {
            LengthSpec::Fixed(n) => n,
            LengthSpec::Range { min, max } => min + rng.next_below((max - min + 1) as u64) as usize,
        }
    }
}

/// Generation parameters for one batch of pairs.
#[derive(Debug, Clone)]
pub struct SimProfile {
    pub length: LengthSpec,
    pub count: usize,
    pub sub_rate: f64,
    pub ins_rate: f64,
    pub del_rate: f64,
    pub seed: u64,
}

impl SimProfile {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.count == 0 {
            return Err(SimError::ProfileInvalid("count must be >= 1".into()));
        }
        match self.length {
            LengthSpec::Fixed(n) if n >= 1 => {}
            LengthSpec::Range { min, max } if min >= 1 && min <= max => {}
            _ => {
                return Err(SimError::ProfileInvalid(
                    "read length must be >= 1 and min <= max".into(),
                ))
            }
        }
        for (name, rate) in [
            ("sub_rate", self.sub_rate),
            ("ins_rate", self.ins_rate),
            ("del_rate", self.del_rate),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return Err(SimError::ProfileInvalid(format!(
                    "{name} must be in [0, 1), got {rate}"
                )));
            }
        }
        if self.sub_rate + self.ins_rate + self.del_rate >= 1.0 {
            return Err(SimError::ProfileInvalid(
                "sub_rate + ins_rate + del_rate must be < 1".into(),
            ));
        }
        Ok(())
    }
}

/// Uniform i.i.d. reference text over {A,C,G,T}, deterministic per seed.
pub fn generate_reference(length: usize, seed: u64) -> Result<Vec<u8>, SimError> {
    if length == 0 {
        return Err(SimError::EmptyLength);
    }
    let mut rng = SimRng::seeded(seed);
    Ok((0..length).map(|_| rng.base()).collect())
}

/// One simulated pair as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulatedPair {
    pub query: Vec<u8>,
    pub target: Vec<u8>,
}

/// Apply the error model to one target to obtain its query. Per base:
/// substitute (into one of the three other bases), insert a random base
/// after it, or delete it, exclusive events at the profile rates.
fn mutate(target: &[u8], profile: &SimProfile, rng: &mut SimRng) -> Vec<u8> {
    let mut query = Vec::with_capacity(target.len() + 4);
    for &base in target {
        let roll = rng.next_f64();
        if roll < profile.sub_rate {
            let idx = BASES
                .iter()
                .position(|&b| b == base)
                .expect("ACGT reference");
            let other = rng.next_below(3) as usize;
            query.push(BASES[(idx + 1 + other) % 4]);
        } else if roll < profile.sub_rate + profile.ins_rate {
            query.push(base);
            query.push(rng.base());
        } else if roll < profile.sub_rate + profile.ins_rate + profile.del_rate {
            // deleted
        } else {
            query.push(base);
        }
    }
    if query.is_empty() {
        // Deleting every base of a short read would produce an unalignable
        // empty query; fall back to the first target base.
        query.push(target[0]);
    }
    query
}

/// Generate `profile.count` pairs as text. The reference must be at least
/// as long as the longest read.
pub fn generate_pair_texts(
    reference: &[u8],
    profile: &SimProfile,
) -> Result<Vec<SimulatedPair>, SimError> {
    profile.validate()?;
    if reference.len() < profile.length.max() {
        return Err(SimError::ProfileInvalid(format!(
            "reference ({} bp) shorter than max read length ({} bp)",
            reference.len(),
            profile.length.max()
        )));
    }
    let mut pairs = Vec::with_capacity(profile.count);
    for i in 0..profile.count {
        let mut rng = SimRng::derive(profile.seed, i as u64);
        let length = profile.length.draw(&mut rng);
        let offset = rng.next_below((reference.len() - length + 1) as u64) as usize;
        let target = reference[offset..offset + length].to_vec();
        let query = mutate(&target, profile, &mut rng);
        pairs.push(SimulatedPair { query, target });
    }
    Ok(pairs)
}

/// Generate pairs and pack them into alignment tasks, ids 0..count.
pub fn generate_tasks(
    reference: &[u8],
    profile: &SimProfile,
) -> Result<Vec<AlignmentTask>, SimError> {
    let pairs = generate_pair_texts(reference, profile)?;
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(i, pair)| {
            AlignmentTask::new(
                i as u64,
                PackedSequence::pack(&pair.query).expect("simulated query packs"),
                PackedSequence::pack(&pair.target).expect("simulated target packs"),
            )
        })
        .collect())
}
