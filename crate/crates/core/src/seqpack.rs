//! 4-bit packed nucleotide sequences and FASTA ingestion.
//!
//! Five base codes exist: A=0, C=1, G=2, T/U=3, N=4. Eight bases pack into
//! one 32-bit word, base `p` in nibble `p % 8` counted from the
//! least-significant nibble, so a block kernel fetches eight bases of query
//! and eight of target with two word loads. Nibbles past the sequence length
//! in the final word hold the padding code 15, which is distinguishable from
//! every real base (including N) and must never reach scoring.

use std::io::BufRead;

use thiserror::Error;

/// Bases stored per 32-bit word.
pub const BASES_PER_WORD: usize = 8;
/// Code for A.
pub const CODE_A: u8 = 0;
/// Code for C.
pub const CODE_C: u8 = 1;
/// Code for G.
pub const CODE_G: u8 = 2;
/// Code for T (and U, normalized at pack time).
pub const CODE_T: u8 = 3;
/// Code for the unknown base N. Scores as a mismatch against everything.
pub const CODE_N: u8 = 4;
/// Nibble value used to fill the unused tail of the last word.
pub const PAD_CODE: u8 = 15;

#[derive(Debug, Error)]
pub enum SeqPackError {
    #[error("invalid base {byte:?} at position {position}")]
    InvalidBase { position: usize, byte: u8 },
    #[error("empty sequence")]
    EmptySequence,
    #[error("corrupt word {word_index}: nibble value {nibble} is not a base code")]
    CorruptWord { word_index: usize, nibble: u8 },
    #[error("block index {index} out of range for {count} blocks")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("malformed FASTA at line {line}")]
    MalformedFasta { line: usize },
    #[error("record {name:?}: {source}")]
    Record {
        name: String,
        #[source]
        source: Box<SeqPackError>,
    },
    #[error("word count {words} does not match length {length}")]
    WordCountMismatch { words: usize, length: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Map one text byte to its base code. Case-insensitive; U folds to T.
pub fn encode_base(byte: u8) -> Option<u8> {
    match byte {
        b'A' | b'a' => Some(CODE_A),
        b'C' | b'c' => Some(CODE_C),
        b'G' | b'g' => Some(CODE_G),
        b'T' | b't' | b'U' | b'u' => Some(CODE_T),
        b'N' | b'n' => Some(CODE_N),
        _ => None,
    }
}

/// Map a base code back to its uppercase text byte.
pub fn decode_base(code: u8) -> Option<u8> {
    match code {
        CODE_A => Some(b'A'),
        CODE_C => Some(b'C'),
        CODE_G => Some(b'G'),
        CODE_T => Some(b'T'),
        CODE_N => Some(b'N'),
        _ => None,
    }
}

/// A nucleotide sequence packed 4 bits per base into 32-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackedSequence {
    words: Vec<u32>,
    length: usize,
}

impl PackedSequence {
    /// Pack text into the 4-bit word representation.
    ///
    /// Accepts `A C G T U N` in either case; U is normalized to T so RNA
    /// input scores identically to DNA.
    pub fn pack(text: &[u8]) -> Result<Self, SeqPackError> {
        if text.is_empty() {
            return Err(SeqPackError::EmptySequence);
        }
        let word_count = text.len().div_ceil(BASES_PER_WORD);
        let mut words = vec![0u32; word_count];
        for (position, &byte) in text.iter().enumerate() {
            let code = encode_base(byte).ok_or(SeqPackError::InvalidBase { position, byte })?;
            words[position / BASES_PER_WORD] |=
                u32::from(code) << (4 * (position % BASES_PER_WORD));
        }
        // Fill the tail of the final word with the padding code.
        for position in text.len()..word_count * BASES_PER_WORD {
            words[position / BASES_PER_WORD] |=
                u32::from(PAD_CODE) << (4 * (position % BASES_PER_WORD));
        }
        Ok(Self {
            words,
            length: text.len(),
        })
    }

    /// Rebuild a sequence from raw words, checking only the word count.
    /// Nibble validity is checked lazily by [`PackedSequence::unpack`].
    pub fn from_raw_parts(words: Vec<u32>, length: usize) -> Result<Self, SeqPackError> {
        if length == 0 {
            return Err(SeqPackError::EmptySequence);
        }
        if words.len() != length.div_ceil(BASES_PER_WORD) {
            return Err(SeqPackError::WordCountMismatch {
                words: words.len(),
                length,
            });
        }
        Ok(Self { words, length })
    }

    /// Decode back to uppercase text (`U` inputs come back as `T`).
    pub fn unpack(&self) -> Result<Vec<u8>, SeqPackError> {
        let mut text = Vec::with_capacity(self.length);
        for position in 0..self.length {
            let nibble = self.code_at(position);
            let byte = decode_base(nibble).ok_or(SeqPackError::CorruptWord {
                word_index: position / BASES_PER_WORD,
                nibble,
            })?;
            text.push(byte);
        }
        Ok(text)
    }

    /// Base count in bp.
    pub fn len(&self) -> usize {
        self.length
    }

    /// Packed sequences are never empty; kept for iterator-style callers.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of packed words, `ceil(len / 8)`.
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Fetch the word holding bases `[8*block_index, 8*block_index + 8)`.
    pub fn word(&self, block_index: usize) -> Result<u32, SeqPackError> {
        self.words
            .get(block_index)
            .copied()
            .ok_or(SeqPackError::IndexOutOfRange {
                index: block_index,
                count: self.words.len(),
            })
    }

    /// Raw word slice.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    /// Base code at position `p` (no padding positions are addressable).
    pub fn code_at(&self, position: usize) -> u8 {
        debug_assert!(position < self.length);
        ((self.words[position / BASES_PER_WORD] >> (4 * (position % BASES_PER_WORD))) & 0xF) as u8
    }

    /// All base codes in order.
    pub fn codes(&self) -> Vec<u8> {
        (0..self.length).map(|p| self.code_at(p)).collect()
    }

    /// Number of valid bases in the given block, 8 for all but a short tail.
    pub fn valid_in_block(&self, block_index: usize) -> usize {
        debug_assert!(block_index < self.words.len());
        (self.length - block_index * BASES_PER_WORD).min(BASES_PER_WORD)
    }
}

/// Read FASTA records, packing each sequence. Multi-line sequences are
/// concatenated; record order is preserved. The record name is the first
/// whitespace-delimited token after `>`.
pub fn read_fasta<R: BufRead>(reader: R) -> Result<Vec<(String, PackedSequence)>, SeqPackError> {
    let mut records = Vec::new();
    let mut current: Option<(String, Vec<u8>)> = None;

    let finish = |current: &mut Option<(String, Vec<u8>)>,
                  records: &mut Vec<(String, PackedSequence)>|
     -> Result<(), SeqPackError> {
        if let Some((name, text)) = current.take() {
            let packed = PackedSequence::pack(&text).map_err(|source| SeqPackError::Record {
                name: name.clone(),
                source: Box::new(source),
            })?;
            records.push((name, packed));
        }
        Ok(())
    };

    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            finish(&mut current, &mut records)?;
            let name = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some((name, Vec::new()));
        } else {
            match current.as_mut() {
                Some((_, text)) => text.extend_from_slice(line.trim().as_bytes()),
                None => return Err(SeqPackError::MalformedFasta { line: line_no }),
            }
        }
    }
    finish(&mut current, &mut records)?;
    Ok(records)
}

/// Write records as FASTA, one sequence line per record.
pub fn write_fasta<W: std::io::Write>(
    writer: &mut W,
    records: &[(String, Vec<u8>)],
) -> std::io::Result<()> {
    for (name, text) in records {
        writeln!(writer, ">{}", name)?;
        writer.write_all(text)?;
        writeln!(writer)?;
    }
    Ok(())
}
