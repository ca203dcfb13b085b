//! Toeplitz universal hashing over GF(2).
//!
//! `T[i][j] = d[i - j + n - 1]` for a pseudorandom diagonal sequence `d` of
//! length `n + m - 1` drawn from the seed. The sequence is the same for every
//! `m`, so a shorter output is always a prefix of a longer one.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzHash {
    input_len: usize,
    /// Row `i` packed little-endian into 64-bit words.
    rows: Vec<Vec<u64>>,
}

impl ToeplitzHash {
    pub fn new(input_len: usize, output_len: usize, seed: u64) -> Result<Self> {
        if output_len > input_len {
            return Err(invalid(
                "hash_out_len",
                format!("{output_len} exceeds input length {input_len}"),
            ));
        }
        let diag_len = (input_len + output_len).saturating_sub(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut diag = Vec::with_capacity(diag_len);
        while diag.len() < diag_len {
            let word = rng.next_u64();
            diag.extend((0..64).map(|k| ((word >> k) & 1) as u8).take(diag_len - diag.len()));
        }
        let words = input_len.div_ceil(64);
        let rows = (0..output_len)
            .map(|i| {
                let mut row = vec![0u64; words];
                for j in 0..input_len {
                    if diag[i + input_len - 1 - j] == 1 {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        Ok(Self { input_len, rows })
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn output_len(&self) -> usize {
        self.rows.len()
    }

    /// Pack `0`/`1` bytes into words; the result feeds [`Self::hash_packed`].
    pub fn pack(bits: &[u8]) -> Vec<u64> {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (j, &b) in bits.iter().enumerate() {
            words[j / 64] |= ((b & 1) as u64) << (j % 64);
        }
        words
    }

    pub fn hash(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.input_len {
            return Err(invalid(
                "bits",
                format!("expected {} bits, got {}", self.input_len, bits.len()),
            ));
        }
        Ok(self.hash_packed(&Self::pack(bits)))
    }

    pub fn hash_packed(&self, words: &[u64]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|row| (row.iter().zip(words).map(|(r, w)| (r & w).count_ones()).sum::<u32>() & 1) as u8)
            .collect()
    }

    /// Hash of an input of at most 64 bits given as an integer, as an
    /// integer with output bit `i` in position `i`.
    pub(crate) fn hash_word(&self, input: u64) -> u64 {
        self.rows.iter().enumerate().fold(0u64, |acc, (i, row)| {
            acc | (((row[0] & input).count_ones() as u64) & 1) << i
        })
    }
}

/// One-shot Toeplitz hash of `bits` to `out_len` bits.
pub fn toeplitz_hash(bits: &[u8], hash_seed: u64, out_len: usize) -> Result<Vec<u8>> {
    ToeplitzHash::new(bits.len(), out_len, hash_seed)?.hash(bits)
}
