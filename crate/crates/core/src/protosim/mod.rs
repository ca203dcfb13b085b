//! Monte Carlo simulation of the two-way protocol.
//!
//! Each round Bob sends `n` random BPSK symbols. Alice and Eve take hard
//! decisions `A` and `E`. Alice masks her message `X` as `X' = A ^ X` and
//! publishes it, and Bob forms `X'' = X' ^ B`, a noisy copy of `X`. The
//! wiretap code is not modelled. A Toeplitz hash compresses `X` into a key
//! instead.

mod key;
mod leakage;
mod stats;
mod toeplitz;

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::EveMode;
use crate::channel::{hard_decision, ChannelParams};
use crate::error::{invalid, Result};
use crate::report::{Cell, CsvWriter};

pub use key::{simulate_secret_key, LeakageSource, SecretKeyReport};
pub use leakage::{leakage_exhaustive, LeakageOptions, LeakageReport, ZQuantizer};
pub use stats::{
    binary_mutual_information, estimate_stats, estimate_stats_with_bins, EmpiricalStats, StdErrors, DEFAULT_Z_BINS,
};
pub use toeplitz::{toeplitz_hash, ToeplitzHash};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub block_len: usize,
    pub params: ChannelParams,
    pub eve_mode: EveMode,
    /// Flip probability applied to `X'` on the public channel.
    pub public_channel_ber: f64,
    pub rng_seed: u64,
    pub hash_out_len: usize,
    pub hash_seed: u64,
}

impl ProtocolConfig {
    pub fn new(block_len: usize, params: ChannelParams) -> Self {
        Self {
            block_len,
            params,
            eve_mode: EveMode::Hard,
            public_channel_ber: 0.0,
            rng_seed: 0,
            hash_out_len: block_len / 2,
            hash_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_len == 0 {
            return Err(invalid("block_len", "must be at least 1"));
        }
        self.params.validate()?;
        if !(0.0..0.5).contains(&self.public_channel_ber) {
            return Err(invalid(
                "public_channel_ber",
                format!("{} is outside [0, 0.5)", self.public_channel_ber),
            ));
        }
        if self.hash_out_len > self.block_len {
            return Err(invalid("hash_out_len", "cannot exceed block_len"));
        }
        Ok(())
    }
}

/// Everything produced in one protocol round. Bits are stored as `0`/`1` bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub b: Vec<u8>,
    pub y: Vec<f64>,
    pub a: Vec<u8>,
    pub z: Vec<f64>,
    pub e: Vec<u8>,
    pub x: Vec<u8>,
    pub x_prime: Vec<u8>,
    pub x_dblprime: Vec<u8>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub config: ProtocolConfig,
    pub rounds: Vec<Transcript>,
}

impl Ensemble {
    pub fn symbol_count(&self) -> usize {
        self.rounds.iter().map(Transcript::len).sum()
    }

    /// Write every symbol as one CSV row.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<W> {
        let mut w = CsvWriter::new(
            out,
            &["round", "i", "b", "y", "a", "z", "e", "x", "x_prime", "x_dblprime"],
        )?;
        for (r, t) in self.rounds.iter().enumerate() {
            for i in 0..t.len() {
                w.row([
                    Cell::from(r),
                    Cell::from(i),
                    Cell::from(t.b[i]),
                    Cell::from(t.y[i]),
                    Cell::from(t.a[i]),
                    Cell::from(t.z[i]),
                    Cell::from(t.e[i]),
                    Cell::from(t.x[i]),
                    Cell::from(t.x_prime[i]),
                    Cell::from(t.x_dblprime[i]),
                ])?;
            }
        }
        w.into_inner()
    }
}

/// Generator for one round: the seed selects the run, the stream the round.
pub(crate) fn round_rng(seed: u64, round: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round);
    rng
}

fn bpsk(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

fn one_round(cfg: &ProtocolConfig, round: u64) -> Transcript {
    let n = cfg.block_len;
    let mut rng = round_rng(cfg.rng_seed, round);
    let legit = cfg.params.legit_amplitude();
    let eve = cfg.params.eve_amplitude();
    let mut t = Transcript {
        b: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        a: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        e: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        x_prime: Vec::with_capacity(n),
        x_dblprime: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let b = rng.gen::<bool>() as u8;
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        let x = rng.gen::<bool>() as u8;
        let flip = (cfg.public_channel_ber > 0.0 && rng.gen_bool(cfg.public_channel_ber)) as u8;
        let y = legit * bpsk(b) + n1;
        let z = eve * bpsk(b) + n2;
        let a = hard_decision(y);
        let x_prime = a ^ x;
        t.b.push(b);
        t.y.push(y);
        t.a.push(a);
        t.z.push(z);
        t.e.push(hard_decision(z));
        t.x.push(x);
        t.x_prime.push(x_prime);
        t.x_dblprime.push(x_prime ^ flip ^ b);
    }
    t
}

/// Run `rounds` independent protocol rounds in parallel. The output depends
/// only on the configuration, not on the thread count.
pub fn run_rounds(cfg: &ProtocolConfig, rounds: usize) -> Result<Ensemble> {
    cfg.validate()?;
    let transcripts = (0..rounds as u64).into_par_iter().map(|r| one_round(cfg, r)).collect();
    Ok(Ensemble {
        config: *cfg,
        rounds: transcripts,
    })
}
