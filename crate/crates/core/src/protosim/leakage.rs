//! Exact key leakage for short blocks.
//!
//! Eve's view is her quantised observation of each symbol. The message mask
//! `X'` is independent of `(A, Z)` when `X` is uniform, so it adds nothing.
//! The quantiser is symmetric about zero, and mirroring symbol `i`'s bin
//! maps the posterior of `A` to that of `A ^ e_i`, which shifts the key by
//! the constant `T e_i`. Neither `H(K | view)` nor the divergence from the
//! key marginal changes under such shifts, because `A` is exactly uniform.
//! So only bin magnitudes are enumerated, each weighted by both mirrors.

use serde::{Deserialize, Serialize};

use super::toeplitz::ToeplitzHash;
use crate::channel::{ChannelParams, Crossover};
use crate::error::{invalid, Error, Result};
use crate::mathkit::erfc;

const MAX_BLOCK_LEN: usize = 12;
const MAX_BINS: usize = 8;
/// Largest number of raw eavesdropper views, `bins^n`.
const VIEW_LIMIT: u128 = 1 << 30;
/// Outer quantiser edges sit this far beyond the eavesdropper's amplitude.
const EDGE_PAD: f64 = 2.0;

/// Uniform quantiser on `[-(s + 2), s + 2]`, open at both ends, where `s` is
/// the eavesdropper's received amplitude. Two bins is a hard decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZQuantizer {
    pub bins: usize,
}

impl ZQuantizer {
    /// Interior edges in increasing order.
    pub fn edges(&self, amplitude: f64) -> Vec<f64> {
        let half = amplitude + EDGE_PAD;
        (1..self.bins)
            .map(|k| -half + 2.0 * half * k as f64 / self.bins as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageOptions {
    pub block_len: usize,
    pub hash_out_len: usize,
    pub params: ChannelParams,
    pub quantizer: ZQuantizer,
    pub hash_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub block_len: usize,
    pub hash_out_len: usize,
    pub bins: usize,
    /// `I(K; view)` in bits for the quantised view.
    pub mi_key_eve: f64,
    /// Half-L1 distance of `(K, view)` from uniform `K` independent of the view.
    pub sd_uniform: f64,
    /// `H(K)`: the rank of the hash matrix.
    pub key_entropy: f64,
}

/// Upper tail `P(N > x)` of a standard normal.
fn upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `P(lo < N + mean <= hi)`, accurate in both tails.
fn interval_mass(lo: f64, hi: f64, mean: f64) -> f64 {
    let (a, b) = (lo - mean, hi - mean);
    if a >= 0.0 {
        upper_tail(a) - upper_tail(b)
    } else if b <= 0.0 {
        upper_tail(-b) - upper_tail(-a)
    } else {
        1.0 - upper_tail(-a) - upper_tail(b)
    }
}

/// Per-symbol class weights and posteriors `P(A = 1 | bin)` for the
/// non-negative-side bin of each magnitude class.
fn symbol_classes(opts: &LeakageOptions) -> Vec<(f64, f64)> {
    let s = opts.params.eve_amplitude();
    let eps = Crossover::from_snr(opts.params.eta).eps;
    let q = opts.quantizer.bins;
    let mut bounds = vec![f64::NEG_INFINITY];
    bounds.extend(opts.quantizer.edges(s));
    bounds.push(f64::INFINITY);
    // Joint P(A = a, bin = j) with B uniform; bit 0 is sent as +s.
    let joint = |a: u8, j: usize| {
        let given_zero = interval_mass(bounds[j], bounds[j + 1], s);
        let given_one = interval_mass(bounds[j], bounds[j + 1], -s);
        let (pa0, pa1) = if a == 0 { (1.0 - eps, eps) } else { (eps, 1.0 - eps) };
        0.5 * pa0 * given_zero + 0.5 * pa1 * given_one
    };
    // Bins q/2 .. q-1 lie on the non-negative side; the middle bin of an odd
    // quantiser is its own mirror.
    (q / 2..q)
        .map(|j| {
            let (j0, j1) = (joint(0, j), joint(1, j));
            let mirror = q - 1 - j;
            let weight = if mirror == j {
                j0 + j1
            } else {
                j0 + j1 + joint(0, mirror) + joint(1, mirror)
            };
            (weight, j1 / (j0 + j1))
        })
        .collect()
}

/// Exact mutual information between the hashed key `K = T A` and Eve's
/// quantised view, by enumeration.
pub fn leakage_exhaustive(opts: &LeakageOptions) -> Result<LeakageReport> {
    let n = opts.block_len;
    let m = opts.hash_out_len;
    let q = opts.quantizer.bins;
    opts.params.validate()?;
    if n == 0 || n > MAX_BLOCK_LEN {
        return Err(invalid("block_len", format!("{n} is outside 1..={MAX_BLOCK_LEN}")));
    }
    if m > n {
        return Err(invalid("hash_out_len", "cannot exceed block_len"));
    }
    if q == 0 || q > MAX_BINS {
        return Err(invalid("bins", format!("{q} is outside 1..={MAX_BINS}")));
    }
    let views = (q as u128).pow(n as u32);
    if views > VIEW_LIMIT {
        return Err(Error::BudgetExceeded {
            required: views,
            limit: VIEW_LIMIT,
        });
    }

    let hash = ToeplitzHash::new(n, m, opts.hash_seed)?;
    let inputs = 1usize << n;
    let keys = 1usize << m;
    let key_of: Vec<usize> = (0..inputs as u64).map(|a| hash.hash_word(a) as usize).collect();
    // A is exactly uniform, so P(k) is the preimage size over 2^n.
    let mut marginal = vec![0.0f64; keys];
    for &k in &key_of {
        marginal[k] += 1.0;
    }
    for p in &mut marginal {
        *p /= inputs as f64;
    }
    let key_entropy: f64 = marginal
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * (1.0 / p).log2())
        .sum();

    let classes = symbol_classes(opts);
    let c = classes.len();
    let patterns = c.pow(n as u32);
    let uniform = 1.0 / keys as f64;
    let mut dist = vec![0.0f64; inputs];
    let mut cond = vec![0.0f64; keys];
    let mut mi = 0.0;
    let mut sd = 0.0;
    for pattern in 0..patterns {
        let mut weight = 1.0;
        dist[0] = 1.0;
        let mut filled = 1usize;
        let mut rest = pattern;
        for _ in 0..n {
            let (w, p1) = classes[rest % c];
            rest /= c;
            weight *= w;
            // Bits are added from the lowest position up.
            for a in 0..filled {
                dist[a + filled] = dist[a] * p1;
                dist[a] *= 1.0 - p1;
            }
            filled *= 2;
        }
        if weight == 0.0 {
            continue;
        }
        cond.fill(0.0);
        for (a, &p) in dist.iter().enumerate() {
            cond[key_of[a]] += p;
        }
        let total: f64 = cond.iter().sum();
        for p in &mut cond {
            *p /= total;
        }
        let mut divergence = 0.0;
        let mut l1 = 0.0;
        for (k, &p) in cond.iter().enumerate() {
            if p > 0.0 {
                divergence += p * (p / marginal[k]).log2();
            }
            l1 += (p - uniform).abs();
        }
        mi += weight * divergence;
        sd += weight * 0.5 * l1;
    }
    Ok(LeakageReport {
        block_len: n,
        hash_out_len: m,
        bins: q,
        mi_key_eve: mi.max(0.0),
        sd_uniform: sd,
        key_entropy,
    })
}
