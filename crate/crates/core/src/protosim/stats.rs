//! Plug-in estimators over a simulated ensemble.

use serde::{Deserialize, Serialize};

use super::Ensemble;
use crate::capacity::EveMode;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_Z_BINS: usize = 1024;
const MIN_SAMPLES: usize = 1000;
const BATCHES: usize = 20;
/// Eve's observations are binned over `+-(amplitude + Z_RANGE_PAD)`.
const Z_RANGE_PAD: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub eps_a: f64,
    pub eps_e: f64,
    pub mi_ab: f64,
    pub mi_ae: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub eps_a_hat: f64,
    pub eps_e_hat: f64,
    /// `I(A; B)` in bits.
    pub mi_ab_hat: f64,
    /// Eve's information about `A` in bits: `I(A; E)` for a hard-decision
    /// eavesdropper, `I(X; X' | Z)` with binned `Z` for a soft one.
    pub mi_ae_hat: f64,
    pub sample_count: usize,
    pub eve_mode: EveMode,
    /// Bins used for `Z` in soft mode.
    pub z_bins: Option<usize>,
    pub std_err: StdErrors,
}

impl EmpiricalStats {
    /// Estimated secret-key rate `mi_ab_hat - mi_ae_hat`.
    pub fn secrecy_gap(&self) -> f64 {
        self.mi_ab_hat - self.mi_ae_hat
    }

    pub const CSV_HEADER: [&'static str; 12] = [
        "sample_count",
        "eve_mode",
        "z_bins",
        "eps_a_hat",
        "eps_a_se",
        "eps_e_hat",
        "eps_e_se",
        "mi_ab_hat",
        "mi_ab_se",
        "mi_ae_hat",
        "mi_ae_se",
        "secrecy_gap",
    ];
}

fn xlog2x_sum(counts: &[u64], total: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum()
}

/// Plug-in `I(U; V)` from a row-major `rows x cols` count table.
fn mi_from_counts(counts: &[u64], rows: usize, cols: usize) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    let row: Vec<u64> = (0..rows)
        .map(|r| counts[r * cols..(r + 1) * cols].iter().sum())
        .collect();
    let col: Vec<u64> = (0..cols)
        .map(|c| (0..rows).map(|r| counts[r * cols + c]).sum())
        .collect();
    (xlog2x_sum(counts, t) - xlog2x_sum(&row, t) - xlog2x_sum(&col, t)).max(0.0)
}

/// Plug-in `I(U; V | W)` from `(u, v)` 2x2 tables stacked over `w`.
fn conditional_mi(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .chunks(4)
        .map(|t| {
            let n: u64 = t.iter().sum();
            n as f64 / total as f64 * mi_from_counts(t, 2, 2)
        })
        .sum()
}

/// Plug-in mutual information in bits between two equal-length bit vectors.
pub fn binary_mutual_information(u: &[u8], v: &[u8]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(invalid("bits", "vectors differ in length"));
    }
    let mut counts = [0u64; 4];
    for (&a, &b) in u.iter().zip(v) {
        counts[(2 * (a & 1) + (b & 1)) as usize] += 1;
    }
    Ok(mi_from_counts(&counts, 2, 2))
}

#[derive(Clone)]
struct Tally {
    n: u64,
    err_a: u64,
    err_e: u64,
    ab: [u64; 4],
    ae: [u64; 4],
    /// `(x, x', z-bin)` counts, soft mode only.
    xxz: Vec<u64>,
}

impl Tally {
    fn new(z_bins: usize) -> Self {
        Self {
            n: 0,
            err_a: 0,
            err_e: 0,
            ab: [0; 4],
            ae: [0; 4],
            xxz: vec![0; 4 * z_bins],
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.n += other.n;
        self.err_a += other.err_a;
        self.err_e += other.err_e;
        for i in 0..4 {
            self.ab[i] += other.ab[i];
            self.ae[i] += other.ae[i];
        }
        for (s, o) in self.xxz.iter_mut().zip(&other.xxz) {
            *s += o;
        }
    }

    fn mi_ae(&self, mode: EveMode) -> f64 {
        match mode {
            EveMode::Hard => mi_from_counts(&self.ae, 2, 2),
            EveMode::Soft => conditional_mi(&self.xxz),
        }
    }
}

fn binomial_se(p: f64, n: f64) -> f64 {
    (p * (1.0 - p)).max(1.0 / n).sqrt() / n.sqrt()
}

fn batch_se(values: &[f64], floor: f64) -> f64 {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (var / k).sqrt().max(floor)
}

/// Estimate crossover rates and mutual informations, with binomial standard
/// errors for the rates and batch-means errors for the informations.
pub fn estimate_stats(ens: &Ensemble) -> Result<EmpiricalStats> {
    estimate_stats_with_bins(ens, DEFAULT_Z_BINS)
}

/// As [`estimate_stats`] with a chosen number of `Z` bins for soft mode.
pub fn estimate_stats_with_bins(ens: &Ensemble, z_bins: usize) -> Result<EmpiricalStats> {
    let total = ens.symbol_count();
    if total < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: total,
            needed: MIN_SAMPLES,
        });
    }
    let mode = ens.config.eve_mode;
    let bins = match mode {
        EveMode::Hard => 0,
        EveMode::Soft if z_bins >= 2 => z_bins,
        EveMode::Soft => return Err(invalid("z_bins", "need at least 2 bins")),
    };
    let half_range = ens.config.params.eve_amplitude() + Z_RANGE_PAD;
    let bin_of = |z: f64| -> usize {
        let u = (z + half_range) / (2.0 * half_range) * bins as f64;
        (u.max(0.0) as usize).min(bins - 1)
    };

    let batch_size = total.div_ceil(BATCHES);
    let mut batches = vec![Tally::new(bins); BATCHES];
    let mut index = 0usize;
    for t in &ens.rounds {
        for i in 0..t.len() {
            let tally = &mut batches[index / batch_size];
            index += 1;
            let (a, b, e) = (t.a[i], t.b[i], t.e[i]);
            tally.n += 1;
            tally.err_a += (a != b) as u64;
            tally.err_e += (e != b) as u64;
            tally.ab[(2 * a + b) as usize] += 1;
            tally.ae[(2 * a + e) as usize] += 1;
            if bins > 0 {
                let cell = 4 * bin_of(t.z[i]) + (2 * t.x[i] + t.x_prime[i]) as usize;
                tally.xxz[cell] += 1;
            }
        }
    }
    let batches: Vec<Tally> = batches.into_iter().filter(|b| b.n > 0).collect();
    let mut all = Tally::new(bins);
    for b in &batches {
        all.merge(b);
    }

    let n = all.n as f64;
    let eps_a_hat = all.err_a as f64 / n;
    let eps_e_hat = all.err_e as f64 / n;
    let mi_ab: Vec<f64> = batches.iter().map(|b| mi_from_counts(&b.ab, 2, 2)).collect();
    let mi_ae: Vec<f64> = batches.iter().map(|b| b.mi_ae(mode)).collect();
    Ok(EmpiricalStats {
        eps_a_hat,
        eps_e_hat,
        mi_ab_hat: mi_from_counts(&all.ab, 2, 2),
        mi_ae_hat: all.mi_ae(mode),
        sample_count: total,
        eve_mode: mode,
        z_bins: (bins > 0).then_some(bins),
        std_err: StdErrors {
            eps_a: binomial_se(eps_a_hat, n),
            eps_e: binomial_se(eps_e_hat, n),
            mi_ab: batch_se(&mi_ab, 1.0 / n),
            mi_ae: batch_se(&mi_ae, 1.0 / n),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::super::{run_rounds, ProtocolConfig};
    use super::*;
    use crate::channel::{crossover_prob, ChannelParams};
    use crate::mathkit::binary_entropy;

    fn ensemble(eta: f64, gamma: f64, mode: EveMode, rounds: usize) -> Ensemble {
        let cfg = ProtocolConfig {
            eve_mode: mode,
            rng_seed: 11,
            ..ProtocolConfig::new(1000, ChannelParams::new(eta, gamma).unwrap())
        };
        run_rounds(&cfg, rounds).unwrap()
    }

    #[test]
    fn mutual_information_of_known_tables() {
        assert_eq!(mi_from_counts(&[5, 0, 0, 5], 2, 2), 1.0);
        assert_eq!(mi_from_counts(&[1, 1, 1, 1], 2, 2), 0.0);
        let bits: Vec<u8> = (0..64).map(|i| (i % 3 == 0) as u8).collect();
        let mi = binary_mutual_information(&bits, &bits).unwrap();
        assert!((mi - binary_entropy(22.0 / 64.0).unwrap()).abs() < 1e-12);
        assert!(binary_mutual_information(&bits, &bits[1..]).is_err());
    }

    #[test]
    fn needs_enough_samples() {
        let cfg = ProtocolConfig::new(10, ChannelParams::new(1.0, 1.0).unwrap());
        let ens = run_rounds(&cfg, 10).unwrap();
        assert_eq!(
            estimate_stats(&ens),
            Err(Error::InsufficientSamples { got: 100, needed: 1000 })
        );
    }

    #[test]
    fn crossover_estimate_within_four_sigma() {
        let s = estimate_stats(&ensemble(2.0, 1.0, EveMode::Hard, 200)).unwrap();
        let p = crossover_prob(2.0).unwrap();
        assert!((s.eps_a_hat - p).abs() < 4.0 * s.std_err.eps_a);
        assert!((s.eps_e_hat - p).abs() < 4.0 * s.std_err.eps_e);
        assert!(s.std_err.mi_ab > 0.0 && s.std_err.mi_ae > 0.0);
    }

    #[test]
    fn blind_eavesdropper_learns_nothing() {
        for mode in [EveMode::Hard, EveMode::Soft] {
            let s = estimate_stats(&ensemble(2.0, 0.0, mode, 200)).unwrap();
            // Only plug-in bias remains, about bins / (2 N ln 2).
            let bias = if mode == EveMode::Soft { 6e-3 } else { 1e-4 };
            assert!(s.mi_ae_hat < bias, "{mode:?}: {}", s.mi_ae_hat);
        }
    }

    #[test]
    fn hard_estimate_converges_at_root_n_rate() {
        let p = crossover_prob(1.0).unwrap();
        let truth = 1.0 - binary_entropy(p).unwrap();
        for rounds in [10, 100, 1000] {
            let s = estimate_stats(&ensemble(1.0, 0.3, EveMode::Hard, rounds)).unwrap();
            let n = s.sample_count as f64;
            // The plug-in error is of order the crossover noise, ~ 1/sqrt(N).
            assert!((s.mi_ab_hat - truth).abs() < 4.0 / n.sqrt(), "rounds={rounds}");
        }
    }

    #[test]
    fn soft_mode_reports_bins() {
        let s = estimate_stats_with_bins(&ensemble(1.0, 1.0, EveMode::Soft, 5), 64).unwrap();
        assert_eq!(s.z_bins, Some(64));
        assert!(estimate_stats_with_bins(&ensemble(1.0, 1.0, EveMode::Soft, 5), 1).is_err());
        let h = estimate_stats(&ensemble(1.0, 1.0, EveMode::Hard, 5)).unwrap();
        assert_eq!(h.z_bins, None);
    }
}
