//! End-to-end key agreement: one protocol block followed by Toeplitz
//! privacy amplification of Alice's message and Bob's estimate of it.

use serde::{Deserialize, Serialize};

use super::stats::{estimate_stats, EmpiricalStats};
use super::toeplitz::ToeplitzHash;
use super::{run_rounds, ProtocolConfig};
use crate::capacity::{c_tw_soft, EveMode};
use crate::channel::Crossover;
use crate::error::Result;
use crate::mathkit::{binary_entropy, QuadratureSpec};

/// Where the eavesdropper information behind the leakage proxy came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageSource {
    /// Estimated from the simulated block itself.
    Empirical,
    /// The block is too short to estimate from; the channel model is used.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecretKeyReport {
    pub alice_key: Vec<u8>,
    pub bob_key: Vec<u8>,
    /// Fraction of key bits on which Alice and Bob agree.
    pub agreement_rate: f64,
    /// Fraction of message bits Bob recovered correctly before hashing.
    pub raw_agreement_rate: f64,
    /// `max(0, m - n (1 - I_E))` bits, where `I_E` is Eve's per-symbol
    /// information about Alice's decisions.
    pub leakage_estimate: f64,
    pub leakage_source: LeakageSource,
    pub stats: Option<EmpiricalStats>,
}

fn eve_information(cfg: &ProtocolConfig) -> Result<f64> {
    let alice = Crossover::from_snr(cfg.params.eta);
    match cfg.eve_mode {
        EveMode::Hard => {
            let eve = Crossover::from_snr(cfg.params.eve_snr());
            let composite = alice.eps + eve.eps - 2.0 * alice.eps * eve.eps;
            Ok(1.0 - binary_entropy(composite)?)
        }
        EveMode::Soft => {
            let capacity = c_tw_soft(&cfg.params, &QuadratureSpec::default())?.value;
            Ok((1.0 - binary_entropy(alice.eps)? - capacity).max(0.0))
        }
    }
}

/// Run one block of `cfg.block_len` symbols. Alice's key is the hash of her
/// message `X` and Bob's the hash of `X''`. No error correction is applied,
/// so the keys agree only when Bob's copy is error free.
pub fn simulate_secret_key(cfg: &ProtocolConfig) -> Result<SecretKeyReport> {
    let ensemble = run_rounds(cfg, 1)?;
    let t = &ensemble.rounds[0];
    let hash = ToeplitzHash::new(cfg.block_len, cfg.hash_out_len, cfg.hash_seed)?;
    let alice_key = hash.hash(&t.x)?;
    let bob_key = hash.hash(&t.x_dblprime)?;
    let agree = |u: &[u8], v: &[u8]| {
        if u.is_empty() {
            1.0
        } else {
            u.iter().zip(v).filter(|(a, b)| a == b).count() as f64 / u.len() as f64
        }
    };
    let (stats, source, info) = match estimate_stats(&ensemble) {
        Ok(s) => (Some(s), LeakageSource::Empirical, s.mi_ae_hat),
        Err(crate::Error::InsufficientSamples { .. }) => (None, LeakageSource::Analytic, eve_information(cfg)?),
        Err(e) => return Err(e),
    };
    let n = cfg.block_len as f64;
    Ok(SecretKeyReport {
        agreement_rate: agree(&alice_key, &bob_key),
        raw_agreement_rate: agree(&t.x, &t.x_dblprime),
        alice_key,
        bob_key,
        leakage_estimate: (cfg.hash_out_len as f64 - n * (1.0 - info)).max(0.0),
        leakage_source: source,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelParams;

    fn cfg(eta: f64, gamma: f64, n: usize, m: usize) -> ProtocolConfig {
        ProtocolConfig {
            hash_out_len: m,
            rng_seed: 5,
            hash_seed: 6,
            ..ProtocolConfig::new(n, ChannelParams::new(eta, gamma).unwrap())
        }
    }

    #[test]
    fn error_free_regime_gives_equal_keys() {
        let r = simulate_secret_key(&cfg(1e6, 1.0, 2000, 1000)).unwrap();
        assert_eq!(r.alice_key, r.bob_key);
        assert_eq!(r.agreement_rate, 1.0);
        assert_eq!(r.leakage_source, LeakageSource::Empirical);
    }

    #[test]
    fn public_channel_errors_degrade_agreement() {
        let clean = simulate_secret_key(&cfg(1e6, 1.0, 2000, 64)).unwrap();
        let noisy = simulate_secret_key(&ProtocolConfig {
            public_channel_ber: 0.2,
            ..cfg(1e6, 1.0, 2000, 64)
        })
        .unwrap();
        assert_eq!(clean.raw_agreement_rate, 1.0);
        assert!(noisy.raw_agreement_rate < 0.85);
        assert!(noisy.agreement_rate < 0.8);
    }

    #[test]
    fn leakage_proxy_grows_with_key_length() {
        let mut last = 0.0;
        for m in [10, 200, 400, 600] {
            let r = simulate_secret_key(&cfg(2.0, 1.0, 600, m)).unwrap();
            assert!(r.leakage_estimate >= last);
            last = r.leakage_estimate;
        }
        assert!(last > 0.0);
    }

    #[test]
    fn short_blocks_fall_back_to_model() {
        let r = simulate_secret_key(&cfg(2.0, 1.0, 50, 10)).unwrap();
        assert_eq!(r.leakage_source, LeakageSource::Analytic);
        assert!(r.stats.is_none());
        let soft = simulate_secret_key(&ProtocolConfig {
            eve_mode: EveMode::Soft,
            ..cfg(2.0, 1.0, 50, 50)
        })
        .unwrap();
        assert!(soft.leakage_estimate > 0.0);
    }
}
