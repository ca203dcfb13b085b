//! Normalised Gaussian-BPSK channel pair.
//!
//! The legitimate receiver sees `Y = sqrt(eta) V + N1` and the eavesdropper
//! `Z = gamma sqrt(eta) V + N2`, with `V = (-1)^b` and independent
//! unit-variance real Gaussian noises. Bit 0 is transmitted as `+1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mathkit::{erf, erfc};

/// SNR of the legitimate link and the eavesdropper's amplitude ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub eta: f64,
    pub gamma: f64,
}

impl ChannelParams {
    pub fn new(eta: f64, gamma: f64) -> Result<Self> {
        let p = Self { eta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(invalid("eta", format!("{} must be positive and finite", self.eta)));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(invalid(
                "gamma",
                format!("{} must be non-negative and finite", self.gamma),
            ));
        }
        Ok(())
    }

    /// Received amplitude at the legitimate receiver, `sqrt(eta)`.
    pub fn legit_amplitude(&self) -> f64 {
        self.eta.sqrt()
    }

    /// Received amplitude at the eavesdropper, `gamma sqrt(eta)`.
    pub fn eve_amplitude(&self) -> f64 {
        self.gamma * self.eta.sqrt()
    }

    /// Eavesdropper SNR, `gamma^2 eta`.
    pub fn eve_snr(&self) -> f64 {
        self.gamma * self.gamma * self.eta
    }
}

/// Physical quantities the normalised parameters are derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalLinkBudget {
    /// Energy per symbol `E_s` in joules.
    pub energy_per_symbol: f64,
    /// Noise spectral density of the legitimate receiver in J/Hz.
    pub noise_density_legit: f64,
    /// Transmit power `P` in watts.
    pub signal_power: f64,
    /// Legitimate receiver noise power `N` in watts.
    pub noise_power_legit: f64,
    /// Amplitude attenuation of the eavesdropper path relative to the legitimate one.
    pub gamma_g: f64,
    /// Eavesdropper-to-legitimate noise power ratio.
    pub gamma_n: f64,
}

impl PhysicalLinkBudget {
    /// Budget at unit symbol rate, where `P = E_s` and `N = n`.
    pub fn from_energy(energy_per_symbol: f64, noise_density: f64, gamma_g: f64, gamma_n: f64) -> Self {
        Self {
            energy_per_symbol,
            noise_density_legit: noise_density,
            signal_power: energy_per_symbol,
            noise_power_legit: noise_density,
            gamma_g,
            gamma_n,
        }
    }
}

/// `eta = E_s / n` and `gamma = gamma_g / sqrt(gamma_n)`.
pub fn to_normalized(budget: &PhysicalLinkBudget) -> Result<ChannelParams> {
    let fields = [
        ("energy_per_symbol", budget.energy_per_symbol),
        ("noise_density_legit", budget.noise_density_legit),
        ("signal_power", budget.signal_power),
        ("noise_power_legit", budget.noise_power_legit),
        ("gamma_g", budget.gamma_g),
        ("gamma_n", budget.gamma_n),
    ];
    for (name, value) in fields {
        if !(value > 0.0) || !value.is_finite() {
            return Err(invalid(name, format!("{value} must be positive and finite")));
        }
    }
    let eta = budget.energy_per_symbol / budget.noise_density_legit;
    let eta_power = budget.signal_power / budget.noise_power_legit;
    if ((eta - eta_power) / eta).abs() > 1e-9 {
        return Err(invalid(
            "signal_power",
            format!("E_s/n = {eta} disagrees with P/N = {eta_power}"),
        ));
    }
    ChannelParams::new(eta, budget.gamma_g / budget.gamma_n.sqrt())
}

/// Hard-decision crossover probability and its distance from one half.
///
/// Both are kept because whichever is small needs its own relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    /// `0.5 erfc(sqrt(snr/2))`
    pub eps: f64,
    /// `0.5 - eps = 0.5 erf(sqrt(snr/2))`
    pub bias: f64,
}

impl Crossover {
    pub fn from_snr(snr: f64) -> Self {
        let x = (0.5 * snr).sqrt();
        Self {
            eps: 0.5 * erfc(x),
            bias: 0.5 * erf(x),
        }
    }
}

/// BPSK hard-decision crossover probability `0.5 erfc(sqrt(eta/2))`.
pub fn crossover_prob(eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(invalid("eta", format!("{eta} must be non-negative")));
    }
    Ok(Crossover::from_snr(eta).eps)
}

/// Sign detector: non-negative observations decode to bit 0.
#[inline]
pub fn hard_decision(observation: f64) -> u8 {
    u8::from(observation < 0.0)
}

/// Density of the eavesdropper's observation, an equal mixture of
/// `N(+-gamma sqrt(eta), 1)`.
pub fn eve_marginal_density(z: f64, p: &ChannelParams) -> f64 {
    let s = p.eve_amplitude();
    let norm = 1.0 / (2.0 * (2.0 * PI).sqrt());
    norm * ((-(z + s) * (z + s) / 2.0).exp() + (-(z - s) * (z - s) / 2.0).exp())
}

/// Posterior `P(B = 0 | Z = z)`, the logistic function of `2 gamma sqrt(eta) z`.
pub fn eve_posterior(z: f64, p: &ChannelParams) -> f64 {
    logistic(2.0 * p.eve_amplitude() * z)
}

/// `(ln P(B=0|z), ln P(B=1|z))`, finite even where the posterior rounds to 0 or 1.
pub fn eve_log_posterior(z: f64, p: &ChannelParams) -> (f64, f64) {
    let x = 2.0 * p.eve_amplitude() * z;
    (-softplus(-x), -softplus(x))
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
