//! One-way and two-way secrecy capacities of the Gaussian-BPSK wiretap pair,
//! in bits per channel use.
//!
//! Two-way values are also reported as natural logs. For a strong
//! eavesdropper they fall far below the smallest `f64`, and the log form
//! keeps them comparable and provably positive.

use std::f64::consts::{E, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, Crossover};
use crate::error::{invalid, Error, Result};
use crate::mathkit::{entropy_rise, entropy_rise_per_w, integrate, ln_erfc, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    OneWay,
    TwoWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveMode {
    Hard,
    Soft,
}

/// One of the four capacity functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityKind {
    OwSoft,
    OwHard,
    TwSoft,
    TwHard,
}

impl CapacityKind {
    pub const ALL: [CapacityKind; 4] = [
        CapacityKind::TwSoft,
        CapacityKind::TwHard,
        CapacityKind::OwSoft,
        CapacityKind::OwHard,
    ];

    pub fn direction(self) -> Direction {
        match self {
            CapacityKind::OwSoft | CapacityKind::OwHard => Direction::OneWay,
            CapacityKind::TwSoft | CapacityKind::TwHard => Direction::TwoWay,
        }
    }

    pub fn eve_mode(self) -> EveMode {
        match self {
            CapacityKind::OwSoft | CapacityKind::TwSoft => EveMode::Soft,
            CapacityKind::OwHard | CapacityKind::TwHard => EveMode::Hard,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CapacityKind::OwSoft => "ow_soft",
            CapacityKind::OwHard => "ow_hard",
            CapacityKind::TwSoft => "tw_soft",
            CapacityKind::TwHard => "tw_hard",
        }
    }
}

impl fmt::Display for CapacityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CapacityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ow_soft" => Ok(CapacityKind::OwSoft),
            "ow_hard" => Ok(CapacityKind::OwHard),
            "tw_soft" => Ok(CapacityKind::TwSoft),
            "tw_hard" => Ok(CapacityKind::TwHard),
            other => Err(invalid("kind", format!("unknown capacity kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    /// Bits per channel use.
    pub value: f64,
    /// `ln(value)`; finite whenever the capacity is positive, even if `value`
    /// underflows to zero. `-inf` for a zero capacity.
    pub ln_value: f64,
    pub direction: Direction,
    pub eve_mode: EveMode,
    pub params: ChannelParams,
}

impl CapacityResult {
    fn new(kind: CapacityKind, params: ChannelParams, value: f64, ln_value: f64) -> Self {
        Self {
            value,
            ln_value,
            direction: kind.direction(),
            eve_mode: kind.eve_mode(),
            params,
        }
    }

    fn from_value(kind: CapacityKind, params: ChannelParams, value: f64) -> Self {
        let value = value.max(0.0);
        Self::new(kind, params, value, value.ln())
    }

    pub fn kind(&self) -> CapacityKind {
        match (self.direction, self.eve_mode) {
            (Direction::OneWay, EveMode::Soft) => CapacityKind::OwSoft,
            (Direction::OneWay, EveMode::Hard) => CapacityKind::OwHard,
            (Direction::TwoWay, EveMode::Soft) => CapacityKind::TwSoft,
            (Direction::TwoWay, EveMode::Hard) => CapacityKind::TwHard,
        }
    }
}

/// Evaluate any of the four capacities.
pub fn capacity(kind: CapacityKind, p: &ChannelParams, quad: &QuadratureSpec) -> Result<CapacityResult> {
    match kind {
        CapacityKind::OwSoft => c_ow_soft(p, quad),
        CapacityKind::OwHard => c_ow_hard(p),
        CapacityKind::TwSoft => c_tw_soft(p, quad),
        CapacityKind::TwHard => c_tw_hard(p),
    }
}

/// Differential entropy in bits of `w N(s, 1) + (1 - w) N(-s, 1)`.
pub fn mixture_entropy(weight_plus: f64, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&weight_plus) {
        return Err(invalid("weight_plus", "must be a probability"));
    }
    let ln_plus = weight_plus.ln();
    let ln_minus = (1.0 - weight_plus).ln();
    let ln_norm = 0.5 * (2.0 * PI).ln();
    let integrand = |y: f64| {
        let a = ln_plus - (y - s) * (y - s) / 2.0;
        let b = ln_minus - (y + s) * (y + s) / 2.0;
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return 0.0;
        }
        let ln_p = hi + (-(a - b).abs()).exp().ln_1p() - ln_norm;
        let p = ln_p.exp();
        if p == 0.0 {
            0.0
        } else {
            -p * ln_p
        }
    };
    Ok(integrate(integrand, &[-s, s], quad)? / LN_2)
}

/// `I(V; sV + N)` for uniform BPSK and unit-variance Gaussian noise.
pub fn bpsk_mutual_information(s: f64, quad: &QuadratureSpec) -> Result<f64> {
    let noise_entropy = 0.5 * (2.0 * PI * E).log2();
    Ok(mixture_entropy(0.5, s, quad)? - noise_entropy)
}

/// One-way capacity with soft-decision receivers, `I(A;Y) - I(A;Z)`.
///
/// The noise entropies cancel, leaving the difference of the two
/// mixture entropies. Zero when `gamma >= 1`.
pub fn c_ow_soft(p: &ChannelParams, quad: &QuadratureSpec) -> Result<CapacityResult> {
    p.validate()?;
    if p.gamma >= 1.0 {
        return Ok(CapacityResult::from_value(CapacityKind::OwSoft, *p, 0.0));
    }
    let legit = mixture_entropy(0.5, p.legit_amplitude(), quad)?;
    let eve = mixture_entropy(0.5, p.eve_amplitude(), quad)?;
    Ok(CapacityResult::from_value(CapacityKind::OwSoft, *p, legit - eve))
}

/// One-way capacity with hard-decision receivers, `h(eps_E) - h(eps_B)`,
/// clamped at zero.
pub fn c_ow_hard(p: &ChannelParams) -> Result<CapacityResult> {
    p.validate()?;
    if p.gamma >= 1.0 {
        return Ok(CapacityResult::from_value(CapacityKind::OwHard, *p, 0.0));
    }
    let bob = Crossover::from_snr(p.eta);
    let eve = Crossover::from_snr(p.eve_snr());
    // 1 - h(eps) for each receiver; their difference is h(eps_E) - h(eps_B).
    let value = entropy_rise(bob.eps, bob.bias, 1.0) - entropy_rise(eve.eps, eve.bias, 1.0);
    Ok(CapacityResult::from_value(CapacityKind::OwHard, *p, value))
}

/// Two-way capacity against a hard-decision eavesdropper,
/// `h(eps_E + eps_A - 2 eps_E eps_A) - h(eps_A)`.
pub fn c_tw_hard(p: &ChannelParams) -> Result<CapacityResult> {
    p.validate()?;
    let alice = Crossover::from_snr(p.eta);
    // The composed crossover is eps_A + bias_A * w with w = 2 eps_E = erfc(x_E).
    let x_e = (0.5 * p.eve_snr()).sqrt();
    let w = 2.0 * Crossover::from_snr(p.eve_snr()).eps;
    let per_w = entropy_rise_per_w(alice.eps, alice.bias, w);
    let mut value = w * per_w;
    if p.gamma < 1.0 {
        // The same quantity as the one-way value plus h(eps_A * eps_E) - h(eps_E).
        let eve = Crossover::from_snr(p.eve_snr());
        let one_way = c_ow_hard(p)?.value + entropy_rise(eve.eps, eve.bias, 2.0 * alice.eps);
        value = value.max(one_way);
    }
    let ln_value = if value > 0.0 {
        value.ln()
    } else if per_w > 0.0 && per_w.is_finite() {
        per_w.ln() + ln_erfc(x_e)
    } else {
        f64::NEG_INFINITY
    };
    Ok(CapacityResult::new(CapacityKind::TwHard, *p, value, ln_value))
}

/// Two-way capacity against a soft-decision eavesdropper, `I(A;B|Z)`.
///
/// With `s = gamma sqrt(eta)` and `t = tanh(s z)`, the integrand
/// `P_Z(z) [h(eps_A + bias_A (1 - |t|)) - h(eps_A)]` equals
/// `exp(-s^2/2) phi(z) exp(-s|z|) R(z)` where `R` is the entropy rise per
/// unit `1 - |t|`. The Gaussian factor is pulled out so the integral stays
/// well scaled for any `s`.
pub fn c_tw_soft(p: &ChannelParams, quad: &QuadratureSpec) -> Result<CapacityResult> {
    p.validate()?;
    let alice = Crossover::from_snr(p.eta);
    let ceiling = entropy_rise(alice.eps, alice.bias, 1.0);
    let s = p.eve_amplitude();
    if ceiling == 0.0 {
        return Ok(CapacityResult::from_value(CapacityKind::TwSoft, *p, 0.0));
    }
    if s == 0.0 {
        return Ok(CapacityResult::from_value(CapacityKind::TwSoft, *p, ceiling));
    }
    let ln_norm = 0.5 * (2.0 * PI).ln();
    let integrand = |z: f64| {
        let a = s * z.abs();
        let t = (-2.0 * a).exp();
        let w = (2.0 * t / (1.0 + t)).max(f64::MIN_POSITIVE);
        let weight = (-z * z / 2.0 - a - ln_norm).exp();
        if weight == 0.0 {
            return 0.0;
        }
        weight * entropy_rise_per_w(alice.eps, alice.bias, w) / ceiling
    };
    let scaled = integrate(integrand, &[-s, 0.0, s], quad)?;
    if !(scaled > 0.0) {
        return Ok(CapacityResult::from_value(CapacityKind::TwSoft, *p, 0.0));
    }
    let ln_value = -s * s / 2.0 + ceiling.ln() + scaled.ln();
    Ok(CapacityResult::new(CapacityKind::TwSoft, *p, ln_value.exp(), ln_value))
}
