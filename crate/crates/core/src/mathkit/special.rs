//! Error function family and binary-entropy helpers.
//!
//! `erfc` is backed by `libm` (a port of the fdlibm/musl rational
//! approximations, accurate to about one ulp). For arguments where `erfc`
//! underflows, [`ln_erfc`] switches to the Laplace continued fraction of the
//! scaled function `exp(x^2) erfc(x)`.

use std::f64::consts::{LN_2, PI};

use crate::error::{invalid, Result};

/// Above this argument `ln_erfc` uses the continued fraction instead of `ln(erfc(x))`.
const LN_ERFC_CF_SWITCH: f64 = 20.0;

/// Complementary error function `2/sqrt(pi) * int_t^inf exp(-s^2) ds`.
pub fn erfc(t: f64) -> f64 {
    libm::erfc(t)
}

/// Error function, `1 - erfc(t)` without the cancellation near zero.
pub fn erf(t: f64) -> f64 {
    libm::erf(t)
}

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 5`,
/// evaluated from the Laplace continued fraction.
fn erfcx_continued_fraction(x: f64) -> f64 {
    debug_assert!(x >= 5.0);
    // x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), evaluated from the tail.
    let mut tail = x;
    for k in (1..=80).rev() {
        tail = x + (k as f64 * 0.5) / tail;
    }
    1.0 / (PI.sqrt() * tail)
}

/// Natural log of `erfc(t)`, finite for every finite `t`.
pub fn ln_erfc(t: f64) -> f64 {
    if t < LN_ERFC_CF_SWITCH {
        erfc(t).ln()
    } else {
        -t * t + erfcx_continued_fraction(t).ln()
    }
}

/// Binary entropy in bits, `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("{p} is not a probability")));
    }
    Ok(h2(p))
}

/// Unchecked binary entropy in bits. Callers guarantee `p` in `[0, 1]`.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Below this bias the entropy rise is summed from its power series in `2*bias`.
const SERIES_BIAS_LIMIT: f64 = 0.125;

/// `h(eps + bias*w) - h(eps)` in bits, where `eps = 1/2 - bias`.
///
/// `eps` and `bias` are passed separately so each can carry full relative
/// precision (one of them is tiny at the extremes of SNR). `w` must lie in
/// `[0, 1]`; `w = 1` gives `1 - h(eps)`.
pub fn entropy_rise(eps: f64, bias: f64, w: f64) -> f64 {
    if w <= 0.0 || bias <= 0.0 {
        return 0.0;
    }
    if bias <= SERIES_BIAS_LIMIT {
        w * series_rise_per_w(bias, w)
    } else {
        general_rise(eps, bias, w)
    }
}

/// `entropy_rise(eps, bias, w) / w`, continuous at `w = 0`.
pub fn entropy_rise_per_w(eps: f64, bias: f64, w: f64) -> f64 {
    if bias <= 0.0 {
        return 0.0;
    }
    if bias <= SERIES_BIAS_LIMIT {
        return series_rise_per_w(bias, w);
    }
    if w > 0.0 {
        let rise = general_rise(eps, bias, w);
        if rise > 0.0 {
            return rise / w;
        }
    }
    // Derivative at w = 0: bias * h'(eps).
    if eps <= 0.0 {
        return f64::INFINITY;
    }
    bias * ((1.0 - eps) / eps).ln() / LN_2
}

/// Sum over k of (2b)^(2k) / (2 ln2 k (2k-1)) * (1 - u^(2k)) / w with u = 1 - w.
fn series_rise_per_w(bias: f64, w: f64) -> f64 {
    let u = 1.0 - w;
    let x = 4.0 * bias * bias;
    let u2 = u * u;
    let mut pow_x = 1.0;
    // (1 - u^(2k)) / (1 - u) = 1 + u + ... + u^(2k-1)
    let mut geometric = 0.0;
    let mut pow_u = 1.0;
    let mut sum = 0.0;
    for k in 1..=60 {
        pow_x *= x;
        geometric += pow_u * (1.0 + u);
        pow_u *= u2;
        let kf = k as f64;
        let term = pow_x * geometric / (kf * (2.0 * kf - 1.0));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum / (2.0 * LN_2)
}

/// Cancellation-free form of `h(eps + d) - h(eps)` with `d = bias*w`:
/// every term below is non-negative.
fn general_rise(eps: f64, bias: f64, w: f64) -> f64 {
    let d = bias * w;
    if eps <= 0.0 {
        return h2(d);
    }
    let r = d / eps;
    let q = d / (1.0 - eps);
    let lower = eps + d;
    let upper = 0.5 + bias * (1.0 - w);
    // eps * (r - ln(1 + r)), without forming ln(1 + r) from a huge r.
    let eps_term = if r < 1e10 {
        eps * (r - r.ln_1p())
    } else {
        d - eps * (d.ln() - eps.ln() + (eps / d).ln_1p())
    };
    let nats = d * (upper / lower).ln() + eps_term + (1.0 - eps) * (-q - (-q).ln_1p());
    nats.max(0.0) / LN_2
}
