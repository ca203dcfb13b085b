//! Maximisation of the capacities over transmit SNR, parameter sweeps, and
//! the gamma at which one-way and two-way soft capacities cross.
//!
//! The optimisation works on `ln C`, so two-way capacities that underflow
//! `f64` still have a well-defined maximiser.
//!
//! Worst-case ratios coming from satellite geometry, and the published
//! optimum curves, treat `gamma_max` as a ratio of SNRs: the eavesdropper
//! sees `gamma_max * eta`. [`GammaConvention`] makes that choice explicit;
//! [`GammaConvention::Amplitude`] passes `gamma` straight into
//! [`ChannelParams`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{c_ow_soft, c_tw_soft, capacity, CapacityKind};
use crate::channel::ChannelParams;
use crate::error::{invalid, Error, Result};
use crate::mathkit::QuadratureSpec;

/// How a user-facing `gamma` maps onto the channel's amplitude ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GammaConvention {
    /// Eavesdropper SNR is `gamma * eta`; amplitude ratio `sqrt(gamma)`.
    #[default]
    SnrRatio,
    /// Eavesdropper SNR is `gamma^2 * eta`.
    Amplitude,
}

impl GammaConvention {
    pub fn amplitude_ratio(self, gamma: f64) -> f64 {
        match self {
            GammaConvention::SnrRatio => gamma.sqrt(),
            GammaConvention::Amplitude => gamma,
        }
    }

    pub fn params(self, gamma: f64, eta: f64) -> Result<ChannelParams> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(invalid("gamma", format!("{gamma} must be non-negative and finite")));
        }
        ChannelParams::new(eta, self.amplitude_ratio(gamma))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GammaConvention::SnrRatio => "snr-ratio",
            GammaConvention::Amplitude => "amplitude",
        }
    }
}

impl fmt::Display for GammaConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GammaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr-ratio" | "snr_ratio" => Ok(GammaConvention::SnrRatio),
            "amplitude" => Ok(GammaConvention::Amplitude),
            other => Err(invalid("gamma_convention", format!("unknown convention `{other}`"))),
        }
    }
}

/// Where the optimiser ended up relative to the search interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumFlag {
    Interior,
    /// The maximiser sits on the lower SNR bound; widening it may raise the optimum.
    AtLowerBound,
    AtUpperBound,
    /// Capacity is identically zero over the interval.
    Flat,
}

impl OptimumFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimumFlag::Interior => "interior",
            OptimumFlag::AtLowerBound => "at_lower_bound",
            OptimumFlag::AtUpperBound => "at_upper_bound",
            OptimumFlag::Flat => "flat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Search interval for `eta`.
    pub eta_bounds: (f64, f64),
    /// Points in the coarse log-spaced scan.
    pub grid_points: usize,
    /// Golden-section stops once `eta_hi / eta_lo - 1` falls below this.
    pub rel_width: f64,
    pub convention: GammaConvention,
    pub quad: QuadratureSpec,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            eta_bounds: (1e-3, 1e4),
            grid_points: 96,
            rel_width: 1e-6,
            convention: GammaConvention::SnrRatio,
            quad: QuadratureSpec::default(),
        }
    }
}

impl OptimizeOptions {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.eta_bounds;
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(invalid("eta_bounds", format!("need 0 < lo < hi, got ({lo}, {hi})")));
        }
        if self.grid_points < 64 {
            return Err(invalid("grid_points", "at least 64 points are required"));
        }
        if !(self.rel_width > 0.0) {
            return Err(invalid("rel_width", "must be positive"));
        }
        self.quad.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumPoint {
    pub gamma_max: f64,
    pub eta_star: f64,
    pub capacity_star: f64,
    pub ln_capacity_star: f64,
    pub kind: CapacityKind,
    pub flag: OptimumFlag,
    pub convention: GammaConvention,
}

/// Maximise `capacity(kind)` over `eta` for a fixed `gamma_max`.
///
/// A log-spaced scan picks the best grid cell, and golden-section search on
/// `ln eta` refines inside the neighbouring cells.
pub fn optimize_eta(kind: CapacityKind, gamma_max: f64, opts: &OptimizeOptions) -> Result<OptimumPoint> {
    opts.validate()?;
    let objective = |log_eta: f64| -> Result<f64> {
        let p = opts.convention.params(gamma_max, log_eta.exp())?;
        Ok(capacity(kind, &p, &opts.quad)?.ln_value)
    };
    let (lo, hi) = (opts.eta_bounds.0.ln(), opts.eta_bounds.1.ln());
    let n = opts.grid_points;
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let values = grid.iter().map(|&x| objective(x)).collect::<Result<Vec<_>>>()?;

    let (best, best_value) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let point = |eta: f64, ln_c: f64, flag| OptimumPoint {
        gamma_max,
        eta_star: eta,
        capacity_star: ln_c.exp(),
        ln_capacity_star: ln_c,
        kind,
        flag,
        convention: opts.convention,
    };
    if best_value == f64::NEG_INFINITY {
        return Ok(point(opts.eta_bounds.0, f64::NEG_INFINITY, OptimumFlag::Flat));
    }

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    let (mut x_star, mut v_star) = golden_section_max(&objective, a, b, opts.rel_width.ln_1p())?;
    if best_value > v_star {
        x_star = grid[best];
        v_star = best_value;
    }
    let tol = 2.0 * opts.rel_width;
    let flag = if x_star - lo <= tol {
        OptimumFlag::AtLowerBound
    } else if hi - x_star <= tol {
        OptimumFlag::AtUpperBound
    } else {
        OptimumFlag::Interior
    };
    Ok(point(x_star.exp(), v_star, flag))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// checking both end points as well.
fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, width: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let fa = f(a)?;
    let fb = f(b)?;
    let (end_x, end_v) = if fa >= fb { (a, fa) } else { (b, fb) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > width {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(if end_v > v { (end_x, end_v) } else { (x, v) })
}

/// How each sweep point chooses its SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PerPoint {
    FixedEta(f64),
    OptimizedEta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub kind: CapacityKind,
    pub eta: f64,
    pub capacity: f64,
    /// Only set for optimised points.
    pub flag: Option<OptimumFlag>,
    /// Failure message for this point; the sweep keeps going.
    pub error: Option<String>,
}

/// Evaluate one capacity over a list of gammas, in parallel, preserving order.
pub fn sweep_gamma(kind: CapacityKind, gammas: &[f64], per_point: PerPoint, opts: &OptimizeOptions) -> Vec<SweepRow> {
    gammas
        .par_iter()
        .map(|&gamma| sweep_point(kind, gamma, per_point, opts))
        .collect()
}

fn sweep_point(kind: CapacityKind, gamma: f64, per_point: PerPoint, opts: &OptimizeOptions) -> SweepRow {
    let failed = |eta: f64, e: Error| SweepRow {
        gamma,
        kind,
        eta,
        capacity: f64::NAN,
        flag: None,
        error: Some(e.to_string()),
    };
    match per_point {
        PerPoint::FixedEta(eta) => {
            match opts
                .convention
                .params(gamma, eta)
                .and_then(|p| capacity(kind, &p, &opts.quad))
            {
                Ok(r) => SweepRow {
                    gamma,
                    kind,
                    eta,
                    capacity: r.value,
                    flag: None,
                    error: None,
                },
                Err(e) => failed(eta, e),
            }
        }
        PerPoint::OptimizedEta => match optimize_eta(kind, gamma, opts) {
            Ok(o) => SweepRow {
                gamma,
                kind,
                eta: o.eta_star,
                capacity: o.capacity_star,
                flag: Some(o.flag),
                error: None,
            },
            Err(e) => failed(f64::NAN, e),
        },
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// Root of `C_ow_soft - C_tw_soft` in gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub gamma: f64,
    /// `C_ow_soft - C_tw_soft` at `gamma`, in bits.
    pub residual: f64,
    pub convention: GammaConvention,
}

/// Bisection tolerance on gamma for the crossing searches.
const CROSSING_GAMMA_TOL: f64 = 1e-12;

fn bisect_crossing<F>(diff: F, mut lo: f64, mut hi: f64, convention: GammaConvention) -> Result<Option<Crossing>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = diff(lo)?;
    let f_hi = diff(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Ok(None);
    }
    while hi - lo > CROSSING_GAMMA_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = diff(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(Crossing {
                gamma: mid,
                residual: 0.0,
                convention,
            }));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let gamma = 0.5 * (lo + hi);
    Ok(Some(Crossing {
        gamma,
        residual: diff(gamma)?,
        convention,
    }))
}

/// Gamma in `(0, 1)` where one-way and two-way soft capacities are equal at
/// a fixed `eta`. `None` if the difference does not change sign.
pub fn crossing_threshold_fixed_eta(eta: f64, opts: &OptimizeOptions) -> Result<Option<Crossing>> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(invalid("eta", format!("{eta} must be positive and finite")));
    }
    let diff = |gamma: f64| -> Result<f64> {
        let p = opts.convention.params(gamma, eta)?;
        Ok(c_ow_soft(&p, &opts.quad)?.value - c_tw_soft(&p, &opts.quad)?.value)
    };
    bisect_crossing(diff, 1e-9, 1.0, opts.convention)
}

/// Lower end of the bracket for the optimised crossing.
const OPTIMIZED_CROSSING_LO: f64 = 0.1;

/// Gamma where the eta-optimised one-way and two-way soft capacities are equal.
pub fn crossing_threshold_optimized(opts: &OptimizeOptions) -> Result<Option<Crossing>> {
    let diff = |gamma: f64| -> Result<f64> {
        let ow = optimize_eta(CapacityKind::OwSoft, gamma, opts)?;
        let tw = optimize_eta(CapacityKind::TwSoft, gamma, opts)?;
        Ok(ow.capacity_star - tw.capacity_star)
    };
    bisect_crossing(diff, OPTIMIZED_CROSSING_LO, 1.0, opts.convention)
}
