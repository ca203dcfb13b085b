//! Satellite eavesdropping geometry: antenna pattern, relative path loss,
//! the resulting gamma ratio, and its worst case over an eavesdropper region.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::CapacityKind;
use crate::error::{invalid, Error, Result};
use crate::mathkit::bessel_j_unchecked;
use crate::optimize::{optimize_eta, OptimizeOptions, OptimumPoint};

/// `k * sin(theta_3db)` for the half-power point of the pattern.
const HALF_POWER_ARGUMENT: f64 = 2.0712;

/// Below this argument `J_n(x) / x^n` is summed directly.
const RATIO_SERIES_LIMIT: f64 = 8.0;

pub const GEO_KM: f64 = 36_000.0;
pub const MEO_MIN_KM: f64 = 5_000.0;
pub const MEO_MAX_KM: f64 = 20_000.0;
pub const LEO_MIN_KM: f64 = 150.0;
pub const LEO_MAX_KM: f64 = 2_000.0;
/// Closest approach between two geostationary satellites.
pub const GEO_MIN_SEPARATION_KM: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    /// One-sided half-power beamwidth, radians.
    pub theta_3db: f64,
}

impl AntennaPattern {
    pub fn new(theta_3db: f64) -> Result<Self> {
        if !(theta_3db > 0.0 && theta_3db < FRAC_PI_2) {
            return Err(invalid("theta_3db", format!("{theta_3db} rad is outside (0, pi/2)")));
        }
        Ok(Self { theta_3db })
    }

    pub fn from_degrees(theta_3db_deg: f64) -> Result<Self> {
        Self::new(theta_3db_deg.to_radians())
    }

    pub fn k(&self) -> f64 {
        HALF_POWER_ARGUMENT / self.theta_3db.sin()
    }

    /// Normalised amplitude gain at off-boresight angle `theta`; 1 on boresight.
    /// Sidelobes may be negative.
    pub fn alpha(&self, theta: f64) -> Result<f64> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(invalid("theta", format!("{theta} rad is outside [0, pi/2]")));
        }
        Ok(self.alpha_unchecked(theta))
    }

    fn alpha_unchecked(&self, theta: f64) -> f64 {
        let x = self.k() * theta.sin();
        0.5 * bessel_ratio(1, x) + 36.0 * bessel_ratio(3, x)
    }
}

impl Default for AntennaPattern {
    fn default() -> Self {
        Self {
            theta_3db: 1f64.to_radians(),
        }
    }
}

/// `J_n(x) / x^n`, finite at `x = 0`.
fn bessel_ratio(order: u32, x: f64) -> f64 {
    if x.abs() >= RATIO_SERIES_LIMIT {
        return bessel_j_unchecked(order, x) / x.powi(order as i32);
    }
    let q = -0.25 * x * x;
    let mut term = (1..=order).fold(1.0, |acc, k| acc / (2.0 * k as f64));
    let mut sum = term;
    for m in 1..200 {
        let mf = m as f64;
        term *= q / (mf * (mf + order as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Amplitude ratio of the legitimate and eavesdropper path losses.
pub fn beta(r: f64, rho_e: f64, rho_l: f64) -> Result<f64> {
    if !(rho_e > 0.0) || !(rho_l > 0.0) {
        return Err(invalid("rho", "path lengths must be positive"));
    }
    if !(r >= 2.0) {
        return Err(invalid("r", format!("path-loss exponent {r} is below 2")));
    }
    Ok(rho_l / rho_e.powf(r / 2.0))
}

/// Rectangle of eavesdropper angles (radians) and path lengths (km).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveRegion {
    pub theta_min: f64,
    pub theta_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl EveRegion {
    pub fn contains(&self, theta: f64, rho: f64) -> bool {
        (self.theta_min..=self.theta_max).contains(&theta) && (self.rho_min..=self.rho_max).contains(&rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioGeometry {
    /// Legitimate path length, km.
    pub rho_legit: f64,
    pub eve_region: EveRegion,
    /// Path-loss exponent.
    pub r: f64,
    /// Square root of the legitimate-to-eavesdropper antenna gain ratio.
    pub mu: f64,
    /// Eavesdropper-to-legitimate noise power ratio.
    pub gamma_n: f64,
}

impl ScenarioGeometry {
    pub fn validate(&self) -> Result<()> {
        let reg = &self.eve_region;
        if !(self.rho_legit > 0.0) {
            return Err(invalid("rho_legit", "must be positive"));
        }
        if !(self.r >= 2.0) {
            return Err(invalid("r", "must be at least 2"));
        }
        if !(self.mu > 0.0) {
            return Err(invalid("mu", "must be positive"));
        }
        if !(self.gamma_n > 0.0) {
            return Err(invalid("gamma_n", "must be positive"));
        }
        if !(reg.rho_min > 0.0) || !(reg.theta_min >= 0.0) || !(reg.theta_max <= FRAC_PI_2) {
            return Err(invalid("eve_region", "need rho > 0 and theta within [0, pi/2]"));
        }
        if !(reg.rho_min <= reg.rho_max && reg.theta_min <= reg.theta_max) {
            return Err(Error::EmptyRegion);
        }
        Ok(())
    }
}

/// Signed gamma for an eavesdropper at `(theta_e, rho_e)`.
pub fn gamma_ratio(pattern: &AntennaPattern, theta_e: f64, rho_e: f64, geom: &ScenarioGeometry) -> Result<f64> {
    geom.validate()?;
    if !geom.eve_region.contains(theta_e, rho_e) {
        return Err(invalid(
            "eve_position",
            format!("({theta_e}, {rho_e}) lies outside the region"),
        ));
    }
    Ok(gamma_unchecked(pattern, theta_e, rho_e, geom))
}

fn gamma_unchecked(pattern: &AntennaPattern, theta: f64, rho: f64, geom: &ScenarioGeometry) -> f64 {
    let beta = geom.rho_legit / rho.powf(geom.r / 2.0);
    pattern.alpha_unchecked(theta) * geom.mu * beta / geom.gamma_n.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theta_points: usize,
    pub rho_points: usize,
    /// Rounds of local refinement around the best grid point.
    pub refine_rounds: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            theta_points: 721,
            rho_points: 256,
            refine_rounds: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    /// Largest `|gamma|` found.
    pub gamma_max: f64,
    pub theta_e: f64,
    pub rho_e: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || lo == hi {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Largest `|gamma|` over the eavesdropper region, by grid search and local
/// refinement. Grid end points are always evaluated exactly.
pub fn worst_case_gamma(pattern: &AntennaPattern, geom: &ScenarioGeometry, grid: &GridSpec) -> Result<WorstCase> {
    geom.validate()?;
    if grid.theta_points == 0 || grid.rho_points == 0 {
        return Err(Error::EmptyRegion);
    }
    let reg = geom.eve_region;
    let eval = |theta: f64, rho: f64| gamma_unchecked(pattern, theta, rho, geom).abs();
    let best_of = |thetas: &[f64], rhos: &[f64]| -> WorstCase {
        thetas
            .par_iter()
            .map(|&theta| {
                rhos.iter().fold(
                    WorstCase {
                        gamma_max: f64::NEG_INFINITY,
                        theta_e: theta,
                        rho_e: rhos[0],
                    },
                    |acc, &rho| {
                        let g = eval(theta, rho);
                        if g > acc.gamma_max {
                            WorstCase {
                                gamma_max: g,
                                theta_e: theta,
                                rho_e: rho,
                            }
                        } else {
                            acc
                        }
                    },
                )
            })
            .reduce_with(|a, b| if b.gamma_max > a.gamma_max { b } else { a })
            .expect("grid is non-empty")
    };

    let thetas = linspace(reg.theta_min, reg.theta_max, grid.theta_points);
    let rhos = linspace(reg.rho_min, reg.rho_max, grid.rho_points);
    let mut best = best_of(&thetas, &rhos);
    let mut d_theta = if thetas.len() > 1 { thetas[1] - thetas[0] } else { 0.0 };
    let mut d_rho = if rhos.len() > 1 { rhos[1] - rhos[0] } else { 0.0 };
    for _ in 0..grid.refine_rounds {
        let t_lo = (best.theta_e - d_theta).max(reg.theta_min);
        let t_hi = (best.theta_e + d_theta).min(reg.theta_max);
        let r_lo = (best.rho_e - d_rho).max(reg.rho_min);
        let r_hi = (best.rho_e + d_rho).min(reg.rho_max);
        let mut local_t = linspace(t_lo, t_hi, 33);
        let mut local_r = linspace(r_lo, r_hi, 33);
        local_t.push(best.theta_e);
        local_r.push(best.rho_e);
        let candidate = best_of(&local_t, &local_r);
        if candidate.gamma_max > best.gamma_max {
            best = candidate;
        }
        d_theta /= 16.0;
        d_rho /= 16.0;
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioPreset {
    /// Ground transmitter, GEO receiver, MEO eavesdropper.
    #[serde(rename = "I_MEO")]
    IMeo,
    #[serde(rename = "I_LEO")]
    ILeo,
    /// GEO transmitter and receiver, eavesdropper in GEO, MEO or LEO.
    #[serde(rename = "II_GEO")]
    IiGeo,
    #[serde(rename = "II_MEO")]
    IiMeo,
    #[serde(rename = "II_LEO")]
    IiLeo,
}

impl ScenarioPreset {
    pub const ALL: [ScenarioPreset; 5] = [
        ScenarioPreset::IMeo,
        ScenarioPreset::ILeo,
        ScenarioPreset::IiGeo,
        ScenarioPreset::IiMeo,
        ScenarioPreset::IiLeo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioPreset::IMeo => "I_MEO",
            ScenarioPreset::ILeo => "I_LEO",
            ScenarioPreset::IiGeo => "II_GEO",
            ScenarioPreset::IiMeo => "II_MEO",
            ScenarioPreset::IiLeo => "II_LEO",
        }
    }

    pub fn geometry(self) -> ScenarioGeometry {
        let (rho_min, rho_max) = match self {
            ScenarioPreset::IMeo => (MEO_MIN_KM, MEO_MAX_KM),
            ScenarioPreset::ILeo => (LEO_MIN_KM, LEO_MAX_KM),
            ScenarioPreset::IiGeo => (GEO_MIN_SEPARATION_KM, GEO_KM),
            ScenarioPreset::IiMeo => (GEO_KM - MEO_MAX_KM, GEO_KM - MEO_MIN_KM),
            ScenarioPreset::IiLeo => (GEO_KM - LEO_MAX_KM, GEO_KM - LEO_MIN_KM),
        };
        ScenarioGeometry {
            rho_legit: GEO_KM,
            eve_region: EveRegion {
                theta_min: 0.0,
                theta_max: FRAC_PI_2,
                rho_min,
                rho_max,
            },
            r: 2.0,
            mu: 1.0,
            gamma_n: 1.0,
        }
    }

    pub fn scenario(self) -> Scenario {
        Scenario {
            name: self.as_str().to_string(),
            pattern: AntennaPattern::default(),
            geometry: self.geometry(),
        }
    }
}

impl fmt::Display for ScenarioPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("preset", format!("unknown preset `{s}`")))
    }
}

/// A named geometry with its antenna pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub pattern: AntennaPattern,
    pub geometry: ScenarioGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub name: String,
    pub worst_case: WorstCase,
    pub tw_soft: OptimumPoint,
    pub tw_hard: OptimumPoint,
    pub ow_soft: OptimumPoint,
    pub ow_hard: OptimumPoint,
}

/// Worst-case gamma and the four optimised capacities for each scenario.
pub fn scenario_table(scenarios: &[Scenario], grid: &GridSpec, opts: &OptimizeOptions) -> Result<Vec<ScenarioRow>> {
    scenarios
        .iter()
        .map(|s| {
            let worst_case = worst_case_gamma(&s.pattern, &s.geometry, grid)?;
            let opt = |kind| optimize_eta(kind, worst_case.gamma_max, opts);
            Ok(ScenarioRow {
                name: s.name.clone(),
                worst_case,
                tw_soft: opt(CapacityKind::TwSoft)?,
                tw_hard: opt(CapacityKind::TwHard)?,
                ow_soft: opt(CapacityKind::OwSoft)?,
                ow_hard: opt(CapacityKind::OwHard)?,
            })
        })
        .collect()
}

/// Parse scenarios from `key = value` lines. `#` starts a comment and each
/// `name` key begins a new scenario. Omitted keys take the values of a
/// ground-to-GEO link with a boresight-reachable eavesdropper.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    let mut current: Option<(usize, ScenarioBuilder)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            reason: format!("expected key = value, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key == "name" {
            if let Some((start, b)) = current.take() {
                out.push(b.build(start)?);
            }
            current = Some((line_no, ScenarioBuilder::named(value)));
            continue;
        }
        let (_, builder) = current.as_mut().ok_or_else(|| Error::Config {
            line: line_no,
            reason: "the first key must be `name`".into(),
        })?;
        let number: f64 = value.parse().map_err(|_| Error::Config {
            line: line_no,
            reason: format!("`{value}` is not a number"),
        })?;
        let slot = match key {
            "rho_l_km" => &mut builder.rho_l_km,
            "rho_e_min_km" => &mut builder.rho_e_min_km,
            "rho_e_max_km" => &mut builder.rho_e_max_km,
            "theta_min_deg" => &mut builder.theta_min_deg,
            "theta_max_deg" => &mut builder.theta_max_deg,
            "r" => &mut builder.r,
            "mu" => &mut builder.mu,
            "gamma_n" => &mut builder.gamma_n,
            "theta3db_deg" => &mut builder.theta3db_deg,
            other => {
                return Err(Error::Config {
                    line: line_no,
                    reason: format!("unknown key `{other}`"),
                })
            }
        };
        *slot = number;
    }
    if let Some((start, b)) = current {
        out.push(b.build(start)?);
    }
    if out.is_empty() {
        return Err(Error::Config {
            line: 0,
            reason: "no scenario found".into(),
        });
    }
    Ok(out)
}

struct ScenarioBuilder {
    name: String,
    rho_l_km: f64,
    rho_e_min_km: f64,
    rho_e_max_km: f64,
    theta_min_deg: f64,
    theta_max_deg: f64,
    r: f64,
    mu: f64,
    gamma_n: f64,
    theta3db_deg: f64,
}

impl ScenarioBuilder {
    fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            rho_l_km: GEO_KM,
            rho_e_min_km: f64::NAN,
            rho_e_max_km: f64::NAN,
            theta_min_deg: 0.0,
            theta_max_deg: 90.0,
            r: 2.0,
            mu: 1.0,
            gamma_n: 1.0,
            theta3db_deg: 1.0,
        }
    }

    fn build(self, line: usize) -> Result<Scenario> {
        let config_err = |e: Error| Error::Config {
            line,
            reason: format!("scenario `{}`: {e}", self.name),
        };
        if self.rho_e_min_km.is_nan() {
            return Err(config_err(invalid("rho_e_min_km", "is required")));
        }
        let rho_max = if self.rho_e_max_km.is_nan() {
            self.rho_e_min_km
        } else {
            self.rho_e_max_km
        };
        let geometry = ScenarioGeometry {
            rho_legit: self.rho_l_km,
            eve_region: EveRegion {
                theta_min: self.theta_min_deg.to_radians(),
                theta_max: self.theta_max_deg.to_radians(),
                rho_min: self.rho_e_min_km,
                rho_max,
            },
            r: self.r,
            mu: self.mu,
            gamma_n: self.gamma_n,
        };
        geometry.validate().map_err(config_err)?;
        let pattern = AntennaPattern::from_degrees(self.theta3db_deg).map_err(config_err)?;
        Ok(Scenario {
            name: self.name,
            pattern,
            geometry,
        })
    }
}
