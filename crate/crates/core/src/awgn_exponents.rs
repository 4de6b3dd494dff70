//! List-decoding error exponents of the power-constrained AWGN channel.
//!
//! Everything is in nats and takes the signal-to-noise ratio directly,
//! except [`expurg_objective`], which keeps the power and noise level
//! separate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{bisect, minimize_2d, Interval, BISECT_TOL, GRID};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRate {
    pub snr: f64,
    /// Rate in nats per channel use.
    pub rate: f64,
}

impl SnrRate {
    pub fn new(snr: f64, rate: f64) -> Result<Self> {
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(domain(format!("snr {snr}")));
        }
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate {rate}")));
        }
        Ok(Self { snr, rate })
    }

    pub fn capacity(&self) -> f64 {
        capacity(self.snr)
    }
}

pub fn capacity(snr: f64) -> f64 {
    0.5 * snr.ln_1p()
}

fn above_capacity(sr: &SnrRate) -> bool {
    sr.rate > sr.capacity() * (1.0 + 1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RandomCoding,
    StraightLine,
    Expurgated,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::RandomCoding => "random_coding",
            Regime::StraightLine => "straight_line",
            Regime::Expurgated => "expurgated",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One point of a piecewise exponent curve. The abscissa is a rate for the
/// power-constrained channel and α for unbounded constellations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub abscissa: f64,
    pub value: f64,
    pub regime: Regime,
}

/// Ingredients of the expurgated bound at one rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpurgParams {
    pub t: f64,
    pub s: f64,
    pub rho: f64,
    pub gamma: f64,
}

/// Rate below which the straight-line bound replaces random coding.
pub fn r_crit(snr: f64, multiplicity: u32) -> f64 {
    let l = multiplicity as f64;
    let root = (1.0 - 2.0 * (l - 2.0) * snr / (l * l) + snr * snr / (l * l)).sqrt();
    0.5 * (0.5 + snr / (2.0 * l) + 0.5 * root).ln()
}

/// Rate below which the expurgated bound takes over.
pub fn r_x(snr: f64, multiplicity: u32) -> f64 {
    let l = multiplicity as f64;
    let root = (l * l + snr * snr - 2.0 * snr * (l - 2.0)).sqrt();
    0.5 * (((root + l + snr) / (2.0 * l)).ln() + ((root + l - snr) / (2.0 * l)).ln() / (l - 1.0))
}

/// Random-coding exponent; does not depend on the list size.
pub fn e_r(sr: &SnrRate) -> Result<f64> {
    if sr.rate <= 0.0 || above_capacity(sr) {
        return Err(domain(format!("rate {} outside (0, {}]", sr.rate, sr.capacity())));
    }
    let snr = sr.snr;
    let e2r = (2.0 * sr.rate).exp();
    let em1 = (2.0 * sr.rate).exp_m1();
    let q = (1.0 + 4.0 * e2r / (snr * em1)).sqrt();
    Ok(0.5 * (e2r - 0.5 * snr * em1 * (q - 1.0)).ln() + snr / (4.0 * e2r) * (e2r + 1.0 - em1 * q))
}

/// Straight-line bound: affine in the rate with slope −(L−1).
pub fn e_sl(sr: &SnrRate, multiplicity: u32) -> f64 {
    let l = multiplicity as f64;
    let snr = sr.snr;
    let d = ((l - snr).powi(2) + 4.0 * snr).sqrt();
    -sr.rate * (l - 1.0) + 0.5 * (l - 1.0) * (l + snr + d).ln() + 0.5 * (l - snr + d).ln() + 0.25 * (l + snr - d)
        - 0.5 * l * (2.0 * l).ln()
}

/// Root in [1/L, 1] of (Lt − 1)e^{2R} = (L − 1)t^{L/(L−1)}.
pub fn solve_t(rate: f64, multiplicity: u32) -> Result<f64> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(domain(format!("rate {rate}")));
    }
    let l = multiplicity as f64;
    let e2r = (2.0 * rate).exp();
    let g = |t: f64| (l * t - 1.0) * e2r - (l - 1.0) * t.powf(l / (l - 1.0));
    bisect(g, Interval::new(1.0 / l, 1.0)?, BISECT_TOL)
}

pub fn expurg_params(sr: &SnrRate, multiplicity: u32) -> Result<ExpurgParams> {
    let l = multiplicity as f64;
    let t = solve_t(sr.rate, multiplicity)?;
    let s = (1.0 - t) / 2.0;
    let rho = (l * t - 1.0) * sr.snr / (l * l * (1.0 - t) * t);
    Ok(ExpurgParams { t, s, rho, gamma: 1.0 + (l - 1.0) * rho })
}

pub fn e_ex(sr: &SnrRate, multiplicity: u32) -> Result<f64> {
    let limit = r_x(sr.snr, multiplicity);
    if sr.rate > limit * (1.0 + 1e-12) {
        return Err(domain(format!("rate {} above R_x = {limit}", sr.rate)));
    }
    let l = multiplicity as f64;
    let t = solve_t(sr.rate, multiplicity)?;
    Ok(sr.snr * (l * t - 1.0) / (2.0 * l * t))
}

/// Piecewise lower bound on the (L−1)-list-decoding exponent.
pub fn exponent_lower_bound(sr: &SnrRate, multiplicity: u32) -> Result<ExponentPoint> {
    if above_capacity(sr) {
        return Err(domain(format!("rate {} above capacity {}", sr.rate, sr.capacity())));
    }
    let (value, regime) = if sr.rate <= r_x(sr.snr, multiplicity) {
        (e_ex(sr, multiplicity)?, Regime::Expurgated)
    } else if sr.rate <= r_crit(sr.snr, multiplicity) {
        (e_sl(sr, multiplicity), Regime::StraightLine)
    } else {
        (e_r(sr)?.max(0.0), Regime::RandomCoding)
    };
    Ok(ExponentPoint { abscissa: sr.rate, value, regime })
}

/// Random-coding objective in (s, γ) with unit power; its maximum over
/// s ∈ [0, ½) and γ ∈ [1, L] is the random-coding or straight-line value.
pub fn rce_objective(s: f64, gamma: f64, sr: &SnrRate) -> Result<f64> {
    let a = 1.0 - 2.0 * s;
    let b = a + sr.snr / gamma;
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("log argument at s = {s}, gamma = {gamma}")));
    }
    Ok(-sr.rate * (gamma - 1.0) + 0.5 * (gamma - 1.0) * b.ln() + 0.5 * a.ln() + s * gamma)
}

/// Expurgation objective; its minimum over s ∈ [0, 1/(2P)), ρ ≥ 1 is the
/// negated expurgated exponent.
pub fn expurg_objective(s: f64, rho: f64, rate: f64, power: f64, sigma: f64, multiplicity: u32) -> Result<f64> {
    let l = multiplicity as f64;
    let a = 1.0 - 2.0 * s * power;
    let b = a + power / (sigma * sigma * l * rho);
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("log argument at s = {s}, rho = {rho}")));
    }
    Ok(rate * (l - 1.0) * rho - rho * (s * l * power + 0.5 * a.ln() + 0.5 * (l - 1.0) * b.ln()))
}

/// Maximizing s of [`rce_objective`] at fixed γ.
pub fn stationary_s(gamma: f64, snr: f64) -> f64 {
    0.25 * (1.0 + snr / gamma - ((gamma - snr).powi(2) + 4.0 * snr).sqrt() / gamma)
}

/// Maximizing γ of [`rce_objective`] once s is eliminated.
pub fn stationary_gamma(rate: f64, snr: f64) -> f64 {
    let e2r = (2.0 * rate).exp();
    snr / (2.0 * e2r) * (1.0 + (1.0 + 4.0 * e2r / (snr * (2.0 * rate).exp_m1())).sqrt())
}

// keeps the s-range clear of the log singularity at s = 1/(2P)
const S_EDGE: f64 = 1.0 - 1e-9;

/// Numeric maximum of [`rce_objective`] over s ∈ [0, ½), γ ∈ [1, L].
pub fn rce_oracle(sr: &SnrRate, multiplicity: u32) -> Result<f64> {
    let sx = Interval::new(0.0, 0.5 * S_EDGE)?;
    let gy = Interval::new(1.0, multiplicity as f64)?;
    let m = minimize_2d(|s, g| rce_objective(s, g, sr).map_or(f64::NAN, |v| -v), sx, gy, GRID, 1e-12)?;
    Ok(-m.value)
}

/// Numeric expurgated exponent: minus the minimum of [`expurg_objective`]
/// with unit power, searched over s and u = 1/ρ ∈ [10⁻⁴, 1].
pub fn expurg_oracle(sr: &SnrRate, multiplicity: u32) -> Result<f64> {
    let sigma = 1.0 / sr.snr.sqrt();
    let sx = Interval::new(0.0, 0.5 * S_EDGE)?;
    let uy = Interval::new(1e-4, 1.0)?;
    let f = |s: f64, u: f64| expurg_objective(s, 1.0 / u, sr.rate, 1.0, sigma, multiplicity).unwrap_or(f64::NAN);
    Ok(-minimize_2d(f, sx, uy, GRID, 1e-12)?.value)
}

/// Unique-decoding exponent of the AWGN channel in its classical
/// three-piece form, used as the L = 2 reference.
pub fn gallager_exponent(snr: f64, rate: f64) -> Result<f64> {
    let sr = SnrRate::new(snr, rate)?;
    if above_capacity(&sr) {
        return Err(domain(format!("rate {rate} above capacity")));
    }
    let root = (1.0 + snr * snr / 4.0).sqrt();
    let rx = 0.5 * (0.5 + 0.5 * root).ln();
    let rcrit = 0.5 * (0.5 + snr / 4.0 + 0.5 * root).ln();
    Ok(if rate <= rx {
        snr / 4.0 * (1.0 - (-(-2.0 * rate).exp_m1()).sqrt())
    } else if rate <= rcrit {
        -rate + 0.5 * (0.5 + 0.5 * root).ln() + 0.5 + snr / 4.0 - 0.5 * root
    } else {
        e_r(&sr)?.max(0.0)
    })
}
