//! Multiple-packing capacity bounds for power-constrained packings and for
//! unbounded constellations, plus the parameters tying the lower bound to
//! error exponents.

use std::f64::consts::{E, PI};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingParams {
    /// Signal power P.
    pub power: f64,
    /// Noise power N.
    pub noise: f64,
    /// L: no noise ball may hold this many points.
    pub multiplicity: u32,
}

impl PackingParams {
    pub fn new(power: f64, noise: f64, multiplicity: u32) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) {
            return Err(domain(format!("signal power {power}")));
        }
        if !(noise > 0.0 && noise.is_finite()) {
            return Err(domain(format!("noise power {noise}")));
        }
        if multiplicity < 2 {
            return Err(domain(format!("multiplicity {multiplicity} < 2")));
        }
        Ok(Self { power, noise, multiplicity })
    }

    fn l(&self) -> f64 {
        self.multiplicity as f64
    }

    /// Noise power at which both bounded-regime bounds vanish.
    pub fn plotkin_noise(&self) -> f64 {
        (self.l() - 1.0) * self.power / self.l()
    }

    fn check_plotkin(&self) -> Result<()> {
        if self.noise > self.plotkin_noise() {
            return Err(domain(format!("N = {} beyond the Plotkin point {}", self.noise, self.plotkin_noise())));
        }
        Ok(())
    }
}

pub fn lb_capacity_bounded(p: &PackingParams) -> Result<f64> {
    p.check_plotkin()?;
    let l = p.l();
    let (pw, n) = (p.power, p.noise);
    Ok(0.5 * (((l - 1.0) * pw / (l * n)).ln() + (pw / (l * (pw - n))).ln() / (l - 1.0)))
}

pub fn ub_capacity_bounded(p: &PackingParams) -> Result<f64> {
    p.check_plotkin()?;
    let l = p.l();
    Ok(0.5 * ((l - 1.0) * p.power / (l * p.noise)).ln())
}

/// Large-list limit of the bounded-regime capacity.
pub fn cap_ld_bounded(power: f64, noise: f64) -> Result<f64> {
    if !(noise > 0.0 && power >= noise && power.is_finite()) {
        return Err(domain(format!("P = {power}, N = {noise}")));
    }
    Ok(0.5 * (power / noise).ln())
}

/// Large-list limit of the normalized log density for unbounded packings.
pub fn cap_ld_unbounded(noise: f64) -> Result<f64> {
    check_noise(noise)?;
    Ok(-0.5 * (2.0 * PI * E * noise).ln())
}

fn check_noise(noise: f64) -> Result<()> {
    if noise > 0.0 && noise.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("noise power {noise}")))
    }
}

fn check_multiplicity(multiplicity: u32) -> Result<f64> {
    if multiplicity < 2 {
        return Err(domain(format!("multiplicity {multiplicity} < 2")));
    }
    Ok(multiplicity as f64)
}

pub fn ub_capacity_unbounded(noise: f64, multiplicity: u32) -> Result<f64> {
    check_noise(noise)?;
    let l = check_multiplicity(multiplicity)?;
    Ok(0.5 * ((l - 1.0) / (2.0 * PI * E * noise * l)).ln())
}

pub fn lb_capacity_unbounded(noise: f64, multiplicity: u32) -> Result<f64> {
    let l = check_multiplicity(multiplicity)?;
    Ok(ub_capacity_unbounded(noise, multiplicity)? - l.ln() / (2.0 * (l - 1.0)))
}

/// Quantities from the derivation of the bounded lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivationParams {
    /// Saturating value of the Chernoff parameter.
    pub s: f64,
    /// Largest channel noise standard deviation for which the expurgation
    /// parameter stays at least 1.
    pub sigma_max: f64,
    /// Rate reached by the derivation; equals [`lb_capacity_bounded`].
    pub rate: f64,
    params: PackingParams,
}

impl DerivationParams {
    /// Expurgation parameter matched to channel noise level `sigma`.
    pub fn rho_of_sigma(&self, sigma: f64) -> f64 {
        let PackingParams { power, noise, .. } = self.params;
        let l = self.params.l();
        noise * (power - noise) / ((l * (power - noise) - power) * sigma * sigma)
    }

    /// t = 1 − 2Ps at the saturating s.
    pub fn t(&self) -> f64 {
        1.0 - 2.0 * self.params.power * self.s
    }
}

pub fn derivation_params(p: &PackingParams) -> Result<DerivationParams> {
    if p.noise >= p.plotkin_noise() {
        return Err(domain(format!("N = {} not below the Plotkin point", p.noise)));
    }
    let l = p.l();
    let (pw, n) = (p.power, p.noise);
    let s = ((l - 1.0) * pw - l * n) / (2.0 * l * (pw - n) * pw);
    let denom = l * (pw - n) - pw;
    if denom <= 0.0 {
        return Err(Error::SigmaUndefined);
    }
    let sigma_max = (n * (pw - n) / denom).sqrt();
    Ok(DerivationParams { s, sigma_max, rate: lb_capacity_bounded(p)?, params: *p })
}

/// Rate as a function of t = 1 − 2Ps in the derivation of the bounded
/// lower bound.
pub fn rate_from_t(t: f64, multiplicity: u32) -> f64 {
    let l = multiplicity as f64;
    0.5 * (((l - 1.0) * t / (l * t - 1.0)).ln() + t.ln() / (l - 1.0))
}

/// Noise level maximizing the unbounded-regime exponent at NLD `rate`,
/// and the matching α.
pub fn sigma_crit_unbounded(rate: f64, multiplicity: u32) -> (f64, f64) {
    let l = multiplicity as f64;
    let ln_l = l.ln();
    let sigma = (-(l / (l - 1.0)) * ln_l - (2.0 * PI * E).ln() - 2.0 * rate).exp().sqrt();
    let alpha = (l / (l - 1.0) * ln_l).exp().sqrt();
    (sigma, alpha)
}

pub fn rate_of_code(size: f64, dim: usize) -> f64 {
    size.ln() / dim as f64
}
