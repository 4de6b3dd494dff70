//! List-decoding error exponents for unbounded constellations, indexed by
//! the distance-to-capacity parameter α ≥ 1.

use std::f64::consts::{E, LN_2, PI, SQRT_2};

use statrs::function::gamma::ln_gamma;

use crate::awgn_exponents::{ExponentPoint, Regime};
use crate::error::{domain, Result};
use crate::numerics::{golden_section_min, ln_ball_volume, Interval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaL {
    pub alpha: f64,
    pub multiplicity: u32,
    /// Channel noise level; when set, the NLD is available.
    pub sigma: Option<f64>,
}

impl AlphaL {
    pub fn new(alpha: f64, multiplicity: u32) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha {alpha} < 1")));
        }
        if multiplicity < 2 {
            return Err(domain(format!("multiplicity {multiplicity} < 2")));
        }
        Ok(Self { alpha, multiplicity, sigma: None })
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma {sigma}")));
        }
        Ok(Self { sigma: Some(sigma), ..self })
    }

    /// Normalized log density ½ ln(1/(2πeσ²α²)).
    pub fn rate(&self) -> Option<f64> {
        self.sigma.map(|s| -0.5 * (2.0 * PI * E * s * s * self.alpha * self.alpha).ln())
    }

    fn l(&self) -> f64 {
        self.multiplicity as f64
    }
}

fn low_alpha_exponent(alpha: f64) -> f64 {
    alpha * alpha / 2.0 - alpha.ln() - 0.5
}

pub fn e_r_unbdd(a: &AlphaL) -> f64 {
    if a.alpha <= a.l().sqrt() {
        low_alpha_exponent(a.alpha)
    } else {
        e_sl_unbdd(a)
    }
}

pub fn e_sl_unbdd(a: &AlphaL) -> f64 {
    let l = a.l();
    (l - 1.0) / 2.0 - l / 2.0 * l.ln() + (l - 1.0) * a.alpha.ln()
}

fn discriminant(a: &AlphaL) -> f64 {
    let a2 = a.alpha * a.alpha;
    (a2 * a2 + 8.0 * a2 * (2.0 * a.l() - 3.0) + 16.0).sqrt()
}

/// Expurgated exponent of the Matérn-thinned ensemble.
pub fn e_ex_unbdd(a: &AlphaL) -> f64 {
    let l = a.l();
    let a2 = a.alpha * a.alpha;
    let root = discriminant(a);
    a2 / 16.0 + root / 16.0 - (l - 1.0) / 2.0 * (root - a2 + 4.0).ln()
        + (l - 2.0) / 2.0 * (root + a2 + 4.0).ln()
        + 1.5 * LN_2
        - 0.25
}

/// Normalized noise radius at which the expurgated integrand is
/// stationary.
pub fn expurgated_stationary_radius(a: &AlphaL) -> f64 {
    ((a.alpha * a.alpha + discriminant(a) + 4.0) / 8.0).sqrt()
}

pub fn exponent_lower_bound_unbdd(a: &AlphaL) -> ExponentPoint {
    let l = a.l();
    let (value, regime) = if a.alpha <= l.sqrt() {
        (low_alpha_exponent(a.alpha), Regime::RandomCoding)
    } else if a.alpha <= (2.0 * l).sqrt() {
        (e_sl_unbdd(a), Regime::StraightLine)
    } else {
        (e_ex_unbdd(a), Regime::Expurgated)
    };
    ExponentPoint { abscissa: a.alpha, value, regime }
}

/// Unique-decoding exponent of unbounded constellations in its classical
/// three-piece form, the L = 2 reference.
pub fn poltyrev_exponent(alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(domain(format!("alpha {alpha} < 1")));
    }
    Ok(if alpha <= SQRT_2 {
        low_alpha_exponent(alpha)
    } else if alpha <= 2.0 {
        0.5 - LN_2 + alpha.ln()
    } else {
        alpha * alpha / 8.0
    })
}

/// Radius of the cap cut from a sphere of normalized radius `s` by a ball
/// around a point at normalized distance α.
pub fn c_of_s(s: f64, alpha: f64) -> f64 {
    if s <= alpha / 2.0 {
        0.0
    } else if s <= alpha / SQRT_2 {
        (s * s - (s - alpha * alpha / (2.0 * s)).powi(2)).max(0.0).sqrt()
    } else {
        s
    }
}

/// Exponent of f(s√n), f the density of ‖g‖ for a standard Gaussian vector g.
pub fn gaussian_norm_density_exponent(s: f64) -> f64 {
    s * s / 2.0 - s.ln() - 0.5
}

/// Integrand whose infimum over s is the expurgated exponent; +∞ where the
/// neighbourhood intersection is empty (s ≤ α/2).
pub fn exe_integrand(s: f64, a: &AlphaL) -> f64 {
    let alpha = a.alpha;
    let head = gaussian_norm_density_exponent(s);
    if s <= alpha / 2.0 {
        f64::INFINITY
    } else if s <= alpha / SQRT_2 {
        let c = c_of_s(s, alpha);
        head + (a.l() - 1.0) * (alpha.ln() - c.ln())
    } else {
        head + (a.l() - 1.0) * (alpha.ln() - s.ln()).max(0.0)
    }
}

/// Grid-and-golden-section minimum of [`exe_integrand`] on each of its
/// smooth pieces.
pub fn numeric_exe_oracle(a: &AlphaL) -> f64 {
    let alpha = a.alpha;
    let pieces = [(alpha / 2.0 * (1.0 + 1e-12), alpha / SQRT_2), (alpha / SQRT_2, alpha), (alpha, 4.0 * alpha + 10.0)];
    let mut best = f64::INFINITY;
    for (lo, hi) in pieces {
        let n = 4000;
        let at = |i: usize| lo + (hi - lo) * i as f64 / n as f64;
        let f = |s: f64| exe_integrand(s.clamp(lo, hi), a);
        let i_best = (0..=n).min_by(|&i, &j| f(at(i)).total_cmp(&f(at(j)))).unwrap_or(0);
        let win = Interval { lo: at(i_best.saturating_sub(1)), hi: at((i_best + 1).min(n)) };
        let (_, v) = golden_section_min(f, win, 1e-13 * hi);
        best = best.min(v).min(f(at(i_best)));
    }
    best
}

/// Leading-order radius ασ√n of the ball holding one expected point.
pub fn r_star(alpha: f64, sigma: f64, n: usize) -> f64 {
    alpha * sigma * (n as f64).sqrt()
}

/// The same radius from the ball-volume formula with intensity e^{nR}.
pub fn r_star_exact(alpha: f64, sigma: f64, n: usize) -> f64 {
    let rate = -0.5 * (2.0 * PI * E * sigma * sigma * alpha * alpha).ln();
    let ln_unit_ball = ln_ball_volume(n, 1.0);
    (-rate - ln_unit_ball / n as f64).exp()
}

/// ln f(s√n), where f is the density of ‖g‖ for standard Gaussian g in ℝⁿ
/// (the chi density with n degrees of freedom).
pub fn ln_norm_density(s: f64, n: usize) -> f64 {
    let nf = n as f64;
    let half = nf / 2.0;
    (1.0 - half) * LN_2 - ln_gamma(half) + (nf - 1.0) * (s * nf.sqrt()).ln() - nf * s * s / 2.0
}
