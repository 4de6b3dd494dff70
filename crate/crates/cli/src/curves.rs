//! Curve commands: capacity bounds, constrained and unconstrained exponents,
//! and DMC exponents, each written as CSV.

use std::f64::consts::LN_2;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use multipack::awgn_exponents::{capacity, exponent_lower_bound, gallager_exponent, r_crit, r_x, SnrRate};
use multipack::bounds::{
    cap_ld_bounded, cap_ld_unbounded, lb_capacity_bounded, lb_capacity_unbounded, ub_capacity_bounded,
    ub_capacity_unbounded, PackingParams,
};
use multipack::dmc_exponents::{
    dmc_expurgated_exponent, dmc_random_coding_exponent, mutual_information, Dmc, DEFAULT_RHO_MAX,
};
use multipack::poltyrev_exponents::{exponent_lower_bound_unbdd, poltyrev_exponent, AlphaL};

use crate::output::{fmt_g, write_csv};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    Bounded,
    Unbounded,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Power-constrained (bounded) or unconstrained (unbounded) packings
    #[arg(value_enum)]
    pub regime: Regime,
    /// Signal power (bounded only)
    #[arg(long = "P", default_value_t = 1.0)]
    pub power: f64,
    /// Evaluate a single noise power instead of sweeping
    #[arg(long = "N")]
    pub noise: Option<f64>,
    /// Multiplicity L (balls may hold at most L-1 points)
    #[arg(long = "L", default_value_t = 2)]
    pub multiplicity: u32,
    /// Sweep start: N/P when bounded, N when unbounded
    #[arg(long)]
    pub nsr_min: Option<f64>,
    /// Sweep end: N/P when bounded (default the Plotkin point), N when unbounded
    #[arg(long)]
    pub nsr_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub snr: f64,
    #[arg(long = "L", default_value_t = 3)]
    pub multiplicity: u32,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct UnboundedExponentsArgs {
    #[arg(long = "L", default_value_t = 3)]
    pub multiplicity: u32,
    #[arg(long, default_value_t = 1.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Noise level; adds the normalized log density of each point
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DmcArgs {
    /// Channel matrix as CSV, one input symbol per row, no header
    #[arg(long, conflicts_with = "bsc", required_unless_present = "bsc")]
    pub channel: Option<PathBuf>,
    /// Binary symmetric channel with this crossover probability
    #[arg(long)]
    pub bsc: Option<f64>,
    /// Input distribution as comma-separated weights (default uniform)
    #[arg(long, value_delimiter = ',')]
    pub input: Option<Vec<f64>>,
    #[arg(long = "L", default_value_t = 2)]
    pub multiplicity: u32,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_RHO_MAX)]
    pub rho_max: f64,
}

/// Conversion applied to every information quantity.
fn unit(bits: bool) -> f64 {
    if bits {
        1.0 / LN_2
    } else {
        1.0
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::usage("--steps must be at least 2"));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(CliError::usage(format!("empty range [{lo}, {hi}]")));
    }
    let mut xs: Vec<f64> = (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect();
    xs[steps - 1] = hi;
    Ok(xs)
}

pub fn bounds(a: &BoundsArgs, bits: bool, out: Option<&Path>) -> Result<(), CliError> {
    let u = unit(bits);
    let l = a.multiplicity;
    match a.regime {
        Regime::Bounded => {
            let plotkin_noise = PackingParams::new(a.power, a.power / 2.0, l)?.plotkin_noise();
            let plotkin = plotkin_noise / a.power;
            let nsrs = match a.noise {
                Some(n) => vec![n / a.power],
                None => grid(a.nsr_min.unwrap_or(0.01), a.nsr_max.unwrap_or(plotkin), a.steps)?,
            };
            let rows = nsrs
                .iter()
                .map(|&nsr| {
                    // the sweep end is the Plotkin point itself, not a rounded neighbour
                    let noise = if nsr == plotkin { plotkin_noise } else { nsr * a.power };
                    let p = PackingParams::new(a.power, noise, l)?;
                    Ok(vec![
                        fmt_g(nsr),
                        fmt_g(lb_capacity_bounded(&p)? * u),
                        fmt_g(ub_capacity_bounded(&p)? * u),
                        fmt_g(cap_ld_bounded(a.power, noise)? * u),
                    ])
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            write_csv(out, &["nsr", "lb", "ub", "cap_ld"], &rows)?;
        }
        Regime::Unbounded => {
            let noises = match a.noise {
                Some(n) => vec![n],
                None => grid(a.nsr_min.unwrap_or(0.001), a.nsr_max.unwrap_or(0.05), a.steps)?,
            };
            let rows = noises
                .iter()
                .map(|&n| {
                    Ok(vec![
                        fmt_g(n),
                        fmt_g(lb_capacity_unbounded(n, l)? * u),
                        fmt_g(ub_capacity_unbounded(n, l)? * u),
                        fmt_g(cap_ld_unbounded(n)? * u),
                    ])
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            write_csv(out, &["N", "lb", "ub", "cap_ld"], &rows)?;
        }
    }
    Ok(())
}

pub fn exponents(a: &ExponentsArgs, bits: bool, out: Option<&Path>) -> Result<(), CliError> {
    let u = unit(bits);
    let (snr, l) = (a.snr, a.multiplicity);
    SnrRate::new(snr, 0.0)?;
    if l < 2 {
        return Err(CliError::usage("--L must be at least 2"));
    }
    let (rc, rx) = (r_crit(snr, l), r_x(snr, l));
    let rows = grid(0.0, capacity(snr), a.steps)?
        .into_iter()
        .map(|r| {
            let p = exponent_lower_bound(&SnrRate::new(snr, r)?, l)?;
            Ok(vec![
                fmt_g(r * u),
                fmt_g(p.value * u),
                p.regime.to_string(),
                fmt_g(gallager_exponent(snr, r)? * u),
                fmt_g(rc * u),
                fmt_g(rx * u),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_csv(out, &["R", "E_lower", "regime", "gallager_l2", "R_crit", "R_x"], &rows)?;
    Ok(())
}

pub fn exponents_unbounded(a: &UnboundedExponentsArgs, bits: bool, out: Option<&Path>) -> Result<(), CliError> {
    let u = unit(bits);
    let l = a.multiplicity;
    let lf = l as f64;
    let rows = grid(a.alpha_min, a.alpha_max, a.steps)?
        .into_iter()
        .map(|alpha| {
            let mut al = AlphaL::new(alpha, l)?;
            if let Some(s) = a.sigma {
                al = al.with_sigma(s)?;
            }
            let p = exponent_lower_bound_unbdd(&al);
            Ok(vec![
                fmt_g(alpha),
                fmt_g(p.value * u),
                p.regime.to_string(),
                fmt_g(poltyrev_exponent(alpha)? * u),
                fmt_g(lf.sqrt()),
                fmt_g((2.0 * lf).sqrt()),
                al.rate().map_or(String::new(), |r| fmt_g(r * u)),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_csv(out, &["alpha", "E_lower", "regime", "poltyrev", "sqrt_L", "sqrt_2L", "nld"], &rows)?;
    Ok(())
}

fn read_channel(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            rec.iter()
                .map(|f| f.parse::<f64>().map_err(|e| CliError::usage(format!("{}: {f:?}: {e}", path.display()))))
                .collect()
        })
        .collect()
}

pub fn dmc(a: &DmcArgs, bits: bool, out: Option<&Path>) -> Result<(), CliError> {
    let u = unit(bits);
    let mut channel = match (&a.channel, a.bsc) {
        (Some(path), _) => {
            let rows = read_channel(path)?;
            let m = rows.len().max(1);
            Dmc::new(rows, vec![1.0 / m as f64; m])?
        }
        (None, Some(p)) => Dmc::bsc(p)?,
        (None, None) => return Err(CliError::usage("one of --channel or --bsc is required")),
    };
    if let Some(input) = &a.input {
        channel = channel.with_input(input.clone())?;
    }
    let info = mutual_information(&channel);
    let hi = if info > 0.0 { 1.2 * info } else { 1.0 };
    let rows = grid(0.0, hi, a.steps)?
        .into_iter()
        .map(|r| {
            Ok(vec![
                fmt_g(r * u),
                fmt_g(dmc_random_coding_exponent(&channel, r, a.multiplicity)? * u),
                fmt_g(dmc_expurgated_exponent(&channel, r, a.multiplicity, a.rho_max)? * u),
                fmt_g(info * u),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_csv(out, &["R", "random_coding", "expurgated", "mutual_information"], &rows)?;
    Ok(())
}
