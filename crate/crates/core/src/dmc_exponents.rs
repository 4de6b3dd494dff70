//! List-decoding exponents for finite discrete memoryless channels.

use itertools::Itertools;

use crate::error::{domain, Error, Result};
use crate::numerics::{golden_section_max, Interval};

const STOCHASTIC_TOL: f64 = 1e-12;
const OPT_TOL: f64 = 1e-10;
/// Largest input-tuple enumeration the expurgated exponent will attempt.
pub const TUPLE_GUARD: u128 = 1_000_000;
pub const DEFAULT_RHO_MAX: f64 = 64.0;

/// A channel matrix together with a fixed input distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    transition: Vec<Vec<f64>>,
    input: Vec<f64>,
}

fn check_distribution(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(domain(format!("{what} is empty")));
    }
    if v.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(domain(format!("{what} has a negative or non-finite entry")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(domain(format!("{what} sums to {sum}")));
    }
    Ok(())
}

impl Dmc {
    pub fn new(transition: Vec<Vec<f64>>, input: Vec<f64>) -> Result<Self> {
        if transition.len() != input.len() {
            return Err(domain(format!("{} rows but {} input weights", transition.len(), input.len())));
        }
        check_distribution(&input, "input distribution")?;
        let width = transition[0].len();
        for (i, row) in transition.iter().enumerate() {
            if row.len() != width {
                return Err(domain(format!("row {i} has {} entries, expected {width}", row.len())));
            }
            check_distribution(row, &format!("row {i}"))?;
        }
        Ok(Self { transition, input })
    }

    /// Binary symmetric channel with crossover `p` and uniform input.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("crossover {p}")));
        }
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]], vec![0.5, 0.5])
    }

    pub fn with_input(&self, input: Vec<f64>) -> Result<Self> {
        Self::new(self.transition.clone(), input)
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn input(&self) -> &[f64] {
        &self.input
    }

    pub fn inputs(&self) -> usize {
        self.input.len()
    }

    pub fn outputs(&self) -> usize {
        self.transition[0].len()
    }
}

pub fn gallager_e0(d: &Dmc, rho: f64) -> Result<f64> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(domain(format!("rho {rho} < 0")));
    }
    let power = 1.0 / (1.0 + rho);
    let total: f64 = (0..d.outputs())
        .map(|y| {
            let inner: f64 = d.input.iter().zip(&d.transition).map(|(px, row)| px * row[y].powf(power)).sum();
            inner.powf(1.0 + rho)
        })
        .sum();
    Ok(-total.ln())
}

/// I(X;Y) in nats under the channel's input distribution.
pub fn mutual_information(d: &Dmc) -> f64 {
    let out: Vec<f64> =
        (0..d.outputs()).map(|y| d.input.iter().zip(&d.transition).map(|(px, row)| px * row[y]).sum()).collect();
    d.input
        .iter()
        .zip(&d.transition)
        .flat_map(|(px, row)| row.iter().zip(&out).map(move |(w, q)| (px, w, q)))
        .filter(|(px, w, _)| **px > 0.0 && **w > 0.0)
        .map(|(px, w, q)| px * w * (w / q).ln())
        .sum()
}

fn check_rate(rate: f64, multiplicity: u32) -> Result<()> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(domain(format!("rate {rate} < 0")));
    }
    if multiplicity < 2 {
        return Err(domain(format!("multiplicity {multiplicity} < 2")));
    }
    Ok(())
}

pub fn dmc_random_coding_exponent(d: &Dmc, rate: f64, multiplicity: u32) -> Result<f64> {
    check_rate(rate, multiplicity)?;
    let k = (multiplicity - 1) as f64;
    let objective = |rho: f64| -k * rho * rate + gallager_e0(d, k * rho).unwrap_or(f64::NAN);
    let (rho, v) = golden_section_max(objective, Interval { lo: 0.0, hi: 1.0 }, OPT_TOL);
    if !v.is_finite() {
        return Err(Error::NonFinite(rho, rate));
    }
    Ok(v.max(0.0))
}

/// Input tuples of length L collapsed to (probability, Σ_y Π W^{1/L}).
fn tuple_weights(d: &Dmc, multiplicity: u32) -> Result<Vec<(f64, f64)>> {
    let count = (d.inputs() as u128).checked_pow(multiplicity).unwrap_or(u128::MAX);
    if count > TUPLE_GUARD {
        return Err(Error::TooLarge(count));
    }
    let inv_l = 1.0 / multiplicity as f64;
    let roots: Vec<Vec<f64>> = d.transition.iter().map(|row| row.iter().map(|w| w.powf(inv_l)).collect()).collect();
    Ok((0..multiplicity)
        .map(|_| 0..d.inputs())
        .multi_cartesian_product()
        .filter_map(|tuple| {
            let prob: f64 = tuple.iter().map(|&x| d.input[x]).product();
            (prob > 0.0).then(|| {
                let overlap = (0..d.outputs()).map(|y| tuple.iter().map(|&x| roots[x][y]).product::<f64>()).sum();
                (prob, overlap)
            })
        })
        .collect())
}

fn ex_from_weights(weights: &[(f64, f64)], rho: f64) -> f64 {
    let inv = 1.0 / rho;
    -rho * weights.iter().map(|(p, b)| p * b.powf(inv)).sum::<f64>().ln()
}

pub fn dmc_expurgated_ex(d: &Dmc, rho: f64, multiplicity: u32) -> Result<f64> {
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(domain(format!("rho {rho} < 1")));
    }
    let v = ex_from_weights(&tuple_weights(d, multiplicity)?, rho);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(rho, multiplicity as f64))
    }
}

pub fn dmc_expurgated_exponent(d: &Dmc, rate: f64, multiplicity: u32, rho_max: f64) -> Result<f64> {
    check_rate(rate, multiplicity)?;
    if !(rho_max >= 1.0 && rho_max.is_finite()) {
        return Err(domain(format!("rho_max {rho_max}")));
    }
    let weights = tuple_weights(d, multiplicity)?;
    let k = (multiplicity - 1) as f64;
    let objective = |rho: f64| -k * rho * rate + ex_from_weights(&weights, rho);
    let (rho, v) = golden_section_max(objective, Interval { lo: 1.0, hi: rho_max }, OPT_TOL);
    if !v.is_finite() {
        return Err(Error::NonFinite(rho, rate));
    }
    Ok(v.max(0.0))
}
