//! Random ensembles and channel simulation. Every estimator is a pure
//! function of its inputs and a master seed: trial `i` draws from stream
//! `i`, and counts are reduced with integer sums, so results do not depend
//! on the number of worker threads.

mod codes;
mod points;
mod shell;

pub use codes::{
    estimate_error_prob, estimate_list_identity, expurgate_half, expurgation_keep, ml_list_decode,
    sample_spherical_code, simulate_per_word, Codebook, ListIdentity, PerWordCounts, MIN_ERRORS,
};
pub use points::{sample_matern, sample_ppp, tile_constellation, tiling_nld, PppConfig, Window, MAX_POINTS};
pub use shell::{estimate_shell_probability, shell_probability_target};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::numerics::SeedSpec;

/// Stream reserved for drawing random codebooks and point sets, kept apart
/// from the per-trial streams `0..trials`.
pub const CONSTRUCTION_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub trials: u64,
    pub errors: u64,
    pub p_hat: f64,
    pub stderr: f64,
    /// ln p_hat, absent when no errors were seen.
    pub log_p_hat: Option<f64>,
    pub seed: SeedSpec,
}

impl SimEstimate {
    pub fn from_counts(trials: u64, errors: u64, master_seed: u64) -> Self {
        let p_hat = if trials == 0 { 0.0 } else { errors as f64 / trials as f64 };
        let stderr = if trials == 0 { 0.0 } else { (p_hat * (1.0 - p_hat) / trials as f64).sqrt() };
        Self {
            trials,
            errors,
            p_hat,
            stderr,
            log_p_hat: (errors > 0).then(|| p_hat.ln()),
            seed: SeedSpec::new(master_seed, 0),
        }
    }
}

fn fill_gaussian<R: Rng>(rng: &mut R, scale: f64, out: &mut [f64]) {
    for v in out {
        *v = scale * rng.sample::<f64, _>(StandardNormal);
    }
}
