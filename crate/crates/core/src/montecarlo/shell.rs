use rayon::prelude::*;

use super::{fill_gaussian, SimEstimate};
use crate::error::{domain, Result};
use crate::numerics::SeedSpec;

/// Frequency with which ‖x‖² − nP lands in [−δ, 0] for x with i.i.d.
/// N(0, P) coordinates.
pub fn estimate_shell_probability(
    dim: usize,
    power: f64,
    delta: f64,
    trials: u64,
    master_seed: u64,
) -> Result<SimEstimate> {
    if dim == 0 || trials == 0 {
        return Err(domain(format!("dimension {dim}, trials {trials}")));
    }
    if !(power > 0.0 && power.is_finite()) || !(delta > 0.0) {
        return Err(domain(format!("power {power}, delta {delta}")));
    }
    let sd = power.sqrt();
    let target = dim as f64 * power;
    let base = SeedSpec::new(master_seed, 0);
    let hits = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0.0; dim],
            |x, i| {
                fill_gaussian(&mut base.with_stream(i).rng(), sd, x);
                let excess = x.iter().map(|v| v * v).sum::<f64>() - target;
                (-delta..=0.0).contains(&excess) as u64
            },
        )
        .sum();
    Ok(SimEstimate::from_counts(trials, hits, master_seed))
}

/// Central-limit value δ/(2P√(πn)) of the shell probability.
pub fn shell_probability_target(dim: usize, power: f64, delta: f64) -> f64 {
    delta / (2.0 * power * (std::f64::consts::PI * dim as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_central_limit_value() {
        let est = estimate_shell_probability(400, 1.0, 1.0, 200_000, 1).unwrap();
        let target = shell_probability_target(400, 1.0, 1.0);
        assert!((target - 0.014_104_739_588_693_9).abs() < 1e-15);
        assert!((est.p_hat - target).abs() < 3.0 * est.stderr, "{} vs {target}", est.p_hat);
    }

    #[test]
    fn window_scaling() {
        assert_eq!(estimate_shell_probability(50, 2.0, 1e-9, 20_000, 2).unwrap().errors, 0);
        let one = estimate_shell_probability(50, 1.0, 0.2, 200_000, 3).unwrap();
        let two = estimate_shell_probability(50, 1.0, 0.4, 200_000, 3).unwrap();
        let ratio = two.p_hat / one.p_hat;
        let noise = 3.0 * (one.stderr / one.p_hat + two.stderr / two.p_hat) * ratio;
        assert!((ratio - 2.0).abs() < noise, "{ratio} ± {noise}");
        assert!(estimate_shell_probability(50, 1.0, 0.0, 10, 0).is_err());
    }
}
