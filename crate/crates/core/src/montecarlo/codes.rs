use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{fill_gaussian, SimEstimate};
use crate::error::{domain, Error, Result};
use crate::geometry::{chebyshev_ball, dist_sq, PointSet};
use crate::numerics::SeedSpec;

/// Fewest errors for which a log-probability estimate is reported.
pub const MIN_ERRORS: u64 = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    points: PointSet,
    power: Option<f64>,
}

impl Codebook {
    pub fn new(points: PointSet, power: Option<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty codebook".into()));
        }
        if let Some(p) = power {
            if !(p > 0.0) {
                return Err(domain(format!("power {p}")));
            }
            let limit = points.dim() as f64 * p * (1.0f64 + 1e-9).powi(2);
            if let Some(i) = (0..points.len()).find(|&i| points.point(i).iter().map(|x| x * x).sum::<f64>() > limit) {
                return Err(domain(format!("row {i} violates the power constraint")));
            }
        }
        Ok(Self { points, power })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn power(&self) -> Option<f64> {
        self.power
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }
}

/// `size` rows drawn uniformly from the sphere of radius √(nP).
pub fn sample_spherical_code(dim: usize, size: usize, power: f64, seed: SeedSpec) -> Result<Codebook> {
    if dim == 0 || size == 0 {
        return Err(domain(format!("dimension {dim}, size {size}")));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(domain(format!("power {power}")));
    }
    let radius = (dim as f64 * power).sqrt();
    let mut rng = seed.rng();
    let mut coords = vec![0.0; dim * size];
    for row in coords.chunks_exact_mut(dim) {
        loop {
            fill_gaussian(&mut rng, 1.0, row);
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x *= radius / norm);
                break;
            }
        }
    }
    Codebook::new(PointSet::new(dim, coords)?, Some(power))
}

fn by_distance(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Indices of the `list_size` rows nearest to `y`, in increasing index
/// order. Equal distances go to the lower index.
pub fn ml_list_decode(code: &Codebook, y: &[f64], list_size: usize) -> Result<Vec<usize>> {
    if list_size == 0 || list_size >= code.len() {
        return Err(domain(format!("list size {list_size} for {} codewords", code.len())));
    }
    if y.len() != code.dim() {
        return Err(domain(format!("received word of dimension {}", y.len())));
    }
    let mut keyed: Vec<(f64, usize)> = code.points.iter().map(|x| dist_sq(y, x)).zip(0..).collect();
    keyed.select_nth_unstable_by(list_size - 1, |&a, &b| by_distance(a, b));
    let mut list: Vec<usize> = keyed[..list_size].iter().map(|&(_, i)| i).collect();
    list.sort_unstable();
    Ok(list)
}

/// Whether codeword `sent` falls outside the decoded list for `y`.
fn decodes_wrongly(code: &PointSet, y: &[f64], sent: usize, list_size: usize) -> bool {
    let own = (dist_sq(y, code.point(sent)), sent);
    let mut closer = 0;
    for (j, x) in code.iter().enumerate() {
        if j != sent && by_distance((dist_sq(y, x), j), own) == Ordering::Less {
            closer += 1;
            if closer >= list_size {
                return true;
            }
        }
    }
    false
}

/// Trials and errors broken down by transmitted codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerWordCounts {
    pub trials: Vec<u64>,
    pub errors: Vec<u64>,
}

impl PerWordCounts {
    fn zero(m: usize) -> Self {
        Self { trials: vec![0; m], errors: vec![0; m] }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials.iter_mut().zip(other.trials).for_each(|(a, b)| *a += b);
        self.errors.iter_mut().zip(other.errors).for_each(|(a, b)| *a += b);
        self
    }

    pub fn total(&self, master_seed: u64) -> SimEstimate {
        SimEstimate::from_counts(self.trials.iter().sum(), self.errors.iter().sum(), master_seed)
    }
}

fn check_sim(sigma: f64, trials: u64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain(format!("sigma {sigma}")));
    }
    if trials == 0 {
        return Err(domain("zero trials"));
    }
    Ok(())
}

/// Runs the list-decoding experiment and tallies outcomes per codeword.
/// With at least as many trials as codewords, trial `i` sends codeword
/// `i mod M`; otherwise the codeword is drawn uniformly from the trial's
/// stream.
pub fn simulate_per_word(
    code: &Codebook,
    sigma: f64,
    list_size: usize,
    trials: u64,
    master_seed: u64,
) -> Result<PerWordCounts> {
    check_sim(sigma, trials)?;
    let m = code.len();
    if list_size == 0 || list_size >= m {
        return Err(domain(format!("list size {list_size} for {m} codewords")));
    }
    let n = code.dim();
    let round_robin = trials >= m as u64;
    let base = SeedSpec::new(master_seed, 0);
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || (PerWordCounts::zero(m), vec![0.0; n]),
            |(mut acc, mut y), i| {
                let mut rng = base.with_stream(i).rng();
                let sent = if round_robin { (i % m as u64) as usize } else { rng.random_range(0..m) };
                fill_gaussian(&mut rng, sigma, &mut y);
                y.iter_mut().zip(code.points.point(sent)).for_each(|(v, x)| *v += x);
                acc.trials[sent] += 1;
                acc.errors[sent] += decodes_wrongly(&code.points, &y, sent, list_size) as u64;
                (acc, y)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| PerWordCounts::zero(m), PerWordCounts::merge);
    Ok(counts)
}

pub fn estimate_error_prob(
    code: &Codebook,
    sigma: f64,
    list_size: usize,
    trials: u64,
    master_seed: u64,
) -> Result<SimEstimate> {
    Ok(simulate_per_word(code, sigma, list_size, trials, master_seed)?.total(master_seed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ListIdentity {
    pub estimate: SimEstimate,
    /// −ln p̂ divided by rad²/(2σ²).
    pub ratio: f64,
    pub radius_sq: f64,
    pub per_vertex: Vec<SimEstimate>,
}

/// Error probability of a list used as its own codebook, decoded to all but
/// one point, and its exponent relative to the Chebyshev radius.
pub fn estimate_list_identity(list: &PointSet, sigma: f64, trials: u64, master_seed: u64) -> Result<ListIdentity> {
    if list.len() < 2 {
        return Err(domain(format!("list of {} points", list.len())));
    }
    let radius_sq = chebyshev_ball(list)?.radius_sq;
    let code = Codebook::new(list.clone(), None)?;
    let counts = simulate_per_word(&code, sigma, list.len() - 1, trials, master_seed)?;
    let estimate = counts.total(master_seed);
    if estimate.errors < MIN_ERRORS {
        return Err(Error::InsufficientErrors(estimate.errors));
    }
    let per_vertex =
        counts.trials.iter().zip(&counts.errors).map(|(&t, &e)| SimEstimate::from_counts(t, e, master_seed)).collect();
    Ok(ListIdentity {
        ratio: -estimate.p_hat.ln() / (radius_sq / (2.0 * sigma * sigma)),
        estimate,
        radius_sq,
        per_vertex,
    })
}

/// Indices of the ⌈M/2⌉ smallest values, ties to the lower index, in
/// increasing index order.
pub fn expurgation_keep(per_word_error: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..per_word_error.len()).collect();
    order.sort_by(|&a, &b| per_word_error[a].total_cmp(&per_word_error[b]));
    order.truncate(per_word_error.len().div_ceil(2));
    order.sort_unstable();
    order
}

pub fn expurgate_half(code: &Codebook, per_word_error: &[f64]) -> Result<Codebook> {
    if per_word_error.len() != code.len() {
        return Err(domain(format!("{} error values for {} codewords", per_word_error.len(), code.len())));
    }
    Codebook::new(code.points.subset(&expurgation_keep(per_word_error)), code.power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::order_voronoi_member;
    use crate::montecarlo::CONSTRUCTION_STREAM;
    use crate::numerics::q_function;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn two_point(d: f64, n: usize) -> Codebook {
        let mut coords = vec![0.0; 2 * n];
        coords[n] = d;
        Codebook::new(PointSet::new(n, coords).unwrap(), None).unwrap()
    }

    #[test]
    fn spherical_code_construction() {
        let seed = SeedSpec::new(7, CONSTRUCTION_STREAM);
        let c = sample_spherical_code(8, 10_000, 2.0, seed).unwrap();
        for x in c.points().iter() {
            assert!((x.iter().map(|v| v * v).sum::<f64>().sqrt() - 4.0).abs() < 1e-9);
        }
        let stderr = (2.0f64 / 10_000.0).sqrt();
        for k in 0..8 {
            let mean = c.points().iter().map(|x| x[k]).sum::<f64>() / 10_000.0;
            assert!(mean.abs() < 4.0 * stderr, "coordinate {k} mean {mean}");
        }
        assert_eq!(c, sample_spherical_code(8, 10_000, 2.0, seed).unwrap());
        assert_ne!(c, sample_spherical_code(8, 10_000, 2.0, SeedSpec::new(8, CONSTRUCTION_STREAM)).unwrap());
        assert!(Codebook::new(PointSet::new(2, vec![3.0, 0.0]).unwrap(), Some(1.0)).is_err());
    }

    #[test]
    fn decode_examples() {
        let code = Codebook::new(PointSet::from_rows(&[[0.0], [2.0], [10.0]]).unwrap(), None).unwrap();
        assert_eq!(ml_list_decode(&code, &[0.9], 2).unwrap(), vec![0, 1]);
        assert_eq!(ml_list_decode(&code, &[10.0], 1).unwrap(), vec![2]);
        assert_eq!(ml_list_decode(&code, &[1.0], 1).unwrap(), vec![0]);
        assert!(ml_list_decode(&code, &[1.0], 3).is_err());
        assert!(ml_list_decode(&code, &[1.0], 0).is_err());
    }

    #[test]
    fn decoder_agrees_with_order_voronoi_regions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let l = rng.random_range(2..6);
            let n = rng.random_range(1..5);
            let mut coords = vec![0.0; l * n];
            fill_gaussian(&mut rng, 1.0, &mut coords);
            let code = Codebook::new(PointSet::new(n, coords).unwrap(), None).unwrap();
            let mut y = vec![0.0; n];
            fill_gaussian(&mut rng, 1.5, &mut y);
            let list = ml_list_decode(&code, &y, l - 1).unwrap();
            for k in 0..l {
                let rest: Vec<usize> = (0..l).filter(|&i| i != k).collect();
                assert_eq!(!list.contains(&k), order_voronoi_member(&y, code.points(), &rest));
            }
        }
    }

    #[test]
    fn two_point_code_matches_q_function() {
        for (d, sigma, seed) in [(2.0, 1.0, 1), (3.0, 1.0, 2), (2.0, 0.7, 3)] {
            let est = estimate_error_prob(&two_point(d, 3), sigma, 1, 100_000, seed).unwrap();
            let target = q_function(d / (2.0 * sigma));
            assert!((est.p_hat - target).abs() < 3.0 * est.stderr, "{d} {sigma}: {} vs {target}", est.p_hat);
            assert_eq!(est.log_p_hat, Some(est.p_hat.ln()));
        }
    }

    #[test]
    fn noiseless_limit() {
        let est = estimate_error_prob(&two_point(2.0, 2), 1e-6, 1, 1_000, 5).unwrap();
        assert_eq!(est.errors, 0);
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.log_p_hat, None);
    }

    #[test]
    fn independent_of_worker_count() {
        let code = sample_spherical_code(6, 9, 1.0, SeedSpec::new(3, CONSTRUCTION_STREAM)).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_per_word(&code, 1.2, 2, 5_000, 42).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, run(8));
        assert_eq!(one.trials.iter().sum::<u64>(), 5_000);
        let few = simulate_per_word(&code, 1.2, 2, 5, 42).unwrap();
        assert_eq!(few.trials.iter().sum::<u64>(), 5);
    }

    #[test]
    fn two_point_identity_ratio() {
        let (a, sigma) = (6.0, 1.0);
        let list = two_point(a, 4).points().clone();
        let out = estimate_list_identity(&list, sigma, 400_000, 9).unwrap();
        let exact = -q_function(a / (2.0 * sigma)).ln() / ((a / 2.0).powi(2) / (2.0 * sigma * sigma));
        let band = out.estimate.stderr / out.estimate.p_hat / ((a / 2.0).powi(2) / 2.0);
        assert!((out.ratio - exact).abs() < 4.0 * band, "{} vs {exact}", out.ratio);
        assert!((out.radius_sq - 9.0).abs() < 1e-12);
        assert!(matches!(estimate_list_identity(&list, 0.3, 1_000, 9), Err(Error::InsufficientErrors(0))));
    }

    #[test]
    fn obtuse_far_vertex_errs_less() {
        let list = PointSet::from_rows(&[[-3.0, 0.0], [3.0, 0.0], [0.0, 1.2]]).unwrap();
        let out = estimate_list_identity(&list, 1.0, 300_000, 4).unwrap();
        let p: Vec<f64> = out.per_vertex.iter().map(|e| e.p_hat).collect();
        let se: Vec<f64> = out.per_vertex.iter().map(|e| e.stderr).collect();
        assert!(p[2] + 3.0 * (se[2] + se[0]) < p[0], "{p:?}");
        assert!(p[2] + 3.0 * (se[2] + se[1]) < p[1], "{p:?}");
    }

    #[test]
    fn expurgation_examples() {
        assert_eq!(expurgation_keep(&[0.9, 0.1, 0.2, 0.8]), vec![1, 2]);
        assert_eq!(expurgation_keep(&[0.5; 5]), vec![0, 1, 2]);
        let code = Codebook::new(PointSet::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap(), Some(9.0)).unwrap();
        let kept = expurgate_half(&code, &[0.9, 0.1, 0.2, 0.8]).unwrap();
        assert_eq!(kept.points().coords(), &[1.0, 2.0]);
        assert_eq!(kept.power(), Some(9.0));
        assert!(expurgate_half(&code, &[0.1]).is_err());
    }

    proptest! {
        #[test]
        fn expurgation_obeys_markov(errs in proptest::collection::vec(0.0f64..1.0, 1..60)) {
            let mean = errs.iter().sum::<f64>() / errs.len() as f64;
            let kept = expurgation_keep(&errs);
            prop_assert_eq!(kept.len(), errs.len().div_ceil(2));
            for &i in &kept {
                prop_assert!(errs[i] <= 2.0 * mean + 1e-15);
            }
            let worst_kept = kept.iter().map(|&i| errs[i]).fold(f64::NEG_INFINITY, f64::max);
            for i in (0..errs.len()).filter(|i| !kept.contains(i)) {
                prop_assert!(errs[i] >= worst_kept);
            }
        }

        #[test]
        fn decoder_returns_nearest(seed in 0u64..1_000, l in 1usize..5) {
            let code = sample_spherical_code(3, 6, 1.0, SeedSpec::new(seed, CONSTRUCTION_STREAM)).unwrap();
            let y = [0.3, -0.2, 0.9];
            let list = ml_list_decode(&code, &y, l).unwrap();
            prop_assert_eq!(list.len(), l);
            let worst_in = list.iter().map(|&i| dist_sq(&y, code.points().point(i))).fold(0.0, f64::max);
            for j in (0..6).filter(|j| !list.contains(j)) {
                prop_assert!(dist_sq(&y, code.points().point(j)) >= worst_in);
            }
        }
    }
}
