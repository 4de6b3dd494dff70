use itertools::Itertools;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::bounds::rate_of_code;
use crate::error::{domain, Error, Result};
use crate::geometry::{dist_sq, PointSet};
use crate::numerics::SeedSpec;

/// Largest point count a sampler or tiling will materialize.
pub const MAX_POINTS: u128 = 10_000_000;

/// Closed axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(domain(format!("corners of dimension {} and {}", lo.len(), hi.len())));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(domain("box must have finite, positive extent in every coordinate"));
        }
        Ok(Self { lo, hi })
    }

    /// The cube [−half, half]ⁿ.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        Self::new(vec![-half; dim], vec![half; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }

    pub fn dilate(&self, r: f64) -> Self {
        Self { lo: self.lo.iter().map(|a| a - r).collect(), hi: self.hi.iter().map(|b| b + r).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PppConfig {
    pub intensity: f64,
    pub window: Window,
    /// Minimum surviving distance for the Matérn thinning.
    pub exclusion_radius: Option<f64>,
}

impl PppConfig {
    pub fn new(intensity: f64, window: Window, exclusion_radius: Option<f64>) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(domain(format!("intensity {intensity}")));
        }
        if let Some(r) = exclusion_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(domain(format!("exclusion radius {r}")));
            }
        }
        Ok(Self { intensity, window, exclusion_radius })
    }

    pub fn expected_count(&self) -> f64 {
        self.intensity * self.window.volume()
    }
}

fn poisson_points<R: Rng>(rng: &mut R, intensity: f64, window: &Window) -> Result<PointSet> {
    let mean = intensity * window.volume();
    if mean > MAX_POINTS as f64 {
        return Err(Error::WindowTooLarge(mean as u128));
    }
    let count = Poisson::new(mean).map_err(|e| domain(e.to_string()))?.sample(rng) as usize;
    let dim = window.dim();
    let mut coords = Vec::with_capacity(count * dim);
    for _ in 0..count {
        for (a, b) in window.lo.iter().zip(&window.hi) {
            coords.push(rng.random_range(*a..*b));
        }
    }
    PointSet::new(dim, coords)
}

/// Homogeneous Poisson process restricted to the window.
pub fn sample_ppp(cfg: &PppConfig, seed: SeedSpec) -> Result<PointSet> {
    poisson_points(&mut seed.rng(), cfg.intensity, &cfg.window)
}

/// Poisson process with every point that has a neighbour within the
/// exclusion radius removed. The parent process covers the window dilated
/// by the radius, so points near the boundary see their full neighbourhood.
pub fn sample_matern(cfg: &PppConfig, seed: SeedSpec) -> Result<PointSet> {
    let r = cfg.exclusion_radius.ok_or_else(|| domain("Matérn sampling needs an exclusion radius"))?;
    let parent = poisson_points(&mut seed.rng(), cfg.intensity, &cfg.window.dilate(r))?;
    let r_sq = r * r;
    let mut order: Vec<usize> = (0..parent.len()).collect();
    order.sort_by(|&a, &b| parent.point(a)[0].total_cmp(&parent.point(b)[0]));
    let mut crowded = vec![false; parent.len()];
    for (k, &i) in order.iter().enumerate() {
        let xi = parent.point(i);
        for &j in order[k + 1..].iter().take_while(|&&j| parent.point(j)[0] - xi[0] <= r) {
            if dist_sq(xi, parent.point(j)) <= r_sq {
                crowded[i] = true;
                crowded[j] = true;
            }
        }
    }
    let mut out = PointSet::new(parent.dim(), Vec::new())?;
    for (i, x) in parent.iter().enumerate() {
        if !crowded[i] && cfg.window.contains(x) {
            out.push(x)?;
        }
    }
    Ok(out)
}

/// Copies of `base` on the lattice a(1 + inflation)·ℤⁿ that fall in the
/// window, ordered by lattice shift and then by base index.
pub fn tile_constellation(base: &PointSet, a: f64, inflation: f64, window: &Window) -> Result<PointSet> {
    if !(a > 0.0 && a.is_finite()) || !(inflation >= 0.0 && inflation.is_finite()) {
        return Err(domain(format!("cell side {a}, inflation {inflation}")));
    }
    if base.is_empty() || base.dim() != window.dim() {
        return Err(domain("base and window must be non-empty and of equal dimension"));
    }
    if base.coords().iter().any(|x| x.abs() > a / 2.0) {
        return Err(domain(format!("base points must lie in [-{0}, {0}]^n", a / 2.0)));
    }
    let period = a * (1.0 + inflation);
    let ranges: Vec<(i64, i64)> = window
        .lo
        .iter()
        .zip(&window.hi)
        .map(|(lo, hi)| (((lo - a / 2.0) / period).ceil() as i64, ((hi + a / 2.0) / period).floor() as i64))
        .collect();
    let candidates = ranges
        .iter()
        .map(|&(k0, k1)| (k1 - k0 + 1).max(0) as u128)
        .fold(base.len() as u128, |acc, c| acc.saturating_mul(c));
    if candidates > MAX_POINTS {
        return Err(Error::WindowTooLarge(candidates));
    }
    let mut out = PointSet::new(base.dim(), Vec::new())?;
    let mut y = vec![0.0; base.dim()];
    for shift in ranges.iter().map(|&(k0, k1)| k0..=k1).multi_cartesian_product() {
        for x in base.iter() {
            y.iter_mut().zip(x.iter().zip(&shift)).for_each(|(v, (b, k))| *v = b + *k as f64 * period);
            if window.contains(&y) {
                out.push(&y)?;
            }
        }
    }
    Ok(out)
}

/// Normalized log density of a tiling: ln(points per unit volume)/n.
pub fn tiling_nld(base_size: usize, dim: usize, a: f64, inflation: f64) -> f64 {
    rate_of_code(base_size as f64, dim) - a.ln() - inflation.ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ln_ball_volume;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn ppp(intensity: f64, window: Window, r: Option<f64>) -> PppConfig {
        PppConfig::new(intensity, window, r).unwrap()
    }

    fn counts(cfg: &PppConfig, draws: u64, seed: u64) -> Vec<PointSet> {
        (0..draws).map(|i| sample_ppp(cfg, SeedSpec::new(seed, i)).unwrap()).collect()
    }

    #[test]
    fn config_validation() {
        assert!(Window::new(vec![0.0], vec![0.0]).is_err());
        assert!(Window::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(PppConfig::new(0.0, Window::cube(2, 1.0).unwrap(), None).is_err());
        assert!(PppConfig::new(1.0, Window::cube(2, 1.0).unwrap(), Some(-1.0)).is_err());
        let huge = ppp(1e8, Window::cube(1, 1.0).unwrap(), None);
        assert!(matches!(sample_ppp(&huge, SeedSpec::new(0, 0)), Err(Error::WindowTooLarge(_))));
    }

    #[test]
    fn ppp_points_lie_in_window_and_are_reproducible() {
        let w = Window::new(vec![-1.0, 2.0, 0.0], vec![1.0, 3.0, 4.0]).unwrap();
        let cfg = ppp(5.0, w.clone(), None);
        let a = sample_ppp(&cfg, SeedSpec::new(1, 2)).unwrap();
        assert!(a.iter().all(|x| w.contains(x)));
        assert_eq!(a, sample_ppp(&cfg, SeedSpec::new(1, 2)).unwrap());
    }

    #[test]
    fn ppp_mean_count() {
        let cfg = ppp(2.5, Window::cube(2, 1.0).unwrap(), None);
        let n: Vec<f64> = counts(&cfg, 10_000, 3).iter().map(|p| p.len() as f64).collect();
        let mean = n.iter().sum::<f64>() / n.len() as f64;
        assert!((mean - 10.0).abs() < 4.0 * (10.0f64 / 10_000.0).sqrt(), "{mean}");
    }

    #[test]
    fn ppp_disjoint_boxes_uncorrelated() {
        let cfg = ppp(10.0, Window::new(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap(), None);
        let draws = counts(&cfg, 10_000, 4);
        let pairs: Vec<(f64, f64)> = draws
            .iter()
            .map(|p| {
                let left = p.iter().filter(|x| x[0] < 1.0).count() as f64;
                (left, p.len() as f64 - left)
            })
            .collect();
        let m = pairs.len() as f64;
        let (ma, mb) = pairs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
        let products: Vec<f64> = pairs.iter().map(|(x, y)| (x - ma) * (y - mb)).collect();
        let cov = products.iter().sum::<f64>() / m;
        let sd = (products.iter().map(|p| (p - cov).powi(2)).sum::<f64>() / m).sqrt() / m.sqrt();
        assert!(cov.abs() < 4.0 * sd, "cov {cov}, stderr {sd}");
    }

    #[test]
    fn ppp_counts_pass_chi_square() {
        let cfg = ppp(10.0, Window::cube(1, 0.5).unwrap(), None);
        let n = counts(&cfg, 10_000, 5);
        let pois = statrs::distribution::Poisson::new(10.0).unwrap();
        use statrs::distribution::{Discrete, DiscreteCDF};
        let (lo, hi) = (3u64, 18u64);
        let mut observed = vec![0.0; (hi - lo + 1) as usize];
        for p in &n {
            observed[(p.len() as u64).clamp(lo, hi) as usize - lo as usize] += 1.0;
        }
        let expected: Vec<f64> = (lo..=hi)
            .map(|k| {
                let prob = if k == lo {
                    pois.cdf(lo)
                } else if k == hi {
                    pois.sf(hi - 1)
                } else {
                    pois.pmf(k)
                };
                prob * n.len() as f64
            })
            .collect();
        let stat: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e).powi(2) / e).sum();
        let dof = (observed.len() - 1) as f64;
        let p_value = 1.0 - ChiSquared::new(dof).unwrap().cdf(stat);
        assert!(p_value > 0.01, "chi2 {stat}, p {p_value}");
    }

    #[test]
    fn matern_intensity() {
        let lambda = 50.0;
        let r = 0.08;
        let cfg = ppp(lambda, Window::cube(2, 0.5).unwrap(), Some(r));
        let draws = 4_000;
        let n: Vec<f64> = (0..draws).map(|i| sample_matern(&cfg, SeedSpec::new(6, i)).unwrap().len() as f64).collect();
        let mean = n.iter().sum::<f64>() / draws as f64;
        let sd =
            (n.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws as f64 - 1.0)).sqrt() / (draws as f64).sqrt();
        let target = lambda * (-lambda * ln_ball_volume(2, r).exp()).exp();
        assert!((mean - target).abs() < 3.0 * sd, "{mean} vs {target} ± {sd}");
    }

    #[test]
    fn matern_separation() {
        let cfg = ppp(200.0, Window::cube(2, 0.5).unwrap(), Some(0.05));
        let p = sample_matern(&cfg, SeedSpec::new(7, 0)).unwrap();
        for (i, j) in (0..p.len()).tuple_combinations() {
            assert!(dist_sq(p.point(i), p.point(j)) > 0.05 * 0.05);
        }
        assert!(sample_matern(&ppp(1.0, Window::cube(1, 1.0).unwrap(), None), SeedSpec::new(0, 0)).is_err());
    }

    #[test]
    fn lattice_example() {
        let base = PointSet::from_rows(&[[0.0]]).unwrap();
        let t = tile_constellation(&base, 1.0, 0.0, &Window::cube(1, 2.5).unwrap()).unwrap();
        assert_eq!(t.coords(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let big = Window::cube(3, 1000.0).unwrap();
        assert!(tile_constellation(&base.subset(&[]), 1.0, 0.0, &big).is_err());
        let base3 = PointSet::from_rows(&[[0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(tile_constellation(&base3, 1.0, 0.0, &big), Err(Error::WindowTooLarge(_))));
        assert!(tile_constellation(&base, 1.0, 0.0, &Window::cube(1, 2.0).unwrap()).is_ok());
        let outside = PointSet::from_rows(&[[0.7]]).unwrap();
        assert!(tile_constellation(&outside, 1.0, 0.0, &Window::cube(1, 2.0).unwrap()).is_err());
    }

    fn random_base(rng: &mut impl Rng, size: usize, dim: usize, a: f64) -> PointSet {
        let coords = (0..size * dim).map(|_| rng.random_range(-a / 2.0 * 0.999..a / 2.0 * 0.999)).collect();
        PointSet::new(dim, coords).unwrap()
    }

    #[test]
    fn shifted_copies_are_separated() {
        let mut rng = SeedSpec::new(8, 0).rng();
        for _ in 0..20 {
            let dim = rng.random_range(1..4);
            let (a, inflation) = (1.5, rng.random_range(0.01..0.5));
            let base = random_base(&mut rng, 4, dim, a);
            let t = tile_constellation(&base, a, inflation, &Window::cube(dim, 2.5).unwrap()).unwrap();
            let period = a * (1.0 + inflation);
            let cell = |x: &[f64]| x.iter().map(|v| (v / period).round() as i64).collect::<Vec<_>>();
            for (i, j) in (0..t.len()).tuple_combinations() {
                if cell(t.point(i)) != cell(t.point(j)) {
                    assert!(dist_sq(t.point(i), t.point(j)).sqrt() >= a * inflation - 1e-12);
                }
            }
        }
    }

    #[test]
    fn aligned_window_density() {
        let mut rng = SeedSpec::new(9, 0).rng();
        for (dim, size, a, inflation, cells) in
            [(1, 3usize, 1.0, 0.2, 7usize), (2, 5, 1.0, 0.1, 4), (3, 2, 2.0, 0.3, 3)]
        {
            let base = random_base(&mut rng, size, dim, a);
            let period = a * (1.0 + inflation);
            let lo = -period / 2.0;
            let hi = lo + cells as f64 * period - 1e-9;
            let w = Window::new(vec![lo; dim], vec![hi; dim]).unwrap();
            let t = tile_constellation(&base, a, inflation, &w).unwrap();
            assert_eq!(t.len(), size * cells.pow(dim as u32));
            let nld = (t.len() as f64 / (cells as f64 * period).powi(dim as i32)).ln() / dim as f64;
            assert!((nld - tiling_nld(size, dim, a, inflation)).abs() < 1e-9);
        }
        let unit = tiling_nld(7, 4, 1.0, 0.25);
        assert!((unit - (rate_of_code(7.0, 4) - 1.25f64.ln())).abs() < 1e-15);
    }
}
