//! Self-checks across every module: closed forms against numeric oracles,
//! regime continuity, classical reductions, geometric lemmas and Monte
//! Carlo agreement. Each check reports its largest deviation and the
//! tolerance it was held to.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use crate::awgn_exponents::{
    capacity, e_r, exponent_lower_bound, expurg_oracle, gallager_exponent, r_crit, r_x, rce_oracle, ExponentPoint,
    Regime, SnrRate,
};
use crate::bounds::{
    cap_ld_bounded, cap_ld_unbounded, lb_capacity_bounded, lb_capacity_unbounded, ub_capacity_bounded,
    ub_capacity_unbounded, PackingParams,
};
use crate::dmc_exponents::{
    dmc_expurgated_ex, dmc_expurgated_exponent, dmc_random_coding_exponent, gallager_e0, mutual_information, Dmc,
    DEFAULT_RHO_MAX,
};
use crate::error::Result;
use crate::geometry::{
    chebyshev_ball, dist_sq, order_voronoi_member, sample_in_cone, solve_augmented, voronoi_cone, PointSet,
};
use crate::montecarlo::{
    estimate_error_prob, estimate_list_identity, estimate_shell_probability, sample_matern, sample_ppp,
    shell_probability_target, Codebook, PppConfig, Window,
};
use crate::numerics::{ln_ball_volume, q_function, SeedSpec};
use crate::poltyrev_exponents::{
    e_ex_unbdd, e_r_unbdd, exponent_lower_bound_unbdd, numeric_exe_oracle, poltyrev_exponent, AlphaL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Bounds,
    Exponents,
    Geometry,
    Montecarlo,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Bounds => "bounds",
            Suite::Exponents => "exponents",
            Suite::Geometry => "geometry",
            Suite::Montecarlo => "montecarlo",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Suite::All, Suite::Bounds, Suite::Exponents, Suite::Geometry, Suite::Montecarlo]
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown suite {s}"))
    }
}

/// Fast trims grids and trial counts; full runs the acceptance sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Fast,
    Full,
}

impl Budget {
    fn pick<T>(self, fast: T, full: T) -> T {
        match self {
            Budget::Fast => fast,
            Budget::Full => full,
        }
    }
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Budget::Fast),
            "full" => Ok(Budget::Full),
            _ => Err(format!("unknown budget {s}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// The closed forms under test. Swapping one for a perturbed version must
/// make its checks fail.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForms {
    pub lb_capacity_bounded: fn(&PackingParams) -> Result<f64>,
    pub ub_capacity_bounded: fn(&PackingParams) -> Result<f64>,
    pub lb_capacity_unbounded: fn(f64, u32) -> Result<f64>,
    pub ub_capacity_unbounded: fn(f64, u32) -> Result<f64>,
    pub exponent_lower_bound: fn(&SnrRate, u32) -> Result<ExponentPoint>,
    pub exponent_lower_bound_unbdd: fn(&AlphaL) -> ExponentPoint,
    pub e_ex_unbdd: fn(&AlphaL) -> f64,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            lb_capacity_bounded,
            ub_capacity_bounded,
            lb_capacity_unbounded,
            ub_capacity_unbounded,
            exponent_lower_bound,
            exponent_lower_bound_unbdd,
            e_ex_unbdd,
        }
    }
}

pub type CheckFn = fn(&ClosedForms, Budget) -> Result<f64>;

pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub tolerance: f64,
    pub run: CheckFn,
}

impl Check {
    pub fn evaluate(&self, forms: &ClosedForms, budget: Budget) -> CheckOutcome {
        let max_deviation = (self.run)(forms, budget).unwrap_or(f64::INFINITY);
        CheckOutcome {
            suite: self.suite,
            name: self.name,
            max_deviation,
            tolerance: self.tolerance,
            passed: max_deviation <= self.tolerance,
        }
    }
}

pub const CHECKS: &[Check] = &[
    Check { suite: Suite::Bounds, name: "plotkin_zero", tolerance: 1e-12, run: plotkin_zero },
    Check { suite: Suite::Bounds, name: "bound_ordering", tolerance: 1e-12, run: bound_ordering },
    Check { suite: Suite::Bounds, name: "list_size_convergence", tolerance: 3.0, run: list_size_convergence },
    Check { suite: Suite::Exponents, name: "gallager_reduction", tolerance: 1e-10, run: gallager_reduction },
    Check { suite: Suite::Exponents, name: "poltyrev_reduction", tolerance: 1e-10, run: poltyrev_reduction },
    Check { suite: Suite::Exponents, name: "oracle_constrained", tolerance: 1e-5, run: oracle_constrained },
    Check { suite: Suite::Exponents, name: "oracle_unconstrained", tolerance: 1e-5, run: oracle_unconstrained },
    Check { suite: Suite::Exponents, name: "continuity_constrained", tolerance: 1e-7, run: continuity_constrained },
    Check { suite: Suite::Exponents, name: "continuity_unconstrained", tolerance: 1e-8, run: continuity_unconstrained },
    Check { suite: Suite::Exponents, name: "straight_line_anchor", tolerance: 1e-10, run: straight_line_anchor },
    Check { suite: Suite::Exponents, name: "capacity_zeros", tolerance: 1e-10, run: capacity_zeros },
    Check { suite: Suite::Exponents, name: "dmc_sanity", tolerance: 1e-6, run: dmc_sanity },
    Check { suite: Suite::Geometry, name: "chebyshev_oracle", tolerance: 1e-9, run: chebyshev_oracle },
    Check { suite: Suite::Geometry, name: "obtuse_triangle", tolerance: 0.0, run: obtuse_triangle },
    Check { suite: Suite::Geometry, name: "cone_in_voronoi", tolerance: 0.0, run: cone_in_voronoi },
    Check { suite: Suite::Montecarlo, name: "two_point_q", tolerance: 3.0, run: two_point_q },
    Check { suite: Suite::Montecarlo, name: "list_identity_band", tolerance: 0.0, run: list_identity_band },
    Check { suite: Suite::Montecarlo, name: "list_identity_trend", tolerance: 0.0, run: list_identity_trend },
    Check { suite: Suite::Montecarlo, name: "ppp_chi_square", tolerance: 0.0, run: ppp_chi_square },
    Check { suite: Suite::Montecarlo, name: "matern_intensity", tolerance: 3.0, run: matern_intensity },
    Check { suite: Suite::Montecarlo, name: "shell_probability", tolerance: 3.0, run: shell_probability },
];

pub fn check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn run(suite: Suite, budget: Budget, forms: &ClosedForms) -> Vec<CheckOutcome> {
    CHECKS.iter().filter(|c| suite.includes(c.suite)).map(|c| c.evaluate(forms, budget)).collect()
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

fn linspace(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
}

fn plotkin_zero(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of((2..=10u32).map(|l| {
        let lf = l as f64;
        Ok((f.lb_capacity_bounded)(&PackingParams::new(1.0, (lf - 1.0) / lf, l)?)?.abs())
    }))
}

fn bound_ordering(f: &ClosedForms, b: Budget) -> Result<f64> {
    let steps = b.pick(50, 400);
    let bounded = max_of((2..=10u32).cartesian_product(1..=steps).map(|(l, k)| {
        let plotkin = PackingParams::new(1.0, 0.5, l)?.plotkin_noise();
        let p = PackingParams::new(1.0, plotkin * (k as f64 / steps as f64), l)?;
        Ok(((f.lb_capacity_bounded)(&p)? - (f.ub_capacity_bounded)(&p)?).max(0.0))
    }))?;
    let unbounded = max_of((2..=10u32).cartesian_product(0..=steps).map(|(l, k)| {
        let noise = 10f64.powf(-4.0 + 5.0 * k as f64 / steps as f64);
        Ok(((f.lb_capacity_unbounded)(noise, l)? - (f.ub_capacity_unbounded)(noise, l)?).max(0.0))
    }))?;
    Ok(bounded.max(unbounded))
}

/// Spread (max/min) of (C_LD − lb)·L/ln L over L ∈ [10, 1000].
fn list_size_convergence(f: &ClosedForms, b: Budget) -> Result<f64> {
    let ls: Vec<u32> = (10..=1000).step_by(b.pick(30, 1)).collect();
    let spread = |g: &dyn Fn(u32) -> Result<f64>| -> Result<f64> {
        let vals: Vec<f64> = ls.iter().map(|&l| g(l).map(|v| v * l as f64 / (l as f64).ln())).try_collect()?;
        let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
    };
    let bounded =
        spread(&|l| Ok(cap_ld_bounded(1.0, 0.25)? - (f.lb_capacity_bounded)(&PackingParams::new(1.0, 0.25, l)?)?))?;
    let unbounded = spread(&|l| Ok(cap_ld_unbounded(0.01)? - (f.lb_capacity_unbounded)(0.01, l)?))?;
    Ok(bounded.max(unbounded))
}

fn gallager_reduction(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of(linspace(0.0, 0.5 * LN_2, 400).map(|r| {
        let sr = SnrRate::new(1.0, r)?;
        Ok(((f.exponent_lower_bound)(&sr, 2)?.value - gallager_exponent(1.0, r)?).abs())
    }))
}

fn poltyrev_reduction(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of(linspace(1.0, 4.0, 400).map(|alpha| {
        Ok(((f.exponent_lower_bound_unbdd)(&AlphaL::new(alpha, 2)?).value - poltyrev_exponent(alpha)?).abs())
    }))
}

/// Rates strictly inside each regime, `per_regime` of them.
fn regime_rates(snr: f64, l: u32, per_regime: usize) -> [(Regime, Vec<f64>); 3] {
    let (rx, rc, cap) = (r_x(snr, l), r_crit(snr, l), capacity(snr));
    let inside =
        |lo: f64, hi: f64| (1..=per_regime).map(|k| lo + (hi - lo) * k as f64 / (per_regime + 1) as f64).collect();
    [
        (Regime::Expurgated, inside(0.0, rx)),
        (Regime::StraightLine, inside(rx, rc)),
        (Regime::RandomCoding, inside(rc, cap)),
    ]
}

fn oracle_constrained(f: &ClosedForms, b: Budget) -> Result<f64> {
    let snrs: &[f64] = b.pick(&[1.0, 4.0], &[0.5, 1.0, 2.0, 4.0]);
    let ls: &[u32] = b.pick(&[2, 3], &[2, 3, 5]);
    let per_regime = b.pick(4, 20);
    let mut worst = 0.0f64;
    for (&snr, &l) in snrs.iter().cartesian_product(ls) {
        for (regime, rates) in regime_rates(snr, l, per_regime) {
            for r in rates {
                let sr = SnrRate::new(snr, r)?;
                let closed = (f.exponent_lower_bound)(&sr, l)?.value;
                let oracle = match regime {
                    Regime::Expurgated => expurg_oracle(&sr, l)?,
                    _ => rce_oracle(&sr, l)?,
                };
                worst = worst.max((closed - oracle).abs() / oracle.abs().max(1e-300));
            }
        }
    }
    Ok(worst)
}

fn oracle_unconstrained(f: &ClosedForms, b: Budget) -> Result<f64> {
    let points = b.pick(6, 20);
    let mut worst = 0.0f64;
    for l in [2u32, 3, 5] {
        let lf = l as f64;
        for alpha in linspace((2.0 * lf).sqrt() + 0.1, 4.0 * lf.sqrt(), points) {
            let a = AlphaL::new(alpha, l)?;
            worst = worst.max(((f.e_ex_unbdd)(&a) - numeric_exe_oracle(&a)).abs());
        }
    }
    Ok(worst)
}

fn jump(g: impl Fn(f64) -> Result<f64>, at: f64, eps: f64) -> Result<f64> {
    Ok((g(at - eps)? - g(at + eps)?).abs())
}

fn continuity_constrained(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of([0.5, 1.0, 2.0, 4.0].into_iter().cartesian_product(2..=6u32).flat_map(|(snr, l)| {
        let g = move |r: f64| Ok((f.exponent_lower_bound)(&SnrRate::new(snr, r)?, l)?.value);
        [jump(g, r_crit(snr, l), 1e-10), jump(g, r_x(snr, l), 1e-10)]
    }))
}

fn continuity_unconstrained(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of((2..=10u32).flat_map(|l| {
        let g = move |alpha: f64| Ok((f.exponent_lower_bound_unbdd)(&AlphaL::new(alpha, l)?).value);
        let lf = l as f64;
        [jump(g, lf.sqrt(), 1e-11), jump(g, (2.0 * lf).sqrt(), 1e-11)]
    }))
}

fn straight_line_anchor(f: &ClosedForms, _: Budget) -> Result<f64> {
    max_of((2..=10u32).map(|l| {
        let lf = l as f64;
        let alpha = lf.powf(lf / (lf - 1.0)).sqrt();
        Ok(((f.exponent_lower_bound_unbdd)(&AlphaL::new(alpha, l)?).value - (lf - 1.0) / 2.0).abs())
    }))
}

fn capacity_zeros(_: &ClosedForms, _: Budget) -> Result<f64> {
    let constrained =
        max_of([0.25, 0.5, 1.0, 2.0, 4.0, 8.0].map(|snr| Ok(e_r(&SnrRate::new(snr, capacity(snr))?)?.abs())))?;
    // the unconstrained exponent must vanish exactly at α = 1
    let unconstrained =
        max_of((2..=10u32).map(|l| Ok(if e_r_unbdd(&AlphaL::new(1.0, l)?) == 0.0 { 0.0 } else { f64::INFINITY })))?;
    Ok(constrained.max(unconstrained))
}

fn dmc_sanity(_: &ClosedForms, _: Budget) -> Result<f64> {
    let ternary = Dmc::new(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.8, 0.1], vec![0.25, 0.25, 0.5]], vec![0.5, 0.3, 0.2])?;
    let bsc = Dmc::bsc(0.1)?;
    let mut devs = vec![
        gallager_e0(&bsc, 0.0)?.abs(),
        gallager_e0(&ternary, 0.0)?.abs(),
        gallager_e0(&Dmc::bsc(0.5)?, 1.0)?.abs(),
        (gallager_e0(&Dmc::bsc(0.0)?, 1.0)? - LN_2).abs(),
        dmc_expurgated_ex(&Dmc::bsc(0.5)?, 1.0, 2)?.abs(),
        (dmc_expurgated_ex(&Dmc::bsc(0.0)?, 1.0, 2)? - LN_2).abs(),
    ];
    for d in [&bsc, &ternary] {
        let i = mutual_information(d);
        for l in [2, 3, 4] {
            devs.push(dmc_random_coding_exponent(d, i, l)?);
            devs.push(dmc_expurgated_exponent(d, i, l, DEFAULT_RHO_MAX)?);
        }
    }
    Ok(devs.into_iter().fold(0.0, f64::max))
}

fn gaussian_rows<R: Rng>(rng: &mut R, count: usize, dim: usize) -> PointSet {
    let coords = (0..count * dim).map(|_| rng.sample(StandardNormal)).collect();
    PointSet::new(dim, coords).expect("non-empty dimension")
}

/// Exhaustive smallest enclosing ball: the circumsphere (in the affine
/// hull) of every subset of at most n+1 points, keeping the smallest one
/// that covers the set.
pub fn brute_force_radius_sq(pts: &PointSet) -> f64 {
    let m = pts.len();
    let mut best = f64::INFINITY;
    for size in 1..=m.min(pts.dim() + 1) {
        for subset in (0..m).combinations(size) {
            let p0 = pts.point(subset[0]);
            let edges: Vec<Vec<f64>> =
                subset[1..].iter().map(|&i| pts.point(i).iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
            let k = edges.len();
            let system: Vec<Vec<f64>> = (0..k)
                .map(|i| {
                    let mut row: Vec<f64> =
                        (0..k).map(|j| edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum()).collect();
                    row.push(0.5 * edges[i].iter().map(|a| a * a).sum::<f64>());
                    row
                })
                .collect();
            let coef = solve_augmented(system);
            let center: Vec<f64> =
                (0..pts.dim()).map(|r| p0[r] + edges.iter().zip(&coef).map(|(e, c)| c * e[r]).sum::<f64>()).collect();
            let r2 = subset.iter().map(|&i| dist_sq(pts.point(i), &center)).fold(0.0, f64::max);
            if pts.iter().all(|p| dist_sq(p, &center) <= r2 * (1.0 + 1e-9) + 1e-12) {
                best = best.min(r2);
            }
        }
    }
    best
}

fn chebyshev_oracle(_: &ClosedForms, b: Budget) -> Result<f64> {
    let mut rng = SeedSpec::new(901, 0).rng();
    let mut worst = 0.0f64;
    for _ in 0..b.pick(200, 1000) {
        let (count, dim) = (rng.random_range(1..=6), rng.random_range(1..=8));
        let pts = gaussian_rows(&mut rng, count, dim);
        worst = worst.max((chebyshev_ball(&pts)?.radius_sq - brute_force_radius_sq(&pts)).abs());
    }
    Ok(worst)
}

fn obtuse_triangle(_: &ClosedForms, _: Budget) -> Result<f64> {
    let cases: [([[f64; 2]; 3], f64); 3] = [
        ([[0.0, 0.0], [4.0, 0.0], [1.0, 1.0]], 4.0),
        ([[-3.0, 0.0], [3.0, 0.0], [0.5, 1.0]], 9.0),
        ([[0.0, 0.0], [1.0, 0.25], [8.0, 0.0]], 16.0),
    ];
    max_of(cases.iter().map(|(tri, r2)| Ok((chebyshev_ball(&PointSet::from_rows(tri)?)?.radius_sq - r2).abs())))
}

fn cone_in_voronoi(_: &ClosedForms, b: Budget) -> Result<f64> {
    let mut rng = SeedSpec::new(902, 0).rng();
    let mut violations = 0u64;
    for _ in 0..b.pick(20, 100) {
        let l = rng.random_range(3..=6);
        let dim = rng.random_range(l - 1..=l + 2);
        let list = gaussian_rows(&mut rng, l, dim);
        let ball = chebyshev_ball(&list)?;
        let vertex = ball.support[rng.random_range(0..ball.support.len())];
        let cone = voronoi_cone(&list, vertex)?;
        let rest: Vec<usize> = (0..l).filter(|&i| i != vertex).collect();
        let reach = 10.0 * ball.radius_sq.sqrt();
        for _ in 0..b.pick(1_000, 10_000) {
            violations += !order_voronoi_member(&sample_in_cone(&mut rng, &cone, reach), &list, &rest) as u64;
        }
    }
    Ok(violations as f64)
}

/// Two points at distance `d` in ℝⁿ, as a codebook.
pub fn two_point_code(d: f64, dim: usize) -> Result<Codebook> {
    let mut coords = vec![0.0; 2 * dim];
    coords[dim] = d;
    Codebook::new(PointSet::new(dim, coords)?, None)
}

fn two_point_q(_: &ClosedForms, _: Budget) -> Result<f64> {
    max_of([(2.0, 1.0, 11), (3.0, 1.0, 12), (2.0, 0.7, 13)].map(|(d, sigma, seed)| {
        let est = estimate_error_prob(&two_point_code(d, 4)?, sigma, 1, 100_000, seed)?;
        Ok((est.p_hat - q_function(d / (2.0 * sigma))).abs() / est.stderr)
    }))
}

/// Equilateral triangle with circumradius √n in the first two coordinates
/// of ℝⁿ, and the noise level giving rad²/(2σ²) = `snr_ratio`.
pub fn embedded_triangle(dim: usize, snr_ratio: f64) -> Result<(PointSet, f64)> {
    let radius = (dim as f64).sqrt();
    let mut coords = vec![0.0; 3 * dim];
    for k in 0..3 {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        coords[k * dim] = radius * angle.cos();
        coords[k * dim + 1] = radius * angle.sin();
    }
    Ok((PointSet::new(dim, coords)?, radius / (2.0 * snr_ratio).sqrt()))
}

pub const IDENTITY_DIMS: [usize; 3] = [10, 20, 40];
pub const IDENTITY_BAND: (f64, f64) = (0.8, 1.3);

/// (ratio, standard error of the ratio) at each embedding dimension.
pub fn identity_ratios(trials: u64) -> Result<Vec<(f64, f64)>> {
    IDENTITY_DIMS
        .iter()
        .map(|&n| {
            let (list, sigma) = embedded_triangle(n, 5.0)?;
            let out = estimate_list_identity(&list, sigma, trials, 903 + n as u64)?;
            Ok((out.ratio, out.estimate.stderr / out.estimate.p_hat / 5.0))
        })
        .collect()
}

fn list_identity_band(_: &ClosedForms, b: Budget) -> Result<f64> {
    let (lo, hi) = IDENTITY_BAND;
    Ok(identity_ratios(b.pick(400_000, 1_000_000))?
        .iter()
        .map(|&(r, _)| (lo - r).max(r - hi).max(0.0))
        .fold(0.0, f64::max))
}

/// How far |ratio − 1| grows between consecutive dimensions beyond the
/// two-standard-error band.
fn list_identity_trend(_: &ClosedForms, b: Budget) -> Result<f64> {
    Ok(identity_ratios(b.pick(400_000, 1_000_000))?
        .windows(2)
        .map(|w| ((w[1].0 - 1.0).abs() - (w[0].0 - 1.0).abs() - 2.0 * (w[0].1 + w[1].1)).max(0.0))
        .fold(0.0, f64::max))
}

/// Chi-square statistic in excess of the 1% critical value, for PPP counts
/// against Poisson(10).
fn ppp_chi_square(_: &ClosedForms, b: Budget) -> Result<f64> {
    let cfg = PppConfig::new(10.0, Window::cube(2, 0.5)?, None)?;
    let draws = b.pick(2_000u64, 10_000);
    let pois = Poisson::new(10.0).expect("positive mean");
    let (lo, hi) = (3u64, 18u64);
    let mut observed = vec![0.0; (hi - lo + 1) as usize];
    for i in 0..draws {
        let k = sample_ppp(&cfg, SeedSpec::new(904, i))?.len() as u64;
        observed[(k.clamp(lo, hi) - lo) as usize] += 1.0;
    }
    let stat: f64 = (lo..=hi)
        .zip(&observed)
        .map(|(k, o)| {
            let prob = if k == lo {
                pois.cdf(lo)
            } else if k == hi {
                pois.sf(hi - 1)
            } else {
                pois.pmf(k)
            };
            let e = prob * draws as f64;
            (o - e).powi(2) / e
        })
        .sum();
    let critical = ChiSquared::new((observed.len() - 1) as f64).expect("positive dof").inverse_cdf(0.99);
    Ok((stat - critical).max(0.0))
}

fn matern_intensity(_: &ClosedForms, b: Budget) -> Result<f64> {
    let (lambda, r) = (50.0, 0.08);
    let cfg = PppConfig::new(lambda, Window::cube(2, 0.5)?, Some(r))?;
    let draws = b.pick(1_000u64, 4_000);
    let counts: Vec<f64> =
        (0..draws).map(|i| Ok(sample_matern(&cfg, SeedSpec::new(905, i))?.len() as f64)).try_collect()?;
    let m = draws as f64;
    let mean = counts.iter().sum::<f64>() / m;
    let stderr = (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt();
    let target = lambda * (-lambda * ln_ball_volume(2, r).exp()).exp();
    Ok((mean - target).abs() / stderr)
}

fn shell_probability(_: &ClosedForms, b: Budget) -> Result<f64> {
    let est = estimate_shell_probability(400, 1.0, 1.0, b.pick(100_000, 1_000_000), 906)?;
    Ok((est.p_hat - shell_probability_target(400, 1.0, 1.0)).abs() / est.stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted_exponent(sr: &SnrRate, l: u32) -> Result<ExponentPoint> {
        let p = exponent_lower_bound(sr, l)?;
        Ok(ExponentPoint { value: p.value + 1e-3, ..p })
    }

    fn shifted_ex_unbdd(a: &AlphaL) -> f64 {
        e_ex_unbdd(a) + 1e-3
    }

    fn shifted_lb(p: &PackingParams) -> Result<f64> {
        Ok(lb_capacity_bounded(p)? + 1e-3)
    }

    fn outcome(name: &str, forms: &ClosedForms) -> CheckOutcome {
        check(name).unwrap().evaluate(forms, Budget::Fast)
    }

    #[test]
    fn closed_form_checks_pass_on_fast_budget() {
        let forms = ClosedForms::default();
        for out in
            run(Suite::Bounds, Budget::Fast, &forms).into_iter().chain(run(Suite::Exponents, Budget::Fast, &forms))
        {
            assert!(out.passed, "{out:?}");
        }
    }

    #[test]
    fn geometry_checks_pass_on_fast_budget() {
        for out in run(Suite::Geometry, Budget::Fast, &ClosedForms::default()) {
            assert!(out.passed, "{out:?}");
        }
    }

    #[test]
    fn perturbed_closed_forms_are_caught() {
        let base = ClosedForms::default();
        let forms = ClosedForms { exponent_lower_bound: shifted_exponent, ..base };
        assert!(!outcome("gallager_reduction", &forms).passed);
        assert!(!outcome("oracle_constrained", &forms).passed);
        let forms = ClosedForms { e_ex_unbdd: shifted_ex_unbdd, ..base };
        assert!(!outcome("oracle_unconstrained", &forms).passed);
        let forms = ClosedForms { lb_capacity_bounded: shifted_lb, ..base };
        assert!(!outcome("plotkin_zero", &forms).passed);
        assert!(!run(Suite::All, Budget::Fast, &forms).iter().all(|o| o.passed));
    }

    #[test]
    fn suite_selection() {
        assert_eq!(run(Suite::Bounds, Budget::Fast, &ClosedForms::default()).len(), 3);
        assert_eq!("montecarlo".parse::<Suite>(), Ok(Suite::Montecarlo));
        assert!("other".parse::<Suite>().is_err());
        assert_eq!("full".parse::<Budget>(), Ok(Budget::Full));
        assert!(CHECKS.iter().map(|c| c.name).all_unique());
    }

    #[test]
    fn brute_force_examples() {
        let tri = PointSet::from_rows(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        assert!((brute_force_radius_sq(&tri) - 2.0).abs() < 1e-12);
        let dup = PointSet::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(brute_force_radius_sq(&dup), 0.0);
    }

    #[test]
    fn triangle_embedding() {
        let (list, sigma) = embedded_triangle(20, 5.0).unwrap();
        let r2 = chebyshev_ball(&list).unwrap().radius_sq;
        assert!((r2 - 20.0).abs() < 1e-12);
        assert!((r2 / (2.0 * sigma * sigma) - 5.0).abs() < 1e-12);
    }
}
