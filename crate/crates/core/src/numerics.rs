//! Root finding, bounded optimizers, special functions and the seeded
//! random stream contract shared by the other modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// Default absolute bracket width for [`bisect`].
pub const BISECT_TOL: f64 = 1e-12;
/// Default grid resolution per axis for [`minimize_2d`].
pub const GRID: usize = 256;
/// Coordinate-descent sweeps run by [`minimize_2d`] after the grid scan.
pub const SWEEPS: usize = 40;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!("interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// Identifies one random stream. The mapping to a generator is pure, and
/// different `stream_index` values under one master seed are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    pub fn with_stream(self, stream_index: u64) -> Self {
        Self { stream_index, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Bisection on a sign-changing bracket. Returns the midpoint of the final
/// bracket, whose width is at most `tol` (or one ulp when `tol` is below
/// the representable spacing).
pub fn bisect<F: Fn(f64) -> f64>(f: F, iv: Interval, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance {tol}")));
    }
    let (mut lo, mut hi) = (iv.lo, iv.hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !f_lo.is_finite() {
        return Err(Error::NonFinite(lo, f_lo));
    }
    if !f_hi.is_finite() {
        return Err(Error::NonFinite(hi, f_hi));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange);
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(Error::NonFinite(mid, fm));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// Golden-section search for a minimum of a unimodal function. The
/// endpoints are compared at the end, so monotone functions return the
/// better end.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, iv: Interval, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (iv.lo, iv.hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [iv.lo, iv.hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Golden-section search for a maximum; see [`golden_section_min`].
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, iv: Interval, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_min(|x| -f(x), iv, tol);
    (x, -v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Min2d {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Minimizes `f` on a box: a `grid`×`grid` scan, then up to [`SWEEPS`]
/// rounds of line searches near the incumbent. The result is never worse
/// than the best grid point.
pub fn minimize_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    bx: Interval,
    by: Interval,
    grid: usize,
    refine_tol: f64,
) -> Result<Min2d> {
    if grid < 16 {
        return Err(domain(format!("grid {grid} < 16")));
    }
    let eval = |x: f64, y: f64| -> Result<f64> {
        let v = f(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(x, y))
        }
    };
    let step = |iv: &Interval, i: usize| iv.lo + iv.width() * i as f64 / (grid - 1) as f64;

    let mut best = Min2d { x: bx.lo, y: by.lo, value: f64::INFINITY };
    for i in 0..grid {
        let x = step(&bx, i);
        for j in 0..grid {
            let y = step(&by, j);
            let v = eval(x, y)?;
            if v < best.value {
                best = Min2d { x, y, value: v };
            }
        }
    }

    // Refinement works in unit-box coordinates. Each sweep line-searches
    // along two directions, starting with the axes; the net displacement
    // of a sweep replaces the older direction (Powell's update).
    let tol = refine_tol.max(f64::EPSILON);
    let reach = 4.0 / (grid - 1) as f64;
    let failure = std::cell::RefCell::new(None);
    let probe = |u: f64, v: f64| {
        let (x, y) = (bx.clamp(bx.lo + u * bx.width()), by.clamp(by.lo + v * by.width()));
        match eval(x, y) {
            Ok(val) => val,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        }
    };
    let line_min = |p: (f64, f64, f64), d: (f64, f64)| -> (f64, f64, f64) {
        let (mut lo, mut hi) = (-reach, reach);
        for (c, dc) in [(p.0, d.0), (p.1, d.1)] {
            if dc.abs() > 1e-15 {
                let (a, b) = ((0.0 - c) / dc, (1.0 - c) / dc);
                lo = lo.max(a.min(b));
                hi = hi.min(a.max(b));
            }
        }
        if hi - lo <= tol {
            return p;
        }
        let (t, v) = golden_section_min(|t| probe(p.0 + t * d.0, p.1 + t * d.1), Interval { lo, hi }, tol);
        if v < p.2 {
            ((p.0 + t * d.0).clamp(0.0, 1.0), (p.1 + t * d.1).clamp(0.0, 1.0), v)
        } else {
            p
        }
    };
    let mut p = ((best.x - bx.lo) / bx.width(), (best.y - by.lo) / by.width(), best.value);
    let mut dirs = [(1.0, 0.0), (0.0, 1.0)];
    for _ in 0..SWEEPS {
        let start = p;
        for d in dirs {
            p = line_min(p, d);
        }
        let (du, dv) = (p.0 - start.0, p.1 - start.1);
        let len = du.hypot(dv);
        if len > 0.0 {
            let d = (du / len, dv / len);
            p = line_min(p, d);
            let cross = dirs[1].0 * d.1 - dirs[1].1 * d.0;
            dirs = if cross.abs() < 1e-3 { [(1.0, 0.0), (0.0, 1.0)] } else { [dirs[1], d] };
        }
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        if len <= tol && start.2 - p.2 <= f64::EPSILON * p.2.abs() {
            break;
        }
    }
    if p.2 < best.value {
        best = Min2d { x: bx.clamp(bx.lo + p.0 * bx.width()), y: by.clamp(by.lo + p.1 * by.width()), value: p.2 };
    }
    Ok(best)
}

/// Standard normal upper tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Upper,
    Lower,
}

/// Per-degree-of-freedom exponent of a chi-square tail at relative
/// deviation `delta` from its mean.
pub fn chi_square_tail_exponent(delta: f64, side: Tail) -> Result<f64> {
    match side {
        Tail::Upper if delta > 0.0 && delta.is_finite() => Ok(0.5 * (-delta + delta.ln_1p())),
        Tail::Lower if delta > 0.0 && delta < 1.0 => Ok(0.5 * (delta + (-delta).ln_1p())),
        _ => Err(domain(format!("chi-square deviation {delta} for {side:?} tail"))),
    }
}

/// Natural log of the volume of a radius-`r` ball in ℝⁿ.
pub fn ln_ball_volume(n: usize, r: f64) -> f64 {
    let half = n as f64 / 2.0;
    half * std::f64::consts::PI.ln() - ln_gamma(half + 1.0) + n as f64 * r.ln()
}

/// Relative comparison with an absolute floor.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}
