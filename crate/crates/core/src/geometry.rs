//! Smallest enclosing balls, list-decoding radii, packing predicates and
//! higher-order Voronoi membership.

use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest number of subsets [`list_radius_sq`] will enumerate.
pub const SUBSET_GUARD: u128 = 10_000_000;

/// Finite set of points of a common dimension, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::DegenerateInput(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != dim) {
            return Err(Error::DegenerateInput("rows of unequal length".into()));
        }
        Self::new(dim, rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        let coords = indices.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        PointSet { dim: self.dim, coords }
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DegenerateInput(format!("point of dimension {} pushed into {}", p.len(), self.dim)));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius_sq: f64,
    /// Indices of the input points that pin the ball.
    pub support: Vec<usize>,
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum enclosing ball. Points are first expressed in an orthonormal
/// basis of their affine hull, so the move-to-front recursion runs in at
/// most |pts|−1 dimensions whatever the ambient dimension.
pub fn chebyshev_ball(pts: &PointSet) -> Result<EnclosingBall> {
    if pts.is_empty() {
        return Err(Error::DegenerateInput("empty point set".into()));
    }
    if pts.coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinate".into()));
    }

    let mut distinct: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        if !distinct.iter().any(|&j| pts.point(j) == pts.point(i)) {
            distinct.push(i);
        }
    }

    let origin = pts.point(distinct[0]).to_vec();
    let diffs: Vec<Vec<f64>> =
        distinct.iter().map(|&i| pts.point(i).iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
    let scale = diffs.iter().map(|d| dot(d, d).sqrt()).fold(0.0, f64::max);
    let basis = orthonormal_basis(&diffs, scale * 1e-10);
    let local: Vec<Vec<f64>> = diffs.iter().map(|d| basis.iter().map(|b| dot(b, d)).collect()).collect();

    let mut solver = Mtf::new(local, basis.len());
    let (center_local, support_local) = solver.solve();

    let mut center = origin;
    for (b, c) in basis.iter().zip(&center_local) {
        for (x, bk) in center.iter_mut().zip(b) {
            *x += c * bk;
        }
    }
    let radius_sq = pts.iter().map(|p| dist_sq(p, &center)).fold(0.0, f64::max);
    let mut support: Vec<usize> = support_local.into_iter().map(|k| distinct[k]).collect();
    support.sort_unstable();
    Ok(EnclosingBall { center, radius_sq, support })
}

fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &r);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dot(&r, &r).sqrt();
        if norm > tol {
            r.iter_mut().for_each(|x| *x /= norm);
            basis.push(r);
        }
    }
    basis
}

struct Mtf {
    points: Vec<Vec<f64>>,
    order: Vec<usize>,
    dim: usize,
    center: Vec<f64>,
    radius_sq: f64,
    support: Vec<usize>,
}

impl Mtf {
    fn new(points: Vec<Vec<f64>>, dim: usize) -> Self {
        let order = (0..points.len()).collect();
        Self { points, order, dim, center: vec![0.0; dim], radius_sq: -1.0, support: Vec::new() }
    }

    fn solve(&mut self) -> (Vec<f64>, Vec<usize>) {
        let mut boundary = Vec::with_capacity(self.dim + 1);
        self.recurse(self.points.len(), &mut boundary);
        (self.center.clone(), self.support.clone())
    }

    fn contains(&self, p: &[f64]) -> bool {
        let d = dist_sq(p, &self.center);
        d <= self.radius_sq + 1e-12 * self.radius_sq.max(0.0)
    }

    fn recurse(&mut self, end: usize, boundary: &mut Vec<usize>) {
        self.set_circumball(boundary);
        if boundary.len() == self.dim + 1 {
            return;
        }
        let mut i = 0;
        while i < end {
            let idx = self.order[i];
            if !self.contains(&self.points[idx]) {
                boundary.push(idx);
                self.recurse(i, boundary);
                boundary.pop();
                self.order.remove(i);
                self.order.insert(0, idx);
            }
            i += 1;
        }
    }

    // Smallest ball with every boundary point on its sphere: the
    // circumcentre within the affine hull of the boundary.
    fn set_circumball(&mut self, boundary: &[usize]) {
        self.support = boundary.to_vec();
        let Some((&first, rest)) = boundary.split_first() else {
            self.center = vec![0.0; self.dim];
            self.radius_sq = -1.0;
            return;
        };
        let q0 = &self.points[first];
        let edges: Vec<Vec<f64>> =
            rest.iter().map(|&j| self.points[j].iter().zip(q0).map(|(a, b)| a - b).collect()).collect();
        let k = edges.len();
        let mut gram = vec![vec![0.0; k + 1]; k];
        for a in 0..k {
            for b in 0..k {
                gram[a][b] = dot(&edges[a], &edges[b]);
            }
            gram[a][k] = 0.5 * gram[a][a];
        }
        let lambda = solve_augmented(gram);
        let mut center = q0.clone();
        for (l, e) in lambda.iter().zip(&edges) {
            center.iter_mut().zip(e).for_each(|(c, x)| *c += l * x);
        }
        self.radius_sq = boundary.iter().map(|&j| dist_sq(&self.points[j], &center)).fold(0.0, f64::max);
        self.center = center;
    }
}

// Gaussian elimination with partial pivoting on an augmented k×(k+1)
// system. Directions with a vanishing pivot get a zero coefficient.
pub(crate) fn solve_augmented(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let k = m.len();
    let scale = (0..k).map(|i| m[i][i].abs()).fold(0.0, f64::max);
    let mut pivot_of = vec![None; k];
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            break;
        };
        if m[p][col].abs() <= 1e-12 * scale {
            continue;
        }
        m.swap(row, p);
        let pivot = m[row].clone();
        for (r, target) in m.iter_mut().enumerate().take(k) {
            let f = target[col] / pivot[col];
            if r != row && f != 0.0 {
                target.iter_mut().zip(&pivot).skip(col).for_each(|(t, v)| *t -= f * v);
            }
        }
        pivot_of[col] = Some(row);
        row += 1;
    }
    (0..k).map(|col| pivot_of[col].map_or(0.0, |r| m[r][k] / m[r][col])).collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Squared (L−1)-list-decoding radius: the smallest Chebyshev radius
/// over all L-subsets of the code.
pub fn list_radius_sq(code: &PointSet, multiplicity: usize) -> Result<f64> {
    if multiplicity < 2 || code.len() < multiplicity {
        return Err(domain(format!("{} points with multiplicity {multiplicity}", code.len())));
    }
    let count = binomial(code.len(), multiplicity);
    if count > SUBSET_GUARD {
        return Err(Error::TooLarge(count));
    }
    let mut best = f64::INFINITY;
    for subset in (0..code.len()).combinations(multiplicity) {
        best = best.min(chebyshev_ball(&code.subset(&subset))?.radius_sq);
    }
    Ok(best)
}

/// True when no ball of radius √(nN) holds `multiplicity` code points.
pub fn is_multiple_packing(code: &PointSet, noise: f64, multiplicity: usize) -> Result<bool> {
    if !(noise > 0.0) {
        return Err(domain(format!("noise power {noise}")));
    }
    Ok(list_radius_sq(code, multiplicity)? > code.dim() as f64 * noise)
}

/// Whether `y` lies in the order-|subset| Voronoi region of `subset`:
/// every point outside the subset is strictly farther than every point
/// inside. Points on a bisector belong to no region.
pub fn order_voronoi_member(y: &[f64], code: &PointSet, subset: &[usize]) -> bool {
    let inner = subset.iter().map(|&i| dist_sq(y, code.point(i))).fold(f64::NEG_INFINITY, f64::max);
    (0..code.len()).filter(|i| !subset.contains(i)).all(|i| dist_sq(y, code.point(i)) > inner)
}

/// Membership in the closed circular cone with the given apex, unit axis
/// and half-angle. The apex itself is a member.
pub fn cone_member(y: &[f64], apex: &[f64], axis: &[f64], half_angle: f64) -> bool {
    let v: Vec<f64> = y.iter().zip(apex).map(|(a, b)| a - b).collect();
    dot(&v, axis) >= dot(&v, &v).sqrt() * half_angle.cos()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub apex: Vec<f64>,
    pub axis: Vec<f64>,
    pub half_angle: f64,
}

/// The cone, opening away from a support point of the Chebyshev ball,
/// inside which that point is farthest from every received word. Its
/// half-angle has sine (minimum pairwise distance / 2) / radius.
pub fn voronoi_cone(list: &PointSet, vertex: usize) -> Result<Cone> {
    let ball = chebyshev_ball(list)?;
    if !ball.support.contains(&vertex) {
        return Err(domain(format!("point {vertex} is not on the enclosing sphere")));
    }
    let radius = ball.radius_sq.sqrt();
    let min_dist = (0..list.len())
        .tuple_combinations()
        .map(|(a, b)| dist_sq(list.point(a), list.point(b)))
        .fold(f64::INFINITY, f64::min)
        .sqrt();
    let axis: Vec<f64> = ball.center.iter().zip(list.point(vertex)).map(|(c, x)| (c - x) / radius).collect();
    let half_angle = (0.5 * min_dist / radius).min(1.0).asin();
    Ok(Cone { apex: ball.center, axis, half_angle })
}

/// A random point of the cone within distance `reach` of its apex, drawn
/// strictly inside the half-angle.
pub fn sample_in_cone<R: Rng>(rng: &mut R, cone: &Cone, reach: f64) -> Vec<f64> {
    let n = cone.axis.len();
    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let along = dot(&g, &cone.axis);
    let mut perp: Vec<f64> = g.iter().zip(&cone.axis).map(|(x, a)| x - along * a).collect();
    let norm = dot(&perp, &perp).sqrt();
    perp.iter_mut().for_each(|x| *x /= norm);
    let angle = rng.random_range(0.0..cone.half_angle);
    let t = rng.random_range(1e-6..reach);
    (0..n).map(|i| cone.apex[i] + t * (angle.cos() * cone.axis[i] + angle.sin() * perp[i])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use crate::numerics::SeedSpec;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    // Brute force: circumsphere of every subset of size ≤ dim+1 (solved by
    // SVD least squares), keep the smallest one that covers all points.
    fn brute_force_ball(pts: &PointSet) -> f64 {
        let m = pts.len();
        let mut best = f64::INFINITY;
        for size in 1..=m.min(pts.dim() + 1) {
            for subset in (0..m).combinations(size) {
                let p0 = DVector::from_column_slice(pts.point(subset[0]));
                let k = size - 1;
                let edges = DMatrix::from_fn(pts.dim(), k, |r, c| pts.point(subset[c + 1])[r] - p0[r]);
                let center = if k == 0 {
                    p0.clone()
                } else {
                    let gram = edges.transpose() * &edges;
                    let rhs = DVector::from_fn(k, |i, _| 0.5 * gram[(i, i)]);
                    let Ok(lambda) = gram.svd(true, true).solve(&rhs, 1e-12) else { continue };
                    &p0 + &edges * lambda
                };
                let r2 = subset
                    .iter()
                    .map(|&i| (DVector::from_column_slice(pts.point(i)) - &center).norm_squared())
                    .fold(0.0, f64::max);
                let covers = pts
                    .iter()
                    .all(|p| (DVector::from_column_slice(p) - &center).norm_squared() <= r2 * (1.0 + 1e-9) + 1e-12);
                if covers {
                    best = best.min(r2);
                }
            }
        }
        best
    }

    // grid search over candidate centres in the plane, zooming in on the
    // best cell a few times
    fn grid_radius_sq(pts: &PointSet) -> f64 {
        let (mut cx, mut cy, mut half) = (0.5, 0.5, 1.0);
        let mut best = f64::INFINITY;
        let n = 400;
        for _ in 0..6 {
            let (ox, oy) = (cx, cy);
            for i in 0..=n {
                for j in 0..=n {
                    let c =
                        [ox - half + 2.0 * half * i as f64 / n as f64, oy - half + 2.0 * half * j as f64 / n as f64];
                    let r = pts.iter().map(|p| dist_sq(p, &c)).fold(0.0, f64::max);
                    if r < best {
                        (best, cx, cy) = (r, c[0], c[1]);
                    }
                }
            }
            half *= 10.0 / n as f64;
        }
        best
    }

    #[test]
    fn ball_examples() {
        let b = chebyshev_ball(&set(&[&[0.0, 0.0], &[2.0, 0.0]])).unwrap();
        assert_eq!(b.center, vec![1.0, 0.0]);
        assert_eq!(b.radius_sq, 1.0);

        let obtuse = set(&[&[0.0, 0.0], &[3.0, 0.0], &[1.0, 0.1]]);
        let b = chebyshev_ball(&obtuse).unwrap();
        assert!((b.radius_sq - 2.25).abs() < 1e-12);
        assert_eq!(b.support, vec![0, 1]);

        let eq = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 3f64.sqrt() / 2.0]]);
        let b = chebyshev_ball(&eq).unwrap();
        assert!((b.radius_sq - 1.0 / 3.0).abs() < 1e-12);
        assert!((grid_radius_sq(&eq) - 1.0 / 3.0).abs() < 1e-5);
        assert_eq!(b.support.len(), 3);
    }

    #[test]
    fn ball_rejects_bad_input() {
        assert!(chebyshev_ball(&set(&[&[0.0, f64::NAN]])).is_err());
        assert!(chebyshev_ball(&PointSet::new(2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn ball_handles_duplicates_and_singletons() {
        let b = chebyshev_ball(&set(&[&[1.0, 2.0, 3.0]])).unwrap();
        assert_eq!((b.radius_sq, b.support.clone()), (0.0, vec![0]));
        let b = chebyshev_ball(&set(&[&[0.0, 0.0], &[0.0, 0.0], &[2.0, 0.0], &[2.0, 0.0]])).unwrap();
        assert_eq!(b.radius_sq, 1.0);
        assert_eq!(b.support, vec![0, 2]);
    }

    #[test]
    fn ball_in_high_ambient_dimension() {
        let mut rng = SeedSpec::new(11, 0).rng();
        let n = 50;
        let rows: Vec<Vec<f64>> = (0..4).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let b = chebyshev_ball(&pts).unwrap();
        assert!((b.radius_sq - brute_force_ball(&pts)).abs() < 1e-9 * b.radius_sq.max(1.0));
    }

    #[test]
    fn ball_matches_brute_force() {
        let mut rng = SeedSpec::new(5, 0).rng();
        for _ in 0..300 {
            let n = rng.random_range(1..=8);
            let m = rng.random_range(1..=6);
            let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()).collect();
            let pts = PointSet::from_rows(&rows).unwrap();
            let b = chebyshev_ball(&pts).unwrap();
            let oracle = brute_force_ball(&pts);
            assert!((b.radius_sq - oracle).abs() <= 1e-9, "{rows:?}: {} vs {oracle}", b.radius_sq);
            assert!(b.support.len() <= m.min(n + 1));
            for &s in &b.support {
                assert!((dist_sq(pts.point(s), &b.center).sqrt() - b.radius_sq.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn list_radius_examples() {
        let line = set(&[&[0.0], &[1.0], &[2.0]]);
        assert!((list_radius_sq(&line, 2).unwrap() - 0.25).abs() < 1e-15);
        let square = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!((list_radius_sq(&square, 4).unwrap() - 0.5).abs() < 1e-12);
        assert!((list_radius_sq(&square, 3).unwrap() - 0.5).abs() < 1e-12);
        assert!((grid_radius_sq(&square.subset(&[0, 1, 2])) - 0.5).abs() < 1e-5);
        assert!(list_radius_sq(&square, 5).is_err());
    }

    #[test]
    fn list_radius_guard() {
        let pts = PointSet::new(1, (0..200).map(f64::from).collect()).unwrap();
        assert!(matches!(list_radius_sq(&pts, 5), Err(Error::TooLarge(_))));
        assert_eq!(binomial(200, 5), 2_535_650_040);
        assert_eq!(binomial(6, 0), 1);
    }

    #[test]
    fn packing_examples() {
        let pair = set(&[&[0.0], &[2.0]]);
        assert!(is_multiple_packing(&pair, 0.5, 2).unwrap());
        assert!(!is_multiple_packing(&pair, 1.0, 2).unwrap());
        let square = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(is_multiple_packing(&square, 0.24, 3).unwrap());
        assert!(is_multiple_packing(&pair, 0.0, 2).is_err());
    }

    #[test]
    fn voronoi_examples() {
        let code = set(&[&[0.0], &[2.0]]);
        assert!(order_voronoi_member(&[-1.0], &code, &[0]));
        assert!(!order_voronoi_member(&[1.0], &code, &[0]));

        let h = 3f64.sqrt() / 2.0;
        let tri = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]);
        let centroid = [0.5, h / 3.0];
        // far from x0 = tri[0] on the ray through the centroid
        let y = [centroid[0] + 5.0 * (centroid[0] - 0.0), centroid[1] + 5.0 * (centroid[1] - 0.0)];
        assert!(order_voronoi_member(&y, &tri, &[1, 2]));
        assert!(!order_voronoi_member(&y, &tri, &[0, 1]));
    }

    #[test]
    fn voronoi_member_is_k_nearest() {
        let mut rng = SeedSpec::new(9, 0).rng();
        for _ in 0..200 {
            let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.sample(StandardNormal)).collect()).collect();
            let code = PointSet::from_rows(&rows).unwrap();
            let y: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
            let mut by_dist: Vec<usize> = (0..6).collect();
            by_dist.sort_by(|&a, &b| dist_sq(&y, code.point(a)).total_cmp(&dist_sq(&y, code.point(b))));
            for k in 1..6 {
                let members: Vec<Vec<usize>> =
                    (0..6).combinations(k).filter(|s| order_voronoi_member(&y, &code, s)).collect();
                let mut nearest = by_dist[..k].to_vec();
                nearest.sort_unstable();
                assert_eq!(members, vec![nearest]);
            }
        }
    }

    #[test]
    fn cone_examples() {
        let apex = [1.0, 1.0];
        let axis = [1.0, 0.0];
        assert!(cone_member(&apex, &apex, &axis, 0.3));
        assert!(cone_member(&[2.0, 1.0], &apex, &axis, 0.3));
        assert!(!cone_member(&[1.0, 2.0], &apex, &axis, std::f64::consts::FRAC_PI_4));
    }

    #[test]
    fn cone_lies_in_voronoi_region() {
        let mut rng = SeedSpec::new(21, 0).rng();
        for l in 3..=6 {
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> =
                    (0..l).map(|_| (0..l - 1).map(|_| rng.sample(StandardNormal)).collect()).collect();
                let list = PointSet::from_rows(&rows).unwrap();
                let ball = chebyshev_ball(&list).unwrap();
                let x0 = ball.support[0];
                let cone = voronoi_cone(&list, x0).unwrap();
                let rest: Vec<usize> = (0..l).filter(|&i| i != x0).collect();
                for _ in 0..500 {
                    let y = sample_in_cone(&mut rng, &cone, 10.0 * ball.radius_sq.sqrt());
                    assert!(cone_member(&y, &cone.apex, &cone.axis, cone.half_angle + 1e-12));
                    assert!(order_voronoi_member(&y, &list, &rest));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn radius_grows_with_points(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..7),
                                    extra in prop::collection::vec(-5.0f64..5.0, 3)) {
            let pts = PointSet::from_rows(&rows).unwrap();
            let mut more = pts.clone();
            more.push(&extra).unwrap();
            let r = chebyshev_ball(&pts).unwrap().radius_sq;
            let r_more = chebyshev_ball(&more).unwrap().radius_sq;
            prop_assert!(r_more >= r * (1.0 - 1e-12));
            let diam = (0..pts.len()).tuple_combinations().map(|(a, b)| dist_sq(pts.point(a), pts.point(b))).fold(0.0, f64::max);
            prop_assert!(r >= diam / 4.0 * (1.0 - 1e-12));
        }

        #[test]
        fn pair_radius_is_half_distance(a in prop::collection::vec(-5.0f64..5.0, 4), b in prop::collection::vec(-5.0f64..5.0, 4)) {
            let pts = PointSet::from_rows(&[a.clone(), b.clone()]).unwrap();
            let r = chebyshev_ball(&pts).unwrap().radius_sq;
            prop_assert!((r - dist_sq(&a, &b) / 4.0).abs() <= 1e-12 * (1.0 + r));
        }

        #[test]
        fn ball_contains_everything(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 5), 1..9)) {
            let pts = PointSet::from_rows(&rows).unwrap();
            let b = chebyshev_ball(&pts).unwrap();
            for p in pts.iter() {
                prop_assert!(dist_sq(p, &b.center).sqrt() <= b.radius_sq.sqrt() + 1e-9);
            }
            prop_assert!(b.support.len() <= pts.len().min(6));
        }
    }
}
