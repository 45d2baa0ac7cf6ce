//! Cubic Bézier curves: evaluation, least-squares fitting of one cubic per
//! ridge, and fit error measurement.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use thiserror::Error;

use crate::ridge::{Pixel, RidgePath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BezierError {
    #[error("curve parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
}

/// Point in continuous image coordinates (pixels, fractional allowed).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<Pixel> for Point2 {
    fn from(p: Pixel) -> Self {
        Point2::new(p.x as f64, p.y as f64)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Cubic Bézier: `p0`/`p3` are the on-curve endpoints, `p1`/`p2` the
/// off-curve controls.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CubicBezier {
    pub p0: Point2,
    pub p1: Point2,
    pub p2: Point2,
    pub p3: Point2,
}

/// Cubic Bernstein weights at `u`.
#[inline]
fn bernstein3(u: f64) -> [f64; 4] {
    let v = 1.0 - u;
    [v * v * v, 3.0 * u * v * v, 3.0 * u * u * v, u * u * u]
}

impl CubicBezier {
    pub const fn new(p0: Point2, p1: Point2, p2: Point2, p3: Point2) -> Self {
        Self { p0, p1, p2, p3 }
    }

    pub fn points(&self) -> [Point2; 4] {
        [self.p0, self.p1, self.p2, self.p3]
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(|p| p.is_finite())
    }

    /// `B(u) = P0(1−u)³ + 3P1·u(1−u)² + 3P2·u²(1−u) + P3·u³` for `u ∈ [0, 1]`.
    pub fn evaluate(&self, u: f64) -> Result<Point2, BezierError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(BezierError::ParameterOutOfRange(u));
        }
        Ok(self.point_at(u))
    }

    /// Unchecked Bernstein evaluation. Exact at the endpoints.
    #[inline]
    pub fn point_at(&self, u: f64) -> Point2 {
        let [b0, b1, b2, b3] = bernstein3(u);
        Point2::new(
            self.p0.x * b0 + self.p1.x * b1 + self.p2.x * b2 + self.p3.x * b3,
            self.p0.y * b0 + self.p1.y * b1 + self.p2.y * b2 + self.p3.y * b3,
        )
    }

    /// Power-basis form
    /// `u³(P3 + 3(P1 − P2) − P0) + 3u²(P0 − 2P1 + P2) + 3u(P1 − P0) + P0`.
    pub fn point_at_power_basis(&self, u: f64) -> Point2 {
        let a = self.p3 + (self.p1 - self.p2) * 3.0 - self.p0;
        let b = (self.p0 - self.p1 * 2.0 + self.p2) * 3.0;
        let c = (self.p1 - self.p0) * 3.0;
        ((a * u + b) * u + c) * u + self.p0
    }

    /// First derivative `B′(u)`.
    pub fn derivative(&self, u: f64) -> Point2 {
        let v = 1.0 - u;
        (self.p1 - self.p0) * (3.0 * v * v)
            + (self.p2 - self.p1) * (6.0 * u * v)
            + (self.p3 - self.p2) * (3.0 * u * u)
    }

    /// Sum of the three control-polygon leg lengths; bounds the arc length.
    pub fn control_polygon_length(&self) -> f64 {
        self.p0.distance(self.p1) + self.p1.distance(self.p2) + self.p2.distance(self.p3)
    }

    /// Applies `f` to every control point.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> CubicBezier {
        CubicBezier::new(f(self.p0), f(self.p1), f(self.p2), f(self.p3))
    }

    /// Straight segment with controls at the thirds.
    pub fn line(a: Point2, b: Point2) -> CubicBezier {
        CubicBezier::new(a, a.lerp(b, 1.0 / 3.0), a.lerp(b, 2.0 / 3.0), b)
    }
}

/// Bernstein evaluation of a degree-`N` curve from `N + 1` control points:
/// `B(u) = Σ P_k · C(N, k) · u^k · (1 − u)^(N−k)`.
pub fn evaluate_general(controls: &[Point2], u: f64) -> Result<Point2, BezierError> {
    if controls.len() < 2 {
        return Err(BezierError::TooFewPoints {
            min: 2,
            got: controls.len(),
        });
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(BezierError::ParameterOutOfRange(u));
    }
    let n = controls.len() - 1;
    let v = 1.0 - u;
    let mut binom = 1.0;
    let mut acc = Point2::default();
    for (k, &p) in controls.iter().enumerate() {
        let w = binom * u.powi(k as i32) * v.powi((n - k) as i32);
        acc = acc + p * w;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok(acc)
}

/// Normalized cumulative chord length, `u_0 = 0`, `u_last = 1`. Falls back to
/// uniform spacing when all points coincide.
pub fn chord_length_params(points: &[Point2]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut params = Vec::with_capacity(points.len());
    params.push(0.0);
    for pair in points.windows(2) {
        acc += pair[0].distance(pair[1]);
        params.push(acc);
    }
    let n = points.len();
    if acc > 0.0 {
        params.iter_mut().for_each(|u| *u /= acc);
    } else if n > 1 {
        params = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    }
    if let Some(last) = params.last_mut() {
        *last = 1.0;
    }
    params
}

/// Below this normalized determinant of the 2×2 normal matrix the
/// chord-length solve falls back to thirds.
pub const SINGULAR_DETERMINANT: f64 = 1e-9;

/// Endpoints pinned to the first and last point; `p1`, `p2` solve the linear
/// least-squares problem `min Σ ‖B(u_i) − Q_i‖²` with `u_i` from
/// [`chord_length_params`]. Fewer than four points, or a near-singular normal
/// matrix, give the straight-line controls at the thirds.
pub fn fit_chord_length(points: &[Point2]) -> Result<CubicBezier, BezierError> {
    if points.len() < 2 {
        return Err(BezierError::TooFewPoints {
            min: 2,
            got: points.len(),
        });
    }
    let (p0, p3) = (points[0], points[points.len() - 1]);
    let fallback = CubicBezier::line(p0, p3);
    if points.len() < 4 {
        return Ok(fallback);
    }
    Ok(solve_interior(points, &chord_length_params(points)).unwrap_or(fallback))
}

/// Linear least squares for `p1`, `p2` at fixed parameters, endpoints pinned.
fn solve_interior(points: &[Point2], params: &[f64]) -> Option<CubicBezier> {
    let (p0, p3) = (points[0], points[points.len() - 1]);
    let (mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0);
    let (mut r1, mut r2) = (Point2::default(), Point2::default());
    for (&q, &u) in points.iter().zip(params) {
        let [b0, b1, b2, b3] = bernstein3(u);
        let r = q - p0 * b0 - p3 * b3;
        s11 += b1 * b1;
        s12 += b1 * b2;
        s22 += b2 * b2;
        r1 = r1 + r * b1;
        r2 = r2 + r * b2;
    }
    let det = s11 * s22 - s12 * s12;
    let scale = s11 * s22;
    if !(scale > 0.0) || det / scale < SINGULAR_DETERMINANT {
        return None;
    }
    let p1 = (r1 * s22 - r2 * s12) * (1.0 / det);
    let p2 = (r2 * s11 - r1 * s12) * (1.0 / det);
    Some(CubicBezier::new(p0, p1, p2, p3))
}

/// Sum of squared residuals `Σ ‖B(u_i) − Q_i‖²`.
fn residual_cost(c: &CubicBezier, points: &[Point2], params: &[f64]) -> f64 {
    points
        .iter()
        .zip(params)
        .map(|(&q, &u)| {
            let d = c.point_at(u) - q;
            d.dot(d)
        })
        .sum()
}

fn fit_extent(points: &[Point2]) -> f64 {
    points
        .iter()
        .map(|p| p.distance(points[0]))
        .fold(0.0, f64::max)
        .max(1.0)
}

const REFINE_MAX_ITERS: usize = 200;
const SCREEN_ITERS: usize = 10;
const SCREEN_KEEP: usize = 4;

/// Levenberg–Marquardt on the interior controls and the interior sample
/// parameters jointly, endpoints fixed. The per-point parameter blocks are
/// eliminated through the Schur complement, leaving a 4×4 solve per step.
fn refine(
    points: &[Point2],
    init: CubicBezier,
    params: &mut [f64],
    max_iters: usize,
) -> CubicBezier {
    let n = points.len();
    let mut curve = init;
    let mut cost = residual_cost(&curve, points, params);
    let extent = fit_extent(points);
    let floor = 1e-28 * extent * extent * n as f64;
    let mut lambda = 1e-3;

    let mut d = vec![0.0; n];
    let mut w = vec![Vector4::zeros(); n];
    let mut gt = vec![0.0; n];
    let mut trial = params.to_vec();

    for _ in 0..max_iters {
        if cost <= floor {
            break;
        }
        let mut a = Matrix4::<f64>::zeros();
        let mut gc = Vector4::<f64>::zeros();
        for i in 1..n - 1 {
            let u = params[i];
            let [_, b1, b2, _] = bernstein3(u);
            let e = curve.point_at(u) - points[i];
            let db = curve.derivative(u);
            a[(0, 0)] += b1 * b1;
            a[(0, 2)] += b1 * b2;
            a[(2, 2)] += b2 * b2;
            gc += Vector4::new(b1 * e.x, b1 * e.y, b2 * e.x, b2 * e.y);
            d[i] = db.dot(db);
            w[i] = Vector4::new(b1 * db.x, b1 * db.y, b2 * db.x, b2 * db.y);
            gt[i] = db.dot(e);
        }
        a[(1, 1)] = a[(0, 0)];
        a[(3, 3)] = a[(2, 2)];
        a[(1, 3)] = a[(0, 2)];
        a[(2, 0)] = a[(0, 2)];
        a[(3, 1)] = a[(0, 2)];

        let mut improved = false;
        while lambda < 1e12 {
            let mut s = a;
            for k in 0..4 {
                s[(k, k)] += lambda * (a[(k, k)] + 1e-12);
            }
            let mut rhs = -gc;
            let mut dd = vec![0.0; n];
            for i in 1..n - 1 {
                dd[i] = d[i] * (1.0 + lambda) + 1e-12 * extent * extent;
                s -= w[i] * w[i].transpose() / dd[i];
                rhs += w[i] * (gt[i] / dd[i]);
            }
            let Some(dc) = s.lu().solve(&rhs) else {
                lambda *= 4.0;
                continue;
            };
            let candidate = CubicBezier::new(
                curve.p0,
                curve.p1 + Point2::new(dc[0], dc[1]),
                curve.p2 + Point2::new(dc[2], dc[3]),
                curve.p3,
            );
            for i in 1..n - 1 {
                trial[i] = (params[i] + (-gt[i] - w[i].dot(&dc)) / dd[i]).clamp(0.0, 1.0);
            }
            let new_cost = residual_cost(&candidate, points, &trial);
            if candidate.is_finite() && new_cost < cost {
                let gain = cost - new_cost;
                curve = candidate;
                params.copy_from_slice(&trial);
                cost = new_cost;
                lambda = (lambda / 3.0).max(1e-15);
                improved = gain > 1e-15 * cost.max(floor);
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    curve
}

/// Monotone reshapings `s ↦ s + a·s(1−s) − b·sin(2πs)/2π` of the chord-length
/// parameters used as extra starting points for refinement.
const PARAM_WARPS: [(f64, f64); 49] = {
    const V: [f64; 7] = [0.0, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9];
    let mut out = [(0.0, 0.0); 49];
    let mut i = 0;
    while i < 49 {
        out[i] = (V[i % 7], V[i / 7]);
        i += 1;
    }
    out
};

fn warp_params(chord: &[f64], (a, b): (f64, f64)) -> Vec<f64> {
    chord
        .iter()
        .map(|&s| {
            let u = s + a * s * (1.0 - s) - b * (TAU * s).sin() / TAU;
            u.clamp(0.0, 1.0)
        })
        .collect()
}

/// Fits one cubic through ordered points.
///
/// Starts from [`fit_chord_length`], then (with at least seven points, so the
/// joint problem is overdetermined) refines the interior controls together
/// with each point's curve parameter to minimize `Σ ‖B(u_i) − Q_i‖²`. Unless
/// that first descent reaches an exact fit, it is repeated from reshaped
/// parameterizations and the lowest-cost result wins.
/// Endpoints always equal the first and last point.
pub fn fit_points(points: &[Point2]) -> Result<CubicBezier, BezierError> {
    let initial = fit_chord_length(points)?;
    if points.len() < 7 {
        return Ok(initial);
    }
    let chord = chord_length_params(points);
    let extent = fit_extent(points);
    let exact = 1e-20 * extent * extent * points.len() as f64;

    let mut params = chord.clone();
    let first = refine(points, initial, &mut params, REFINE_MAX_ITERS);
    let first_cost = residual_cost(&first, points, &params);
    if first_cost <= exact {
        return Ok(first);
    }

    // Short screening descents from every reshaped start, then full descents
    // from the most promising few.
    let mut screened: Vec<(f64, CubicBezier, Vec<f64>)> = PARAM_WARPS[1..]
        .iter()
        .filter_map(|&warp| {
            let mut params = warp_params(&chord, warp);
            let start = solve_interior(points, &params)?;
            let curve = refine(points, start, &mut params, SCREEN_ITERS);
            Some((residual_cost(&curve, points, &params), curve, params))
        })
        .collect();
    screened.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (first_cost, first);
    for (_, curve, mut params) in screened.into_iter().take(SCREEN_KEEP) {
        let curve = refine(points, curve, &mut params, REFINE_MAX_ITERS);
        let cost = residual_cost(&curve, points, &params);
        if cost < best.0 {
            best = (cost, curve);
        }
        if cost <= exact {
            break;
        }
    }
    Ok(best.1)
}

/// [`fit_points`] over a ridge's pixel coordinates.
pub fn fit_ridge(path: &RidgePath) -> CubicBezier {
    let points: Vec<Point2> = path.points().iter().map(|&p| p.into()).collect();
    fit_points(&points).expect("ridge paths hold at least two points")
}

/// Distance from `q` to the curve: nearest of 256 uniform samples, refined by
/// golden-section search on the neighboring parameter interval.
pub fn distance_to_curve(c: &CubicBezier, q: Point2) -> f64 {
    const SAMPLES: usize = 256;
    let step = 1.0 / (SAMPLES - 1) as f64;
    let sq = |u: f64| {
        let d = c.point_at(u) - q;
        d.dot(d)
    };
    let (best_j, best) = (0..SAMPLES)
        .map(|j| (j, sq(j as f64 * step)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty sample set");
    let (mut lo, mut hi) = (
        (best_j as f64 - 1.0).max(0.0) * step,
        ((best_j + 1) as f64 * step).min(1.0),
    );
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (sq(m1), sq(m2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - ratio * (hi - lo);
            f1 = sq(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + ratio * (hi - lo);
            f2 = sq(m2);
        }
    }
    best.min(f1).min(f2).sqrt()
}

/// RMS and maximum point-to-curve distance, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitError {
    pub rms: f64,
    pub max: f64,
}

pub fn fit_error_points(c: &CubicBezier, points: &[Point2]) -> FitError {
    if points.is_empty() {
        return FitError::default();
    }
    let (mut sum_sq, mut max) = (0.0, 0.0f64);
    for &q in points {
        let d = distance_to_curve(c, q);
        sum_sq += d * d;
        max = max.max(d);
    }
    FitError {
        rms: (sum_sq / points.len() as f64).sqrt(),
        max,
    }
}

pub fn fit_error(c: &CubicBezier, path: &RidgePath) -> FitError {
    let points: Vec<Point2> = path.points().iter().map(|&p| p.into()).collect();
    fit_error_points(c, &points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn lerp_oracle(c: &CubicBezier, u: f64) -> Point2 {
        let a = c.p0.lerp(c.p1, u);
        let b = c.p1.lerp(c.p2, u);
        let d = c.p2.lerp(c.p3, u);
        let e = a.lerp(b, u);
        let f = b.lerp(d, u);
        e.lerp(f, u)
    }

    #[test]
    fn endpoints_are_exact() {
        let c = CubicBezier::new(p(0.3, -7.1), p(1e3, 2.0), p(-4.0, 9.9), p(123.456, 0.001));
        assert_eq!(c.evaluate(0.0).unwrap(), c.p0);
        assert_eq!(c.evaluate(1.0).unwrap(), c.p3);
    }

    #[test]
    fn collinear_equispaced_is_linear() {
        let c = CubicBezier::new(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0), p(3.0, 3.0));
        assert_eq!(c.evaluate(0.5).unwrap(), p(1.5, 1.5));
    }

    #[test]
    fn parameter_range_checked() {
        let c = CubicBezier::default();
        assert_eq!(c.evaluate(1.5), Err(BezierError::ParameterOutOfRange(1.5)));
        assert!(c.evaluate(-0.01).is_err());
        assert!(evaluate_general(&[p(0.0, 0.0)], 0.5).is_err());
        assert!(evaluate_general(&[p(0.0, 0.0), p(1.0, 0.0)], 2.0).is_err());
    }

    #[test]
    fn general_degree_one_is_segment() {
        let (a, b) = (p(1.0, 2.0), p(5.0, -2.0));
        for u in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let got = evaluate_general(&[a, b], u).unwrap();
            let want = a * (1.0 - u) + b * u;
            assert!(got.distance(want) < 1e-12);
        }
    }

    #[test]
    fn general_partition_of_unity() {
        let q = p(3.25, -8.5);
        for n in 1..12 {
            let pts = vec![q; n + 1];
            for u in [0.0, 0.1, 0.5, 0.77, 1.0] {
                assert!(evaluate_general(&pts, u).unwrap().distance(q) < 1e-12);
            }
        }
    }

    #[test]
    fn power_basis_agrees_with_bernstein() {
        let c = CubicBezier::new(p(1.0, 2.0), p(-3.0, 7.0), p(8.0, 8.0), p(4.0, -1.0));
        for i in 0..=50 {
            let u = i as f64 / 50.0;
            assert!(c.point_at(u).distance(c.point_at_power_basis(u)) < 1e-12);
            assert!(c.point_at(u).distance(lerp_oracle(&c, u)) < 1e-12);
        }
    }

    #[test]
    fn two_point_path_uses_thirds() {
        let c = fit_points(&[p(0.0, 0.0), p(9.0, 0.0)]).unwrap();
        assert_eq!(c.p1, p(3.0, 0.0));
        assert_eq!(c.p2, p(6.0, 0.0));
        assert!(fit_points(&[p(1.0, 1.0)]).is_err());
    }

    #[test]
    fn collinear_path_fits_collinear_curve() {
        let pts: Vec<_> = (0..20).map(|i| p(i as f64, 2.0 * i as f64 + 1.0)).collect();
        let c = fit_points(&pts).unwrap();
        for q in c.points() {
            assert!((q.y - (2.0 * q.x + 1.0)).abs() < 1e-9, "{q:?}");
        }
        assert!(fit_error_points(&c, &pts).max < 1e-6);
    }

    #[test]
    fn recovers_known_cubic() {
        let truth = CubicBezier::new(p(0.0, 0.0), p(10.0, 40.0), p(60.0, 40.0), p(80.0, 0.0));
        // 50 samples evenly spaced in arc length
        let dense: Vec<Point2> = (0..=20000).map(|i| truth.point_at(i as f64 / 20000.0)).collect();
        let cum = chord_length_params(&dense);
        let mut pts = Vec::new();
        let mut j = 0;
        for i in 0..50 {
            let target = i as f64 / 49.0;
            while j + 1 < cum.len() && cum[j] < target {
                j += 1;
            }
            pts.push(dense[j]);
        }
        pts[49] = truth.p3;
        let c = fit_points(&pts).unwrap();
        assert_eq!(c.p0, truth.p0);
        assert_eq!(c.p3, truth.p3);
        let rms = ((c.p1.distance(truth.p1).powi(2) + c.p2.distance(truth.p2).powi(2)) / 2.0).sqrt();
        assert!(rms < 1e-6, "rms {rms}: {c:?}");
    }

    #[test]
    fn fit_error_examples() {
        let c = CubicBezier::new(p(0.0, 0.0), p(5.0, 20.0), p(25.0, -10.0), p(30.0, 5.0));
        let on: Vec<_> = (0..40).map(|i| c.point_at(i as f64 / 39.0)).collect();
        assert!(fit_error_points(&c, &on).rms < 1e-3);

        let line = CubicBezier::line(p(0.0, 0.0), p(20.0, 0.0));
        let mut pts: Vec<_> = (0..=20).map(|i| p(i as f64, 0.0)).collect();
        assert!(fit_error_points(&line, &pts).max < 1e-9);
        pts[10].y += 5.0;
        let err = fit_error_points(&line, &pts);
        assert!(err.max >= 5.0 - 1e-6, "{err:?}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_point() -> impl Strategy<Value = Point2> {
            (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| Point2::new(x, y))
        }

        fn arb_curve() -> impl Strategy<Value = CubicBezier> {
            [arb_point(), arb_point(), arb_point(), arb_point()]
                .prop_map(|[a, b, c, d]| CubicBezier::new(a, b, c, d))
        }

        fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
            let mut last = 0.0;
            let mut changes = 0;
            for v in values {
                if v == 0.0 {
                    continue;
                }
                if last != 0.0 && (v > 0.0) != (last > 0.0) {
                    changes += 1;
                }
                last = v;
            }
            changes
        }

        proptest! {
            #[test]
            fn general_matches_cubic(c in arb_curve(), u in 0.0..=1.0f64) {
                let g = evaluate_general(&c.points(), u).unwrap();
                prop_assert!(g.distance(c.evaluate(u).unwrap()) < 1e-12 * 100.0);
            }

            #[test]
            fn tangent_at_endpoints(c in arb_curve()) {
                let d0 = c.derivative(0.0);
                let d1 = c.derivative(1.0);
                let l0 = c.p1 - c.p0;
                let l1 = c.p3 - c.p2;
                prop_assert!(d0.cross(l0).abs() <= 1e-9 * d0.norm() * l0.norm() + 1e-9);
                prop_assert!(d0.dot(l0) >= 0.0);
                prop_assert!(d1.cross(l1).abs() <= 1e-9 * d1.norm() * l1.norm() + 1e-9);
                prop_assert!(d1.dot(l1) >= 0.0);
            }

            #[test]
            fn variation_diminishing(c in arb_curve(), a in arb_point(), angle in 0.0..std::f64::consts::PI) {
                let normal = Point2::new(-angle.sin(), angle.cos());
                let signed = |q: Point2| (q - a).dot(normal);
                let curve_changes = sign_changes((0..1024).map(|i| signed(c.point_at(i as f64 / 1023.0))));
                let polygon_changes = sign_changes(c.points().into_iter().map(signed));
                prop_assert!(curve_changes <= polygon_changes);
            }

            #[test]
            fn fit_keeps_endpoints(pts in proptest::collection::vec(arb_point(), 2..30)) {
                let c = fit_points(&pts).unwrap();
                prop_assert_eq!(c.p0, pts[0]);
                prop_assert_eq!(c.p3, *pts.last().unwrap());
                prop_assert!(c.is_finite());
            }
        }
    }
}
