//! Numerical range `W(A)` via support functions.
//!
//! For a direction `θ`, `h(θ) = λ_max(cos θ A1 + sin θ A2)` is the support
//! value of `W(A)` and `⟨v|A|v⟩` for a top eigenvector `v` is a boundary
//! point with outward normal `e^{iθ}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_parts, jacobi, ComplexMatrix, EigenSystem, HermitianDecomposition};
use crate::normalize::center;
use crate::scalar::Real;

pub const DEFAULT_RESOLUTION: usize = 720;

#[derive(Debug, Clone)]
pub struct RangeBoundary<T: Real> {
    pub angles: Vec<T>,
    pub points: Vec<Complex<T>>,
    pub support_values: Vec<T>,
    /// Outward unit normals `e^{iθ_k}`.
    pub normals: Vec<Complex<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams<T: Real> {
    pub focus1: Complex<T>,
    pub focus2: Complex<T>,
    /// Full length `d` of the minor axis.
    pub minor_axis: T,
    /// Full length of the major axis.
    pub major_axis: T,
}

/// A segment of `∂W(A)` orthogonal to the outward normal `e^{i normal_angle}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatPart<T: Real> {
    pub normal_angle: T,
    pub start: Complex<T>,
    pub end: Complex<T>,
}

impl<T: Real> FlatPart<T> {
    pub fn length(&self) -> T {
        (self.end - self.start).norm()
    }
}

fn direction<T: Real>(parts: &HermitianDecomposition<T>, theta: T) -> ComplexMatrix<T> {
    let (s, c) = theta.sin_cos();
    &parts.herm.scale_real(c) + &parts.antiherm.scale_real(s)
}

fn support_from_parts<T: Real>(
    a: &ComplexMatrix<T>,
    parts: &HermitianDecomposition<T>,
    theta: T,
) -> (T, Complex<T>, EigenSystem<T>) {
    let es = jacobi(&direction(parts, theta));
    let n = es.order();
    let v = es.vector(n - 1);
    (es.max_eigenvalue(), a.expectation(&v), es)
}

/// Support value `h(θ)` and the boundary point `p(θ)`.
pub fn support_point<T: Real>(a: &ComplexMatrix<T>, theta: T) -> (T, Complex<T>) {
    let parts = hermitian_parts(a);
    let (h, p, _) = support_from_parts(a, &parts, theta);
    (h, p)
}

fn sample_angle<T: Real>(k: usize, m: usize) -> T {
    T::c(2.0 * std::f64::consts::PI * k as f64 / m as f64)
}

/// Boundary sampled at `θ_k = 2πk/m`, `k = 0..m`.
pub fn boundary<T: Real>(a: &ComplexMatrix<T>, m: usize) -> Result<RangeBoundary<T>> {
    if m < 8 {
        return Err(Error::Domain(format!("boundary resolution must be at least 8, got {m}")));
    }
    let parts = hermitian_parts(a);
    let mut angles = Vec::with_capacity(m);
    let mut points = Vec::with_capacity(m);
    let mut support_values = Vec::with_capacity(m);
    for k in 0..m {
        let theta = sample_angle::<T>(k, m);
        let (h, p, _) = support_from_parts(a, &parts, theta);
        angles.push(theta);
        points.push(p);
        support_values.push(h);
    }
    let normals = angles.iter().map(|&t| Complex::from_polar(T::one(), t)).collect();
    Ok(RangeBoundary { angles, points, support_values, normals })
}

impl<T: Real> RangeBoundary<T> {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `(re_min, re_max, im_min, im_max)` of the boundary points.
    pub fn bounding_box(&self) -> (T, T, T, T) {
        let mut b = (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity());
        for p in &self.points {
            b.0 = b.0.min(p.re);
            b.1 = b.1.max(p.re);
            b.2 = b.2.min(p.im);
            b.3 = b.3.max(p.im);
        }
        b
    }

    /// `max_k |h(θ_k) - f(θ_k)|`; for a convex `f` support function this
    /// approximates the Hausdorff distance between the two convex sets.
    pub fn support_distance(&self, f: impl Fn(T) -> T) -> T {
        self.angles.iter().zip(&self.support_values).map(|(&t, &h)| (h - f(t)).abs()).fold(T::zero(), T::max)
    }

    /// Largest `|p_k - c|`.
    pub fn max_distance_from(&self, c: Complex<T>) -> T {
        self.points.iter().map(|p| (p - c).norm()).fold(T::zero(), T::max)
    }

    /// Points are in counter-clockwise order with no reflex turn beyond `tol`.
    pub fn is_convex(&self, tol: T) -> bool {
        let pts = &self.points;
        let m = pts.len();
        let scale = self.max_distance_from(Complex::new(T::zero(), T::zero())).max(T::one());
        (0..m).all(|k| {
            let a = pts[k];
            let b = pts[(k + 1) % m];
            let c = pts[(k + 2) % m];
            let u = b - a;
            let v = c - b;
            u.re * v.im - u.im * v.re >= -tol * scale * scale
        })
    }
}

/// Outer test: `Re(e^{-iθ_k} z) <= h(θ_k) + tol` for every sampled angle.
pub fn contains<T: Real>(boundary: &RangeBoundary<T>, z: Complex<T>, tol: T) -> bool {
    boundary.normals.iter().zip(&boundary.support_values).all(|(n, &h)| z.re * n.re + z.im * n.im <= h + tol)
}

/// Exact box of `W(A)` from the support values at the four axis directions.
pub fn range_box<T: Real>(a: &ComplexMatrix<T>) -> (T, T, T, T) {
    let h = |t: f64| support_point(a, T::c(t)).0;
    let pi = std::f64::consts::PI;
    (-h(pi), h(0.0), -h(1.5 * pi), h(0.5 * pi))
}

/// Radius `sqrt((N-1)/N)` of the disk around `Tr A/N` containing `W(A)`
/// once `A` is in natural size.
pub fn radius_bound(n: usize) -> f64 {
    ((n as f64 - 1.0) / n as f64).sqrt()
}

fn top_gap<T: Real>(es: &EigenSystem<T>) -> T {
    let n = es.order();
    if n < 2 {
        return T::infinity();
    }
    es.eigenvalues[n - 1] - es.eigenvalues[n - 2]
}

/// Golden-section minimum of `f` on `[lo, hi]`, endpoints included.
fn golden_min<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T) -> (T, T) {
    let r = T::c(0.5 * (5f64.sqrt() - 1.0));
    let (flo, fhi) = (f(lo), f(hi));
    let mut best = if flo <= fhi { (lo, flo) } else { (hi, fhi) };
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo <= T::epsilon() * T::c(4.0) {
            break;
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Flat segments of `∂W(A)`.
///
/// A flat with normal `θ*` shows up as a double top eigenvalue of
/// `cos θ* A1 + sin θ* A2` whose eigenspace is not collapsed by the tangent
/// operator `-sin θ* A1 + cos θ* A2`. Each sampled angle interval that
/// carries a long chord or a small eigen-gap is searched for the minimum gap;
/// a vanishing gap with a face of positive length is reported.
pub fn flat_parts<T: Real>(a: &ComplexMatrix<T>, boundary: &RangeBoundary<T>) -> Vec<FlatPart<T>> {
    let n = a.order();
    let m = boundary.len();
    if n < 2 || m < 2 {
        return Vec::new();
    }
    let scale = center(a).hs_norm();
    if scale <= T::zero() {
        return Vec::new();
    }
    let parts = hermitian_parts(a);
    let gap_at = |t: T| top_gap(&jacobi(&direction(&parts, t)));
    let two_pi = T::c(2.0 * std::f64::consts::PI);
    let step = two_pi / T::c(m as f64);
    let gaps: Vec<T> = boundary.angles.iter().map(|&t| gap_at(t)).collect();

    let zero_gap = T::tol(1e-8) * scale;
    let min_face = T::tol(1e-8) * scale;
    let mut found: Vec<FlatPart<T>> = Vec::new();
    for k in 0..m {
        let k1 = (k + 1) % m;
        let lo = boundary.angles[k];
        let hi = if k1 == 0 { two_pi } else { boundary.angles[k1] };
        let chord = (boundary.points[k1] - boundary.points[k]).norm();
        let candidate = chord > T::c(2.0) * step * scale || gaps[k].min(gaps[k1]) < step * scale;
        if !candidate {
            continue;
        }
        let (theta, gap) = golden_min(lo, hi, gap_at);
        if gap > zero_gap {
            continue;
        }
        let Some(face) = face_at(&parts, theta, scale) else { continue };
        if face.length() <= min_face {
            continue;
        }
        let dup = found.iter().any(|f| {
            let d = (f.normal_angle - face.normal_angle).abs();
            d.min(two_pi - d) < T::tol(1e-8)
        });
        if !dup {
            found.push(face);
        }
    }
    found
}

/// Endpoints of the face of `W(A)` with outward normal `e^{iθ}`.
fn face_at<T: Real>(parts: &HermitianDecomposition<T>, theta: T, scale: T) -> Option<FlatPart<T>> {
    let es = jacobi(&direction(parts, theta));
    let n = es.order();
    let h = es.max_eigenvalue();
    let cluster = T::tol(1e-7) * scale;
    let top: Vec<usize> = (0..n).filter(|&k| h - es.eigenvalues[k] <= cluster).collect();
    if top.len() < 2 {
        return None;
    }
    let (s, c) = theta.sin_cos();
    let tangent = &parts.herm.scale_real(-s) + &parts.antiherm.scale_real(c);
    let vs: Vec<Vec<Complex<T>>> = top.iter().map(|&k| es.vector(k)).collect();
    let r = vs.len();
    let compressed = ComplexMatrix::from_fn(r, |i, j| crate::linalg::inner(&vs[i], &tangent.matvec(&vs[j])));
    let ces = jacobi(&compressed);
    let lo = ces.eigenvalues[0];
    let hi = ces.max_eigenvalue();
    let rot = Complex::from_polar(T::one(), theta);
    Some(FlatPart { normal_angle: theta, start: rot * Complex::new(h, lo), end: rot * Complex::new(h, hi) })
}

fn eigenvalues_2x2<T: Real>(a: &ComplexMatrix<T>) -> (Complex<T>, Complex<T>) {
    let half = T::c(0.5);
    let tr = a.trace();
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let m = tr * half;
    let disc = (m * m - det).sqrt();
    (m - disc, m + disc)
}

/// Foci, minor and major axes of the elliptical range of a 2x2 matrix.
pub fn ellipse_2x2<T: Real>(a: &ComplexMatrix<T>) -> Result<EllipseParams<T>> {
    if a.order() != 2 {
        return Err(Error::dim(format!("ellipse_2x2 needs order 2, got {}", a.order())));
    }
    let (l1, l2) = eigenvalues_2x2(a);
    let d2 = a.hs_norm_sqr() - l1.norm_sqr() - l2.norm_sqr();
    let minor_axis = d2.max(T::zero()).sqrt();
    let major_axis = (minor_axis * minor_axis + (l1 - l2).norm_sqr()).sqrt();
    Ok(EllipseParams { focus1: l1, focus2: l2, minor_axis, major_axis })
}

impl<T: Real> EllipseParams<T> {
    pub fn center(&self) -> Complex<T> {
        (self.focus1 + self.focus2) * T::c(0.5)
    }

    /// Support function of the closed elliptical disk.
    pub fn support(&self, theta: T) -> T {
        let half = T::c(0.5);
        let c = self.center();
        let u = Complex::from_polar(T::one(), -theta);
        let lin = (u * c).re;
        let df = self.focus2 - self.focus1;
        let phi = if df.norm() > T::zero() { df.arg() } else { T::zero() };
        let a = half * self.major_axis;
        let b = half * self.minor_axis;
        let (s, co) = (theta - phi).sin_cos();
        lin + (a * a * co * co + b * b * s * s).sqrt()
    }
}
