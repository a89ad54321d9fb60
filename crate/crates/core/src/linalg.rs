//! Dense complex matrices, Hilbert-Schmidt geometry and a Jacobi eigensolver
//! for Hermitian matrices.
//!
//! Matrices are stored row-major. Everything here is small (orders up to a
//! few dozen) so no blocking or BLAS is attempted.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest order accepted by the constructors.
pub const MAX_ORDER: usize = 128;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::dim(format!("order {n} outside 1..={MAX_ORDER}")));
        }
        if data.len() != n * n {
            return Err(Error::dim(format!("expected {} entries for order {n}, got {}", n * n, data.len())));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain(format!("non-finite entry at ({}, {})", k / n, k % n)));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::dim(format!("row {i} has {} entries, expected {n} (matrix must be square)", r.len())));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    /// Convenience constructor from `(re, im)` pairs, row-major.
    pub fn from_pairs(n: usize, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(re, im)| Complex::new(T::c(re), T::c(im))).collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { Complex::zero() })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { Complex::new(diag[i], T::zero()) } else { Complex::zero() })
    }

    /// Rank-one projector `|v><v|` (no normalization applied).
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| Complex::new(U::c(z.re.as_f64()), U::c(z.im.as_f64()))).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn hs_norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Hilbert-Schmidt (Frobenius) norm `sqrt(Tr A*A)`.
    pub fn hs_norm(&self) -> T {
        self.hs_norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "order mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// `true` when `|A - A*|_HS <= tol * |A|_HS`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        let mut dev = T::zero();
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev + (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        dev.sqrt() <= tol * self.hs_norm()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "order mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.n, v.len(), "order mismatch in matvec");
        (0..self.n).map(|i| self.row(i).iter().zip(v).fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)).collect()
    }

    /// `<v|A|v>` without normalization.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        let n = self.n;
        let mut acc = Complex::zero();
        for i in 0..n {
            let mut row = Complex::zero();
            for (a, x) in self.data[i * n..(i + 1) * n].iter().zip(v) {
                row = row + *a * x;
            }
            acc = acc + v[i].conj() * row;
        }
        acc
    }

    /// `Tr(self * rhs)` in O(N^2).
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        assert_eq!(self.n, rhs.n, "order mismatch in trace_product");
        let n = self.n;
        let mut acc = Complex::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        acc
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.n, rhs.n);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * rhs[(i % m, j % m)])
    }

    /// Unitary conjugation `U A U*`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.n)) <= tol
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.n, rhs.n, "order mismatch in add");
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.n, rhs.n, "order mismatch in sub");
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn check_same_order<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::dim(format!("order mismatch: {} vs {}", a.order(), b.order())));
    }
    Ok(())
}

/// Cartesian decomposition `A = A1 + i A2` with both parts Hermitian.
#[derive(Debug, Clone)]
pub struct HermitianDecomposition<T: Real> {
    pub herm: ComplexMatrix<T>,
    pub antiherm: ComplexMatrix<T>,
}

impl<T: Real> HermitianDecomposition<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        &self.herm + &self.antiherm.scale(Complex::i())
    }
}

/// `A1 = (A + A*)/2`, `A2 = (A - A*)/(2i)`.
pub fn hermitian_parts<T: Real>(a: &ComplexMatrix<T>) -> HermitianDecomposition<T> {
    let n = a.order();
    let half = T::c(0.5);
    let herm = ComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    // (z - w*)/(2i) = -i (z - w*)/2
    let antiherm = ComplexMatrix::from_fn(n, |i, j| {
        let d = a[(i, j)] - a[(j, i)].conj();
        Complex::new(d.im, -d.re) * half
    });
    HermitianDecomposition { herm, antiherm }
}

/// Real inner product `½ Tr(A*B + B*A) = Re Tr(A*B)`.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    check_same_order(a, b)?;
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x.conj() * y).re).sum())
}

pub fn hs_distance<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    check_same_order(a, b)?;
    Ok((a - b).hs_norm())
}

/// `true` iff `|AA* - A*A|_HS <= tol`; `tol` defaults to `1e-10 |A|_HS^2`.
pub fn is_normal<T: Real>(a: &ComplexMatrix<T>, tol: Option<T>) -> bool {
    let tol = tol.unwrap_or_else(|| T::tol(1e-10) * a.hs_norm_sqr());
    let ad = a.adjoint();
    (&a.matmul(&ad) - &ad.matmul(a)).hs_norm() <= tol
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSystem<T: Real> {
    pub eigenvalues: Vec<T>,
    /// Columns are the orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    pub fn max_eigenvalue(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `V f(Λ) V*`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let v = &self.eigenvectors;
        let n = self.order();
        let fl: Vec<Complex<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * fl[k] * v[(j, k)].conj())
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|l| Complex::new(l, T::zero()))
    }
}

const MAX_SWEEPS: usize = 64;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized first; inputs further than `1e-12` (relative,
/// Hilbert-Schmidt) from Hermitian are rejected.
pub fn eigh<T: Real>(h: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    if !h.is_hermitian(T::tol(1e-12)) {
        return Err(Error::Domain("eigh: matrix is not Hermitian".into()));
    }
    Ok(jacobi(h))
}

/// Jacobi solver on the Hermitian part of `h`, no validation.
pub(crate) fn jacobi<T: Real>(h: &ComplexMatrix<T>) -> EigenSystem<T> {
    let n = h.order();
    let half = T::c(0.5);
    let mut a = ComplexMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    for i in 0..n {
        a[(i, i)].im = T::zero();
    }
    let mut v = ComplexMatrix::<T>::identity(n);

    let total = a.hs_norm_sqr();
    let thresh = T::epsilon() * T::epsilon() * total;
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off <= thresh || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r.is_zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Skip rotations below rounding level of both diagonal entries.
                let tiny = T::epsilon() * T::c(0.01);
                if r <= tiny * app.abs() && r <= tiny * aqq.abs() {
                    a[(p, q)] = Complex::zero();
                    a[(q, p)] = Complex::zero();
                    continue;
                }
                let ph = apq / r;
                let phc = ph.conj();
                let theta = (aqq - app) / (r + r);
                let t = if theta.abs() > T::c(1e150) {
                    T::one() / (theta + theta)
                } else {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;

                // A <- A U, V <- V U with U = [[cs, sn], [-sn e^{-iφ}, cs e^{-iφ}]] on (p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * phc * sn;
                    a[(k, q)] = akp * sn + akq * phc * cs;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs - vkq * phc * sn;
                    v[(k, q)] = vkp * sn + vkq * phc * cs;
                }
                // A <- U* A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * ph * sn;
                    a[(q, k)] = apk * sn + aqk * ph * cs;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    EigenSystem { eigenvalues, eigenvectors }
}

/// `U(t) = exp(-i H t)` via the spectral decomposition of `H`.
pub fn expm_hermitian<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    let es = eigh(h)?;
    Ok(es.map_spectrum(|l| Complex::from_polar(T::one(), -l * t)))
}
