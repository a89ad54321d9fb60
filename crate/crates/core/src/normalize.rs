//! Centering and affine normalization of a matrix.
//!
//! For `B = A - (Tr A / N) 1` with Hermitian parts `B1`, `B2`, there are
//! constants `alpha > 0`, `gamma1`, `gamma2` such that
//! `V_i = (B_i + gamma_i 1) / alpha` are Hilbert-Schmidt orthonormal. Then
//! `Tr(rho A) = alpha (<rho, V1> + i <rho, V2>) - (gamma1 + i gamma2) + Tr A / N`
//! for every state `rho`: the numerical range is an orthogonal projection of
//! the state space onto `span{V1, V2}`, dilated by `alpha` and translated.
//! Dividing `B` by `alpha` gives the "natural size" form with `alpha = 1`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_parts, hs_inner, ComplexMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct CenteredForm<T: Real> {
    pub b: ComplexMatrix<T>,
    pub b1: ComplexMatrix<T>,
    pub b2: ComplexMatrix<T>,
    /// `|Tr B^2|^2`.
    pub d: T,
    pub alpha: T,
    pub c1: T,
    pub c2: T,
    pub gamma1: T,
    pub gamma2: T,
    pub v1: ComplexMatrix<T>,
    pub v2: ComplexMatrix<T>,
    /// `Tr A / N`, removed by the centering.
    pub shift: Complex<T>,
}

/// The scalar part of a [`CenteredForm`], as printed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub d: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl<T: Real> CenteredForm<T> {
    pub fn constants(&self) -> Constants {
        Constants {
            d: self.d.as_f64(),
            alpha: self.alpha.as_f64(),
            c1: self.c1.as_f64(),
            c2: self.c2.as_f64(),
            gamma1: self.gamma1.as_f64(),
            gamma2: self.gamma2.as_f64(),
        }
    }

    /// Coordinates `(<rho, V1>, <rho, V2>)` of the orthogonal projection.
    pub fn frame_coordinates(&self, rho: &ComplexMatrix<T>) -> (T, T) {
        (
            hs_inner(rho, &self.v1).expect("order checked by caller"),
            hs_inner(rho, &self.v2).expect("order checked by caller"),
        )
    }

    /// `Tr(rho A)` recovered from the projection: dilation, translation, shift.
    pub fn map_state(&self, rho: &ComplexMatrix<T>) -> Result<Complex<T>> {
        if rho.order() != self.b.order() {
            return Err(Error::dim("state order does not match the matrix"));
        }
        let (x, y) = self.frame_coordinates(rho);
        Ok(Complex::new(self.alpha * x - self.gamma1, self.alpha * y - self.gamma2) + self.shift)
    }
}

/// `B = A - (Tr A / N) 1`.
pub fn center<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.order();
    let shift = a.trace() / T::c(n as f64);
    let mut b = a.clone();
    for i in 0..n {
        b[(i, i)] = b[(i, i)] - shift;
    }
    b
}

fn degenerate<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> bool {
    b.hs_norm() < T::tol(1e-12) * T::one().max(a.hs_norm())
}

pub fn normalization_constants<T: Real>(a: &ComplexMatrix<T>) -> Result<CenteredForm<T>> {
    let n = a.order();
    let b = center(a);
    if degenerate(a, &b) {
        return Err(Error::DegenerateProjection);
    }
    let parts = hermitian_parts(&b);
    let (b1, b2) = (parts.herm, parts.antiherm);

    let tr_b2 = b.trace_product(&b);
    let abs_tr_b2 = tr_b2.norm();
    let d = abs_tr_b2 * abs_tr_b2;
    let half = T::c(0.5);
    let alpha = (half * b.hs_norm_sqr() + half * abs_tr_b2).sqrt();

    // c1^2 = (|Tr B^2| - Re Tr B^2)/2, c2^2 = (|Tr B^2| + Re Tr B^2)/2 and
    // c1 c2 = -Im Tr B^2 / 2. The larger square is taken directly and the
    // smaller through the product, which avoids cancellation.
    let re = tr_b2.re;
    let im = tr_b2.im;
    let (c1, c2) = if re >= T::zero() {
        let c2 = (half * (abs_tr_b2 + re)).max(T::zero()).sqrt();
        let c1 = if c2 > T::zero() { -half * im / c2 } else { T::zero() };
        (c1, c2)
    } else {
        let c1_abs = (half * (abs_tr_b2 - re)).max(T::zero()).sqrt();
        let c2_abs = if c1_abs > T::zero() { (half * im).abs() / c1_abs } else { T::zero() };
        // c2 >= 0 branch; sign(c1 c2) = -sign(Im Tr B^2)
        let c1 = if im > T::zero() && c2_abs > T::zero() { -c1_abs } else { c1_abs };
        (c1, c2_abs)
    };

    let sqrt_n = T::c(n as f64).sqrt();
    let gamma1 = c1 / sqrt_n;
    let gamma2 = c2 / sqrt_n;
    let id = ComplexMatrix::<T>::identity(n);
    let v1 = (&b1 + &id.scale_real(gamma1)).scale_real(T::one() / alpha);
    let v2 = (&b2 + &id.scale_real(gamma2)).scale_real(T::one() / alpha);
    let shift = a.trace() / T::c(n as f64);

    Ok(CenteredForm { b, b1, b2, d, alpha, c1, c2, gamma1, gamma2, v1, v2, shift })
}

/// `center(A) / alpha`, the traceless rescaling with `alpha = 1`.
pub fn natural_rescale<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let form = normalization_constants(a)?;
    Ok(form.b.scale_real(T::one() / form.alpha))
}

/// `A = V1 + i V2` for a Hilbert-Schmidt orthonormal pair of Hermitian matrices.
pub fn frame_to_matrix<T: Real>(v1: &ComplexMatrix<T>, v2: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if v1.order() != v2.order() {
        return Err(Error::dim("frame matrices have different orders"));
    }
    let tol = T::tol(1e-10);
    if !v1.is_hermitian(tol) || !v2.is_hermitian(tol) {
        return Err(Error::Frame("frame matrices must be Hermitian".into()));
    }
    let n1 = v1.hs_norm();
    let n2 = v2.hs_norm();
    let overlap = hs_inner(v1, v2)?;
    if (n1 - T::one()).abs() > tol || (n2 - T::one()).abs() > tol {
        return Err(Error::Frame(format!("frame not normalized: |V1| = {n1}, |V2| = {n2}")));
    }
    if overlap.abs() > tol {
        return Err(Error::Frame(format!("frame not orthogonal: <V1, V2> = {overlap}")));
    }
    Ok(v1 + &v2.scale(Complex::i()))
}

/// Orthonormality residual `max(| |V1|^2 - 1 |, | |V2|^2 - 1 |, |<V1, V2>|)`.
pub fn frame_residual<T: Real>(form: &CenteredForm<T>) -> T {
    let a = (form.v1.hs_norm_sqr() - T::one()).abs();
    let b = (form.v2.hs_norm_sqr() - T::one()).abs();
    let c = linalg::hs_inner(&form.v1, &form.v2).expect("same order").abs();
    a.max(b).max(c)
}
