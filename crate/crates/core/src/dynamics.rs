//! Unitary trajectories `z(t)` inside the numerical shadow, periodicity, and
//! the subspaces that decide when two initial states give the same curve.
//!
//! With `U(t) = exp(-iHt)` the forward convention is
//! `z(t) = <ψ0| U(t)* A U(t) |ψ0>` (equivalently `Tr(ρ0 U* A U)`). The
//! reversed convention conjugates the other way, which amounts to `t -> -t`.
//!
//! `X_A` is the set of traceless Hermitian `X` with `Tr(X Re A) = Tr(X Im A) = 0`;
//! two states whose difference lies in `X_A` project to the same point. `H_A`
//! is the set of Hermitian `H` orthogonal to `i[Re A, X]` and `i[Im A, X]` for
//! all `X` in `X_A`, exactly the Hamiltonians whose flow preserves `X_A`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_parts, hs_inner, ComplexMatrix, EigenSystem};
use crate::sampling::{DensityMatrix, PureState};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeConvention {
    /// `U* A U` with `U = exp(-iHt)`.
    #[default]
    Forward,
    /// `U A U*`.
    Reversed,
}

impl TimeConvention {
    fn signed<T: Real>(self, t: T) -> T {
        match self {
            TimeConvention::Forward => t,
            TimeConvention::Reversed => -t,
        }
    }
}

#[derive(Debug, Clone)]
pub enum InitialState<T: Real> {
    Pure(PureState<T>),
    Mixed(DensityMatrix<T>),
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub points: Vec<Complex<T>>,
    pub state0: InitialState<T>,
    pub hamiltonian: ComplexMatrix<T>,
    pub observable: ComplexMatrix<T>,
}

fn check_dims<T: Real>(a: &ComplexMatrix<T>, h: &ComplexMatrix<T>, dim: usize) -> Result<()> {
    if a.order() != h.order() || a.order() != dim {
        return Err(Error::dim(format!(
            "observable order {}, Hamiltonian order {}, state dimension {dim} must agree",
            a.order(),
            h.order()
        )));
    }
    Ok(())
}

fn phases<T: Real>(es: &EigenSystem<T>, t: T) -> Vec<Complex<T>> {
    es.eigenvalues.iter().map(|&l| Complex::from_polar(T::one(), -l * t)).collect()
}

/// `exp(-iHt) ψ0`.
pub fn evolve_pure<T: Real>(h: &ComplexMatrix<T>, psi0: &PureState<T>, t: T) -> Result<PureState<T>> {
    if h.order() != psi0.dim() {
        return Err(Error::dim("Hamiltonian order does not match the state dimension"));
    }
    let es = eigh(h)?;
    Ok(evolve_with(&es, psi0.amplitudes(), t))
}

fn evolve_with<T: Real>(es: &EigenSystem<T>, psi0: &[Complex<T>], t: T) -> PureState<T> {
    let v = &es.eigenvectors;
    let coeffs = v.adjoint().matvec(psi0);
    let ph = phases(es, t);
    let rotated: Vec<Complex<T>> = coeffs.iter().zip(&ph).map(|(c, p)| c * p).collect();
    PureState::from_normalized(v.matvec(&rotated))
}

pub fn trajectory<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    psi0: &PureState<T>,
    times: &[T],
) -> Result<Trajectory<T>> {
    trajectory_with(a, h, psi0, times, TimeConvention::Forward)
}

/// Schrödinger picture: `z(t) = <ψ(t)|A|ψ(t)>`.
pub fn trajectory_with<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    psi0: &PureState<T>,
    times: &[T],
    convention: TimeConvention,
) -> Result<Trajectory<T>> {
    check_dims(a, h, psi0.dim())?;
    let es = eigh(h)?;
    let points =
        times.iter().map(|&t| evolve_with(&es, psi0.amplitudes(), convention.signed(t)).expectation(a)).collect();
    Ok(Trajectory {
        times: times.to_vec(),
        points,
        state0: InitialState::Pure(psi0.clone()),
        hamiltonian: h.clone(),
        observable: a.clone(),
    })
}

/// Heisenberg picture: `z(t) = <ψ0|U(t)* A U(t)|ψ0>` with `U` built explicitly.
pub fn trajectory_heisenberg<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    psi0: &PureState<T>,
    times: &[T],
    convention: TimeConvention,
) -> Result<Vec<Complex<T>>> {
    check_dims(a, h, psi0.dim())?;
    let es = eigh(h)?;
    Ok(times
        .iter()
        .map(|&t| {
            let u = unitary(&es, convention.signed(t));
            let a_t = u.adjoint().matmul(a).matmul(&u);
            psi0.expectation(&a_t)
        })
        .collect())
}

fn unitary<T: Real>(es: &EigenSystem<T>, t: T) -> ComplexMatrix<T> {
    es.map_spectrum(|l| Complex::from_polar(T::one(), -l * t))
}

pub fn mixed_trajectory<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
) -> Result<Trajectory<T>> {
    mixed_trajectory_with(a, h, rho0, times, TimeConvention::Forward)
}

/// `z(t) = Tr(ρ0 U* A U)` (forward) or `Tr(ρ0 U A U*)` (reversed).
pub fn mixed_trajectory_with<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
    convention: TimeConvention,
) -> Result<Trajectory<T>> {
    check_dims(a, h, rho0.order())?;
    let es = eigh(h)?;
    let points = times
        .iter()
        .map(|&t| {
            let u = unitary(&es, convention.signed(t));
            rho0.expectation(&u.adjoint().matmul(a).matmul(&u))
        })
        .collect();
    Ok(Trajectory {
        times: times.to_vec(),
        points,
        state0: InitialState::Mixed(rho0.clone()),
        hamiltonian: h.clone(),
        observable: a.clone(),
    })
}

/// `n` equally spaced times on `[0, tmax]`.
pub fn time_grid<T: Real>(tmax: T, steps: usize) -> Vec<T> {
    if steps <= 1 {
        return vec![T::zero()];
    }
    let dt = tmax / T::c((steps - 1) as f64);
    (0..steps).map(|k| dt * T::c(k as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Period<T> {
    /// All eigenvalues coincide; every trajectory is a point.
    Constant,
    Periodic(T),
    Aperiodic,
}

const MAX_DENOMINATOR: u64 = 1_000_000;

/// Smallest-denominator continued-fraction convergent `p/q` of `r` with
/// `|q r - p| <= tol`, if `q <= MAX_DENOMINATOR`.
fn rational_approx(r: f64, tol: f64) -> Option<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut x = r;
    for _ in 0..64 {
        let a = x.floor();
        if a > MAX_DENOMINATOR as f64 * 1e6 {
            return None;
        }
        let a = a as u64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > MAX_DENOMINATOR {
            return None;
        }
        if (q2 as f64 * r - p2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        let frac = x - a as f64;
        if frac <= 0.0 {
            return None;
        }
        x = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of every trajectory generated by `h`.
///
/// `z(t)` only involves the phases `exp(i (λ_j - λ_k) t)`, so the relevant
/// condition is that all eigenvalue differences are integer multiples of a
/// common gap `g`; the period is then `2π/g`. Differences below
/// `tol * max(|H|, 1)` count as zero.
pub fn period<T: Real>(h: &ComplexMatrix<T>, tol: f64) -> Result<Period<T>> {
    let es = eigh(h)?;
    let ev: Vec<f64> = es.eigenvalues.iter().map(|x| x.as_f64()).collect();
    let scale = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let lmin = ev[0];
    let diffs: Vec<f64> = ev.iter().map(|x| x - lmin).filter(|&d| d > tol * scale).collect();
    let Some(&dmin) = diffs.iter().min_by(|a, b| a.total_cmp(b)) else {
        return Ok(Period::Constant);
    };
    let mut lcm: u64 = 1;
    for &d in &diffs {
        let Some((_, q)) = rational_approx(d / dmin, tol) else {
            return Ok(Period::Aperiodic);
        };
        lcm = lcm / gcd(lcm, q) * q;
        if lcm > MAX_DENOMINATOR {
            return Ok(Period::Aperiodic);
        }
    }
    let g = dmin / lcm as f64;
    for &d in &diffs {
        let k = d / g;
        if (k - k.round()).abs() > tol * lcm as f64 {
            return Ok(Period::Aperiodic);
        }
    }
    Ok(Period::Periodic(T::c(2.0 * std::f64::consts::PI / g)))
}

/// Real coordinates of a Hermitian matrix with `Tr(XY)` as the dot product:
/// the diagonal, then `√2 Re` and `√2 Im` of each upper entry.
fn herm_to_vec<T: Real>(x: &ComplexMatrix<T>) -> Vec<T> {
    let n = x.order();
    let s2 = T::c(2f64.sqrt());
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        v.push(x[(i, i)].re);
    }
    for i in 0..n {
        for j in i + 1..n {
            v.push(s2 * x[(i, j)].re);
            v.push(s2 * x[(i, j)].im);
        }
    }
    v
}

fn vec_to_herm<T: Real>(n: usize, v: &[T]) -> ComplexMatrix<T> {
    let r2 = T::one() / T::c(2f64.sqrt());
    let mut x = ComplexMatrix::zeros(n);
    for i in 0..n {
        x[(i, i)] = Complex::new(v[i], T::zero());
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex::new(v[k] * r2, v[k + 1] * r2);
            x[(i, j)] = z;
            x[(j, i)] = z.conj();
            k += 2;
        }
    }
    x
}

/// Generalized Gell-Mann matrices normalized to unit Hilbert-Schmidt norm:
/// symmetric `(E_jk + E_kj)/√2`, antisymmetric `(-i E_jk + i E_kj)/√2`
/// (both for `j < k` in row-major order), then the diagonal ones.
pub fn gell_mann_basis<T: Real>(n: usize) -> Vec<ComplexMatrix<T>> {
    let r2 = T::one() / T::c(2f64.sqrt());
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            let mut m = ComplexMatrix::zeros(n);
            m[(j, k)] = Complex::new(r2, T::zero());
            m[(k, j)] = Complex::new(r2, T::zero());
            out.push(m);
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut m = ComplexMatrix::zeros(n);
            m[(j, k)] = Complex::new(T::zero(), -r2);
            m[(k, j)] = Complex::new(T::zero(), r2);
            out.push(m);
        }
    }
    for l in 1..n {
        let lf = l as f64;
        let s = T::c((1.0 / (lf * (lf + 1.0))).sqrt());
        let mut m = ComplexMatrix::zeros(n);
        for j in 0..l {
            m[(j, j)] = Complex::new(s, T::zero());
        }
        m[(l, l)] = Complex::new(-s * T::c(lf), T::zero());
        out.push(m);
    }
    out
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn project_out<T: Real>(v: &mut [T], basis: &[Vec<T>]) {
    // two passes for numerical orthogonality
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x = *x - c * *y;
            }
        }
    }
}

/// Extends the orthonormal set `basis` by pivoted Gram-Schmidt over
/// `candidates`, stopping when every remaining residual is below `tol`.
fn extend_orthonormal<T: Real>(basis: &mut Vec<Vec<T>>, candidates: &[Vec<T>], tol: T) -> usize {
    let mut rest: Vec<Vec<T>> = candidates.to_vec();
    for r in rest.iter_mut() {
        project_out(r, basis);
    }
    let start = basis.len();
    while let Some((idx, best)) =
        rest.iter().enumerate().map(|(i, r)| (i, norm(r))).max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite norms"))
    {
        if best <= tol {
            break;
        }
        let mut q = rest.swap_remove(idx);
        project_out(&mut q, basis);
        let nq = norm(&q);
        if nq <= tol {
            continue;
        }
        q.iter_mut().for_each(|x| *x = *x / nq);
        for r in rest.iter_mut() {
            let c = dot(r, &q);
            for (x, y) in r.iter_mut().zip(&q) {
                *x = *x - c * *y;
            }
        }
        basis.push(q);
    }
    basis.len() - start
}

#[derive(Debug, Clone)]
pub struct TrajectorySpaces<T: Real> {
    pub xa_basis: Vec<ComplexMatrix<T>>,
    pub ha_basis: Vec<ComplexMatrix<T>>,
    pub dim_xa: usize,
    pub dim_ha: usize,
    /// Dimension of the span of the traceless parts of `Re A` and `Im A`.
    pub d_a: usize,
}

fn traceless<T: Real>(x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    crate::normalize::center(x)
}

pub fn trajectory_spaces<T: Real>(a: &ComplexMatrix<T>) -> TrajectorySpaces<T> {
    let n = a.order();
    let parts = hermitian_parts(a);
    let (re, im) = (parts.herm, parts.antiherm);
    let scale = T::one().max(a.hs_norm());
    let tol = T::tol(1e-10) * scale;

    let mut constraints = Vec::new();
    let d_a = extend_orthonormal(&mut constraints, &[herm_to_vec(&traceless(&re)), herm_to_vec(&traceless(&im))], tol);
    let gm: Vec<Vec<T>> = gell_mann_basis::<T>(n).iter().map(herm_to_vec).collect();
    let mut xa = constraints.clone();
    extend_orthonormal(&mut xa, &gm, T::tol(1e-8));
    let xa_vecs: Vec<Vec<T>> = xa.split_off(d_a);
    let xa_basis: Vec<ComplexMatrix<T>> = xa_vecs.iter().map(|v| vec_to_herm(n, v)).collect();

    let i = Complex::i();
    let mut generators = Vec::with_capacity(2 * xa_basis.len());
    for x in &xa_basis {
        generators.push(herm_to_vec(&re.commutator(x).scale(i)));
        generators.push(herm_to_vec(&im.commutator(x).scale(i)));
    }
    let gen_scale = generators.iter().map(|g| norm(g)).fold(T::one(), T::max);
    let mut span = Vec::new();
    extend_orthonormal(&mut span, &generators, T::tol(1e-10) * gen_scale);
    let rank = span.len();
    let mut full: Vec<Vec<T>> =
        vec![herm_to_vec(&ComplexMatrix::identity(n).scale_real(T::one() / T::c(n as f64).sqrt()))];
    full.extend(gm);
    extend_orthonormal(&mut span, &full, T::tol(1e-8));
    let ha_basis: Vec<ComplexMatrix<T>> = span[rank..].iter().map(|v| vec_to_herm(n, v)).collect();

    TrajectorySpaces { dim_xa: xa_basis.len(), dim_ha: ha_basis.len(), xa_basis, ha_basis, d_a }
}

impl<T: Real> TrajectorySpaces<T> {
    /// Residual of `x` after projecting onto `span(xa_basis)`.
    pub fn xa_residual(&self, x: &ComplexMatrix<T>) -> T {
        span_residual(&self.xa_basis, x)
    }

    /// Residual of `h` after projecting onto `span(ha_basis)`.
    pub fn ha_residual(&self, h: &ComplexMatrix<T>) -> T {
        span_residual(&self.ha_basis, h)
    }
}

fn span_residual<T: Real>(basis: &[ComplexMatrix<T>], x: &ComplexMatrix<T>) -> T {
    let mut r = x.clone();
    for b in basis {
        let c = hs_inner(&r, b).expect("same order");
        r = &r - &b.scale_real(c);
    }
    r.hs_norm()
}

/// `|Tr δ|`, `|Tr(δ Re A)|`, `|Tr(δ Im A)|`: zero iff `δ ∈ X_A` (for Hermitian `δ`).
fn xa_conditions<T: Real>(a: &ComplexMatrix<T>, delta: &ComplexMatrix<T>) -> T {
    let parts = hermitian_parts(a);
    let t0 = delta.trace().norm();
    let t1 = hs_inner(delta, &parts.herm).expect("same order").abs();
    let t2 = hs_inner(delta, &parts.antiherm).expect("same order").abs();
    t0.max(t1).max(t2)
}

/// Largest `|Tr(H i[Re A, X])|`, `|Tr(H i[Im A, X])|` over `X` in the basis of `X_A`.
pub fn ha_condition<T: Real>(spaces: &TrajectorySpaces<T>, a: &ComplexMatrix<T>, h: &ComplexMatrix<T>) -> T {
    let parts = hermitian_parts(a);
    let i = Complex::i();
    spaces
        .xa_basis
        .iter()
        .flat_map(|x| [parts.herm.commutator(x), parts.antiherm.commutator(x)])
        .map(|c| hs_inner(h, &c.scale(i)).expect("same order").abs())
        .fold(T::zero(), T::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdenticalVerdict<T> {
    /// `ρ0 - ρ1 ∈ X_A`.
    pub states_equivalent: bool,
    /// `H ∈ H_A`.
    pub hamiltonian_admissible: bool,
    pub analytic: bool,
    pub max_deviation: T,
    /// `max_deviation <= tol`.
    pub numerically_identical: bool,
}

/// Sufficient condition for `Tr(ρ0 A'(t)) = Tr(ρ1 A'(t))` for all `t`, plus
/// the observed deviation on `check_times`.
pub fn trajectories_identical<T: Real>(
    a: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    rho0: &DensityMatrix<T>,
    rho1: &DensityMatrix<T>,
    check_times: &[T],
    tol: T,
) -> Result<IdenticalVerdict<T>> {
    if rho0.order() != rho1.order() {
        return Err(Error::dim("states have different orders"));
    }
    let delta = rho0.matrix() - rho1.matrix();
    let a_scale = T::one().max(a.hs_norm());
    let states_equivalent = xa_conditions(a, &delta) <= T::tol(1e-9) * a_scale * delta.hs_norm() + T::tol(1e-14);
    let spaces = trajectory_spaces(a);
    let hamiltonian_admissible = ha_condition(&spaces, a, h) <= T::tol(1e-9) * a_scale * T::one().max(h.hs_norm());

    let z0 = mixed_trajectory(a, h, rho0, check_times)?;
    let z1 = mixed_trajectory(a, h, rho1, check_times)?;
    let max_deviation = z0.points.iter().zip(&z1.points).map(|(p, q)| (p - q).norm()).fold(T::zero(), T::max);
    Ok(IdenticalVerdict {
        states_equivalent,
        hamiltonian_admissible,
        analytic: states_equivalent && hamiltonian_admissible,
        max_deviation,
        numerically_identical: max_deviation <= tol,
    })
}
