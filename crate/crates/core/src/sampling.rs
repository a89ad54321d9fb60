//! Random pure states, Haar unitaries, induced-measure density matrices and
//! uniform simplex points.
//!
//! Every generator draws from an [`RngStream`]: a ChaCha8 generator keyed by
//! `(seed, stream_id)`. Distinct stream ids select disjoint ChaCha streams,
//! so parallel workers reproduce bit-exactly regardless of scheduling.
//! Gaussian variates use the ziggurat sampler of `rand_distr::StandardNormal`.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::scalar::Real;

/// Reproducible random stream identified by `(seed, stream_id)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian with independent `N(0,1)` real and imaginary parts.
    pub fn complex_normal<T: Real>(&mut self) -> Complex<T> {
        let re = self.normal();
        let im = self.normal();
        Complex::new(T::c(re), T::c(im))
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Normalizes `amplitudes`; fails on an empty or zero vector.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::dim("pure state of dimension 0"));
        }
        let norm = linalg::vec_norm(&amplitudes);
        if !(norm > T::zero() && norm.is_finite()) {
            return Err(Error::Domain("state vector has zero or non-finite norm".into()));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::dim(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut v = vec![Complex::zero(); dim];
        v[k] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_normalized(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn projector(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, a: &ComplexMatrix<T>) -> Complex<T> {
        a.expectation(&self.amplitudes)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (-1e-10).
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_hermitian(T::tol(1e-12)) {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr - Complex::new(T::one(), T::zero())).norm() > T::tol(1e-12) {
            return Err(Error::Domain(format!("density matrix trace {tr} != 1")));
        }
        let lmin = linalg::jacobi(&matrix).eigenvalues[0];
        if lmin < -T::tol(1e-10) {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {lmin}")));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_real(T::one() / T::c(n as f64)) }
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        Self { matrix: psi.projector() }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    /// `Tr(rho A)`.
    pub fn expectation(&self, a: &ComplexMatrix<T>) -> Complex<T> {
        self.matrix.trace_product(a)
    }
}

fn check_dim(dim: usize, what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::dim(format!("{what}: dimension must be positive")));
    }
    Ok(())
}

/// Fubini-Study random pure state: normalized vector of i.i.d. complex Gaussians.
pub fn random_pure_state<T: Real>(dim: usize, rng: &mut RngStream) -> Result<PureState<T>> {
    check_dim(dim, "random_pure_state")?;
    loop {
        let z: Vec<Complex<T>> = (0..dim).map(|_| rng.complex_normal()).collect();
        let norm = linalg::vec_norm(&z);
        if norm > T::zero() {
            return Ok(PureState::from_normalized(z.into_iter().map(|c| c / norm).collect()));
        }
    }
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians, row-major.
pub fn ginibre<T: Real>(rows: usize, cols: usize, rng: &mut RngStream) -> Vec<Complex<T>> {
    (0..rows * cols).map(|_| rng.complex_normal()).collect()
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
///
/// `Q` comes from modified Gram-Schmidt (applied twice for orthogonality to
/// rounding level) and each column is rotated by the phase of the matching
/// diagonal entry of `R`, so `R` ends with a positive diagonal and the law of
/// `Q` is exactly Haar.
pub fn random_haar_unitary<T: Real>(dim: usize, rng: &mut RngStream) -> Result<ComplexMatrix<T>> {
    check_dim(dim, "random_haar_unitary")?;
    let g = ginibre::<T>(dim, dim, rng);
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim).map(|j| (0..dim).map(|i| g[i * dim + j]).collect()).collect();
    for j in 0..dim {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        let mut r_jj = Complex::new(T::one(), T::zero());
        for _pass in 0..2 {
            for q in done.iter() {
                let proj = linalg::inner(q, col);
                for (c, &qi) in col.iter_mut().zip(q) {
                    *c = *c - qi * proj;
                }
            }
            let norm = linalg::vec_norm(col);
            if norm.is_zero() {
                return Err(Error::Domain("rank-deficient Ginibre draw".into()));
            }
            r_jj = r_jj * norm;
            for c in col.iter_mut() {
                *c = *c / norm;
            }
        }
        let phase = r_jj / r_jj.norm();
        for c in col.iter_mut() {
            *c = *c * phase;
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| cols[j][i]))
}

/// `rho = X X* / Tr(X X*)` with `X` an `N x K` Ginibre matrix (induced measure `mu_K`).
pub fn random_induced_density<T: Real>(dim: usize, ancilla: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
    check_dim(dim, "random_induced_density")?;
    check_dim(ancilla, "random_induced_density (ancilla)")?;
    let x = ginibre::<T>(dim, ancilla, rng);
    let total: T = x.iter().map(|z| z.norm_sqr()).sum();
    let mut m = ComplexMatrix::from_fn(dim, |i, j| {
        let ri = &x[i * ancilla..(i + 1) * ancilla];
        let rj = &x[j * ancilla..(j + 1) * ancilla];
        ri.iter().zip(rj).fold(Complex::zero(), |acc, (a, b)| acc + a * b.conj()) / total
    });
    for i in 0..dim {
        m[(i, i)].im = T::zero();
    }
    Ok(DensityMatrix { matrix: m })
}

/// Uniform point on the probability simplex, as squared moduli of a
/// Fubini-Study random state.
pub fn random_simplex_point<T: Real>(dim: usize, rng: &mut RngStream) -> Result<Vec<T>> {
    let psi = random_pure_state::<T>(dim, rng)?;
    Ok(psi.amplitudes().iter().map(|z| z.norm_sqr()).collect())
}

/// Number of draws assigned to stream `i` out of `streams` for `samples` total.
pub fn stream_share(samples: usize, streams: usize, i: usize) -> usize {
    samples / streams + usize::from(i < samples % streams)
}

/// Runs `work` on streams `0..streams` of `seed`, one OS thread per stream,
/// and returns the results in stream order. Stream `i` is asked for
/// [`stream_share`] draws, so the output depends on `(seed, streams)` only.
pub fn par_streams<R, F>(seed: u64, streams: usize, samples: usize, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut RngStream, usize) -> R + Sync,
{
    let streams = streams.max(1);
    if streams == 1 {
        return vec![work(&mut RngStream::new(seed, 0), samples)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..streams)
            .map(|i| {
                let work = &work;
                scope.spawn(move || work(&mut RngStream::new(seed, i as u64), stream_share(samples, streams, i)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randshadow::{ks_test, BetaLaw};
    use crate::C64;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RngStream::new(42, 3);
        let mut b = RngStream::new(42, 3);
        let mut c = RngStream::new(42, 4);
        let xa: Vec<f64> = (0..16).map(|_| a.normal()).collect();
        let xb: Vec<f64> = (0..16).map(|_| b.normal()).collect();
        let xc: Vec<f64> = (0..16).map(|_| c.normal()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn dimension_errors() {
        let mut r = RngStream::new(1, 0);
        assert!(random_pure_state::<f64>(0, &mut r).is_err());
        assert!(random_haar_unitary::<f64>(0, &mut r).is_err());
        assert!(random_induced_density::<f64>(0, 2, &mut r).is_err());
        assert!(random_induced_density::<f64>(2, 0, &mut r).is_err());
        assert!(random_simplex_point::<f64>(0, &mut r).is_err());
    }

    #[test]
    fn one_dimensional_objects() {
        let mut r = RngStream::new(5, 0);
        let psi = random_pure_state::<f64>(1, &mut r).unwrap();
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
        let u = random_haar_unitary::<f64>(1, &mut r).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(random_simplex_point::<f64>(1, &mut r).unwrap().len(), 1);
        assert!((random_simplex_point::<f64>(1, &mut r).unwrap()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_and_normalization_invariants() {
        let mut r = RngStream::new(7, 0);
        for n in 1..=12 {
            let u = random_haar_unitary::<f64>(n, &mut r).unwrap();
            assert!(u.is_unitary(1e-11), "order {n}");
            let psi = random_pure_state::<f64>(n, &mut r).unwrap();
            assert!((linalg::vec_norm(psi.amplitudes()) - 1.0).abs() < 1e-12);
            for k in 1..=n + 1 {
                let rho = random_induced_density::<f64>(n, k, &mut r).unwrap();
                // re-validate through the checked constructor
                DensityMatrix::new(rho.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn induced_with_single_ancilla_is_pure() {
        let mut r = RngStream::new(8, 0);
        for n in 2..6 {
            let rho = random_induced_density::<f64>(n, 1, &mut r).unwrap();
            let sq = rho.matrix().matmul(rho.matrix());
            assert!(sq.max_abs_diff(rho.matrix()) < 1e-13);
            let es = linalg::eigh(rho.matrix()).unwrap();
            assert!((es.max_eigenvalue() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrix_validation() {
        let bad = ComplexMatrix::<f64>::from_real_diag(&[1.5, -0.5]);
        assert!(DensityMatrix::new(bad).is_err());
        let bad = ComplexMatrix::<f64>::from_real_diag(&[0.5, 0.4]);
        assert!(DensityMatrix::new(bad).is_err());
        let ok = ComplexMatrix::<f64>::from_real_diag(&[0.25, 0.75]);
        assert!(DensityMatrix::new(ok).is_ok());
    }

    #[test]
    fn mean_of_squared_amplitudes_is_uniform() {
        let n = 4;
        let draws = 200_000;
        let mut r = RngStream::new(11, 0);
        let mut sums = vec![0.0; n];
        let mut sq = vec![0.0; n];
        for _ in 0..draws {
            let p = random_simplex_point::<f64>(n, &mut r).unwrap();
            for (k, x) in p.into_iter().enumerate() {
                sums[k] += x;
                sq[k] += x * x;
            }
        }
        for k in 0..n {
            let mean = sums[k] / draws as f64;
            let var = sq[k] / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt();
            assert!((mean - 0.25).abs() < 3.0 * se, "component {k}: {mean}");
        }
    }

    #[test]
    fn two_level_simplex_coordinate_is_uniform() {
        let mut r = RngStream::new(12, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| random_simplex_point::<f64>(2, &mut r).unwrap()[0]).collect();
        let ks = ks_test(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(ks.statistic < 0.01, "{}", ks.statistic);
    }

    #[test]
    fn partial_trace_spectrum_matches_schmidt_moments() {
        // A random bipartite pure state reshaped to X (N x K): the eigenvalues of
        // X X* are the squared Schmidt coefficients, so Tr (XX*)^k = sum lambda^k.
        let (n, k) = (3, 4);
        let mut r = RngStream::new(13, 0);
        for _ in 0..50 {
            let xi = random_pure_state::<f64>(n * k, &mut r).unwrap();
            let x = xi.amplitudes();
            let rho = ComplexMatrix::from_fn(n, |i, j| {
                (0..k).fold(C64::new(0.0, 0.0), |acc, a| acc + x[i * k + a] * x[j * k + a].conj())
            });
            // Schmidt coefficients from an SVD-free route: eigenvalues of X* X (K x K)
            let gram = ComplexMatrix::from_fn(k, |a, b| {
                (0..n).fold(C64::new(0.0, 0.0), |acc, i| acc + x[i * k + a].conj() * x[i * k + b])
            });
            let lam = linalg::eigh(&gram).unwrap().eigenvalues;
            let mut pow = ComplexMatrix::identity(n);
            for p in 1..=3 {
                pow = pow.matmul(&rho);
                let moment: f64 = lam.iter().map(|l| l.powi(p)).sum();
                assert!((pow.trace().re - moment).abs() < 1e-12, "moment {p}");
            }
        }
    }

    #[test]
    fn haar_diagonal_overlap_small_sample() {
        let mut r = RngStream::new(14, 0);
        let law = BetaLaw::new(1.0, 2.0).unwrap();
        let xs: Vec<f64> =
            (0..50_000).map(|_| random_haar_unitary::<f64>(3, &mut r).unwrap()[(0, 0)].norm_sqr()).collect();
        let ks = ks_test(&xs, |x| law.cdf(x).unwrap()).unwrap();
        assert!(ks.statistic < 0.015, "{}", ks.statistic);
    }

    #[test]
    fn single_precision_generators() {
        let mut r = RngStream::new(15, 0);
        let u = random_haar_unitary::<f32>(6, &mut r).unwrap();
        assert!(u.is_unitary(1e-5));
        let rho = random_induced_density::<f32>(4, 2, &mut r).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-5);
    }
}
