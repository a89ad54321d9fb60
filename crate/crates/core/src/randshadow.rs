//! Closed-form shadow laws of random density matrices and Haar unitaries,
//! plus the Beta and Kolmogorov-Smirnov machinery that checks them.
//!
//! For a unitarily invariant random matrix the expectation in a random pure
//! state has the law of a fixed diagonal entry. Diagonal entries of
//! induced-measure states follow `Beta(K, K(N-1))`; `|U_11|^2` of a Haar
//! unitary follows `Beta(1, N-1)` and the phase of `U_11` is uniform.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::sampling::{self, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLaw {
    pub a: f64,
    pub b: f64,
}

impl BetaLaw {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("Beta parameters must be positive, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    pub fn pdf(&self, r: f64) -> Result<f64> {
        check_unit(r)?;
        let ln_b = statrs::function::beta::ln_beta(self.a, self.b);
        Ok(((self.a - 1.0) * r.ln() + (self.b - 1.0) * (1.0 - r).ln() - ln_b).exp())
    }

    /// Regularized incomplete beta `I_r(a, b)`.
    pub fn cdf(&self, r: f64) -> Result<f64> {
        beta_cdf(self, r)
    }

    /// The law with exponents exchanged, `Beta(b, a)`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

fn check_unit(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("argument {r} outside [0, 1]")));
    }
    Ok(())
}

/// Beta CDF; `r` must lie in `[0, 1]`.
pub fn beta_cdf(law: &BetaLaw, r: f64) -> Result<f64> {
    check_unit(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    if r == 1.0 {
        return Ok(1.0);
    }
    Ok(beta_reg(law.a, law.b, r).clamp(0.0, 1.0))
}

/// Either a proper Beta law or the degenerate point mass for `N = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShadowLaw {
    Beta(BetaLaw),
    PointMass { at: f64 },
}

impl ShadowLaw {
    pub fn beta(&self) -> Option<BetaLaw> {
        match self {
            ShadowLaw::Beta(b) => Some(*b),
            ShadowLaw::PointMass { .. } => None,
        }
    }

    pub fn cdf(&self, r: f64) -> Result<f64> {
        match self {
            ShadowLaw::Beta(b) => b.cdf(r),
            ShadowLaw::PointMass { at } => {
                check_unit(r)?;
                Ok(if r >= *at { 1.0 } else { 0.0 })
            }
        }
    }
}

/// Law of a diagonal entry of `rho ~ mu_{N,K}`: `Beta(K, K(N-1))`.
pub fn density_diag_law(n: usize, k: usize) -> Result<ShadowLaw> {
    if n == 0 || k == 0 {
        return Err(Error::dim("density_diag_law needs N >= 1 and K >= 1"));
    }
    if n == 1 {
        return Ok(ShadowLaw::PointMass { at: 1.0 });
    }
    Ok(ShadowLaw::Beta(BetaLaw::new(k as f64, (k * (n - 1)) as f64)?))
}

/// Law of `|<x|U|x>|^2` for Haar `U`: `Beta(1, N-1)`.
pub fn unitary_overlap_law(n: usize) -> Result<ShadowLaw> {
    if n == 0 {
        return Err(Error::dim("unitary_overlap_law needs N >= 1"));
    }
    if n == 1 {
        return Ok(ShadowLaw::PointMass { at: 1.0 });
    }
    Ok(ShadowLaw::Beta(BetaLaw::new(1.0, (n - 1) as f64)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
}

/// One-sample Kolmogorov-Smirnov statistic `sup |F_emp - F_ref|`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::Domain("ks_test on empty sample".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult { statistic: d.clamp(0.0, 1.0), n: xs.len() })
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("ks_two_sample on empty sample".into()));
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Pass threshold for a one-sample KS statistic at `n` samples:
/// 0.005 at 10^6 samples, 0.01 at 10^5, scaling as `n^{-1/2}` in between and
/// never tighter than 0.005.
pub fn ks_threshold(n: usize) -> f64 {
    (10.0 / n as f64).sqrt().max(0.005)
}

/// Monte Carlo draws of `rho_11` for `rho ~ mu_{N,K}`.
pub fn sample_density_diag(n: usize, k: usize, samples: usize, seed: u64, streams: usize) -> Result<Vec<f64>> {
    let parts = sampling::par_streams(seed, streams, samples, |rng: &mut RngStream, count| {
        (0..count)
            .map(|_| sampling::random_induced_density::<f64>(n, k, rng).map(|rho| rho.matrix()[(0, 0)].re))
            .collect::<Result<Vec<f64>>>()
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Monte Carlo draws of `U_11` for Haar `U` of order `n`.
pub fn sample_unitary_corner(n: usize, samples: usize, seed: u64, streams: usize) -> Result<Vec<crate::C64>> {
    let parts = sampling::par_streams(seed, streams, samples, |rng: &mut RngStream, count| {
        (0..count).map(|_| sampling::random_haar_unitary::<f64>(n, rng).map(|u| u[(0, 0)])).collect::<Result<Vec<_>>>()
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Maps a phase in `(-pi, pi]` to `[0, 1]`, uniform iff the phase is.
pub fn phase_to_unit(z: crate::C64) -> f64 {
    z.arg() / (2.0 * PI) + 0.5
}
