//! Exit criteria. Each test reports one `PASS`/`FAIL` line on stderr and then
//! asserts the same condition.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use shadowlab::cli::registry;
use shadowlab::dynamics::{time_grid, trajectories_identical, trajectory_spaces};
use shadowlab::linalg::hermitian_parts;
use shadowlab::normalize::{natural_rescale, normalization_constants};
use shadowlab::randshadow::{
    density_diag_law, ks_test, sample_density_diag, sample_unitary_corner, unitary_overlap_law, BetaLaw,
};
use shadowlab::range::{boundary, contains, ellipse_2x2, flat_parts};
use shadowlab::sampling::{par_streams, random_haar_unitary, random_pure_state, RngStream};
use shadowlab::shadow::{
    extend_by_identity, marginal_ks, sample_strip, shadow_samples, tensor_shadow_swap_check, Line, Source,
};
use shadowlab::{DensityMatrix, Matrix, C64};

const STREAMS: usize = 4;

fn report(id: u32, name: &str, ok: bool, started: Instant, detail: &str) {
    // Unbuffered handle so the line survives libtest output capture.
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "{} criterion {id:>2} {name}: {detail} ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
}

fn random_matrix(n: usize, rng: &mut RngStream) -> Matrix {
    Matrix::from_fn(n, |_, _| rng.complex_normal())
}

fn beta_ks(draws: &[f64], law: &BetaLaw) -> f64 {
    ks_test(draws, |r| law.cdf(r.clamp(0.0, 1.0)).expect("r in [0, 1]")).unwrap().statistic
}

#[test]
fn c01_natural_size() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for name in ["A2_0", "A3_3", "A4_8"] {
        let alpha = normalization_constants(&registry::builtin(name).unwrap()).unwrap().alpha;
        worst = worst.max((alpha - 1.0).abs());
        detail += &format!("{name} alpha={alpha:.15} ");
    }
    for name in registry::names() {
        let rescaled = natural_rescale(&registry::builtin(&name).unwrap()).unwrap();
        worst = worst.max((normalization_constants(&rescaled).unwrap().alpha - 1.0).abs());
    }
    let ok = worst < 1e-12;
    report(1, "natural size", ok, t, &format!("{detail}max |alpha-1| = {worst:.2e}"));
    assert!(ok);
}

#[test]
fn c02_uniform_interval_shadow() {
    let t = Instant::now();
    let a = Matrix::from_real_diag(&[0.0, 1.0]);
    let xs = shadow_samples(Source::Pure(&a), 1_000_000, 2024, STREAMS).unwrap();
    let max_im = xs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let ks = ks_test(&xs.iter().map(|z| z.re).collect::<Vec<_>>(), |x| x.clamp(0.0, 1.0)).unwrap().statistic;
    let ok = ks < 0.005 && max_im < 1e-12;
    report(2, "uniform interval", ok, t, &format!("KS = {ks:.5} (< 0.005)"));
    assert!(ok);
}

#[test]
fn c03_arcsine_cross_section() {
    let t = Instant::now();
    let a = registry::builtin("A2_0").unwrap();
    let coords = sample_strip(Source::Pure(&a), &Line::real_axis(), 0.01, 10_000_000, 99, STREAMS).unwrap();
    let r = FRAC_1_SQRT_2;
    let cdf = |x: f64| 0.5 + (x.clamp(-r, r) / r).asin() / PI;
    let ks = ks_test(&coords, cdf).unwrap().statistic;
    let ok = ks < 0.01;
    report(3, "arcsine cross-section", ok, t, &format!("{} strip samples, KS = {ks:.5} (< 0.01)", coords.len()));
    assert!(ok);
}

#[test]
fn c04_qubit_ellipse() {
    let t = Instant::now();
    let a = registry::builtin("A2_0").unwrap();
    let e = ellipse_2x2(&a).unwrap();
    let b = boundary(&a, 1024).unwrap();
    let dist = b.support_distance(|th| e.support(th));
    let semi_major = 0.5 * e.major_axis;
    let ok = dist < 1e-8 && (semi_major - FRAC_1_SQRT_2).abs() < 1e-10;
    report(4, "qubit ellipse", ok, t, &format!("Hausdorff = {dist:.2e}, semi-major = {semi_major:.12}"));
    assert!(ok);
}

#[test]
fn c05_qutrit_range_classes() {
    let t = Instant::now();
    let counts: Vec<usize> = (0..4)
        .map(|k| {
            let a = registry::builtin(&format!("A3_{k}")).unwrap();
            flat_parts(&a, &boundary(&a, 2048).unwrap()).len()
        })
        .collect();
    let ok = counts == [0, 1, 2, 3];
    report(5, "qutrit range classes", ok, t, &format!("flat parts {counts:?}, expected [0, 1, 2, 3]"));
    assert!(ok);
}

#[test]
fn c06_support_and_barycenter() {
    let t = Instant::now();
    let samples = 100_000;
    let mut failures = Vec::new();
    for (i, name) in registry::names().iter().enumerate() {
        let a = registry::builtin(name).unwrap();
        let b = boundary(&a, 2048).unwrap();
        let xs = shadow_samples(Source::Pure(&a), samples, 600 + i as u64, STREAMS).unwrap();
        let outside = xs.iter().filter(|&&z| !contains(&b, z, 1e-8)).count();
        let mean = xs.iter().sum::<C64>() / samples as f64;
        let bary = a.trace() / a.order() as f64;
        let bound = 3.0 * a.hs_norm() / (samples as f64).sqrt();
        if outside > 0 || (mean - bary).norm() > bound {
            failures.push(format!(
                "{name}: {outside} outside, |mean - Tr A/N| = {:.2e} > {bound:.2e}",
                (mean - bary).norm()
            ));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok { format!("{} matrices", registry::names().len()) } else { failures.join("; ") };
    report(6, "support and barycenter", ok, t, &detail);
    assert!(ok);
}

#[test]
fn c07_unitary_invariance_and_tensor_swap() {
    let t = Instant::now();
    let samples = 100_000;
    let mut rng = RngStream::new(77, 0);
    let mut worst: f64 = 0.0;
    for trial in 0..3u64 {
        let a = random_matrix(3, &mut rng);
        let u = random_haar_unitary::<f64>(3, &mut rng).unwrap();
        let x = shadow_samples(Source::Pure(&a), samples, 700 + trial, STREAMS).unwrap();
        let y = shadow_samples(Source::Pure(&a.conjugate_by(&u)), samples, 800 + trial, STREAMS).unwrap();
        let (re, im) = marginal_ks(&x, &y).unwrap();
        worst = worst.max(re).max(im);

        let b2 = random_matrix(2, &mut rng);
        let b3 = random_matrix(3, &mut rng);
        let (re, im) = tensor_shadow_swap_check(&b2, &b3, samples, 900 + trial, STREAMS).unwrap();
        worst = worst.max(re).max(im);
    }
    let ok = worst < 0.01;
    report(7, "unitary invariance and tensor swap", ok, t, &format!("max two-sample KS = {worst:.5} (< 0.01)"));
    assert!(ok);
}

#[test]
fn c08_mixed_shadow_identity() {
    let t = Instant::now();
    let samples = 100_000;
    let mut rng = RngStream::new(88, 0);
    let mut detail = String::new();
    let mut worst: f64 = 0.0;
    for (i, (n, k)) in [(2, 2), (3, 2), (2, 3)].into_iter().enumerate() {
        let a = random_matrix(n, &mut rng);
        let mixed = shadow_samples(Source::Mixed(&a, k), samples, 1000 + i as u64, STREAMS).unwrap();
        let ext = extend_by_identity(&a, k);
        let pure = shadow_samples(Source::Pure(&ext), samples, 1100 + i as u64, STREAMS).unwrap();
        let (re, im) = marginal_ks(&mixed, &pure).unwrap();
        worst = worst.max(re).max(im);
        detail += &format!("(N={n},K={k}) {:.4} ", re.max(im));
    }
    let ok = worst < 0.01;
    report(8, "mixed shadow identity", ok, t, &format!("{detail}(< 0.01)"));
    assert!(ok);
}

const BETA_CASES: [(usize, usize); 6] = [(2, 1), (2, 2), (3, 1), (3, 3), (4, 1), (4, 4)];

#[test]
fn c09_beta_laws() {
    let t = Instant::now();
    let samples = 1_000_000;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (i, &(n, k)) in BETA_CASES.iter().enumerate() {
        let law = density_diag_law(n, k).unwrap().beta().unwrap();
        let draws = sample_density_diag(n, k, samples, 1200 + i as u64, STREAMS).unwrap();
        let ks = beta_ks(&draws, &law);
        worst = worst.max(ks);
        detail += &format!("rho11(N={n},K={k}) {ks:.4} ");
    }
    for n in [2, 3, 4] {
        let law = unitary_overlap_law(n).unwrap().beta().unwrap();
        let corner = sample_unitary_corner(n, samples, 1300 + n as u64, STREAMS).unwrap();
        let ks = beta_ks(&corner.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>(), &law);
        worst = worst.max(ks);
        detail += &format!("|U11|^2(N={n}) {ks:.4} ");
    }
    let ok = worst < 0.005;
    report(9, "beta laws", ok, t, &format!("{detail}max KS = {worst:.5} (< 0.005)"));
    assert!(ok);
}

/// The density with exchanged exponents must be rejected by the same KS test.
#[test]
fn c09_beta_laws_negative_control() {
    let t = Instant::now();
    let samples = 1_000_000;
    let mut accepted = Vec::new();
    let mut detail = String::new();
    for (i, &(n, k)) in BETA_CASES.iter().enumerate() {
        let swapped = density_diag_law(n, k).unwrap().beta().unwrap().swapped();
        let draws = sample_density_diag(n, k, samples, 1200 + i as u64, STREAMS).unwrap();
        let ks = beta_ks(&draws, &swapped);
        detail += &format!("(N={n},K={k}) {ks:.4} ");
        if ks < 0.005 {
            accepted.push((n, k));
        }
    }
    let ok = accepted.is_empty();
    let verdict = if ok { String::new() } else { format!("; swapped law not rejected for {accepted:?}") };
    report(9, "beta laws negative control", ok, t, &format!("swapped-law KS {detail}{verdict}"));
    assert!(ok, "swapped law accepted for {accepted:?}");
}

#[test]
fn c10_identical_trajectories() {
    let t = Instant::now();
    // Rank-one nilpotent observable; its X_A and H_A are both nontrivial.
    let a = Matrix::from_pairs(
        3,
        &[(0., 0.), (1., 0.), (0., 0.), (0., 0.), (0., 0.), (0., 0.), (0., 0.), (0., 0.), (0., 0.)],
    )
    .unwrap();
    let s = trajectory_spaces(&a);
    let h = &(&s.ha_basis[0].scale_real(0.7) + &s.ha_basis[1].scale_real(-1.3)) + &s.ha_basis[2].scale_real(0.4);
    let mut b = Matrix::zeros(3);
    for (k, x) in s.xa_basis.iter().enumerate() {
        b = &b + &x.scale_real(1.0 + 0.37 * k as f64);
    }
    let b = b.scale_real(0.1 / b.hs_norm());
    let mixed = Matrix::identity(3).scale_real(1.0 / 3.0);
    let rho0 = DensityMatrix::new(&mixed + &b).unwrap();
    let rho1 = DensityMatrix::new(&mixed - &b).unwrap();
    let times = time_grid(10.0, 200);
    let v = trajectories_identical(&a, &h, &rho0, &rho1, &times, 1e-10).unwrap();

    let mut rng = RngStream::new(1010, 0);
    let kick = hermitian_parts(&random_matrix(3, &mut rng)).herm.scale_real(0.5);
    let perturbed = trajectories_identical(&a, &(&h + &kick), &rho0, &rho1, &times, 1e-10).unwrap();

    let generic = trajectory_spaces(&random_matrix(3, &mut rng));
    let ok = v.analytic && v.max_deviation < 1e-10 && perturbed.max_deviation > 1e-4 && generic.dim_xa == 6;
    report(
        10,
        "identical trajectories",
        ok,
        t,
        &format!(
            "deviation {:.2e} (< 1e-10), perturbed {:.2e} (> 1e-4), generic dim X_A = {}",
            v.max_deviation, perturbed.max_deviation, generic.dim_xa
        ),
    );
    assert!(ok);
}

#[test]
fn c11_simplex_uniformity() {
    let t = Instant::now();
    let samples = 1_000_000;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for n in [2usize, 3, 5] {
        let parts = par_streams(1100 + n as u64, STREAMS, samples, |rng, count| {
            (0..count).map(|_| random_pure_state::<f64>(n, rng).unwrap().amplitudes()[0].norm_sqr()).collect::<Vec<_>>()
        });
        let draws = parts.concat();
        assert_eq!(draws.len(), samples);
        let law = BetaLaw::new(1.0, (n - 1) as f64).unwrap();
        let ks = beta_ks(&draws, &law);
        worst = worst.max(ks);
        detail += &format!("N={n} {ks:.5} ");
    }
    let ok = worst < 0.005;
    report(11, "simplex uniformity", ok, t, &format!("KS {detail}(< 0.005)"));
    assert!(ok);
}

#[test]
fn c12_cli_determinism() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let prefix = dir.path().join(tag);
        let status = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
            .args(["shadow", "--builtin", "A3_0", "--samples", "100000", "--seed", "7", "--threads", "4", "--out"])
            .arg(&prefix)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(prefix.with_extension("csv")).unwrap()
    };
    let first = run("first");
    let second = run("second");
    let ok = !first.is_empty() && first == second;
    report(12, "determinism", ok, t, &format!("{} CSV bytes, identical = {}", first.len(), first == second));
    assert!(ok);
}
